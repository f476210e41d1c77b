#include "xiqed/density.hpp"

#include <cmath>

#include "xiqed/error.hpp"

namespace xiqed {

DensityMatrix::DensityMatrix(ComplexMatrix entries) : entries_(std::move(entries)) {
    if(entries_.rows() != entries_.cols()) throw ModelError(ErrorKind::InvalidArgument, "density matrix must be square");
}

Complex DensityMatrix::trace() const {
    Complex sum{};
    for(std::size_t i = 0; i < dim(); ++i) sum += entries_(i, i);
    return sum;
}

double DensityMatrix::purity() const {
    double sum = 0.0;
    for(const auto &z : entries_.data()) sum += std::norm(z);
    return sum;
}

double DensityMatrix::hermiticity_error() const {
    double worst = 0.0;
    for(std::size_t r = 0; r < dim(); ++r)
        for(std::size_t c = r; c < dim(); ++c) worst = std::max(worst, std::abs(entries_(r, c) - std::conj(entries_(c, r))));
    return worst;
}

DensityMatrix atoms_reduced(const WaveFunction &wf) {
    // Six-by-six amplitude overlaps rho_ij = sum_n C_i(n) C_j(n)^*.
    std::array<std::array<Complex, 6>, 6> overlap{};
    for(std::size_t i = 0; i < 6; ++i)
        for(std::size_t j = i; j < 6; ++j) {
            Complex sum{};
            for(std::size_t n = 0; n < wf.size(); ++n) sum += wf.c[i][n] * std::conj(wf.c[j][n]);
            overlap[i][j] = sum;
            overlap[j][i] = std::conj(sum);
        }
    DensityMatrix rho(9);
    for(std::size_t r = 0; r < 9; ++r)
        for(std::size_t s = 0; s < 9; ++s) rho(r, s) = overlap[kAtomBasisAmplitude[r]][kAtomBasisAmplitude[s]];
    return rho;
}

namespace {

void require_two_atom(const DensityMatrix &rho9) {
    if(rho9.dim() != 9) throw ModelError(ErrorKind::InvalidArgument, "expected a 9x9 two-atom density matrix");
}

} // namespace

DensityMatrix atom1_reduced(const DensityMatrix &rho9) {
    require_two_atom(rho9);
    DensityMatrix out(3);
    for(std::size_t a = 0; a < 3; ++a)
        for(std::size_t b = 0; b < 3; ++b)
            for(std::size_t k = 0; k < 3; ++k) out(a, b) += rho9(3 * a + k, 3 * b + k);
    return out;
}

DensityMatrix atom2_reduced(const DensityMatrix &rho9) {
    require_two_atom(rho9);
    DensityMatrix out(3);
    for(std::size_t a = 0; a < 3; ++a)
        for(std::size_t b = 0; b < 3; ++b)
            for(std::size_t k = 0; k < 3; ++k) out(a, b) += rho9(3 * k + a, 3 * k + b);
    return out;
}

DensityMatrix field_reduced(const WaveFunction &wf) {
    static constexpr std::array<double, 6> weight{1, 2, 2, 2, 1, 1};
    const std::size_t dim = wf.size();
    DensityMatrix rho(dim);
    for(std::size_t n = 0; n < dim; ++n)
        for(std::size_t m = n; m < dim; ++m) {
            Complex sum{};
            for(std::size_t k = 0; k < 6; ++k) sum += weight[k] * wf.c[k][n] * std::conj(wf.c[k][m]);
            rho(n, m) = sum;
            rho(m, n) = std::conj(sum);
        }
    return rho;
}

DensityMatrix partial_transpose_second(const DensityMatrix &rho9) {
    require_two_atom(rho9);
    DensityMatrix out(9);
    for(std::size_t i = 0; i < 3; ++i)
        for(std::size_t j = 0; j < 3; ++j)
            for(std::size_t k = 0; k < 3; ++k)
                for(std::size_t l = 0; l < 3; ++l) out(3 * i + l, 3 * k + j) = rho9(3 * i + j, 3 * k + l);
    return out;
}

std::vector<double> hermitian_eigenvalues(const DensityMatrix &m) { return jacobi_eigen(m.entries()).values; }

} // namespace xiqed
