#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "xiqed/density.hpp"
#include "xiqed/dynamics.hpp"
#include "xiqed/error.hpp"

using namespace xiqed;

namespace {

// Full pure state over (photon, atom1, atom2) built label by label.
struct FullState {
    std::size_t photons = 0;
    std::vector<Complex> psi; // index (m * 3 + a1) * 3 + a2

    Complex at(std::size_t m, int a1, int a2) const { return psi[(m * 3 + a1) * 3 + a2]; }
};

int amplitude_for(int a1, int a2) {
    // levels 1,2,3 stored as 0,1,2
    if(a1 == 0 && a2 == 0) return 0;
    if((a1 == 0 && a2 == 1) || (a1 == 1 && a2 == 0)) return 1;
    if((a1 == 0 && a2 == 2) || (a1 == 2 && a2 == 0)) return 2;
    if((a1 == 1 && a2 == 2) || (a1 == 2 && a2 == 1)) return 3;
    if(a1 == 1 && a2 == 1) return 4;
    return 5;
}

FullState expand(const WaveFunction &wf) {
    FullState s;
    s.photons = wf.size();
    s.psi.assign(s.photons * 9, Complex{});
    for(std::size_t m = 0; m < s.photons; ++m)
        for(int a1 = 0; a1 < 3; ++a1)
            for(int a2 = 0; a2 < 3; ++a2) s.psi[(m * 3 + a1) * 3 + a2] = wf.c[amplitude_for(a1, a2)][m];
    return s;
}

ComplexMatrix trace_field(const FullState &s) {
    ComplexMatrix rho(9, 9);
    for(std::size_t m = 0; m < s.photons; ++m)
        for(int a = 0; a < 9; ++a)
            for(int b = 0; b < 9; ++b) rho(a, b) += s.psi[m * 9 + a] * std::conj(s.psi[m * 9 + b]);
    return rho;
}

ComplexMatrix trace_atoms(const FullState &s) {
    ComplexMatrix rho(s.photons, s.photons);
    for(std::size_t m = 0; m < s.photons; ++m)
        for(std::size_t k = 0; k < s.photons; ++k)
            for(int a = 0; a < 9; ++a) rho(m, k) += s.psi[m * 9 + a] * std::conj(s.psi[k * 9 + a]);
    return rho;
}

ComplexMatrix trace_atom2(const FullState &s) {
    ComplexMatrix rho(3, 3);
    for(std::size_t m = 0; m < s.photons; ++m)
        for(int i = 0; i < 3; ++i)
            for(int j = 0; j < 3; ++j)
                for(int a2 = 0; a2 < 3; ++a2) rho(i, j) += s.at(m, i, a2) * std::conj(s.at(m, j, a2));
    return rho;
}

double max_diff(const DensityMatrix &a, const ComplexMatrix &b) {
    REQUIRE(a.dim() == b.rows());
    return max_abs_diff(a.entries(), b);
}

WaveFunction evolved(const NonlinearitySpec &spec, double t) {
    const auto wf0 = initial_amplitudes(Complex{std::sqrt(10.0), 0.0}, 39);
    return propagate_resonance(wf0, spec, t);
}

DensityMatrix random_hermitian(std::size_t dim, std::mt19937 &rng) {
    std::normal_distribution<double> g;
    DensityMatrix m(dim);
    for(std::size_t i = 0; i < dim; ++i) {
        m(i, i) = g(rng);
        for(std::size_t j = i + 1; j < dim; ++j) {
            m(i, j) = Complex{g(rng), g(rng)};
            m(j, i) = std::conj(m(i, j));
        }
    }
    return m;
}

} // namespace

TEST_CASE("reduced states at t = 0") {
    const auto wf0 = initial_amplitudes(Complex{std::sqrt(10.0), 0.0}, 39);
    const auto rho = atoms_reduced(wf0);
    CHECK(std::abs(rho(0, 0) - 1.0) < 1e-12);
    for(std::size_t r = 0; r < 9; ++r)
        for(std::size_t c = 0; c < 9; ++c)
            if(r || c) CHECK(rho(r, c) == Complex{});
    const auto a1 = atom1_reduced(rho);
    CHECK(std::abs(a1(0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(a1.purity() - 1.0) < 1e-11);
    const auto field = field_reduced(wf0);
    CHECK(std::abs(field.purity() - 1.0) < 1e-11);
}

TEST_CASE("reduced states agree with a full tensor-product partial trace") {
    const std::vector<NonlinearitySpec> specs{NonlinearitySpec::constant(), NonlinearitySpec::harmonious(),
                                              NonlinearitySpec::trapped_ion(0.2)};
    for(const auto &spec : specs)
        for(double t : {0.7, 6.3, 19.0}) {
            const auto wf   = evolved(spec, t);
            const auto full = expand(wf);
            const auto rho  = atoms_reduced(wf);
            CHECK(max_diff(rho, trace_field(full)) < 1e-14);
            CHECK(max_diff(field_reduced(wf), trace_atoms(full)) < 1e-14);
            CHECK(max_diff(atom1_reduced(rho), trace_atom2(full)) < 1e-14);
            CHECK(std::abs(rho.trace() - 1.0) < 1e-11);
            CHECK(rho.hermiticity_error() < 1e-15);
        }
}

TEST_CASE("structure of the two-atom matrix") {
    const auto wf  = evolved(NonlinearitySpec::constant(), 3.3);
    const auto rho = atoms_reduced(wf);
    // rows of basis states sharing an amplitude coincide
    for(auto [r1, r2] : {std::pair{1, 3}, std::pair{2, 6}, std::pair{5, 7}})
        for(std::size_t c = 0; c < 9; ++c) {
            CHECK(rho(r1, c) == rho(r2, c));
            CHECK(rho(c, r1) == rho(c, r2));
        }
    CHECK(rho(0, 1) != Complex{});
}

TEST_CASE("exchange symmetry and purity of the bipartitions") {
    for(double t : {0.0, 1.0, 4.5, 12.0, 24.9}) {
        const auto wf  = evolved(NonlinearitySpec::trapped_ion(0.2), t);
        const auto rho = atoms_reduced(wf);
        CHECK(max_abs_diff(atom1_reduced(rho).entries(), atom2_reduced(rho).entries()) < 1e-15);
        // a pure tripartite state gives Tr rho_AA^2 = Tr rho_F^2
        CHECK(std::abs(rho.purity() - field_reduced(wf).purity()) < 1e-12);
    }
}

TEST_CASE("field diagonal is the photon distribution") {
    const auto wf    = evolved(NonlinearitySpec::constant(), 2.0);
    const auto field = field_reduced(wf);
    double mean = 0.0, total = 0.0;
    for(std::size_t n = 0; n < field.dim(); ++n) {
        CHECK(field(n, n).imag() == 0.0);
        CHECK(field(n, n).real() >= 0.0);
        mean += n * field(n, n).real();
        total += field(n, n).real();
    }
    CHECK(std::abs(total - 1.0) < 1e-11);
    // photon number minus the atomic level offsets is conserved
    const auto rho          = atoms_reduced(wf);
    const std::array<int, 9> excitations{0, 1, 2, 1, 2, 3, 2, 3, 4};
    double atomic = 0.0;
    for(std::size_t i = 0; i < 9; ++i) atomic += excitations[i] * rho(i, i).real();
    CHECK(std::abs(mean - atomic - 10.0) < 1e-9);
}

TEST_CASE("partial transpose") {
    std::mt19937 rng(7);
    const auto m  = random_hermitian(9, rng);
    const auto pt = partial_transpose_second(m);
    CHECK(max_abs_diff(partial_transpose_second(pt).entries(), m.entries()) == 0.0);
    CHECK(pt(1, 3) == m(0, 4)); // (0,1),(1,0) <- (0,0),(1,1)
    CHECK(std::abs(pt.trace() - m.trace()) < 1e-14);

    DensityMatrix bell(9);
    for(int i : {0, 4, 8})
        for(int j : {0, 4, 8}) bell(i, j) = 1.0 / 3.0;
    const auto ev = hermitian_eigenvalues(partial_transpose_second(bell));
    CHECK(ev.front() == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
    CHECK(ev.back() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    int negatives = 0;
    for(double e : ev) negatives += e < 0.0;
    CHECK(negatives == 3);
}

TEST_CASE("hermitian_eigenvalues") {
    DensityMatrix mixed(9);
    for(std::size_t i = 0; i < 9; ++i) mixed(i, i) = 1.0 / 9.0;
    for(double e : hermitian_eigenvalues(mixed)) CHECK(e == doctest::Approx(1.0 / 9.0).epsilon(1e-14));

    DensityMatrix diag(4);
    diag(0, 0) = 3.0;
    diag(1, 1) = -1.0;
    diag(2, 2) = 0.5;
    diag(3, 3) = 2.0;
    const auto ev = hermitian_eigenvalues(diag);
    CHECK(ev == std::vector<double>{-1.0, 0.5, 2.0, 3.0});

    std::mt19937 rng(11);
    for(int trial = 0; trial < 5; ++trial) {
        const auto m   = random_hermitian(9, rng);
        const auto e   = hermitian_eigenvalues(m);
        double sum = 0.0, sum_sq = 0.0;
        for(double x : e) {
            sum += x;
            sum_sq += x * x;
        }
        // trace invariants: Tr M and Tr M^2 = sum |m_rs|^2
        CHECK(std::abs(sum - m.trace().real()) < 1e-10);
        CHECK(std::abs(sum_sq - m.purity()) < 1e-10);
        CHECK(std::is_sorted(e.begin(), e.end()));
    }
}

TEST_CASE("atom traces need a 9x9 input") {
    CHECK_THROWS_AS(atom1_reduced(DensityMatrix(4)), ModelError);
    CHECK_THROWS_AS(partial_transpose_second(DensityMatrix(3)), ModelError);
}
