#include "xiqed/spectral.hpp"

#include <cmath>
#include <sstream>

#include "xiqed/error.hpp"

namespace xiqed {

namespace {

constexpr double kSqrt2               = 1.4142135623730951;
constexpr double kNegativeDiscriminant = -1e-12;

SpectralCoefficients coefficients_with_x3(const CouplingBlock &block, double x3) {
    const auto [v1, v2, v3, v4] = block.v;
    const double s1 = v1 * v1, s2 = v2 * v2, s3 = v3 * v3, s4 = v4 * v4;

    SpectralCoefficients out;
    out.n  = block.n;
    out.x1 = 6.0 * v1 * v2 * v3 * v4;
    out.x2 = 6.0 * s1 * s3 + 4.0 * s1 * s4 + 6.0 * s2 * s4;
    out.x3 = x3;
    out.x4 = 6.0 * s1 * s3 + 4.0 * s1 * s4;
    out.x5 = 2.0 * v1 * v2 * s4;

    double disc = x3 * x3 - 4.0 * out.x2;
    if(disc < kNegativeDiscriminant * std::max(1.0, x3 * x3)) {
        std::ostringstream msg;
        msg << "x3^2 - 4 x2 = " << disc << " < 0 at n = " << block.n;
        throw ModelError(ErrorKind::ComplexSpectrum, msg.str());
    }
    disc      = std::max(disc, 0.0);
    out.eta   = std::sqrt(disc);
    out.beta1 = std::sqrt((x3 + out.eta) / 2.0);
    // x3 - eta loses digits when x2 << x3^2; beta2^2 = x2 / beta1^2 is exact algebra.
    out.beta2 = out.beta1 > 0.0 ? std::sqrt(out.x2) / out.beta1 : 0.0;
    return out;
}

} // namespace

double x3_printed(const CouplingBlock &block) {
    const auto [v1, v2, v3, v4] = block.v;
    return 2.0 * (v1 * v1 + v4 * v4) + 3.0 * (v2 * v2 + 2.0 * v3 * v3);
}

SpectralCoefficients spectral_coefficients(const CouplingBlock &block) {
    const auto [v1, v2, v3, v4] = block.v;
    return coefficients_with_x3(block, 2.0 * (v1 * v1 + v4 * v4) + 3.0 * (v2 * v2 + v3 * v3));
}

SpectralCoefficients printed_spectral_coefficients(const CouplingBlock &block) {
    return coefficients_with_x3(block, x3_printed(block));
}

RealMatrix raw_block_matrix(const CouplingBlock &block) {
    const auto [v1, v2, v3, v4] = block.v;
    RealMatrix m(6, 6);
    m(0, 1) = 2.0 * v1;
    m(1, 0) = v1;
    m(1, 2) = v2;
    m(1, 4) = v2;
    m(2, 1) = v2;
    m(2, 3) = v3;
    m(3, 2) = v3;
    m(3, 4) = v3;
    m(3, 5) = v4;
    m(4, 1) = 2.0 * v2;
    m(4, 3) = 2.0 * v3;
    m(5, 3) = 2.0 * v4;
    return m;
}

RealMatrix symmetrized_block_matrix(const CouplingBlock &block) {
    const auto [v1, v2, v3, v4] = block.v;
    RealMatrix m(6, 6);
    auto set = [&m](std::size_t i, std::size_t j, double x) {
        m(i, j) = x;
        m(j, i) = x;
    };
    set(0, 1, kSqrt2 * v1);
    set(1, 2, v2);
    set(1, 4, kSqrt2 * v2);
    set(2, 3, v3);
    set(3, 4, kSqrt2 * v3);
    set(3, 5, kSqrt2 * v4);
    return m;
}

BlockEigensystem block_eigensystem(const CouplingBlock &block) {
    auto decomposition = jacobi_eigen(symmetrized_block_matrix(block));
    BlockEigensystem out;
    for(std::size_t k = 0; k < 6; ++k) out.frequencies[k] = decomposition.values[k];
    out.modes   = std::move(decomposition.vectors);
    out.scaling = block_scaling();
    return out;
}

} // namespace xiqed
