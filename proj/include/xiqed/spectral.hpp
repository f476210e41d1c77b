#pragma once

#include <array>

#include "xiqed/linalg.hpp"
#include "xiqed/nonlinearity.hpp"

namespace xiqed {

/// Closed-form spectral data of one resonance block. Frequencies in units of g.
///
/// x3 holds the value consistent with the equations of motion,
/// 2(V1^2 + V4^2) + 3(V2^2 + V3^2). The historically printed variant with
/// 6 V3^2 in place of 3 V3^2 is available through x3_printed() for errata reports.
struct SpectralCoefficients {
    unsigned n = 0;
    double x1 = 0, x2 = 0, x3 = 0, x4 = 0, x5 = 0;
    double eta  = 0;
    double beta1 = 0, beta2 = 0;
};

SpectralCoefficients spectral_coefficients(const CouplingBlock &block);

/// Same formulas with the printed x3 = 2(V1^2 + V4^2) + 3(V2^2 + 2 V3^2)
/// driving eta and the betas.
SpectralCoefficients printed_spectral_coefficients(const CouplingBlock &block);

double x3_printed(const CouplingBlock &block);

/// Degeneracy weights of the block amplitudes (C1, C2, C3, C4, C5, C6):
/// the pair states carry a factor sqrt(2) in the norm.
inline const std::array<double, 6> &block_scaling() {
    static const std::array<double, 6> s{1.0, 1.4142135623730951, 1.4142135623730951, 1.4142135623730951, 1.0, 1.0};
    return s;
}

/// The resonance coupling matrix M of dC/dt = -i M C, conjugated by the
/// degeneracy scaling S into the real symmetric form S M S^-1.
RealMatrix symmetrized_block_matrix(const CouplingBlock &block);

/// Raw (non-symmetric) resonance coefficient matrix M.
RealMatrix raw_block_matrix(const CouplingBlock &block);

struct BlockEigensystem {
    std::array<double, 6> frequencies{}; // ascending
    RealMatrix modes;                    // 6x6 orthogonal, columns are eigenvectors
    std::array<double, 6> scaling{};
};

BlockEigensystem block_eigensystem(const CouplingBlock &block);

} // namespace xiqed
