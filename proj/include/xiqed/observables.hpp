#pragma once

#include "xiqed/density.hpp"
#include "xiqed/dynamics.hpp"

namespace xiqed {

/// Eigenvalues of the partial transpose at or above this count as zero.
inline constexpr double kNegativeEigenvalueThreshold = -1e-10;
inline constexpr double kVacuumThreshold             = 1e-12;

struct ObservableRecord {
    double t          = 0.0;
    double s_atoms    = 0.0; // 1 - Tr rho_{A1A2}^2
    double s_atom1    = 0.0; // 1 - Tr rho_{A1}^2
    double negativity = 0.0;
    double mandel_q   = 0.0;
    double mean_n     = 0.0;
    double s_x        = 0.0; // 4 (Delta x)^2 - 1
    double s_y        = 0.0; // 4 (Delta y)^2 - 1
};

double linear_entropy(const DensityMatrix &rho);

/// Sum of |negative eigenvalues| of the partial transpose over atom 2.
double negativity(const DensityMatrix &rho9);

struct PhotonMoments {
    double mean_n  = 0.0;
    double mean_n2 = 0.0;
};

PhotonMoments photon_moments(const WaveFunction &wf);

/// Q = (<n^2> - <n>^2)/<n> - 1. Throws ModelError(VacuumField) if <n> <= 1e-12.
double mandel_q(const PhotonMoments &moments);
double mandel_q(const WaveFunction &wf);

struct QuadratureParams {
    double s_x = 0.0;
    double s_y = 0.0;
};

/// Squeezing parameters from field moments of rho_F:
/// S_x = 2 Re<a^2> + 2<n> - 4 (Re<a>)^2, S_y = -2 Re<a^2> + 2<n> - 4 (Im<a>)^2.
QuadratureParams quadrature_params(const DensityMatrix &rho_field);
QuadratureParams quadrature_params(const WaveFunction &wf);

ObservableRecord observable_record(const WaveFunction &wf);

} // namespace xiqed
