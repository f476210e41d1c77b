#pragma once

#include <array>
#include <complex>
#include <vector>

#include "xiqed/linalg.hpp"
#include "xiqed/nonlinearity.hpp"
#include "xiqed/spectral.hpp"

namespace xiqed {

inline constexpr double kDefaultTailEpsilon  = 1e-12;
inline constexpr double kDefaultOdeTolerance = 1e-10;
inline constexpr double kMinOdeStep          = 1e-12;

/// Run parameters. Times are scaled times gt; detunings are in units of g.
struct SimulationConfig {
    Complex alpha{3.1622776601683795, 0.0}; // sqrt(10)
    NonlinearitySpec spec = NonlinearitySpec::constant();
    double delta1 = 0.0;
    double delta2 = 0.0;
    std::vector<double> t_grid;
    double tail_epsilon  = kDefaultTailEpsilon;
    double ode_tolerance = kDefaultOdeTolerance;

    bool resonant() const noexcept { return delta1 == 0.0 && delta2 == 0.0; }
};

/// Throws ModelError(InvalidArgument) on an empty or non-increasing grid,
/// negative start time, tail_epsilon outside (0, 1e-6] or a non-positive tolerance.
void validate_config(const SimulationConfig &config);

/// Uniform grid of steps+1 points on [0, t_max].
std::vector<double> uniform_grid(double t_max, unsigned steps);

/// Amplitudes C1..C6 indexed by photon number. Index k of `c` is C_{k+1}.
/// C2, C3, C4 multiply symmetric pair states and weigh twice in the norm.
struct WaveFunction {
    double t       = 0.0;
    unsigned n_max = 0;
    std::array<std::vector<Complex>, 6> c;

    WaveFunction() = default;
    WaveFunction(double time, unsigned cutoff);

    /// Number of photon indices held per amplitude (n_max + 5).
    std::size_t size() const noexcept { return c[0].size(); }

    /// Block n couples (C1(n), C2(n+1), C3(n+2), C4(n+3), C5(n+2), C6(n+4)).
    std::array<Complex, 6> block(unsigned n) const;
    void set_block(unsigned n, const std::array<Complex, 6> &values);
};

/// Photon offsets of the six amplitudes inside an excitation block.
inline constexpr std::array<unsigned, 6> kBlockOffsets{0, 1, 2, 3, 2, 4};

/// Smallest N whose Poisson tail sum_{n>N} e^{-|a|^2} |a|^{2n} / n! is below tail_epsilon.
unsigned truncation_cutoff(Complex alpha, double tail_epsilon);

/// Coherent field times |1,1>: C1(n) = e^{-|a|^2/2} a^n / sqrt(n!) for n <= n_max,
/// evaluated in log space. Photon numbers above n_max stay empty so that every
/// populated block closes inside the n_max + 5 storage.
WaveFunction initial_amplitudes(Complex alpha, unsigned n_max);

/// sum_n |C1|^2 + 2|C2|^2 + 2|C3|^2 + 2|C4|^2 + |C5|^2 + |C6|^2
double total_norm(const WaveFunction &wf);

/// Largest |a - b| over every stored amplitude. Both must share n_max.
double max_amplitude_difference(const WaveFunction &a, const WaveFunction &b);

/// Exact resonance evolution by per-block eigendecomposition. Blocks are
/// diagonalized once; evaluation at any t is then a direct map.
class ResonancePropagator {
  public:
    ResonancePropagator(const WaveFunction &initial, const NonlinearitySpec &spec);

    WaveFunction operator()(double t) const;

    const std::vector<BlockEigensystem> &eigensystems() const noexcept { return systems_; }

  private:
    WaveFunction initial_;
    std::vector<BlockEigensystem> systems_;
    // Per block: Q^T S c(0) in the eigenbasis.
    std::vector<std::array<Complex, 6>> projections_;
};

WaveFunction propagate_resonance(const WaveFunction &wf0, const NonlinearitySpec &spec, double t);

/// Integrates the six coupled amplitude equations with explicit detuning
/// phases e^{+-i delta t}, block by block, using an embedded Dormand-Prince
/// 5(4) pair. Steps are clipped to land on every grid time. The local error
/// of each block is controlled relative to that block's norm.
/// Throws ModelError(StepUnderflow) if the step drops below 1e-12.
std::vector<WaveFunction> ode_evolve(const WaveFunction &wf0, const NonlinearitySpec &spec, double delta1,
                                     double delta2, const std::vector<double> &t_grid,
                                     double relative_tolerance = kDefaultOdeTolerance);

enum class ClosedFormVariant { Printed, Corrected };

/// Closed-form resonance amplitudes of block n,
/// (C1(n,t), C2(n+1,t), C3(n+2,t), C4(n+3,t), C5(n+2,t), C6(n+4,t)), for initial C1(n,0).
///
/// Corrected: consistent x3; C4 with overall factor -i; C2 as the sine
/// combination implied by dC1/dt = -2i V1 C2. Printed: the historical
/// formulas verbatim, including the printed x3.
std::array<Complex, 6> closed_form_amplitudes(unsigned n, const NonlinearitySpec &spec, double t,
                                              ClosedFormVariant variant, Complex c1_initial = 1.0);

} // namespace xiqed
