#include "xiqed/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "parallel.hpp"
#include "xiqed/error.hpp"

namespace xiqed {

namespace {

constexpr Complex kI{0.0, 1.0};

void invalid(const std::string &what) { throw ModelError(ErrorKind::InvalidArgument, what); }

} // namespace

void validate_config(const SimulationConfig &config) {
    if(config.t_grid.empty()) invalid("time grid is empty");
    if(config.t_grid.front() < 0.0) invalid("time grid must start at t >= 0");
    for(std::size_t i = 1; i < config.t_grid.size(); ++i)
        if(!(config.t_grid[i] > config.t_grid[i - 1])) invalid("time grid must be strictly increasing");
    if(!(config.tail_epsilon > 0.0 && config.tail_epsilon <= 1e-6)) invalid("tail epsilon must lie in (0, 1e-6]");
    if(!(config.ode_tolerance > 0.0)) invalid("ODE tolerance must be positive");
    if(std::norm(config.alpha) <= 0.0) invalid("coherent amplitude must be nonzero");
    if(!std::isfinite(config.delta1) || !std::isfinite(config.delta2)) invalid("detunings must be finite");
}

std::vector<double> uniform_grid(double t_max, unsigned steps) {
    if(steps == 0) return {0.0};
    std::vector<double> grid(steps + 1);
    for(unsigned k = 0; k <= steps; ++k) grid[k] = t_max * static_cast<double>(k) / steps;
    return grid;
}

WaveFunction::WaveFunction(double time, unsigned cutoff) : t(time), n_max(cutoff) {
    for(auto &amp : c) amp.assign(cutoff + 5, Complex{});
}

std::array<Complex, 6> WaveFunction::block(unsigned n) const {
    std::array<Complex, 6> out;
    for(std::size_t k = 0; k < 6; ++k) out[k] = c[k][n + kBlockOffsets[k]];
    return out;
}

void WaveFunction::set_block(unsigned n, const std::array<Complex, 6> &values) {
    for(std::size_t k = 0; k < 6; ++k) c[k][n + kBlockOffsets[k]] = values[k];
}

unsigned truncation_cutoff(Complex alpha, double tail_epsilon) {
    const double mean = std::norm(alpha);
    if(!(mean > 0.0)) invalid("truncation needs |alpha|^2 > 0");
    // Poisson weights in log space up to where they no longer matter, then
    // suffix sums from the top so the tail is accurate far below 1e-16.
    std::vector<double> weight;
    for(unsigned n = 0;; ++n) {
        double log_p = -mean + n * std::log(mean) - std::lgamma(n + 1.0);
        weight.push_back(std::exp(log_p));
        if(n > mean && weight.back() < 1e-40 * tail_epsilon) break;
    }
    double tail = 0.0; // sum_{k > n}
    unsigned cutoff = static_cast<unsigned>(weight.size() - 1);
    for(std::size_t n = weight.size() - 1; n-- > 0;) {
        tail += weight[n + 1];
        if(tail < tail_epsilon) cutoff = static_cast<unsigned>(n);
        else break;
    }
    return cutoff;
}

WaveFunction initial_amplitudes(Complex alpha, unsigned n_max) {
    WaveFunction wf(0.0, n_max);
    const double mean = std::norm(alpha);
    if(mean == 0.0) {
        wf.c[0][0] = 1.0;
        return wf;
    }
    const double log_mag = std::log(std::abs(alpha));
    const double phase   = std::arg(alpha);
    for(unsigned n = 0; n <= n_max; ++n) {
        double log_c = -0.5 * mean + n * log_mag - 0.5 * std::lgamma(n + 1.0);
        wf.c[0][n]   = std::polar(std::exp(log_c), n * phase);
    }
    return wf;
}

double total_norm(const WaveFunction &wf) {
    static constexpr std::array<double, 6> weight{1, 2, 2, 2, 1, 1};
    double sum = 0.0;
    for(std::size_t k = 0; k < 6; ++k)
        for(const auto &z : wf.c[k]) sum += weight[k] * std::norm(z);
    return sum;
}

double max_amplitude_difference(const WaveFunction &a, const WaveFunction &b) {
    if(a.size() != b.size()) invalid("wave functions have different truncations");
    double worst = 0.0;
    for(std::size_t k = 0; k < 6; ++k)
        for(std::size_t n = 0; n < a.size(); ++n) worst = std::max(worst, std::abs(a.c[k][n] - b.c[k][n]));
    return worst;
}

ResonancePropagator::ResonancePropagator(const WaveFunction &initial, const NonlinearitySpec &spec)
    : initial_(initial), systems_(initial.n_max + 1), projections_(initial.n_max + 1) {
    detail::parallel_for(systems_.size(), [&](std::size_t n) {
        systems_[n]      = block_eigensystem(coupling_strengths(spec, static_cast<unsigned>(n)));
        const auto &sys  = systems_[n];
        const auto start = initial_.block(static_cast<unsigned>(n));
        for(std::size_t j = 0; j < 6; ++j) {
            Complex acc{};
            for(std::size_t k = 0; k < 6; ++k) acc += sys.modes(k, j) * sys.scaling[k] * start[k];
            projections_[n][j] = acc;
        }
    });
}

WaveFunction ResonancePropagator::operator()(double t) const {
    WaveFunction out(initial_.t + t, initial_.n_max);
    for(std::size_t n = 0; n < systems_.size(); ++n) {
        const auto &sys = systems_[n];
        std::array<Complex, 6> rotated;
        for(std::size_t j = 0; j < 6; ++j) rotated[j] = std::polar(1.0, -sys.frequencies[j] * t) * projections_[n][j];
        std::array<Complex, 6> block;
        for(std::size_t k = 0; k < 6; ++k) {
            Complex acc{};
            for(std::size_t j = 0; j < 6; ++j) acc += sys.modes(k, j) * rotated[j];
            block[k] = acc / sys.scaling[k];
        }
        out.set_block(static_cast<unsigned>(n), block);
    }
    return out;
}

WaveFunction propagate_resonance(const WaveFunction &wf0, const NonlinearitySpec &spec, double t) {
    return ResonancePropagator(wf0, spec)(t);
}

namespace {

using BlockState = std::array<Complex, 6>;

struct BlockRhs {
    std::array<double, 4> v;
    double delta1;
    double delta2;

    BlockState operator()(double t, const BlockState &u) const {
        const Complex p1 = std::polar(1.0, delta1 * t);
        const Complex p2 = std::polar(1.0, delta2 * t);
        const Complex q1 = std::conj(p1);
        const Complex q2 = std::conj(p2);
        const auto [v1, v2, v3, v4] = v;
        BlockState d;
        d[0] = -2.0 * kI * v1 * p1 * u[1];
        d[1] = -kI * (v1 * q1 * u[0] + v2 * p2 * u[2] + v2 * p1 * u[4]);
        d[2] = -kI * (v2 * q2 * u[1] + v3 * p1 * u[3]);
        d[3] = -kI * (v3 * q1 * u[2] + v3 * q2 * u[4] + v4 * p2 * u[5]);
        d[4] = -2.0 * kI * (v2 * q1 * u[1] + v3 * p2 * u[3]);
        d[5] = -2.0 * kI * v4 * q2 * u[3];
        return d;
    }
};

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

template <class... Terms>
BlockState combine(const BlockState &y, double h, const Terms &...terms) {
    BlockState out = y;
    for(std::size_t i = 0; i < 6; ++i) out[i] += h * (... + (terms.first * (*terms.second)[i]));
    return out;
}

std::pair<double, const BlockState *> term(double w, const BlockState &k) { return {w, &k}; }

double block_weighted_norm(const BlockState &u) {
    const auto &s = block_scaling();
    double sum    = 0.0;
    for(std::size_t k = 0; k < 6; ++k) sum += s[k] * s[k] * std::norm(u[k]);
    return std::sqrt(sum);
}

// Integrates one block from t0 through every grid time, writing results into `out`.
void integrate_block(const BlockRhs &rhs, BlockState y, double t0, const std::vector<double> &grid, double rtol,
                     unsigned n, std::vector<BlockState> &out) {
    const double reference_norm = block_weighted_norm(y);
    if(reference_norm == 0.0) {
        std::fill(out.begin(), out.end(), y);
        return;
    }
    double rate = 0.0;
    for(double v : rhs.v) rate += std::abs(v);
    double h     = std::min(0.05, 0.1 / (1.0 + 2.0 * rate));
    double t     = t0;
    BlockState k1 = rhs(t, y);

    for(std::size_t g = 0; g < grid.size(); ++g) {
        const double target = grid[g];
        while(t < target) {
            const double remaining = target - t;
            const bool last        = h >= remaining;
            const double step      = last ? remaining : h;

            const BlockState k2 = rhs(t + c2 * step, combine(y, step, term(a21, k1)));
            const BlockState k3 = rhs(t + c3 * step, combine(y, step, term(a31, k1), term(a32, k2)));
            const BlockState k4 = rhs(t + c4 * step, combine(y, step, term(a41, k1), term(a42, k2), term(a43, k3)));
            const BlockState k5 = rhs(t + c5 * step,
                                      combine(y, step, term(a51, k1), term(a52, k2), term(a53, k3), term(a54, k4)));
            const BlockState k6 = rhs(t + step, combine(y, step, term(a61, k1), term(a62, k2), term(a63, k3),
                                                        term(a64, k4), term(a65, k5)));
            const BlockState y_new =
                combine(y, step, term(b1, k1), term(b3, k3), term(b4, k4), term(b5, k5), term(b6, k6));
            const BlockState k7 = rhs(t + step, y_new);

            // Local error in the weighted block norm, relative to the block norm.
            const auto &weight = block_scaling();
            double err_sq      = 0.0;
            for(std::size_t i = 0; i < 6; ++i) {
                Complex e = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                    e7 * k7[i]);
                err_sq += weight[i] * weight[i] * std::norm(e);
            }
            const double err = std::sqrt(err_sq) / (rtol * reference_norm);

            double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            if(err <= 1.0) {
                t  = last ? target : t + step;
                y  = y_new;
                k1 = k7;
                if(!last || factor < 1.0) h = step * factor;
            } else {
                h = step * std::min(factor, 1.0);
                if(h < kMinOdeStep) {
                    std::ostringstream msg;
                    msg << "adaptive step " << h << " below " << kMinOdeStep << " in block n = " << n << " at t = " << t;
                    throw ModelError(ErrorKind::StepUnderflow, msg.str());
                }
            }
        }
        out[g] = y;
    }
}

} // namespace

std::vector<WaveFunction> ode_evolve(const WaveFunction &wf0, const NonlinearitySpec &spec, double delta1,
                                     double delta2, const std::vector<double> &t_grid, double relative_tolerance) {
    if(!(relative_tolerance > 0.0)) invalid("ODE tolerance must be positive");
    for(std::size_t i = 0; i < t_grid.size(); ++i) {
        if(t_grid[i] < wf0.t) invalid("time grid starts before the initial state");
        if(i > 0 && !(t_grid[i] > t_grid[i - 1])) invalid("time grid must be strictly increasing");
    }

    const unsigned blocks = wf0.n_max + 1;
    std::vector<std::vector<BlockState>> traces(blocks, std::vector<BlockState>(t_grid.size()));
    detail::parallel_for(blocks, [&](std::size_t n) {
        const auto block = coupling_strengths(spec, static_cast<unsigned>(n));
        BlockRhs rhs{block.v, delta1, delta2};
        integrate_block(rhs, wf0.block(static_cast<unsigned>(n)), wf0.t, t_grid, relative_tolerance,
                        static_cast<unsigned>(n), traces[n]);
    });

    std::vector<WaveFunction> out;
    out.reserve(t_grid.size());
    for(std::size_t g = 0; g < t_grid.size(); ++g) {
        WaveFunction wf(t_grid[g], wf0.n_max);
        for(unsigned n = 0; n < blocks; ++n) wf.set_block(n, traces[n][g]);
        out.push_back(std::move(wf));
    }
    return out;
}

std::array<Complex, 6> closed_form_amplitudes(unsigned n, const NonlinearitySpec &spec, double t,
                                              ClosedFormVariant variant, Complex c1_initial) {
    const auto block = coupling_strengths(spec, n);
    const bool printed = variant == ClosedFormVariant::Printed;
    const auto sc      = printed ? printed_spectral_coefficients(block) : spectral_coefficients(block);
    const auto [v1, v2, v3, v4] = block.v;
    const double b1sq = sc.beta1 * sc.beta1;
    const double b2sq = sc.beta2 * sc.beta2;
    const double cos1 = std::cos(sc.beta1 * t), cos2 = std::cos(sc.beta2 * t);
    const double sin1 = std::sin(sc.beta1 * t), sin2 = std::sin(sc.beta2 * t);
    // sin(beta t)/beta, finite as beta -> 0
    auto sinc = [t](double beta, double s) { return beta > 0.0 ? s / beta : t; };

    const double norm = 1.0 / (sc.x2 * sc.eta);
    std::array<Complex, 6> c;
    c[0] = c1_initial * norm *
           ((sc.x2 - sc.x4) * sc.eta + (2.0 * v1 * v1 * sc.x2 - b2sq * sc.x4) * cos1 -
            (2.0 * v1 * v1 * sc.x2 - b1sq * sc.x4) * cos2);
    if(printed) {
        c[1] = kI * c1_initial / (2.0 * sc.beta1 * sc.beta2 * sc.eta) *
               ((sc.x4 - 2.0 * b1sq) * sc.beta2 * sin1 - (sc.x4 - 2.0 * b2sq) * sc.beta1 * sin2);
    } else {
        const double lead = 2.0 * v1 * v1 + 3.0 * v2 * v2;
        c[1] = -kI * v1 * c1_initial / sc.eta * ((lead - b2sq) * sinc(sc.beta1, sin1) - (lead - b1sq) * sinc(sc.beta2, sin2));
    }
    const double vv = v1 * v2 * sc.x2;
    c[2]            = c1_initial * norm * (-sc.x5 * sc.eta - (b2sq * sc.x5 - vv) * cos1 + (b1sq * sc.x5 - vv) * cos2);
    const Complex c4_sign = printed ? kI : -kI;
    c[3] = c4_sign * sc.x1 * c1_initial / (2.0 * v4 * sc.eta) * (sinc(sc.beta1, sin1) - sinc(sc.beta2, sin2));
    c[4] = 2.0 * c[2];
    c[5] = sc.x1 * c1_initial * norm * (sc.eta - b1sq * cos2 + b2sq * cos1);
    return c;
}

} // namespace xiqed
