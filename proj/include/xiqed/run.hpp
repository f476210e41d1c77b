#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "xiqed/dynamics.hpp"
#include "xiqed/observables.hpp"

namespace xiqed {

enum class Solver { Eigen, Ode };
enum class ErrataMode { Off, Report };

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitValidationFailure = 1, kExitConfigError = 2, kExitIoError = 3 };

/// Bad user configuration (maps to exit code 2).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Output file could not be written (maps to exit code 3).
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raw option values as given on the command line or in a JSON config file.
struct RunOptions {
    std::string f             = "constant";
    double eta                = kDefaultLambDicke;
    double alpha_sq           = 10.0;
    double delta1             = 0.0;
    double delta2             = 0.0;
    double t_max              = 25.0;
    unsigned steps            = 1000;
    double tail_eps           = kDefaultTailEpsilon;
    double ode_tol            = kDefaultOdeTolerance;
    std::optional<std::string> solver; // "eigen" | "ode"; resonance defaults to eigen
    std::string out           = "observables.csv";
    std::string errata        = "off";
    std::string errata_out    = "errata.csv";
    std::optional<std::string> amplitudes_out;
    std::optional<double> dump_rho;
    std::string rho_out       = "rho.csv";
};

/// Keys accepted in a JSON config file; they mirror the long flag names.
const std::vector<std::string> &config_keys();

/// Copies values from `config` into `options` for every key not in `explicit_keys`.
/// Unknown keys and type mismatches raise ConfigError.
void merge_json_config(const nlohmann::json &config, const std::set<std::string> &explicit_keys, RunOptions &options);

/// Prefixes relative paths with `dir` (the output-directory override).
std::string resolve_output_path(const std::string &path, const std::optional<std::string> &dir);

struct RunManifest {
    SimulationConfig config;
    Solver solver         = Solver::Eigen;
    ErrataMode errata     = ErrataMode::Off;
    std::string observables_path;
    std::string errata_path;
    std::optional<std::string> amplitudes_path;
    std::optional<double> dump_rho_time;
    std::string rho_path;
};

/// Validates options and builds the manifest. Throws ConfigError.
RunManifest build_manifest(const RunOptions &options, const std::optional<std::string> &output_dir = std::nullopt);

/// Wave functions on config.t_grid using the requested solver.
std::vector<WaveFunction> evolve(const SimulationConfig &config, Solver solver);

/// One record per state, computed in parallel, returned in input order.
std::vector<ObservableRecord> observable_series(const std::vector<WaveFunction> &states);

void write_observables_csv(std::ostream &os, const std::vector<ObservableRecord> &records);
void write_amplitudes_csv(std::ostream &os, const std::vector<WaveFunction> &states);
void write_density_csv(std::ostream &os, const DensityMatrix &rho);

/// Per time: largest |closed form - reference| for each amplitude, printed and corrected.
struct ErrataRow {
    double t = 0.0;
    std::array<double, 6> printed{};
    std::array<double, 6> corrected{};
};

std::vector<ErrataRow> errata_comparison(const std::vector<WaveFunction> &reference, const WaveFunction &initial,
                                         const NonlinearitySpec &spec);
void write_errata_csv(std::ostream &os, const std::vector<ErrataRow> &rows);

/// Formats a double with 12 significant digits.
std::string format_number(double x);

/// Executes a manifest, writing every requested file. Returns an ExitCode.
int run_simulation(const RunManifest &manifest, std::ostream &log);

/// Per-n spectral CSV: n,V1..V4,x1..x5,eta,beta1,beta2,x3_printed.
void spectra_dump(std::ostream &os, const NonlinearitySpec &spec, unsigned n_min, unsigned n_max);

struct CheckResult {
    std::string name;
    bool passed = false;
    bool hard   = true; // soft checks are reported without affecting the exit code
    std::string detail;
};

struct ValidationOptions {
    double alpha_sq      = 10.0;
    double eta           = kDefaultLambDicke;
    double t_max         = 25.0;
    unsigned steps       = 1000;
    double tail_eps      = kDefaultTailEpsilon;
    double ode_tol       = kDefaultOdeTolerance;
};

std::vector<CheckResult> validation_suite(const ValidationOptions &options);

/// Runs the suite, prints one PASS/FAIL/REPORT line per check and returns an ExitCode.
int validate(const ValidationOptions &options, std::ostream &os);

/// Envelope analysis of the mean photon number: oscillation amplitude
/// (max - min) in sliding windows of width 1 in gt.
struct CollapseRevival {
    double initial      = 0.0; // first window
    double collapsed    = 0.0; // smallest window amplitude after the first window
    double collapse_time = 0.0;
    double revived      = 0.0; // largest window amplitude after the collapse
    double revival_time = 0.0;

    /// Collapse to under half the initial amplitude, then regrowth to over twice the collapsed one.
    bool detected() const { return collapsed < 0.5 * initial && revived > 2.0 * collapsed; }
};

CollapseRevival collapse_revival(const std::vector<ObservableRecord> &records, double window = 1.0);

/// Leading Taylor coefficients at t = 0 per unit C1(n,0):
/// (C1'', C2', C3'', C4''', C5'', C6''''), estimated from amplitude samples at
/// t = h and h/2 with one Richardson step (each amplitude has definite parity).
std::array<Complex, 6> taylor_from_samples(const std::array<Complex, 6> &at_h, const std::array<Complex, 6> &at_half_h,
                                           double h);

/// The same six coefficients from the equations of motion.
std::array<Complex, 6> taylor_expected(const CouplingBlock &block);

} // namespace xiqed
