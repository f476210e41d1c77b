// Command-line driver: simulate, validate, spectra.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "xiqed/error.hpp"
#include "xiqed/run.hpp"

namespace {

using namespace xiqed;

constexpr const char *kOutputDirEnv = "XIQED_OUTPUT_DIR";

std::optional<std::string> output_dir_override() {
    if(const char *dir = std::getenv(kOutputDirEnv); dir && *dir) return std::string(dir);
    return std::nullopt;
}

struct ModelFlags {
    CLI::Option *f = nullptr, *eta = nullptr, *alpha_sq = nullptr, *delta1 = nullptr, *delta2 = nullptr,
                *t_max = nullptr, *steps = nullptr, *tail_eps = nullptr, *ode_tol = nullptr;
};

ModelFlags add_model_flags(CLI::App &app, RunOptions &o) {
    ModelFlags flags;
    flags.f = app.add_option("--f", o.f, "Nonlinearity: constant | harmonious | trapped-ion")
                  ->check(CLI::IsMember({"constant", "harmonious", "trapped-ion", "trapped_ion"}));
    flags.eta      = app.add_option("--eta", o.eta, "Lamb-Dicke parameter (trapped-ion)");
    flags.alpha_sq = app.add_option("--alpha-sq", o.alpha_sq, "Initial mean photon number |alpha|^2");
    flags.delta1   = app.add_option("--delta1", o.delta1, "Detuning Delta_1 in units of g");
    flags.delta2   = app.add_option("--delta2", o.delta2, "Detuning Delta_2 in units of g");
    flags.t_max    = app.add_option("--t-max", o.t_max, "Final scaled time gt");
    flags.steps    = app.add_option("--steps", o.steps, "Number of time steps (rows = steps + 1)");
    flags.tail_eps = app.add_option("--tail-eps", o.tail_eps, "Poisson tail tolerance for the photon cutoff");
    flags.ode_tol  = app.add_option("--ode-tol", o.ode_tol, "Relative tolerance of the ODE integrator");
    return flags;
}

// Long names of flags given explicitly on the command line.
std::set<std::string> explicit_keys(const CLI::App &app) {
    std::set<std::string> keys;
    for(const CLI::Option *opt : app.get_options())
        if(opt->count() > 0 && !opt->get_lnames().empty()) keys.insert(opt->get_lnames().front());
    return keys;
}

void apply_config_file(const std::string &path, const CLI::App &app, RunOptions &options) {
    std::ifstream in(path);
    if(!in) throw ConfigError("cannot read config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch(const nlohmann::json::exception &e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    merge_json_config(j, explicit_keys(app), options);
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Two Xi-type three-level atoms in a single-mode cavity with intensity-dependent coupling"};
    app.require_subcommand(1);

    RunOptions sim;
    std::string sim_config;
    std::string solver;
    double dump_rho = 0.0;
    std::string amplitudes;
    auto *simulate = app.add_subcommand("simulate", "Propagate the state and write the observable time series");
    add_model_flags(*simulate, sim);
    simulate->add_option("--solver", solver, "eigen (resonance only) | ode")->check(CLI::IsMember({"eigen", "ode"}));
    simulate->add_option("--out", sim.out, "Observable CSV path");
    simulate->add_option("--errata", sim.errata, "off | report")->check(CLI::IsMember({"off", "report"}));
    simulate->add_option("--errata-out", sim.errata_out, "Printed-vs-corrected closed-form comparison CSV");
    auto *amp_opt = simulate->add_option("--amplitudes", amplitudes, "Also dump amplitudes (t,n,re_c1..im_c6)");
    auto *rho_opt = simulate->add_option("--dump-rho", dump_rho, "Write the two-atom density matrix at this gt");
    simulate->add_option("--rho-out", sim.rho_out, "Density matrix CSV path (re,im interleaved)");
    simulate->add_option("--config", sim_config, "JSON file with defaults for any flag above");

    RunOptions val;
    std::string val_config;
    auto *validate_cmd = app.add_subcommand("validate", "Run the invariant, oracle and errata checks");
    add_model_flags(*validate_cmd, val);
    validate_cmd->add_option("--config", val_config, "JSON file with defaults for the model flags");

    std::string spectra_f = "constant";
    double spectra_eta    = kDefaultLambDicke;
    unsigned n_min = 0, n_max = 39;
    std::string spectra_out = "-";
    auto *spectra = app.add_subcommand("spectra", "Dump per-block spectral coefficients as CSV");
    spectra->add_option("--f", spectra_f, "Nonlinearity")
        ->check(CLI::IsMember({"constant", "harmonious", "trapped-ion", "trapped_ion"}));
    spectra->add_option("--eta", spectra_eta, "Lamb-Dicke parameter (trapped-ion)");
    spectra->add_option("--n-min", n_min, "First photon block");
    spectra->add_option("--n-max", n_max, "Last photon block");
    spectra->add_option("--out", spectra_out, "CSV path, '-' for stdout");

    try {
        app.parse(argc, argv);
    } catch(const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if(*simulate) {
            if(!solver.empty()) sim.solver = solver;
            if(*amp_opt) sim.amplitudes_out = amplitudes;
            if(*rho_opt) sim.dump_rho = dump_rho;
            if(!sim_config.empty()) apply_config_file(sim_config, *simulate, sim);
            const auto manifest = build_manifest(sim, output_dir_override());
            return run_simulation(manifest, std::cerr);
        }
        if(*validate_cmd) {
            if(!val_config.empty()) apply_config_file(val_config, *validate_cmd, val);
            ValidationOptions options;
            options.alpha_sq = val.alpha_sq;
            options.eta      = val.eta;
            options.t_max    = val.t_max;
            options.steps    = val.steps;
            options.tail_eps = val.tail_eps;
            options.ode_tol  = val.ode_tol;
            return validate(options, std::cout);
        }
        if(*spectra) {
            if(n_max < n_min) throw ConfigError("--n-max must not be below --n-min");
            const auto spec = make_nonlinearity(*parse_nonlinearity_kind(spectra_f), spectra_eta);
            if(spectra_out == "-") {
                spectra_dump(std::cout, spec, n_min, n_max);
                return kExitOk;
            }
            const std::string path = resolve_output_path(spectra_out, output_dir_override());
            std::ofstream file(path);
            if(!file) throw IoError("cannot open '" + path + "' for writing");
            spectra_dump(file, spec, n_min, n_max);
            if(!file) throw IoError("write to '" + path + "' failed");
            return kExitOk;
        }
    } catch(const ConfigError &e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch(const IoError &e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIoError;
    } catch(const ModelError &e) {
        std::cerr << "model error: " << e.what() << '\n';
        return kExitConfigError;
    }
    return kExitOk;
}
