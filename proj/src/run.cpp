#include "xiqed/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "parallel.hpp"
#include "xiqed/error.hpp"

namespace xiqed {

const std::vector<std::string> &config_keys() {
    static const std::vector<std::string> keys{"f",      "eta",      "alpha-sq",   "delta1", "delta2",
                                               "t-max",  "steps",    "tail-eps",   "ode-tol", "solver",
                                               "out",    "errata",   "errata-out", "amplitudes", "dump-rho",
                                               "rho-out"};
    return keys;
}

namespace {

template <class T>
T json_value(const nlohmann::json &j, const std::string &key) {
    try {
        return j.get<T>();
    } catch(const nlohmann::json::exception &e) {
        throw ConfigError("config key '" + key + "': " + e.what());
    }
}

} // namespace

void merge_json_config(const nlohmann::json &config, const std::set<std::string> &explicit_keys, RunOptions &options) {
    if(!config.is_object()) throw ConfigError("config file must hold a JSON object");
    const auto &keys = config_keys();
    for(const auto &[key, value] : config.items()) {
        if(std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError("unknown config key '" + key + "'");
        if(explicit_keys.contains(key)) continue;
        if(key == "f") options.f = json_value<std::string>(value, key);
        else if(key == "eta") options.eta = json_value<double>(value, key);
        else if(key == "alpha-sq") options.alpha_sq = json_value<double>(value, key);
        else if(key == "delta1") options.delta1 = json_value<double>(value, key);
        else if(key == "delta2") options.delta2 = json_value<double>(value, key);
        else if(key == "t-max") options.t_max = json_value<double>(value, key);
        else if(key == "steps") options.steps = json_value<unsigned>(value, key);
        else if(key == "tail-eps") options.tail_eps = json_value<double>(value, key);
        else if(key == "ode-tol") options.ode_tol = json_value<double>(value, key);
        else if(key == "solver") options.solver = json_value<std::string>(value, key);
        else if(key == "out") options.out = json_value<std::string>(value, key);
        else if(key == "errata") options.errata = json_value<std::string>(value, key);
        else if(key == "errata-out") options.errata_out = json_value<std::string>(value, key);
        else if(key == "amplitudes") options.amplitudes_out = json_value<std::string>(value, key);
        else if(key == "dump-rho") options.dump_rho = json_value<double>(value, key);
        else if(key == "rho-out") options.rho_out = json_value<std::string>(value, key);
    }
}

std::string resolve_output_path(const std::string &path, const std::optional<std::string> &dir) {
    if(!dir || dir->empty() || path == "-") return path;
    std::filesystem::path p(path);
    if(p.is_absolute()) return path;
    return (std::filesystem::path(*dir) / p).string();
}

RunManifest build_manifest(const RunOptions &options, const std::optional<std::string> &output_dir) {
    RunManifest m;
    auto kind = parse_nonlinearity_kind(options.f);
    if(!kind) throw ConfigError("unknown nonlinearity '" + options.f + "' (constant|harmonious|trapped-ion)");
    if(*kind == NonlinearityKind::TrappedIon && !(options.eta > 0.0))
        throw ConfigError("--eta must be positive for the trapped-ion nonlinearity");
    if(!(options.alpha_sq > 0.0) || !std::isfinite(options.alpha_sq)) throw ConfigError("--alpha-sq must be positive");
    if(!(options.t_max > 0.0) || !std::isfinite(options.t_max)) throw ConfigError("--t-max must be positive");
    if(options.steps == 0) throw ConfigError("--steps must be at least 1");

    auto &cfg         = m.config;
    cfg.spec          = make_nonlinearity(*kind, options.eta);
    cfg.alpha         = Complex{std::sqrt(options.alpha_sq), 0.0};
    cfg.delta1        = options.delta1;
    cfg.delta2        = options.delta2;
    cfg.t_grid        = uniform_grid(options.t_max, options.steps);
    cfg.tail_epsilon  = options.tail_eps;
    cfg.ode_tolerance = options.ode_tol;
    try {
        validate_config(cfg);
    } catch(const ModelError &e) {
        throw ConfigError(e.what());
    }

    if(options.solver) {
        if(*options.solver == "eigen") m.solver = Solver::Eigen;
        else if(*options.solver == "ode") m.solver = Solver::Ode;
        else throw ConfigError("unknown solver '" + *options.solver + "' (eigen|ode)");
    } else {
        m.solver = cfg.resonant() ? Solver::Eigen : Solver::Ode;
    }
    if(m.solver == Solver::Eigen && !cfg.resonant())
        throw ConfigError("the eigen solver requires delta1 = delta2 = 0; use --solver ode");

    if(options.errata == "off") m.errata = ErrataMode::Off;
    else if(options.errata == "report") m.errata = ErrataMode::Report;
    else throw ConfigError("unknown errata mode '" + options.errata + "' (off|report)");
    if(m.errata == ErrataMode::Report && !cfg.resonant())
        throw ConfigError("the errata report compares resonance closed forms; it requires delta1 = delta2 = 0");

    if(options.dump_rho) {
        const double t = *options.dump_rho;
        if(!(t >= 0.0) || t > options.t_max) throw ConfigError("--dump-rho time must lie in [0, t-max]");
        m.dump_rho_time = t;
    }

    m.observables_path = resolve_output_path(options.out, output_dir);
    m.errata_path      = resolve_output_path(options.errata_out, output_dir);
    m.rho_path         = resolve_output_path(options.rho_out, output_dir);
    if(options.amplitudes_out) m.amplitudes_path = resolve_output_path(*options.amplitudes_out, output_dir);
    return m;
}

std::vector<WaveFunction> evolve(const SimulationConfig &config, Solver solver) {
    validate_config(config);
    const unsigned cutoff = truncation_cutoff(config.alpha, config.tail_epsilon);
    const WaveFunction initial = initial_amplitudes(config.alpha, cutoff);
    if(solver == Solver::Ode)
        return ode_evolve(initial, config.spec, config.delta1, config.delta2, config.t_grid, config.ode_tolerance);
    if(!config.resonant()) throw ModelError(ErrorKind::InvalidArgument, "eigen solver requires resonance");

    const ResonancePropagator propagate(initial, config.spec);
    std::vector<WaveFunction> states(config.t_grid.size());
    detail::parallel_for(states.size(), [&](std::size_t i) { states[i] = propagate(config.t_grid[i]); });
    return states;
}

std::vector<ObservableRecord> observable_series(const std::vector<WaveFunction> &states) {
    std::vector<ObservableRecord> records(states.size());
    detail::parallel_for(states.size(), [&](std::size_t i) { records[i] = observable_record(states[i]); });
    return records;
}

std::string format_number(double x) {
    if(x == 0.0) x = 0.0; // fold -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_observables_csv(std::ostream &os, const std::vector<ObservableRecord> &records) {
    os << "gt,S_atoms,S_atom1,negativity,mandel_Q,mean_n,S_x,S_y\n";
    for(const auto &r : records) {
        os << format_number(r.t) << ',' << format_number(r.s_atoms) << ',' << format_number(r.s_atom1) << ','
           << format_number(r.negativity) << ',' << format_number(r.mandel_q) << ',' << format_number(r.mean_n) << ','
           << format_number(r.s_x) << ',' << format_number(r.s_y) << '\n';
    }
}

void write_amplitudes_csv(std::ostream &os, const std::vector<WaveFunction> &states) {
    os << "t,n";
    for(int k = 1; k <= 6; ++k) os << ",re_c" << k << ",im_c" << k;
    os << '\n';
    for(const auto &wf : states) {
        for(std::size_t n = 0; n < wf.size(); ++n) {
            os << format_number(wf.t) << ',' << n;
            for(std::size_t k = 0; k < 6; ++k)
                os << ',' << format_number(wf.c[k][n].real()) << ',' << format_number(wf.c[k][n].imag());
            os << '\n';
        }
    }
}

void write_density_csv(std::ostream &os, const DensityMatrix &rho) {
    for(std::size_t r = 0; r < rho.dim(); ++r) {
        for(std::size_t c = 0; c < rho.dim(); ++c) {
            if(c > 0) os << ',';
            os << format_number(rho(r, c).real()) << ',' << format_number(rho(r, c).imag());
        }
        os << '\n';
    }
}

std::vector<ErrataRow> errata_comparison(const std::vector<WaveFunction> &reference, const WaveFunction &initial,
                                         const NonlinearitySpec &spec) {
    std::vector<ErrataRow> rows(reference.size());
    detail::parallel_for(reference.size(), [&](std::size_t i) {
        const auto &ref = reference[i];
        ErrataRow row;
        row.t = ref.t;
        for(unsigned n = 0; n <= initial.n_max; ++n) {
            const Complex c0 = initial.c[0][n];
            const auto exact = ref.block(n);
            const auto printed = closed_form_amplitudes(n, spec, ref.t - initial.t, ClosedFormVariant::Printed, c0);
            const auto corrected = closed_form_amplitudes(n, spec, ref.t - initial.t, ClosedFormVariant::Corrected, c0);
            for(std::size_t k = 0; k < 6; ++k) {
                row.printed[k]   = std::max(row.printed[k], std::abs(printed[k] - exact[k]));
                row.corrected[k] = std::max(row.corrected[k], std::abs(corrected[k] - exact[k]));
            }
        }
        rows[i] = row;
    });
    return rows;
}

void write_errata_csv(std::ostream &os, const std::vector<ErrataRow> &rows) {
    os << "gt";
    for(int k = 1; k <= 6; ++k) os << ",printed_dC" << k;
    for(int k = 1; k <= 6; ++k) os << ",corrected_dC" << k;
    os << '\n';
    for(const auto &r : rows) {
        os << format_number(r.t);
        for(double d : r.printed) os << ',' << format_number(d);
        for(double d : r.corrected) os << ',' << format_number(d);
        os << '\n';
    }
}

namespace {

template <class Writer>
void write_file(const std::string &path, Writer &&writer) {
    std::ofstream file(path);
    if(!file) throw IoError("cannot open '" + path + "' for writing");
    writer(file);
    file.flush();
    if(!file) throw IoError("write to '" + path + "' failed");
}

} // namespace

int run_simulation(const RunManifest &manifest, std::ostream &log) {
    try {
        const auto &cfg      = manifest.config;
        const unsigned cutoff = truncation_cutoff(cfg.alpha, cfg.tail_epsilon);
        const auto states    = evolve(cfg, manifest.solver);
        const auto records   = observable_series(states);

        write_file(manifest.observables_path, [&](std::ostream &os) { write_observables_csv(os, records); });
        log << "wrote " << records.size() << " rows to " << manifest.observables_path << " (f = " << cfg.spec.name()
            << ", n_max = " << cutoff << ", solver = " << (manifest.solver == Solver::Eigen ? "eigen" : "ode") << ")\n";

        if(manifest.amplitudes_path) {
            write_file(*manifest.amplitudes_path, [&](std::ostream &os) { write_amplitudes_csv(os, states); });
            log << "wrote amplitudes to " << *manifest.amplitudes_path << '\n';
        }
        if(manifest.dump_rho_time) {
            // nearest grid sample
            const auto &grid = cfg.t_grid;
            auto it          = std::min_element(grid.begin(), grid.end(), [&](double a, double b) {
                return std::abs(a - *manifest.dump_rho_time) < std::abs(b - *manifest.dump_rho_time);
            });
            const auto rho = atoms_reduced(states[static_cast<std::size_t>(it - grid.begin())]);
            write_file(manifest.rho_path, [&](std::ostream &os) { write_density_csv(os, rho); });
            log << "wrote two-atom density matrix at gt = " << *it << " to " << manifest.rho_path << '\n';
        }
        if(manifest.errata == ErrataMode::Report) {
            const auto rows = errata_comparison(states, initial_amplitudes(cfg.alpha, cutoff), cfg.spec);
            write_file(manifest.errata_path, [&](std::ostream &os) { write_errata_csv(os, rows); });
            double printed = 0.0, corrected = 0.0;
            for(const auto &r : rows) {
                printed   = std::max(printed, *std::max_element(r.printed.begin(), r.printed.end()));
                corrected = std::max(corrected, *std::max_element(r.corrected.begin(), r.corrected.end()));
            }
            log << "errata report: max deviation printed = " << printed << ", corrected = " << corrected << " -> "
                << manifest.errata_path << '\n';
        }
    } catch(const IoError &e) {
        log << "error: " << e.what() << '\n';
        return kExitIoError;
    }
    return kExitOk;
}

void spectra_dump(std::ostream &os, const NonlinearitySpec &spec, unsigned n_min, unsigned n_max) {
    os << "n,V1,V2,V3,V4,x1,x2,x3,x4,x5,eta,beta1,beta2,x3_printed\n";
    for(unsigned n = n_min; n <= n_max; ++n) {
        const auto block = coupling_strengths(spec, n);
        const auto sc    = spectral_coefficients(block);
        os << n;
        for(double v : block.v) os << ',' << format_number(v);
        for(double x : {sc.x1, sc.x2, sc.x3, sc.x4, sc.x5, sc.eta, sc.beta1, sc.beta2, x3_printed(block)})
            os << ',' << format_number(x);
        os << '\n';
    }
}

CollapseRevival collapse_revival(const std::vector<ObservableRecord> &records, double window) {
    CollapseRevival out;
    if(records.empty()) return out;
    // Window amplitudes on windows starting at every sample.
    std::vector<std::pair<double, double>> amp; // (window start, max - min)
    for(std::size_t i = 0; i < records.size(); ++i) {
        const double start = records[i].t;
        if(start + window > records.back().t) break;
        double lo = records[i].mean_n, hi = lo;
        for(std::size_t j = i; j < records.size() && records[j].t <= start + window; ++j) {
            lo = std::min(lo, records[j].mean_n);
            hi = std::max(hi, records[j].mean_n);
        }
        amp.emplace_back(start, hi - lo);
    }
    if(amp.empty()) return out;
    out.initial   = amp.front().second;
    out.collapsed = out.initial;
    std::size_t collapse_idx = 0;
    for(std::size_t i = 0; i < amp.size(); ++i) {
        if(amp[i].first < window) continue;
        if(amp[i].second < out.collapsed || collapse_idx == 0) {
            out.collapsed     = amp[i].second;
            out.collapse_time = amp[i].first;
            collapse_idx      = i;
        }
    }
    for(std::size_t i = collapse_idx; i < amp.size(); ++i)
        if(amp[i].second > out.revived) {
            out.revived      = amp[i].second;
            out.revival_time = amp[i].first;
        }
    return out;
}

std::array<Complex, 6> taylor_from_samples(const std::array<Complex, 6> &at_h, const std::array<Complex, 6> &at_half_h,
                                           double h) {
    static constexpr std::array<int, 6> order{2, 1, 2, 3, 2, 4};
    std::array<Complex, 6> out;
    for(std::size_t k = 0; k < 6; ++k) {
        const int p         = order[k];
        const double fact   = std::tgamma(p + 1.0);
        const Complex shift = k == 0 ? Complex{1.0, 0.0} : Complex{};
        const Complex r_h   = fact * (at_h[k] - shift) / std::pow(h, p);
        const Complex r_h2  = fact * (at_half_h[k] - shift) / std::pow(h / 2.0, p);
        out[k]              = (4.0 * r_h2 - r_h) / 3.0;
    }
    return out;
}

std::array<Complex, 6> taylor_expected(const CouplingBlock &block) {
    const auto [v1, v2, v3, v4] = block.v;
    const Complex i{0.0, 1.0};
    return {Complex{-2.0 * v1 * v1}, -i * v1,          Complex{-v1 * v2},
            3.0 * i * v1 * v2 * v3,  Complex{-2.0 * v1 * v2}, Complex{6.0 * v1 * v2 * v3 * v4}};
}

} // namespace xiqed
