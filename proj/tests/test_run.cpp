#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <sstream>

#include "xiqed/run.hpp"

using namespace xiqed;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string &text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while(std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while(std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST_CASE("build_manifest") {
    RunOptions o;
    auto m = build_manifest(o);
    CHECK(m.solver == Solver::Eigen);
    CHECK(m.config.t_grid.size() == 1001);
    CHECK(std::abs(m.config.alpha - Complex{std::sqrt(10.0), 0.0}) < 1e-15);
    CHECK(m.observables_path == "observables.csv");

    o.delta1 = 0.5;
    CHECK(build_manifest(o).solver == Solver::Ode);
    o.solver = "eigen";
    CHECK_THROWS_AS(build_manifest(o), ConfigError);
    o.solver = "ode";
    o.errata = "report";
    CHECK_THROWS_AS(build_manifest(o), ConfigError);

    RunOptions bad;
    bad.f = "quadratic";
    CHECK_THROWS_AS(build_manifest(bad), ConfigError);
    bad     = RunOptions{};
    bad.f   = "trapped-ion";
    bad.eta = 0.0;
    CHECK_THROWS_AS(build_manifest(bad), ConfigError);
    bad       = RunOptions{};
    bad.steps = 0;
    CHECK_THROWS_AS(build_manifest(bad), ConfigError);
    bad          = RunOptions{};
    bad.tail_eps = 0.1;
    CHECK_THROWS_AS(build_manifest(bad), ConfigError);
    bad          = RunOptions{};
    bad.dump_rho = 30.0;
    CHECK_THROWS_AS(build_manifest(bad), ConfigError);
    bad        = RunOptions{};
    bad.solver = "rk4";
    CHECK_THROWS_AS(build_manifest(bad), ConfigError);

    RunOptions dir;
    const auto md = build_manifest(dir, std::string("/tmp/xiqed-out"));
    CHECK(md.observables_path == "/tmp/xiqed-out/observables.csv");
    CHECK(resolve_output_path("/abs/x.csv", std::string("/tmp")) == "/abs/x.csv");
    CHECK(resolve_output_path("-", std::string("/tmp")) == "-");
}

TEST_CASE("JSON configuration") {
    RunOptions o;
    const auto j = nlohmann::json::parse(R"({"f": "harmonious", "steps": 20, "t-max": 5.0, "out": "a.csv"})");
    merge_json_config(j, {"steps"}, o);
    CHECK(o.f == "harmonious");
    CHECK(o.steps == 1000);
    CHECK(o.t_max == 5.0);
    CHECK(o.out == "a.csv");

    CHECK_THROWS_AS(merge_json_config(nlohmann::json::parse(R"({"alpha": 3})"), {}, o), ConfigError);
    CHECK_THROWS_AS(merge_json_config(nlohmann::json::parse(R"({"steps": "many"})"), {}, o), ConfigError);
    CHECK_THROWS_AS(merge_json_config(nlohmann::json::parse("[1, 2]"), {}, o), ConfigError);
    for(const auto &key : config_keys()) CHECK(key.find('_') == std::string::npos);
}

TEST_CASE("observable CSV") {
    RunOptions o;
    const auto m       = build_manifest(o);
    const auto records = observable_series(evolve(m.config, m.solver));
    std::ostringstream os;
    write_observables_csv(os, records);
    const auto rows = parse_csv(os.str());
    REQUIRE(rows.size() == 1002);
    CHECK(rows[0] == std::vector<std::string>{"gt", "S_atoms", "S_atom1", "negativity", "mandel_Q", "mean_n", "S_x",
                                              "S_y"});
    for(std::size_t i = 1; i < rows.size(); ++i) REQUIRE(rows[i].size() == 8);
    CHECK(std::stod(rows[1][0]) == 0.0);
    CHECK(std::abs(std::stod(rows[1][1])) < 1e-11);
    CHECK(std::abs(std::stod(rows[1][5]) - 10.0) < 1e-9);
    CHECK(std::stod(rows.back()[0]) == 25.0);
    CHECK(std::stod(rows[41][0]) == doctest::Approx(1.0));
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
}

TEST_CASE("harmonious records repeat with period pi sqrt 2") {
    RunOptions o;
    o.f     = "harmonious";
    o.t_max = std::numbers::pi * std::numbers::sqrt2;
    o.steps = 10;
    const auto m       = build_manifest(o);
    const auto records = observable_series(evolve(m.config, m.solver));
    const auto &a = records.front(), &b = records.back();
    CHECK(std::abs(a.s_atoms - b.s_atoms) < 1e-10);
    CHECK(std::abs(a.mean_n - b.mean_n) < 1e-10);
    CHECK(std::abs(a.mandel_q - b.mandel_q) < 1e-10);
    CHECK(std::abs(a.s_x - b.s_x) < 1e-10);
}

TEST_CASE("eigen and ODE solvers give the same records") {
    RunOptions o;
    o.f     = "trapped-ion";
    o.steps = 50;
    auto m  = build_manifest(o);
    const auto eig = observable_series(evolve(m.config, Solver::Eigen));
    const auto ode = observable_series(evolve(m.config, Solver::Ode));
    for(std::size_t i = 0; i < eig.size(); ++i) {
        CHECK(std::abs(eig[i].s_atoms - ode[i].s_atoms) < 1e-7);
        CHECK(std::abs(eig[i].mean_n - ode[i].mean_n) < 1e-6);
    }
}

TEST_CASE("amplitude and density CSV shapes") {
    const auto wf0 = initial_amplitudes(Complex{std::sqrt(10.0), 0.0}, 39);
    std::ostringstream amp;
    write_amplitudes_csv(amp, {wf0});
    const auto rows = parse_csv(amp.str());
    CHECK(rows.size() == 1 + wf0.size());
    CHECK(rows[0].size() == 14);
    CHECK(rows[0][2] == "re_c1");

    std::ostringstream rho;
    write_density_csv(rho, atoms_reduced(wf0));
    const auto rrows = parse_csv(rho.str());
    REQUIRE(rrows.size() == 9);
    CHECK(rrows[0].size() == 18);
    CHECK(std::abs(std::stod(rrows[0][0]) - 1.0) < 1e-12);
}

TEST_CASE("errata comparison") {
    RunOptions o;
    o.steps = 20;
    const auto m    = build_manifest(o);
    const auto wf0  = initial_amplitudes(m.config.alpha, truncation_cutoff(m.config.alpha, m.config.tail_epsilon));
    const auto rows = errata_comparison(evolve(m.config, m.solver), wf0, m.config.spec);
    REQUIRE(rows.size() == 21);
    double printed = 0.0, corrected = 0.0;
    for(const auto &r : rows) {
        printed   = std::max(printed, r.printed[0]);
        corrected = std::max(corrected, *std::max_element(r.corrected.begin(), r.corrected.end()));
    }
    CHECK(corrected < 1e-10);
    CHECK(printed > 1e-2);
}

TEST_CASE("spectra dump") {
    std::ostringstream os;
    spectra_dump(os, NonlinearitySpec::harmonious(), 0, 5);
    auto rows = parse_csv(os.str());
    REQUIRE(rows.size() == 7);
    CHECK(rows[0].size() == 14);
    for(std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::stod(rows[i][11]) == doctest::Approx(2.0 * std::numbers::sqrt2)); // beta1
        CHECK(std::stod(rows[i][12]) == doctest::Approx(std::numbers::sqrt2));       // beta2
        CHECK(std::stod(rows[i][7]) == doctest::Approx(10.0));                      // x3
        CHECK(std::stod(rows[i][13]) - std::stod(rows[i][7]) == doctest::Approx(3.0));
    }
    std::ostringstream c;
    spectra_dump(c, NonlinearitySpec::constant(), 0, 39);
    rows = parse_csv(c.str());
    REQUIRE(rows.size() == 41);
    CHECK(std::stod(rows[1][6]) == doctest::Approx(82.0));
    for(std::size_t i = 1; i < rows.size(); ++i) {
        const double v3 = std::stod(rows[i][3]);
        CHECK(std::stod(rows[i][13]) - std::stod(rows[i][7]) == doctest::Approx(3.0 * v3 * v3).epsilon(1e-9));
    }
}

TEST_CASE("collapse and revival of the photon number") {
    std::vector<ObservableRecord> flat(101);
    for(std::size_t i = 0; i < flat.size(); ++i) flat[i].t = 0.1 * i;
    CHECK_FALSE(collapse_revival(flat).detected());

    RunOptions o;
    const auto m = build_manifest(o);
    CHECK(collapse_revival(observable_series(evolve(m.config, m.solver))).detected());
}

TEST_CASE("Taylor estimate from samples") {
    const auto block = coupling_strengths(NonlinearitySpec::trapped_ion(0.2), 2);
    const double h   = 0.05;
    const auto at    = [&](double t) { return closed_form_amplitudes(2, NonlinearitySpec::trapped_ion(0.2), t, ClosedFormVariant::Corrected); };
    const auto est   = taylor_from_samples(at(h), at(h / 2), h);
    const auto want  = taylor_expected(block);
    for(std::size_t k = 0; k < 6; ++k) CHECK(std::abs(est[k] - want[k]) <= 1e-4 * std::abs(want[k]));
    // C2'(0) = -i V1
    CHECK(std::abs(want[1] - Complex{0.0, -block.v[0]}) < 1e-14);
}

TEST_CASE("validation suite") {
    ValidationOptions options;
    const auto results = validation_suite(options);
    REQUIRE(!results.empty());
    for(const auto &r : results)
        if(r.hard) CHECK_MESSAGE(r.passed, r.name << ": " << r.detail);
    std::ostringstream os;
    CHECK(validate(options, os) == kExitOk);
    CHECK(os.str().find("FAIL") == std::string::npos);

    options.ode_tol = 1e-2;
    std::ostringstream loose;
    CHECK(validate(options, loose) == kExitValidationFailure);
}

TEST_CASE("runs are deterministic") {
    RunOptions o;
    o.f     = "trapped-ion";
    o.steps = 40;
    const auto m = build_manifest(o);
    std::ostringstream a, b;
    write_observables_csv(a, observable_series(evolve(m.config, Solver::Ode)));
    write_observables_csv(b, observable_series(evolve(m.config, Solver::Ode)));
    CHECK(a.str() == b.str());
}
