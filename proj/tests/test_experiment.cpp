#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lrnndg/experiment.hpp"

#include <cstdlib>
#include <cstring>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lrnndg;
namespace fs = std::filesystem;

namespace {

const fs::path kData = LRNNDG_TEST_DATA;

ConfigMap base_map() {
    return {{"problem.example", "1"}, {"scheme.kind", "dg"}, {"mesh.kind", "uniform"}, {"mesh.tau", "1"},
            {"mesh.h", "1"},          {"basis.M", "20"},      {"basis.r", "1.76"}};
}

std::string field_of(const ConfigMap& m) {
    try {
        (void)parse_config(m);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

std::string drop_column(const std::string& csv, std::size_t col) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string cell;
        std::size_t i = 0;
        while (std::getline(ls, cell, ',')) {
            if (i++ != col) out += cell + ",";
        }
        out += "\n";
    }
    return out;
}

fs::path temp_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("lrnndg_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("schema errors name the field") {
    auto m = base_map();
    CHECK(field_of(m).empty());
    m.erase("basis.M");
    CHECK(field_of(m) == "basis.M");
    m = base_map();
    m["basis.M"] = "many";
    CHECK(field_of(m) == "basis.M");
    m = base_map();
    m["scheme.kind"] = "fem";
    CHECK(field_of(m) == "scheme.kind");
    m = base_map();
    m["mesh.kind"] = "characteristic";
    CHECK(field_of(m) == "mesh.slope");
    m = base_map();
    m["problem.example"] = "3";
    CHECK(field_of(m) == "problem.epsilon");
    m = base_map();
    m["basis.colour"] = "red";
    CHECK(field_of(m) == "basis.colour");
    m = base_map();
    m["mesh.beta"] = "1.5";
    m["mesh.kind"] = "adaptive";
    CHECK(field_of(m) == "mesh.beta");
    m = base_map();
    m["solver.ls_mode"] = "magic";
    CHECK(field_of(m) == "solver.ls_mode");
}

TEST_CASE("fractions are accepted for reals") {
    ConfigMap m = base_map();
    m["mesh.tau"] = "1/4";
    m["mesh.h"] = "2/5";
    const ExperimentConfig c = parse_config(m);
    CHECK(c.tau == doctest::Approx(0.25));
    CHECK(c.h == doctest::Approx(0.4));
    m["mesh.h"] = "1/0";
    CHECK(field_of(m) == "mesh.h");
    m["mesh.h"] = "1/4x";
    CHECK(field_of(m) == "mesh.h");
}

TEST_CASE("ini file reading") {
    CHECK_THROWS_AS(read_ini(kData / "does_not_exist.ini"), ConfigError);
    const auto m = read_ini(kData / "missing_M.ini");
    CHECK(m.at("basis.r") == "1.76");
    try {
        (void)load_config(kData / "missing_M.ini", false);
        FAIL("expected a schema error");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "basis.M");
    }
    const auto c = load_config(kData / "tiny.ini", false);
    CHECK(c.basis.M == 30);
    CHECK(c.assembly.penalties.eta2 == 220.0);
    CHECK(c.solver.ls_mode == LsMode::Dense);
    CHECK(c.problem().equation == Equation::GKdV_u3ux);
    CHECK(c.initial_mesh().num_cells() == 10);
}

TEST_CASE("environment overrides") {
    ::setenv("SRDG_BASIS_M", "12", 1);
    ::setenv("SRDG_SOLVER_EPS0", "1e-3", 1);
    const auto c = load_config(kData / "tiny.ini");
    ::unsetenv("SRDG_BASIS_M");
    ::unsetenv("SRDG_SOLVER_EPS0");
    CHECK(c.basis.M == 12);
    CHECK(c.solver.eps0 == 1e-3);
}

TEST_CASE("number formatting") {
    CHECK(format_number(4.24e-4) == "4.24000e-04");
    CHECK(format_number(123456789.0) == "1.23457e+08");
    CHECK(format_number(std::nan("")) == "nan");
    RunRow r;
    r.scheme = "dg";
    r.mesh_kind = "uniform";
    r.E_L2 = 1.0;
    const std::string row = csv_row(r);
    CHECK(std::count(row.begin(), row.end(), ',') + 1 == static_cast<long>(run_csv_columns().size()));
}

TEST_CASE("sweep expansion") {
    auto m = base_map();
    m["sweep.basis.M"] = "10, 20, 40";
    m["sweep.mesh.tau+mesh.h"] = "1, 0.5";
    const auto cells = expand_sweep(m);
    REQUIRE(cells.size() == 6);
    CHECK(cells[0].map.at("basis.M") == "10");
    CHECK(cells[0].map.at("mesh.h") == "1");
    CHECK(cells[1].map.at("mesh.tau") == "0.5");
    CHECK(cells[1].map.at("mesh.h") == "0.5");
    CHECK(cells[5].map.at("basis.M") == "40");
    CHECK(cells[5].map.count("sweep.basis.M") == 0);
    CHECK(expand_sweep(base_map()).size() == 1);
    m["sweep.basis.nothing"] = "1";
    CHECK_THROWS_AS(expand_sweep(m), ConfigError);
}

TEST_CASE("run outputs are reproducible") {
    const fs::path a = temp_dir("a"), b = temp_dir("b");
    const auto r1 = run_config(kData / "tiny.ini", std::nullopt, a);
    const auto r2 = run_config(kData / "tiny.ini", std::nullopt, b);
    REQUIRE(r1.rows.size() == 1);
    CHECK(r1.rows[0].N_e == 10);
    CHECK(r1.rows[0].dof == 300);
    CHECK(r1.rows[0].E_L2.has_value());
    for (const char* f : {"run.csv", "mesh.json", "samples.csv", "trace.json"}) CHECK(fs::exists(a / f));
    const std::size_t wall = 13;
    REQUIRE(run_csv_columns()[wall] == "wall_seconds");
    CHECK(drop_column(slurp(a / "run.csv"), wall) == drop_column(slurp(b / "run.csv"), wall));
    CHECK(std::memcmp(&*r1.rows[0].E_L2, &*r2.rows[0].E_L2, sizeof(double)) == 0);
    const auto trace = nlohmann::json::parse(slurp(a / "trace.json"));
    CHECK(trace["cycles"].size() == 1);
    const auto r3 = run_config(kData / "tiny.ini", 4, temp_dir("c"));
    CHECK(r3.rows[0].seed == 4);
    CHECK(*r3.rows[0].E_L2 != *r1.rows[0].E_L2);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("sweeps record failures and keep going") {
    const fs::path out = temp_dir("sweep");
    const auto outcomes = run_sweep({kData / "tiny_sweep.ini"}, out, 2);
    REQUIRE(outcomes.size() == 4);
    // tau = h = 2.5 does not divide the domain
    CHECK(outcomes[0].ok);
    CHECK_FALSE(outcomes[1].ok);
    CHECK(outcomes[2].ok);
    CHECK_FALSE(outcomes[3].ok);
    const std::string csv = slurp(out / "sweep.csv");
    CHECK(csv.find(",failed,") != std::string::npos);
    CHECK(fs::exists(out / "summary.md"));
    CHECK(sweep_summary_markdown(outcomes).find("| basis.M |") != std::string::npos);
    CHECK_THROWS_AS(run_sweep({}, out), ConfigError);
    fs::remove_all(out);
}

TEST_CASE("adaptive runs give one row per cycle") {
    auto m = base_map();
    m["scheme.kind"] = "c1dg";
    m["mesh.kind"] = "adaptive";
    m["mesh.max_cycles"] = "1";
    m["basis.M"] = "20";
    m["scheme.quad"] = "8";
    m["output.error_quad"] = "8";
    m["solver.max_iterations"] = "3";
    const auto res = run_experiment(parse_config(m));
    CHECK(res.rows.size() == 2);
    CHECK(res.rows[1].N_e > res.rows[0].N_e);
    CHECK(res.rows[0].mesh_kind == "adaptive");
}

TEST_CASE("invariant suite passes") {
    for (const auto& r : run_invariant_checks()) {
        INFO(r.name << ": " << r.detail);
        CHECK(r.passed);
    }
}
