#include "lrnndg/experiment.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

constexpr int kConfigErrorExit = 2;

void print_rows(const std::vector<lrnndg::RunRow>& rows) {
    const auto& cols = lrnndg::run_csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) std::cout << (i ? "," : "") << cols[i];
    std::cout << '\n';
    for (const auto& r : rows) std::cout << lrnndg::csv_row(r) << '\n';
}

void describe_config(const std::filesystem::path& path) {
    lrnndg::ConfigMap map = lrnndg::read_ini(path);
    lrnndg::apply_env_overrides(map);
    for (const auto& cell : lrnndg::expand_sweep(map)) {
        const lrnndg::ExperimentConfig c = lrnndg::parse_config(cell.map);
        std::cout << path.string() << " cell " << cell.index << ": example " << c.example << ", " << lrnndg::to_string(c.assembly.scheme)
                  << ", " << lrnndg::to_string(c.mesh_kind) << " mesh with " << c.initial_mesh().num_cells() << " cells, M " << c.basis.M;
        for (const auto& [k, v] : cell.assignment) std::cout << ", " << k << "=" << v;
        std::cout << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local randomized neural network DG solvers for KdV and Burgers problems"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    std::string out;
    int workers = 1;

    auto* run = app.add_subcommand("run", "Run one experiment from an INI config");
    std::string run_config;
    run->add_option("config", run_config, "Config file")->required();
    run->add_option("--seed", seed, "Override basis.seed");
    run->add_option("--out", out, "Output directory (default: output.dir)");

    auto* sweep = app.add_subcommand("sweep", "Run the cartesian grid of one or more configs");
    std::vector<std::string> sweep_configs;
    sweep->add_option("configs", sweep_configs, "Config files with optional [sweep] sections");
    sweep->add_option("--seed", seed, "Override basis.seed in every cell");
    sweep->add_option("--out", out, "Output directory")->default_val("sweep_out");
    sweep->add_option("--workers", workers, "Concurrent cells")->check(CLI::PositiveNumber);

    auto* check = app.add_subcommand("check", "Run the invariant suite");

    auto* validate = app.add_subcommand("validate", "Parse configs and list their sweep cells without solving");
    std::vector<std::string> validate_configs;
    validate->add_option("configs", validate_configs, "Config files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigErrorExit;
    }

    try {
        if (*run) {
            const auto res = lrnndg::run_config(run_config, seed, out.empty() ? std::nullopt : std::optional<std::filesystem::path>(out));
            print_rows(res.rows);
            if (res.mass_drift) std::cout << "mass_drift," << lrnndg::format_number(*res.mass_drift) << '\n';
            return 0;
        }
        if (*sweep) {
            std::vector<std::filesystem::path> paths(sweep_configs.begin(), sweep_configs.end());
            const auto outcomes = lrnndg::run_sweep(paths, out, workers, seed);
            std::size_t failed = 0;
            for (const auto& o : outcomes)
                if (!o.ok) {
                    ++failed;
                    std::cerr << "cell " << o.cell.index << " failed: " << o.message << '\n';
                }
            std::cout << lrnndg::sweep_summary_markdown(outcomes);
            return failed ? 1 : 0;
        }
        if (*validate) {
            for (const auto& path : validate_configs) {
                describe_config(path);
            }
            return 0;
        }
        if (*check) {
            bool ok = true;
            for (const auto& r : lrnndg::run_invariant_checks()) {
                std::printf("%s %-24s value=%.3e limit=%.1e (%.2fs) %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.value, r.limit,
                            r.seconds, r.detail.c_str());
                ok = ok && r.passed;
            }
            return ok ? 0 : 1;
        }
    } catch (const lrnndg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigErrorExit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
