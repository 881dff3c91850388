#pragma once

#include "lrnndg/adapt.hpp"
#include "lrnndg/analysis.hpp"
#include "lrnndg/assembly.hpp"
#include "lrnndg/solver.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrnndg {

/// Invalid or incomplete configuration; `field` is the dotted path (section.key).
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    [[nodiscard]] const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class MeshKind { Uniform, Adaptive, Characteristic };
std::string to_string(MeshKind k);

/// Flat key/value view of an INI document, keys as "section.key".
using ConfigMap = std::map<std::string, std::string>;

struct ExperimentConfig {
    std::string name = "run";
    int example = 1;          // 1 gKdV soliton, 2 periodic double soliton, 3 Burgers
    double epsilon = 0.0;     // Burgers viscosity (example 3) or dispersion override (0: example default)
    int dim = 2;              // Burgers spatial dimension

    MeshKind mesh_kind = MeshKind::Uniform;
    double tau = 0.0, h = 0.0;
    AdaptParams adapt{};
    double slope = 0.0;
    std::vector<double> anchors;

    BasisConfig basis{};
    AssemblyConfig assembly{};
    SolverParams solver{};

    int error_quad = 15;
    int sample_nt = 41, sample_nx = 101, sample_ny = 21;
    std::string output_dir = "out";

    [[nodiscard]] ProblemSpec problem() const;
    [[nodiscard]] SpaceTimeMesh initial_mesh() const;
};

/// Reads an INI file into a flat map; syntax errors become ConfigError.
ConfigMap read_ini(const std::filesystem::path& path);

/// Applies SRDG_<SECTION>_<KEY> environment variables on top of the map.
void apply_env_overrides(ConfigMap& map);

/// Validates and converts; throws ConfigError naming the offending field.
ExperimentConfig parse_config(const ConfigMap& map);

ExperimentConfig load_config(const std::filesystem::path& path, bool env_overrides = true);

/// One CSV row per solved mesh (adaptive runs give one row per cycle).
struct RunRow {
    int example = 1;
    std::string scheme, mesh_kind;
    double tau = 0.0, h = 0.0;
    std::size_t N_e = 0;
    int M = 0;
    std::size_t dof = 0;
    std::optional<double> E_L2, E_H1, E_L2_slice;
    int iterations = 0;
    bool converged = false;
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
};

struct RunResult {
    ExperimentConfig config;
    std::vector<RunRow> rows;
    std::optional<SolutionField> solution;  // final mesh
    std::optional<double> mass_drift;
    nlohmann::json trace;
};

/// Solves the configured experiment without touching the file system.
RunResult run_experiment(const ExperimentConfig& config);

/// Writes run.csv, mesh.json, samples.csv and trace.json into dir.
void write_run_outputs(const RunResult& result, const std::filesystem::path& dir);

/// load + run + write; returns the result.
RunResult run_config(const std::filesystem::path& path, const std::optional<std::uint64_t>& seed = std::nullopt,
                     const std::optional<std::filesystem::path>& out = std::nullopt);

const std::vector<std::string>& run_csv_columns();
std::string format_number(double v);
std::string csv_row(const RunRow& row);

/// Grid expansion: every "[sweep]" key names a config field (or several joined by '+', which share
/// the value) and lists comma-separated values; the cartesian product is taken in listing order
/// with the last key varying fastest.
struct SweepCell {
    std::size_t index = 0;
    ConfigMap map;
    std::vector<std::pair<std::string, std::string>> assignment;
};
std::vector<SweepCell> expand_sweep(const ConfigMap& map);

struct SweepOutcome {
    SweepCell cell;
    bool ok = false;
    std::string message;
    std::vector<RunRow> rows;
};

/// Runs every cell (up to `workers` at a time), writes sweep.csv and summary.md into out_dir.
/// Failing cells become status=failed rows.
std::vector<SweepOutcome> run_sweep(const std::vector<std::filesystem::path>& configs, const std::filesystem::path& out_dir,
                                    int workers = 1, const std::optional<std::uint64_t>& seed = std::nullopt);

std::string sweep_summary_markdown(const std::vector<SweepOutcome>& outcomes);

/// Invariant suite (quadrature, identities, linearization, consistency).
struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double limit = 0.0;
    double seconds = 0.0;
    std::string detail;
};

CheckResult check_quadrature();
CheckResult check_identities();
CheckResult check_linearization();
CheckResult check_linear_consistency();
std::vector<CheckResult> run_invariant_checks();

}  // namespace lrnndg
