#include "lrnndg/experiment.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

extern char** environ;

namespace lrnndg {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "problem.example", "problem.epsilon", "problem.dim",
        "scheme.kind", "scheme.eta", "scheme.eta_time", "scheme.eta_adv", "scheme.eta2", "scheme.eta3", "scheme.eta_burgers",
        "scheme.burgers_penalty_times_eps", "scheme.quad", "scheme.n_c", "scheme.w_c", "scheme.scale_derivative_rows",
        "mesh.kind", "mesh.tau", "mesh.h", "mesh.beta", "mesh.max_cycles", "mesh.max_cells", "mesh.rtol_stop", "mesh.estimator_quad",
        "mesh.slope", "mesh.anchors",
        "basis.M", "basis.r", "basis.activation", "basis.wavelet_k", "basis.wavelet_x0", "basis.wavelet_time_weight", "basis.seed", "basis.compression_tol",
        "basis.sample_quad", "basis.normalize_inputs",
        "solver.eps0", "solver.max_iterations", "solver.ls_mode", "solver.dense_threshold", "solver.damping", "solver.shift",
        "solver.truncation", "solver.lsqr_tol", "solver.max_lsqr_factor", "solver.quad", "solver.line_search", "solver.max_backtracks",
        "output.dir", "output.name", "output.error_quad", "output.sample_nt", "output.sample_nx", "output.sample_ny",
    };
    return keys;
}

class Reader {
public:
    explicit Reader(const ConfigMap& map) : map_(map) {}

    [[nodiscard]] bool has(const std::string& key) const { return map_.count(key) > 0; }

    [[nodiscard]] const std::string& raw(const std::string& key) const {
        const auto it = map_.find(key);
        if (it == map_.end()) throw ConfigError(key, "required field missing");
        return it->second;
    }

    [[nodiscard]] double real(const std::string& key) const {
        const std::string& s = raw(key);
        try {
            // plain number or p/q
            const auto slash = s.find('/');
            std::size_t pos = 0;
            double v = std::stod(s.substr(0, slash), &pos);
            if (pos != std::min(slash, s.size())) throw std::invalid_argument("trailing");
            if (slash != std::string::npos) {
                const std::string den = s.substr(slash + 1);
                const double q = std::stod(den, &pos);
                if (pos != den.size() || q == 0.0) throw std::invalid_argument("denominator");
                v /= q;
            }
            if (!std::isfinite(v)) throw std::invalid_argument("not finite");
            return v;
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError(key, "expected a real number, got '" + s + "'");
        }
    }
    double real(const std::string& key, double fallback) const { return has(key) ? real(key) : fallback; }

    [[nodiscard]] long long integer(const std::string& key) const {
        const std::string& s = raw(key);
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(key, "expected an integer, got '" + s + "'");
        }
    }
    long long integer(const std::string& key, long long fallback) const { return has(key) ? integer(key) : fallback; }

    [[nodiscard]] bool boolean(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const std::string s = lower(raw(key));
        if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
        if (s == "false" || s == "0" || s == "no" || s == "off") return false;
        throw ConfigError(key, "expected a boolean, got '" + raw(key) + "'");
    }

    [[nodiscard]] std::string text(const std::string& key, const std::string& fallback) const {
        return has(key) ? raw(key) : fallback;
    }

    [[nodiscard]] std::vector<double> reals(const std::string& key) const {
        std::vector<double> out;
        for (const auto& item : split(raw(key), ',')) {
            try {
                std::size_t pos = 0;
                out.push_back(std::stod(item, &pos));
                if (pos != item.size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw ConfigError(key, "expected a comma-separated list of reals, got '" + raw(key) + "'");
            }
        }
        return out;
    }

private:
    const ConfigMap& map_;
};

void require(bool ok, const std::string& key, const std::string& message) {
    if (!ok) throw ConfigError(key, message);
}

double min_extent(const SpaceTimeMesh& mesh, int axis) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& c : mesh.cells()) m = std::min(m, c.hi[axis] - c.lo[axis]);
    return m;
}

nlohmann::json trace_json(const IterationTrace& t) {
    return {{"D", t.D},
            {"ls_residual_norms", t.ls_residual_norms},
            {"step_lengths", t.step_lengths},
            {"seconds", t.seconds},
            {"converged", t.converged},
            {"iterations", t.iterations_used}};
}

std::string scheme_name(Scheme s) { return s == Scheme::DG ? "dg" : "c1dg"; }

}  // namespace

std::string to_string(MeshKind k) {
    switch (k) {
        case MeshKind::Uniform: return "uniform";
        case MeshKind::Adaptive: return "adaptive";
        case MeshKind::Characteristic: return "characteristic";
    }
    return "unknown";
}

ConfigMap read_ini(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw ConfigError("config", "file not found: " + path.string());
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(path.string(), tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("config", e.what());
    }
    ConfigMap map;
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ConfigError(section, "keys must live inside a [section]");
        for (const auto& [key, value] : body) {
            std::string v = value.get_value<std::string>();
            // inline comments
            for (const char c : {';', '#'})
                if (const auto p = v.find(c); p != std::string::npos) v = v.substr(0, p);
            map[section + "." + key] = trim(v);
        }
    }
    return map;
}

void apply_env_overrides(ConfigMap& map) {
    const std::string prefix = "SRDG_";
    for (char** e = environ; e && *e; ++e) {
        const std::string entry(*e);
        if (entry.rfind(prefix, 0) != 0) continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos) continue;
        const std::string name = lower(entry.substr(prefix.size(), eq - prefix.size()));
        const auto us = name.find('_');
        if (us == std::string::npos) continue;
        std::string key = name.substr(0, us) + "." + name.substr(us + 1);
        if (key == "basis.m") key = "basis.M";
        if (!known_keys().count(key)) continue;
        map[key] = entry.substr(eq + 1);
    }
}

ExperimentConfig parse_config(const ConfigMap& map) {
    for (const auto& [key, value] : map)
        if (key.rfind("sweep.", 0) != 0 && !known_keys().count(key)) throw ConfigError(key, "unknown field");
    const Reader r(map);
    ExperimentConfig c;
    c.name = r.text("output.name", "run");
    c.example = static_cast<int>(r.integer("problem.example"));
    require(c.example >= 1 && c.example <= 3, "problem.example", "must be 1, 2 or 3");
    if (c.example == 3) {
        c.epsilon = r.real("problem.epsilon");
        c.dim = static_cast<int>(r.integer("problem.dim", 2));
        require(c.dim == 1 || c.dim == 2, "problem.dim", "must be 1 or 2");
    } else {
        c.epsilon = r.real("problem.epsilon", 0.0);
    }
    require(c.epsilon >= 0.0, "problem.epsilon", "must be non-negative");
    if (c.example == 3) require(c.epsilon > 0.0, "problem.epsilon", "must be positive");

    const std::string scheme = lower(r.raw("scheme.kind"));
    if (scheme == "dg") c.assembly.scheme = Scheme::DG;
    else if (scheme == "c1dg") c.assembly.scheme = Scheme::C1DG;
    else throw ConfigError("scheme.kind", "expected dg or c1dg, got '" + r.raw("scheme.kind") + "'");
    auto& pen = c.assembly.penalties;
    if (r.has("scheme.eta")) {
        const double eta = r.real("scheme.eta");
        pen.eta_time = pen.eta_adv = pen.eta2 = pen.eta3 = pen.eta_burgers = eta;
    }
    pen.eta_time = r.real("scheme.eta_time", pen.eta_time);
    pen.eta_adv = r.real("scheme.eta_adv", pen.eta_adv);
    pen.eta2 = r.real("scheme.eta2", pen.eta2);
    pen.eta3 = r.real("scheme.eta3", pen.eta3);
    pen.eta_burgers = r.real("scheme.eta_burgers", pen.eta_burgers);
    pen.burgers_penalty_times_eps = r.boolean("scheme.burgers_penalty_times_eps", pen.burgers_penalty_times_eps);
    pen.w_c = r.real("scheme.w_c", pen.w_c);
    for (const char* k : {"scheme.eta_time", "scheme.eta_adv", "scheme.eta2", "scheme.eta3", "scheme.eta_burgers"})
        if (r.has(k)) require(r.real(k) >= 0.0, k, "must be non-negative");
    require(pen.w_c > 0.0, "scheme.w_c", "must be positive");
    c.assembly.quad_n = static_cast<int>(r.integer("scheme.quad", c.assembly.quad_n));
    require(c.assembly.quad_n >= 1 && c.assembly.quad_n <= 400, "scheme.quad", "must lie in [1, 400]");
    c.assembly.n_c = static_cast<int>(r.integer("scheme.n_c", c.assembly.n_c));
    require(c.assembly.n_c >= 1 && c.assembly.n_c <= 64, "scheme.n_c", "must lie in [1, 64]");
    c.assembly.scale_derivative_rows = r.boolean("scheme.scale_derivative_rows", c.assembly.scale_derivative_rows);

    const std::string mesh = lower(r.raw("mesh.kind"));
    if (mesh == "uniform") c.mesh_kind = MeshKind::Uniform;
    else if (mesh == "adaptive") c.mesh_kind = MeshKind::Adaptive;
    else if (mesh == "characteristic") c.mesh_kind = MeshKind::Characteristic;
    else throw ConfigError("mesh.kind", "expected uniform, adaptive or characteristic, got '" + r.raw("mesh.kind") + "'");
    if (c.mesh_kind == MeshKind::Characteristic) {
        require(c.example == 1, "mesh.kind", "characteristic meshes are available for example 1 only");
        c.slope = r.real("mesh.slope");
        require(c.slope > 0.0, "mesh.slope", "must be positive");
        c.anchors = r.reals("mesh.anchors");
        require(!c.anchors.empty(), "mesh.anchors", "must list at least one value");
        require(std::is_sorted(c.anchors.begin(), c.anchors.end()), "mesh.anchors", "must be increasing");
    } else {
        c.tau = r.real("mesh.tau");
        c.h = r.real("mesh.h");
        require(c.tau > 0.0, "mesh.tau", "must be positive");
        require(c.h > 0.0, "mesh.h", "must be positive");
    }
    if (c.mesh_kind == MeshKind::Adaptive) {
        c.adapt.beta = r.real("mesh.beta", c.adapt.beta);
        require(c.adapt.beta > 0.0 && c.adapt.beta <= 1.0, "mesh.beta", "must lie in (0, 1]");
        c.adapt.max_cycles = static_cast<int>(r.integer("mesh.max_cycles", c.adapt.max_cycles));
        require(c.adapt.max_cycles >= 0, "mesh.max_cycles", "must be non-negative");
        const long long max_cells = r.integer("mesh.max_cells", 0);
        require(max_cells >= 0, "mesh.max_cells", "must be non-negative");
        c.adapt.max_cells = static_cast<std::size_t>(max_cells);
        c.adapt.R_tol_stop = r.real("mesh.rtol_stop", 0.0);
        require(c.adapt.R_tol_stop >= 0.0, "mesh.rtol_stop", "must be non-negative");
        c.adapt.quad_n = static_cast<int>(r.integer("mesh.estimator_quad", c.assembly.quad_n));
        require(c.adapt.quad_n >= 1, "mesh.estimator_quad", "must be positive");
    }

    const long long M = r.integer("basis.M");
    require(M >= 1 && M <= 100000, "basis.M", "must lie in [1, 100000]");
    c.basis.M = static_cast<int>(M);
    c.basis.r = r.real("basis.r");
    require(c.basis.r > 0.0, "basis.r", "must be positive");
    const std::string act = lower(r.text("basis.activation", "tanh"));
    if (act == "wavelet") {
        require(c.example == 1 || c.example == 2, "basis.activation", "wavelet features need one spatial dimension");
        c.basis.activation =
            ActivationKind::wavelet(r.real("basis.wavelet_k"), r.real("basis.wavelet_x0", 0.0), r.real("basis.wavelet_time_weight", 1.0));
    } else if (act != "tanh") {
        throw ConfigError("basis.activation", "expected tanh or wavelet, got '" + r.raw("basis.activation") + "'");
    }
    const long long seed = r.integer("basis.seed", 0);
    require(seed >= 0, "basis.seed", "must be non-negative");
    c.basis.seed = static_cast<std::uint64_t>(seed);
    c.basis.compression_tol = r.real("basis.compression_tol", c.basis.compression_tol);
    require(c.basis.compression_tol >= 0.0 && c.basis.compression_tol < 1.0, "basis.compression_tol", "must lie in [0, 1)");
    c.basis.sample_quad = static_cast<int>(r.integer("basis.sample_quad", c.basis.sample_quad));
    require(c.basis.sample_quad >= 1, "basis.sample_quad", "must be positive");
    c.basis.normalize_inputs = r.boolean("basis.normalize_inputs", c.basis.normalize_inputs);

    auto& s = c.solver;
    s.eps0 = r.real("solver.eps0", s.eps0);
    require(s.eps0 > 0.0, "solver.eps0", "must be positive");
    s.N_ni = static_cast<int>(r.integer("solver.max_iterations", s.N_ni));
    require(s.N_ni >= 1, "solver.max_iterations", "must be at least 1");
    if (r.has("solver.ls_mode")) {
        try {
            s.ls_mode = ls_mode_from_string(lower(r.raw("solver.ls_mode")));
        } catch (const std::exception&) {
            throw ConfigError("solver.ls_mode", "expected auto, dense, iterative, sparse-qr or sparse-lu");
        }
    }
    const long long dt = r.integer("solver.dense_threshold", s.dense_threshold);
    require(dt >= 0, "solver.dense_threshold", "must be non-negative");
    s.dense_threshold = static_cast<Eigen::Index>(dt);
    s.damping = r.real("solver.damping", s.damping);
    require(s.damping >= 0.0, "solver.damping", "must be non-negative");
    s.shift = r.real("solver.shift", s.shift);
    require(s.shift >= 0.0, "solver.shift", "must be non-negative");
    s.truncation = r.real("solver.truncation", s.truncation);
    require(s.truncation >= 0.0 && s.truncation < 1.0, "solver.truncation", "must lie in [0, 1)");
    s.line_search = r.boolean("solver.line_search", s.line_search);
    s.max_backtracks = static_cast<int>(r.integer("solver.max_backtracks", s.max_backtracks));
    require(s.max_backtracks >= 0, "solver.max_backtracks", "must be non-negative");
    s.lsqr_tol = r.real("solver.lsqr_tol", s.lsqr_tol);
    require(s.lsqr_tol > 0.0, "solver.lsqr_tol", "must be positive");
    s.max_lsqr_factor = static_cast<int>(r.integer("solver.max_lsqr_factor", s.max_lsqr_factor));
    require(s.max_lsqr_factor >= 1, "solver.max_lsqr_factor", "must be at least 1");
    s.quad_n = static_cast<int>(r.integer("solver.quad", s.quad_n));
    require(s.quad_n >= 1, "solver.quad", "must be positive");

    c.output_dir = r.text("output.dir", c.output_dir);
    c.error_quad = static_cast<int>(r.integer("output.error_quad", c.error_quad));
    require(c.error_quad >= 1 && c.error_quad <= 400, "output.error_quad", "must lie in [1, 400]");
    c.sample_nt = static_cast<int>(r.integer("output.sample_nt", c.sample_nt));
    c.sample_nx = static_cast<int>(r.integer("output.sample_nx", c.sample_nx));
    c.sample_ny = static_cast<int>(r.integer("output.sample_ny", c.sample_ny));
    require(c.sample_nt >= 2, "output.sample_nt", "must be at least 2");
    require(c.sample_nx >= 2, "output.sample_nx", "must be at least 2");
    require(c.sample_ny >= 2, "output.sample_ny", "must be at least 2");
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, bool env_overrides) {
    ConfigMap map = read_ini(path);
    if (env_overrides) apply_env_overrides(map);
    return parse_config(map);
}

ProblemSpec ExperimentConfig::problem() const {
    switch (example) {
        case 1: return epsilon > 0.0 ? make_gkdv_problem(0.2275, epsilon) : make_gkdv_problem();
        case 2: return epsilon > 0.0 ? make_double_soliton_problem(epsilon) : make_double_soliton_problem();
        case 3: return make_burgers_problem(epsilon, dim);
        default: throw ConfigError("problem.example", "must be 1, 2 or 3");
    }
}

SpaceTimeMesh ExperimentConfig::initial_mesh() const {
    const ProblemSpec p = problem();
    if (mesh_kind == MeshKind::Characteristic) return build_characteristic_mesh(p.domain, slope, anchors);
    return build_uniform_mesh(p.domain, tau, h, p.periodic);
}

RunResult run_experiment(const ExperimentConfig& config) {
    const ProblemSpec problem = config.problem();
    const SpaceTimeMesh mesh = config.initial_mesh();
    RunResult out;
    out.config = config;
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

    auto make_row = [&](const SolutionField& u, const IterationTrace& trace) {
        const SpaceTimeMesh& m = u.disc().mesh();
        RunRow row;
        row.example = config.example;
        row.scheme = scheme_name(config.assembly.scheme);
        row.mesh_kind = to_string(config.mesh_kind);
        if (config.mesh_kind == MeshKind::Uniform) {
            row.tau = config.tau;
            row.h = config.h;
        } else if (config.mesh_kind == MeshKind::Adaptive) {
            row.tau = min_extent(m, 0);
            row.h = min_extent(m, 1);
        } else {
            row.tau = row.h = std::numeric_limits<double>::quiet_NaN();
        }
        row.N_e = m.num_cells();
        row.M = config.basis.M;
        row.dof = u.disc().dof();
        if (problem.exact) {
            const ErrorReport e = global_errors(u, *problem.exact, config.error_quad);
            row.E_L2 = e.E_L2;
            row.E_H1 = e.E_H1;
            row.E_L2_slice = e.E_L2_slice;
        }
        row.iterations = trace.iterations_used;
        row.converged = trace.converged;
        row.seed = config.basis.seed;
        return row;
    };

    nlohmann::json cycles = nlohmann::json::array();
    if (config.mesh_kind == MeshKind::Adaptive) {
        double last = 0.0;
        const auto history = adaptive_solve(problem, mesh, config.basis, config.assembly, config.solver, config.adapt,
                                            [&](const AdaptCycle& c, std::size_t) {
                                                RunRow row = make_row(c.solution, c.trace);
                                                const double now = elapsed();
                                                row.wall_seconds = now - last;
                                                last = now;
                                                out.rows.push_back(row);
                                                nlohmann::json j = trace_json(c.trace);
                                                j["N_e"] = row.N_e;
                                                j["R_tol"] = c.R_tol;
                                                j["estimators"] = c.estimators;
                                                j["marked"] = c.marked;
                                                if (row.E_L2) j["E_L2"] = *row.E_L2;
                                                cycles.push_back(std::move(j));
                                            });
        out.solution = history.back().solution;
    } else {
        auto disc = std::make_shared<const Discretization>(mesh, config.basis);
        const Assembler assembler(disc, problem, config.assembly);
        NonlinearResult res = nonlinear_solve(assembler, config.solver);
        RunRow row = make_row(res.solution, res.trace);
        row.wall_seconds = elapsed();
        out.rows.push_back(row);
        nlohmann::json j = trace_json(res.trace);
        j["N_e"] = row.N_e;
        cycles.push_back(std::move(j));
        out.solution = std::move(res.solution);
    }
    if (problem.periodic && problem.domain.d == 1) out.mass_drift = mass_drift(*out.solution, problem.u0, config.error_quad);
    out.trace = {{"name", config.name},
                 {"example", config.example},
                 {"scheme", scheme_name(config.assembly.scheme)},
                 {"mesh_kind", to_string(config.mesh_kind)},
                 {"ls_mode", to_string(config.solver.ls_mode)},
                 {"cycles", std::move(cycles)}};
    if (out.mass_drift) out.trace["mass_drift"] = *out.mass_drift;
    return out;
}

const std::vector<std::string>& run_csv_columns() {
    static const std::vector<std::string> cols = {"example", "scheme", "mesh_kind", "tau", "h", "N_e", "M", "DoF",
                                                  "E_L2", "E_H1", "E_L2_slice", "iterations", "converged", "wall_seconds", "seed"};
    return cols;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.5e", v);
    return buf;
}

std::string csv_row(const RunRow& row) {
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("nan"); };
    std::ostringstream s;
    s << row.example << ',' << row.scheme << ',' << row.mesh_kind << ',' << format_number(row.tau) << ',' << format_number(row.h)
      << ',' << row.N_e << ',' << row.M << ',' << row.dof << ',' << opt(row.E_L2) << ',' << opt(row.E_H1) << ','
      << opt(row.E_L2_slice) << ',' << row.iterations << ',' << (row.converged ? "true" : "false") << ','
      << format_number(row.wall_seconds) << ',' << row.seed;
    return s.str();
}

void write_run_outputs(const RunResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(dir / name);
        if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
        return f;
    };
    {
        auto f = open("run.csv");
        const auto& cols = run_csv_columns();
        for (std::size_t i = 0; i < cols.size(); ++i) f << (i ? "," : "") << cols[i];
        f << '\n';
        for (const auto& row : result.rows) f << csv_row(row) << '\n';
    }
    if (!result.solution) return;
    const SolutionField& u = *result.solution;
    open("mesh.json") << u.disc().mesh().to_json().dump(1) << '\n';
    {
        const auto& cfg = result.config;
        const int d = u.disc().mesh().d();
        const SampleGrid grid = sample_grid(u, cfg.sample_nt, cfg.sample_nx, d == 2 ? cfg.sample_ny : 1);
        const ProblemSpec problem = cfg.problem();
        auto f = open("samples.csv");
        f << (d == 2 ? "t,x,y,u" : "t,x,u") << (problem.exact ? ",u_exact" : "") << '\n';
        for (std::size_t i = 0; i < grid.points.size(); ++i) {
            const Point& p = grid.points[i];
            f << format_number(p[0]) << ',' << format_number(p[1]);
            if (d == 2) f << ',' << format_number(p[2]);
            f << ',' << format_number(grid.values[i]);
            if (problem.exact) f << ',' << format_number(problem.exact->value(p));
            f << '\n';
        }
    }
    open("trace.json") << result.trace.dump(1) << '\n';
}

RunResult run_config(const std::filesystem::path& path, const std::optional<std::uint64_t>& seed,
                     const std::optional<std::filesystem::path>& out) {
    ExperimentConfig config = load_config(path);
    if (seed) config.basis.seed = *seed;
    RunResult result = run_experiment(config);
    write_run_outputs(result, out ? *out : std::filesystem::path(config.output_dir));
    return result;
}

std::vector<SweepCell> expand_sweep(const ConfigMap& map) {
    ConfigMap base;
    std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> axes;
    for (const auto& [key, value] : map) {
        if (key.rfind("sweep.", 0) != 0) {
            base[key] = value;
            continue;
        }
        const std::vector<std::string> fields = split(key.substr(6), '+');
        for (const auto& f : fields)
            if (!known_keys().count(f)) throw ConfigError(key, "unknown field '" + f + "'");
        std::vector<std::string> values = split(value, ',');
        values.erase(std::remove(values.begin(), values.end(), std::string{}), values.end());
        if (values.empty()) throw ConfigError(key, "empty value list");
        axes.emplace_back(fields, std::move(values));
    }
    std::vector<SweepCell> cells;
    std::vector<std::size_t> idx(axes.size(), 0);
    for (;;) {
        SweepCell cell;
        cell.index = cells.size();
        cell.map = base;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const std::string& v = axes[a].second[idx[a]];
            std::string label;
            for (const auto& f : axes[a].first) {
                cell.map[f] = v;
                label += (label.empty() ? "" : "+") + f;
            }
            cell.assignment.emplace_back(label, v);
        }
        cells.push_back(std::move(cell));
        std::size_t a = axes.size();
        while (a > 0) {
            --a;
            if (++idx[a] < axes[a].second.size()) break;
            idx[a] = 0;
            if (a == 0) return cells;
        }
        if (axes.empty()) return cells;
    }
}

std::vector<SweepOutcome> run_sweep(const std::vector<std::filesystem::path>& configs, const std::filesystem::path& out_dir,
                                    int workers, const std::optional<std::uint64_t>& seed) {
    if (configs.empty()) throw ConfigError("sweep", "empty grid: no configuration given");
    if (workers < 1) throw std::invalid_argument("run_sweep: workers must be at least 1");
    std::vector<SweepOutcome> outcomes;
    for (const auto& path : configs) {
        ConfigMap map = read_ini(path);
        apply_env_overrides(map);
        for (auto& cell : expand_sweep(map)) {
            SweepOutcome o;
            cell.index = outcomes.size();
            o.cell = std::move(cell);
            outcomes.push_back(std::move(o));
        }
    }
    if (outcomes.empty()) throw ConfigError("sweep", "empty grid");

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < outcomes.size(); i = next++) {
            SweepOutcome& o = outcomes[i];
            try {
                ExperimentConfig cfg = parse_config(o.cell.map);
                if (seed) cfg.basis.seed = *seed;
                char name[32];
                std::snprintf(name, sizeof(name), "cell_%03zu", o.cell.index);
                RunResult res = run_experiment(cfg);
                write_run_outputs(res, out_dir / name);
                o.rows = std::move(res.rows);
                o.ok = true;
            } catch (const std::exception& e) {
                o.ok = false;
                o.message = e.what();
            }
        }
    };
    const int n = std::min<int>(workers, static_cast<int>(outcomes.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    std::filesystem::create_directories(out_dir);
    std::ofstream csv(out_dir / "sweep.csv");
    if (!csv) throw std::runtime_error("cannot write " + (out_dir / "sweep.csv").string());
    csv << "index,status";
    for (const auto& c : run_csv_columns()) csv << ',' << c;
    csv << ",message\n";
    for (const auto& o : outcomes) {
        if (!o.ok) {
            csv << o.cell.index << ",failed";
            for (std::size_t i = 0; i < run_csv_columns().size(); ++i) csv << ',';
            std::string msg = o.message;
            std::replace(msg.begin(), msg.end(), '"', '\'');
            csv << ",\"" << msg << "\"\n";
            continue;
        }
        for (const auto& row : o.rows) csv << o.cell.index << ",ok," << csv_row(row) << ",\n";
    }
    std::ofstream md(out_dir / "summary.md");
    md << sweep_summary_markdown(outcomes);
    return outcomes;
}

std::string sweep_summary_markdown(const std::vector<SweepOutcome>& outcomes) {
    std::ostringstream s;
    auto err = [](const SweepOutcome& o) -> std::string {
        if (!o.ok) return "failed";
        if (o.rows.empty() || !o.rows.back().E_L2) return "n/a";
        return format_number(*o.rows.back().E_L2);
    };
    s << "# Sweep summary\n\n";
    const std::size_t n_axes = outcomes.empty() ? 0 : outcomes.front().cell.assignment.size();
    if (n_axes == 2) {
        std::vector<std::string> rows, cols;
        for (const auto& o : outcomes) {
            const auto& a = o.cell.assignment;
            if (std::find(rows.begin(), rows.end(), a[0].second) == rows.end()) rows.push_back(a[0].second);
            if (std::find(cols.begin(), cols.end(), a[1].second) == cols.end()) cols.push_back(a[1].second);
        }
        const auto& labels = outcomes.front().cell.assignment;
        s << "E_L2 by " << labels[0].first << " (rows) and " << labels[1].first << " (columns)\n\n| " << labels[0].first << " |";
        for (const auto& c : cols) s << ' ' << c << " |";
        s << "\n|---|";
        for (std::size_t i = 0; i < cols.size(); ++i) s << "---|";
        s << '\n';
        for (const auto& rv : rows) {
            s << "| " << rv << " |";
            for (const auto& cv : cols) {
                std::string cell = "";
                for (const auto& o : outcomes)
                    if (o.cell.assignment.size() == 2 && o.cell.assignment[0].second == rv && o.cell.assignment[1].second == cv) cell = err(o);
                s << ' ' << cell << " |";
            }
            s << '\n';
        }
        s << '\n';
    }
    s << "| index | assignment | status | N_e | DoF | E_L2 | E_H1 | iterations |\n|---|---|---|---|---|---|---|---|\n";
    for (const auto& o : outcomes) {
        std::string assign;
        for (const auto& [k, v] : o.cell.assignment) assign += (assign.empty() ? "" : ", ") + k + "=" + v;
        s << "| " << o.cell.index << " | " << (assign.empty() ? "-" : assign) << " | " << (o.ok ? "ok" : "failed") << " | ";
        if (o.ok && !o.rows.empty()) {
            const RunRow& r = o.rows.back();
            s << r.N_e << " | " << r.dof << " | " << err(o) << " | " << (r.E_H1 ? format_number(*r.E_H1) : "n/a") << " | "
              << r.iterations << " |\n";
        } else {
            s << "- | - | failed | - | - |\n";
        }
    }
    return s.str();
}

}  // namespace lrnndg
