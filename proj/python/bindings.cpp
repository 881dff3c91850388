#include "lrnndg/experiment.hpp"
#include "lrnndg/quadrature.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace lrnndg;

namespace {

py::dict row_dict(const RunRow& r) {
    py::dict d;
    d["example"] = r.example;
    d["scheme"] = r.scheme;
    d["mesh_kind"] = r.mesh_kind;
    d["tau"] = r.tau;
    d["h"] = r.h;
    d["N_e"] = r.N_e;
    d["M"] = r.M;
    d["DoF"] = r.dof;
    d["E_L2"] = r.E_L2 ? py::cast(*r.E_L2) : py::none();
    d["E_H1"] = r.E_H1 ? py::cast(*r.E_H1) : py::none();
    d["E_L2_slice"] = r.E_L2_slice ? py::cast(*r.E_L2_slice) : py::none();
    d["iterations"] = r.iterations;
    d["converged"] = r.converged;
    d["wall_seconds"] = r.wall_seconds;
    d["seed"] = r.seed;
    return d;
}

py::dict result_dict(const RunResult& res) {
    py::list rows;
    for (const auto& r : res.rows) rows.append(row_dict(r));
    py::dict d;
    d["rows"] = rows;
    d["mass_drift"] = res.mass_drift ? py::cast(*res.mass_drift) : py::none();
    d["trace"] = res.trace.dump();
    return d;
}

ConfigMap to_map(const py::dict& cfg) {
    ConfigMap m;
    for (const auto& [k, v] : cfg) m[py::str(k)] = py::str(v);
    return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Randomized neural network DG solvers";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("gauss_legendre", [](int n) {
        const auto g = gauss_legendre(n);
        return py::make_tuple(g.nodes, g.weights);
    }, py::arg("n"));

    m.def("mark", [](const std::vector<double>& est, double beta) { return mark(est, beta); }, py::arg("estimators"), py::arg("beta"));

    m.def("least_squares", [](const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const std::string& mode) {
        SolverParams p;
        p.ls_mode = ls_mode_from_string(mode);
        const Eigen::SparseMatrix<double> S = A.sparseView();
        return least_squares_solve(S, b, p).x;
    }, py::arg("A"), py::arg("b"), py::arg("mode") = "dense");

    m.def("uniform_mesh_json", [](int example, double tau, double h) {
        ExperimentConfig c;
        c.example = example;
        c.epsilon = example == 3 ? 0.1 : 0.0;
        c.tau = tau;
        c.h = h;
        return c.initial_mesh().to_json().dump();
    }, py::arg("example"), py::arg("tau"), py::arg("h"));

    m.def("characteristic_mesh_json", [](double slope, const std::vector<double>& anchors) {
        return build_characteristic_mesh(make_gkdv_problem().domain, slope, anchors).to_json().dump();
    }, py::arg("slope"), py::arg("anchors"));

    m.def("gkdv_soliton", [](double t, double x) { return GKdVSoliton(0.2275, 0.2058e-4, 0.5).u(t, x); }, py::arg("t"), py::arg("x"));
    m.def("burgers_exact", [](double eps, double t, double x, double y) { return exact_burgers(eps, 2).value({t, x, y}); },
          py::arg("eps"), py::arg("t"), py::arg("x"), py::arg("y"));

    m.def("parse_config", [](const py::dict& cfg) {
        const ExperimentConfig c = parse_config(to_map(cfg));
        py::dict d;
        d["example"] = c.example;
        d["scheme"] = to_string(c.assembly.scheme);
        d["mesh_kind"] = to_string(c.mesh_kind);
        d["M"] = c.basis.M;
        d["r"] = c.basis.r;
        d["seed"] = c.basis.seed;
        return d;
    }, py::arg("config"));

    m.def("run", [](const py::dict& cfg) {
        const ExperimentConfig c = parse_config(to_map(cfg));
        std::optional<RunResult> res;
        {
            py::gil_scoped_release release;
            res = run_experiment(c);
        }
        return result_dict(*res);
    }, py::arg("config"), "Run an experiment given a flat {'section.key': value} mapping.");

    m.def("run_config", [](const std::filesystem::path& path, std::optional<std::uint64_t> seed, std::optional<std::filesystem::path> out) {
        return result_dict(run_config(path, seed, out));
    }, py::arg("path"), py::arg("seed") = py::none(), py::arg("out") = py::none());

    m.def("check", [] {
        py::list out;
        for (const auto& r : run_invariant_checks()) {
            py::dict d;
            d["name"] = r.name;
            d["passed"] = r.passed;
            d["value"] = r.value;
            d["limit"] = r.limit;
            out.append(d);
        }
        return out;
    });

    m.attr("RUN_CSV_COLUMNS") = run_csv_columns();
}
