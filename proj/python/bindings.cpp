#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "smoothsmc/certificate.hpp"
#include "smoothsmc/experiments.hpp"
#include "smoothsmc/serialization.hpp"

namespace py = pybind11;
using namespace smoothsmc;

namespace {

SymMatrix to_sym(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    std::vector<double> flat;
    flat.reserve(n * n);
    for (const auto& r : rows) {
        if (r.size() != n) throw std::invalid_argument("matrix must be square");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return SymMatrix(n, std::move(flat));
}

// JSON crosses the boundary as text; the Python side parses it.
ConfigDocument parse_config(const std::string& text) {
    return text.empty() ? ConfigDocument{} : config_from_json(json::parse(text));
}

py::dict trajectory_dict(const Trajectory& t) {
    py::dict d;
    d["t"] = t.times;
    d["x1"] = t.x1;
    d["u"] = t.u;
    d["d"] = t.d_true;
    d["d_hat"] = t.d_hat;
    d["L0"] = t.L0;
    d["V"] = t.V;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "adaptive smooth second-order sliding-mode control";

    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<NumericalAbort>(m, "NumericalAbort", PyExc_RuntimeError);
    py::register_exception<EigenSolverError>(m, "EigenSolverError", PyExc_RuntimeError);

    m.def("eig_sym", [](const std::vector<std::vector<double>>& a) { return eig_sym(to_sym(a)).spectrum; },
          py::arg("matrix"));
    m.def("kron_with_identity", [](const std::vector<std::vector<double>>& a, std::size_t n) {
        return kron_with_identity(to_sym(a), n).rows();
    }, py::arg("matrix"), py::arg("n"));
    m.def("is_positive_definite", [](const std::vector<std::vector<double>>& a) { return is_positive_definite(to_sym(a)); });

    m.def("certificate_json", [](const std::string& config) {
        const auto doc = parse_config(config);
        const auto spec = resolve_run_spec(Experiment::exp1, Method::amssosmc, doc.overrides);
        if (check_gain_condition(spec.gains).status == GainStatus::baseline_exempt)
            return json{{"gains", to_json(spec.gains)}, {"gain_condition", {{"status", "baseline-exempt"}, {"ok", false}}}}.dump();
        return to_json(build_certificate(spec.gains)).dump();
    }, py::arg("config") = "");

    m.def("settling_time_lemma1", &settling_time_lemma1, py::arg("c1"), py::arg("c2"), py::arg("p"), py::arg("V0"));
    m.def("settling_time_lemma2", &settling_time_lemma2, py::arg("c1"), py::arg("c2"), py::arg("c3"), py::arg("p1"),
          py::arg("p2"), py::arg("V0"), py::arg("theta1"), py::arg("theta2"));
    m.def("solve_theta3", &solve_theta3, py::arg("theta1"), py::arg("theta2"), py::arg("c3"), py::arg("p1"), py::arg("p2"));
    m.def("residual_sets", [](double c3, double th1, double th2, double th3, double p1, double p2) {
        const auto r = residual_sets(c3, th1, th2, th3, p1, p2);
        return std::make_pair(r.V_level_D1, r.V_level_D2);
    }, py::arg("c3"), py::arg("theta1"), py::arg("theta2"), py::arg("theta3"), py::arg("p1"), py::arg("p2"));

    m.def("run_json", [](const std::string& experiment, const std::string& method, const std::string& config) {
        const auto doc = parse_config(config);
        const auto spec = resolve_run_spec(parse_experiment(experiment), parse_method(method), doc.overrides);
        CellResult cell;
        {
            py::gil_scoped_release release;
            cell = run_cell(spec);
        }
        json report{{"config", to_json(spec)}, {"report", to_json(cell.report)}};
        return py::make_tuple(report.dump(), trajectory_dict(cell.trajectory));
    }, py::arg("experiment"), py::arg("method"), py::arg("config") = "");

    m.def("chattering_index", [](const std::vector<double>& t, const std::vector<Vec>& v, double tail) {
        return chattering_index(t, v, tail);
    }, py::arg("t"), py::arg("values"), py::arg("tail_fraction") = kDefaultTailFraction);
    m.def("settling_time", [](const std::vector<double>& t, const std::vector<double>& norms, double threshold) {
        return settling_time(t, norms, threshold);
    }, py::arg("t"), py::arg("norms"), py::arg("threshold"));
}
