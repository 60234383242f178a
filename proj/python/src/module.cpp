#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "../../tools/eth/config.hpp"
#include "eth/kdv.hpp"

namespace py = pybind11;
using namespace eth;

namespace {

py::dict check_dict(const CheckResult &r)
{
    py::dict d;
    d["id"] = r.id;
    d["params"] = r.params;
    d["verdict"] = verdict_str(r.verdict());
    d["certified_cells"] = r.certified;
    d["uncertified_cells"] = r.uncertified;
    d["nonzero_cells"] = r.failed;
    py::list ws;
    for (const Witness &w : r.nonzero) ws.append(py::make_tuple(w.where, w.value));
    d["witnesses"] = ws;
    d["notes"] = r.notes;
    return d;
}

// {exponent: coefficient} inside the certified window
template <class L>
py::dict laurent_dict(const L &s)
{
    py::dict d;
    const Window w = L::global_window().intersect(s.window());
    for (int k = w.lo; k <= w.hi; ++k) {
        const auto c = s.coeff(k);
        if (!c.is_zero()) d[py::int_(k)] = c.str();
    }
    return d;
}

LaxOp lax(const std::string &u, const std::string &v) { return LaxOp{cli::parse_xpoly(u), cli::parse_xpoly(v)}; }

std::string run_json(const std::string &config, const std::string &fixture, const std::string &pipeline, int jobs)
{
    RunConfig cfg = config.empty() ? RunConfig{} : cli::parse_config(config).run;
    if (!pipeline.empty()) cfg.pipeline = pipeline;
    if (!fixture.empty()) cfg.fixture = fixture;
    if (jobs > 0) cfg.jobs = jobs;
    if (!cfg.fixture.empty()) {
        const std::string p = cfg.pipeline;
        const int j = cfg.jobs;
        cfg = with_fixture(cfg, cfg.fixture);
        cfg.pipeline = p;
        cfg.jobs = j;
    }
    cfg.validate();
    RunReport rep;
    {
        py::gil_scoped_release release;
        rep = eth::run(cfg);
    }
    return cli::report_json(cfg, rep).dump();
}

py::dict dress(const std::string &u, const std::string &v)
{
    TruncationScope scope(RunConfig::default_run_truncation());
    const LaxOp L = lax(u, v);
    const ShiftSeries PL = dress_left(L), PR = dress_right(L);
    CheckResult left, right;
    detail::tally_coeff(left, "[1]", dressing_residual_left(L.series(), PL), true, Window{}, Window{});
    detail::tally_coeff(right, "[1]", dressing_residual_right(L.series(), PR), true, Window{}, Window{});
    left.id = "dress-left";
    right.id = "dress-right";
    py::dict d;
    d["left_symbol"] = laurent_dict(left_symbol(PL));
    d["right_symbol"] = laurent_dict(right_symbol(PR));
    d["left_residual"] = check_dict(left);
    d["right_residual"] = check_dict(right);
    return d;
}

py::dict kdv_hirota(const std::vector<std::string> &coeffs, int y_degree, int n_max, int cap)
{
    TruncationScope scope(RunConfig::default_run_truncation());
    const VarsPtr vars = TimeVars::kdv(n_max, cap, DegreeWeighting::Lambda);
    const TimeSeries<Scalar> q0 = TimeSeries<Scalar>::variable(vars, vars->index(0, -1));
    TimeSeries<Scalar> tau(vars), p(vars, Scalar(1L));
    for (const std::string &c : coeffs) {
        const XPoly k = cli::parse_xpoly(c);
        if (!k.is_constant()) throw PreconditionError("kdv_hirota: coefficients must not depend on x");
        tau += k.coeff(0) * p;
        p = p * q0;
    }
    return check_dict(kdv_hirota_residual(KdvTau{tau}, y_degree));
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Exact symbolic checks for the extended Toda hierarchy";

    static py::exception<TruncationExhausted> trunc_exc(m, "TruncationExhausted", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const PreconditionError &e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const TruncationExhausted &e) {
            trunc_exc(e.what());
        }
    });

    m.def("run_json", &run_json, py::arg("config") = "", py::arg("fixture") = "", py::arg("pipeline") = "",
          py::arg("jobs") = 0, "Run a pipeline; returns the JSON report as a string.");
    m.def("explain", &eth::explain, py::arg("check_id"));
    m.def("check_ids", &eth::check_ids);
    m.def("pipelines", &eth::pipelines);
    m.def("fixtures", [] {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto &f : eth::fixtures()) out.emplace_back(f.name, f.description);
        return out;
    });
    m.def("parse_xpoly", [](const std::string &s) { return cli::parse_xpoly(s).str(); }, py::arg("table"),
          "Canonical form of a coefficient table c[:k[:e[:h]]],...");
    m.def("dress", &dress, py::arg("u"), py::arg("v") = "0",
          "Dressing operators of L = Lambda + u + Q e^v Lambda^-1: symbols and residual checks.");
    m.def("kdv_hirota", &kdv_hirota, py::arg("coeffs"), py::arg("y_degree") = 3, py::arg("n_max") = 1,
          py::arg("cap") = 5, "KdV bilinear check of tau = sum_k coeffs[k] q_0^k.");
}
