#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "higgsflow/cli.hpp"
#include "higgsflow/flow.hpp"
#include "higgsflow/random_fields.hpp"
#include "higgsflow/scenario_io.hpp"

namespace py = pybind11;
using namespace higgsflow;

namespace {

HiggsBundleScenario scenario_from(const std::string& doc) {
    return build_scenario(ScenarioSpec::from_json(json::parse(doc)));
}

py::dict report_dict(const FunctionalReport& rep) {
    py::dict d;
    d["label"] = rep.label;
    d["n"] = rep.n;
    d["rank"] = rep.rank;
    d["deg"] = rep.deg;
    d["Vol"] = rep.volume;
    d["c"] = rep.c;
    d["C_bound"] = rep.C_bound;
    d["J"] = rep.J;
    d["I"] = rep.I;
    d["gap"] = rep.gap_J_minus_C;
    d["hym_residual"] = rep.hym_residual;
    d["el_residual"] = rep.el_residual;
    py::dict checks;
    for (const auto& c : rep.checks) {
        py::dict entry;
        entry["residual"] = c.residual;
        entry["tolerance"] = c.tolerance;
        entry["pass"] = c.ok();
        checks[py::str(c.name)] = entry;
    }
    d["checks"] = checks;
    return d;
}

py::array_t<std::complex<double>> field_to_array(const EndoFormField& f) {
    const auto npts = static_cast<py::ssize_t>(f.num_points());
    const py::ssize_t r = f.rank();
    py::array_t<std::complex<double>> out({npts, r, r});
    auto buf = out.mutable_unchecked<3>();
    for (py::ssize_t x = 0; x < npts; ++x) {
        auto m = f.matrix(0, x);
        for (py::ssize_t i = 0; i < r; ++i)
            for (py::ssize_t j = 0; j < r; ++j) buf(x, i, j) = m(i, j);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Hermitian metrics on Higgs bundles over flat Kahler tori: "
              "Hitchin-Simpson curvature, mean-curvature functionals, identity "
              "verification, and a descent flow toward Hermite-Yang-Mills metrics.";

    m.def("catalog", [] { return catalog_names(); },
          "Names of the built-in scenario catalog.");

    m.def(
        "catalog_scenario",
        [](const std::string& name) { return catalog_scenario(name).to_json().dump(); },
        py::arg("name"), "Scenario document (JSON string) for a catalog entry.");

    m.def(
        "functional_report",
        [](const std::string& scenario) {
            HiggsBundleScenario S = scenario_from(scenario);
            return report_dict(functional_report(S, S.metric));
        },
        py::arg("scenario"),
        "Evaluate J, I, c, the lower bound and the built-in consistency checks.");

    m.def(
        "verify",
        [](const std::string& scenario, std::uint64_t seed) {
            RunConfig cfg = RunConfig::from_json(json::object());
            cfg.seed = seed;
            HiggsBundleScenario S = scenario_from(scenario);
            py::dict out;
            for (const auto& row : verify_rows(S, cfg)) {
                py::dict entry;
                entry["residual"] = row.residual;
                entry["tolerance"] = row.tolerance;
                entry["pass"] = row.pass();
                out[py::str(row.identity)] = entry;
            }
            return out;
        },
        py::arg("scenario"), py::arg("seed") = 1,
        "Run every identity check applicable to the scenario.");

    m.def(
        "mean_curvature",
        [](const std::string& scenario) {
            HiggsBundleScenario S = scenario_from(scenario);
            return field_to_array(hs_curvature(S.metric, S).mean_curvature);
        },
        py::arg("scenario"),
        "Hitchin-Simpson mean curvature as an (npoints, r, r) array.");

    m.def(
        "degree",
        [](const std::string& scenario) {
            HiggsBundleScenario S = scenario_from(scenario);
            return degree(S, S.metric);
        },
        py::arg("scenario"), "Chern-Weil degree of the scenario's bundle.");

    m.def(
        "flow",
        [](const std::string& scenario, int max_steps, double tol, double step0, double shrink) {
            HiggsBundleScenario S = scenario_from(scenario);
            FlowParams params;
            params.max_steps = max_steps;
            params.tol = tol;
            params.step0 = step0;
            params.shrink = shrink;
            auto [h, trace] = descend_J(S, S.metric, params);
            py::list steps;
            for (const auto& st : trace.steps) {
                py::dict row;
                row["step"] = st.step;
                row["t"] = st.t;
                row["J"] = st.J;
                row["hym_residual"] = st.hym_residual;
                row["el_residual"] = st.el_residual;
                row["step_size"] = st.step_size;
                row["backtracks"] = st.backtracks;
                steps.append(row);
            }
            py::dict out;
            out["steps"] = steps;
            out["converged"] = trace.converged;
            out["stalled"] = trace.stalled;
            out["final_metric"] = field_to_array(h.field());
            return out;
        },
        py::arg("scenario"), py::arg("max_steps") = 500, py::arg("tol") = 1e-6,
        py::arg("step0") = 0.0, py::arg("shrink") = 0.5,
        "Descent flow toward a Hermite-Yang-Mills metric; returns the trace.");

    m.def(
        "first_variation",
        [](const std::string& scenario, std::uint64_t direction_seed, double amplitude) {
            HiggsBundleScenario S = scenario_from(scenario);
            Rng rng(direction_seed);
            const int mm = std::max(1, std::min(2, S.lattice().points_per_axis / 4));
            EndoFormField k =
                random_hermitian_field(S.lattice(), S.rank, mm, amplitude, rng);
            MetricPath path(S.metric, k, MetricPath::Kind::exponential);
            const double analytic = analytic_first_variation(S, path);
            const double fd = fd_first_variation(S, path);
            py::dict out;
            out["analytic"] = analytic;
            out["fd"] = fd;
            out["rel_error"] = std::abs(analytic - fd) / std::max(1.0, std::abs(fd));
            return out;
        },
        py::arg("scenario"), py::arg("direction_seed") = 1, py::arg("amplitude") = 0.3,
        "Analytic vs finite-difference derivative of J along a random direction.");
}
