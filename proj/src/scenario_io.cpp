#include "higgsflow/scenario_io.hpp"

#include "higgsflow/random_fields.hpp"

#include <cmath>
#include <fstream>

namespace higgsflow {

json ScenarioSpec::to_json() const {
    json j;
    j["label"] = label;
    if (!expectation.empty()) j["expectation"] = expectation;
    j["manifold"] = {{"n", n},
                     {"lengths", lengths},
                     {"grid_points", grid_points},
                     {"metric_diag", metric_diag}};
    j["bundle"] = {{"rank", rank}, {"twist_degree", twist_degree}, {"deformation", deformation}};
    j["metric"] = metric;
    j["higgs"] = higgs;
    j["tolerances"] = tolerances;
    return j;
}

ScenarioSpec ScenarioSpec::from_json(const json& j) {
    ScenarioSpec s;
    s.label = j.value("label", "scenario");
    s.expectation = j.value("expectation", "");
    const json& m = j.at("manifold");
    s.n = m.at("n").get<int>();
    s.lengths = m.at("lengths").get<std::vector<double>>();
    s.grid_points = m.at("grid_points").get<int>();
    s.metric_diag = m.value("metric_diag", std::vector<double>(static_cast<size_t>(s.n), 1.0));
    const json& b = j.at("bundle");
    s.rank = b.at("rank").get<int>();
    s.twist_degree = b.value("twist_degree", 0);
    s.deformation = b.value("deformation", json{{"kind", "none"}});
    s.metric = j.value("metric", json{{"kind", "identity"}});
    s.higgs = j.value("higgs", json{{"kind", "none"}});
    s.tolerances = j.value("tolerances", json::object());
    return s;
}

namespace {

ToleranceSet parse_tolerances(const json& t) {
    ToleranceSet tol;
    tol.holomorphy = t.value("holomorphy", tol.holomorphy);
    tol.metric_hermiticity = t.value("metric_hermiticity", tol.metric_hermiticity);
    tol.higgs_commutator = t.value("higgs_commutator", tol.higgs_commutator);
    tol.twist_degree = t.value("twist_degree", tol.twist_degree);
    tol.integrability = t.value("integrability", tol.integrability);
    tol.volume_check = t.value("volume_check", tol.volume_check);
    return tol;
}

Mat elementary(int rank, int i, int j) {
    Mat m = Mat::Zero(rank, rank);
    m(i, j) = 1.0;
    return m;
}

MetricField build_metric(const ScenarioSpec& spec, const Lattice& lat, std::uint64_t seed) {
    const std::string kind = spec.metric.value("kind", "identity");
    const json params = spec.metric.value("params", json::object());
    if (kind == "identity" || kind == "reference")
        return MetricField::identity(lat, spec.rank);
    if (kind == "conformal") {
        const double amplitude = params.value("amplitude", 0.1);
        const int mode = params.value("mode", 1);
        EndoFormField u(lat, 0, 0, spec.rank);
        const Mat id = Mat::Identity(spec.rank, spec.rank);
        for (std::int64_t x = 0; x < u.num_points(); ++x) {
            double val = 0.0;
            const auto c = point_coords(lat, x);
            for (int axis = 0; axis < lat.axes(); ++axis)
                val += std::cos(2.0 * pi * mode * c[axis] / lat.points_per_axis + 0.37 * axis);
            u.matrix(0, x) = amplitude * val * id;
        }
        return MetricField(hermitian_exp(u));
    }
    if (kind == "random_bandlimited") {
        const double amplitude = params.value("amplitude", 0.1);
        const int max_mode = params.value("max_mode", std::max(1, lat.points_per_axis / 4));
        Rng rng(seed);
        return MetricField(
            hermitian_exp(random_hermitian_field(lat, spec.rank, max_mode, amplitude, rng)));
    }
    throw validation_error("unknown metric kind: " + kind);
}

HiggsField build_higgs(const ScenarioSpec& spec, const Lattice& lat) {
    const std::string kind = spec.higgs.value("kind", "none");
    const json params = spec.higgs.value("params", json::object());
    HiggsField phi = HiggsField::zero(lat, spec.rank);
    if (kind == "none") return phi;
    if (kind == "nilpotent") {
        if (spec.rank < 2) throw validation_error("nilpotent higgs needs rank >= 2");
        const double c0 = params.value("c0", 1.0);
        const int mode = params.value("mode", 0);
        const Mat E = elementary(spec.rank, 0, 1);
        const int comp = phi.phi.component_position({0}, {});
        for (std::int64_t x = 0; x < phi.phi.num_points(); ++x) {
            const double x1 = axis_coordinate(lat, x, 0);
            const cplx factor =
                std::exp(cplx(0.0, 2.0 * pi * mode * x1 / lat.axis_length(0)));
            phi.phi.matrix(comp, x) = c0 * factor * E;
        }
        return phi;
    }
    if (kind == "constant_scalar") {
        const double c0 = params.value("c0", 1.0);
        const int comp = phi.phi.component_position({0}, {});
        for (std::int64_t x = 0; x < phi.phi.num_points(); ++x)
            phi.phi.matrix(comp, x)(0, 0) = c0;
        return phi;
    }
    throw validation_error("unknown higgs kind: " + kind);
}

std::optional<EndoFormField> build_deformation(const ScenarioSpec& spec, const Lattice& lat) {
    const std::string kind = spec.deformation.value("kind", "none");
    if (kind == "none") return std::nullopt;
    if (kind == "nilpotent_01") {
        if (spec.rank < 2) throw validation_error("nilpotent deformation needs rank >= 2");
        const double eps = spec.deformation.value("eps", 0.5);
        const int axis = spec.deformation.value("axis", 0);
        EndoFormField a(lat, 0, 1, spec.rank);
        const int comp = a.component_position({}, {axis});
        const Mat E = elementary(spec.rank, 0, 1);
        for (std::int64_t x = 0; x < a.num_points(); ++x) a.matrix(comp, x) = eps * E;
        return a;
    }
    if (kind == "noncommuting_01") {
        // Deliberately non-integrable on n = 2 (a /\ a != 0).
        if (spec.rank < 2) throw validation_error("deformation needs rank >= 2");
        const double eps = spec.deformation.value("eps", 0.5);
        EndoFormField a(lat, 0, 1, spec.rank);
        for (std::int64_t x = 0; x < a.num_points(); ++x) {
            a.matrix(a.component_position({}, {0}), x) = eps * elementary(spec.rank, 0, 1);
            if (lat.n == 2)
                a.matrix(a.component_position({}, {1}), x) = eps * elementary(spec.rank, 1, 0);
        }
        return a;
    }
    throw validation_error("unknown deformation kind: " + kind);
}

}  // namespace

HiggsBundleScenario build_scenario(const ScenarioSpec& spec) {
    Mat g = Mat::Zero(spec.n, spec.n);
    for (int a = 0; a < spec.n; ++a) g(a, a) = spec.metric_diag.at(static_cast<size_t>(a));

    HiggsBundleScenario S;
    S.torus = std::make_shared<KahlerTorus>(spec.n, spec.lengths, spec.grid_points, g);
    S.rank = spec.rank;
    S.label = spec.label;
    S.expectation = spec.expectation;
    S.tol = parse_tolerances(spec.tolerances);

    const Lattice& lat = S.torus->lattice();
    S.twist.degree = spec.twist_degree;
    S.twist.deformation = build_deformation(spec, lat);
    S.metric = build_metric(spec, lat, spec.metric.value("seed", std::uint64_t{0}));
    S.higgs = build_higgs(spec, lat);

    validate_scenario(S);
    return S;
}

namespace {

ScenarioSpec make(const std::string& label, int n, std::vector<double> lengths, int N,
                  int rank, int d) {
    ScenarioSpec s;
    s.label = label;
    s.n = n;
    s.lengths = std::move(lengths);
    s.grid_points = N;
    s.metric_diag.assign(static_cast<size_t>(n), 1.0);
    s.rank = rank;
    s.twist_degree = d;
    return s;
}

constexpr double kUnitAreaLength = 0.70710678118654752440;  // Vol X = 2 L^2 = 1

}  // namespace

std::vector<std::string> catalog_names() {
    return {"FLAT",     "CONFORMAL",     "TWISTED",     "NILPOTENT",     "PERTURBED_TWISTED",
            "PERTURBED_NILPOTENT",       "DEFORMED",    "FLAT_2D",       "CONFORMAL_2D",
            "TWISTED_2D",                "NILPOTENT_2D", "PERTURBED_2D", "DEFORMED_2D"};
}

ScenarioSpec catalog_scenario(const std::string& name) {
    if (name == "FLAT") {
        ScenarioSpec s = make("FLAT", 1, {1.0}, 16, 1, 0);
        s.expectation = "trivial line bundle; J = 0 at the flat metric";
        return s;
    }
    if (name == "CONFORMAL") {
        ScenarioSpec s = make("CONFORMAL", 1, {1.0}, 32, 1, 0);
        s.metric = {{"kind", "conformal"}, {"params", {{"amplitude", 0.2}, {"mode", 1}}}, {"seed", 0}};
        s.expectation = "conformally flat line bundle; flow relaxes to the flat metric";
        return s;
    }
    if (name == "TWISTED") {
        ScenarioSpec s = make("TWISTED", 1, {1.0}, 16, 1, 1);
        s.expectation = "degree-1 line bundle; reference metric attains the bound";
        return s;
    }
    if (name == "NILPOTENT") {
        ScenarioSpec s = make("NILPOTENT", 1, {kUnitAreaLength}, 16, 2, 0);
        s.higgs = {{"kind", "nilpotent"}, {"params", {{"c0", 1.0}}}};
        s.expectation = "semistable, not polystable; J infimum 0 is not attained";
        return s;
    }
    if (name == "PERTURBED_TWISTED") {
        ScenarioSpec s = make("PERTURBED_TWISTED", 1, {1.0}, 32, 1, 1);
        s.metric = {{"kind", "random_bandlimited"},
                    {"params", {{"amplitude", 0.1}, {"max_mode", 2}}},
                    {"seed", 11}};
        s.expectation = "degree-1 line bundle away from the minimizer";
        return s;
    }
    if (name == "PERTURBED_NILPOTENT") {
        ScenarioSpec s = make("PERTURBED_NILPOTENT", 1, {kUnitAreaLength}, 32, 2, 0);
        s.higgs = {{"kind", "nilpotent"}, {"params", {{"c0", 1.0}}}};
        s.metric = {{"kind", "random_bandlimited"},
                    {"params", {{"amplitude", 0.1}, {"max_mode", 2}}},
                    {"seed", 12}};
        s.expectation = "semistable, not polystable";
        return s;
    }
    if (name == "DEFORMED") {
        ScenarioSpec s = make("DEFORMED", 1, {1.0}, 32, 2, 0);
        s.deformation = {{"kind", "nilpotent_01"}, {"eps", 0.7}, {"axis", 0}};
        s.higgs = {{"kind", "nilpotent"}, {"params", {{"c0", 1.0}}}};
        s.metric = {{"kind", "random_bandlimited"},
                    {"params", {{"amplitude", 0.1}, {"max_mode", 2}}},
                    {"seed", 13}};
        s.expectation = "deformed holomorphic structure on the trivial rank-2 bundle";
        return s;
    }
    if (name == "FLAT_2D") {
        ScenarioSpec s = make("FLAT_2D", 2, {1.0, 1.0}, 8, 1, 0);
        s.expectation = "trivial line bundle over a 2-torus";
        return s;
    }
    if (name == "CONFORMAL_2D") {
        ScenarioSpec s = make("CONFORMAL_2D", 2, {1.0, 1.0}, 10, 1, 0);
        s.metric = {{"kind", "conformal"}, {"params", {{"amplitude", 0.05}, {"mode", 1}}}, {"seed", 0}};
        return s;
    }
    if (name == "TWISTED_2D") {
        ScenarioSpec s = make("TWISTED_2D", 2, {1.0, 1.0}, 8, 1, 1);
        s.expectation = "degree-1 twist; reference metric attains the bound";
        return s;
    }
    if (name == "NILPOTENT_2D") {
        ScenarioSpec s = make("NILPOTENT_2D", 2, {1.0, 1.0}, 8, 2, 0);
        s.higgs = {{"kind", "nilpotent"}, {"params", {{"c0", 1.0}}}};
        s.expectation = "semistable, not polystable";
        return s;
    }
    if (name == "PERTURBED_2D") {
        // N = 12 with a small band-limited amplitude keeps the aliasing tail
        // of exp(A) below the 1e-10 Hermiticity budget.
        ScenarioSpec s = make("PERTURBED_2D", 2, {1.0, 1.0}, 12, 2, 0);
        s.higgs = {{"kind", "nilpotent"}, {"params", {{"c0", 1.0}}}};
        s.metric = {{"kind", "random_bandlimited"},
                    {"params", {{"amplitude", 0.02}, {"max_mode", 1}}},
                    {"seed", 21}};
        return s;
    }
    if (name == "DEFORMED_2D") {
        ScenarioSpec s = make("DEFORMED_2D", 2, {1.0, 1.0}, 10, 2, 0);
        s.deformation = {{"kind", "nilpotent_01"}, {"eps", 0.5}, {"axis", 0}};
        s.higgs = {{"kind", "nilpotent"}, {"params", {{"c0", 1.0}}}};
        return s;
    }
    throw validation_error("unknown catalog scenario: " + name);
}

RunConfig RunConfig::from_json(const json& j) {
    RunConfig cfg;
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.out_dir = j.value("out_dir", "out");
    cfg.summation = j.value("summation", "compensated");
    cfg.derivative = j.value("derivative", "spectral");
    if (j.contains("flow")) {
        const json& f = j["flow"];
        cfg.flow_max_steps = f.value("max_steps", cfg.flow_max_steps);
        cfg.flow_step0 = f.value("step0", cfg.flow_step0);
        cfg.flow_shrink = f.value("shrink", cfg.flow_shrink);
        cfg.flow_tol = f.value("tol", cfg.flow_tol);
        cfg.flow_filter_modes = f.value("filter_modes", cfg.flow_filter_modes);
    }
    if (j.contains("variation")) {
        const json& v = j["variation"];
        cfg.variation_directions = v.value("directions", cfg.variation_directions);
        cfg.variation_amplitude = v.value("amplitude", cfg.variation_amplitude);
        cfg.variation_max_mode = v.value("max_mode", cfg.variation_max_mode);
        cfg.variation_rel_tol = v.value("rel_tol", cfg.variation_rel_tol);
    }
    cfg.verify_tolerances = j.value("tolerances", json::object());

    if (j.contains("scenarios")) {
        for (const json& entry : j["scenarios"]) {
            if (entry.is_string()) {
                cfg.scenarios.push_back(catalog_scenario(entry.get<std::string>()));
            } else if (entry.contains("catalog")) {
                ScenarioSpec base = catalog_scenario(entry["catalog"].get<std::string>());
                if (entry.contains("patch")) {
                    json doc = base.to_json();
                    doc.merge_patch(entry["patch"]);
                    base = ScenarioSpec::from_json(doc);
                }
                cfg.scenarios.push_back(base);
            } else {
                cfg.scenarios.push_back(ScenarioSpec::from_json(entry));
            }
        }
    } else {
        for (const auto& name : catalog_names()) cfg.scenarios.push_back(catalog_scenario(name));
    }
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open config file: " + path);
    json j = json::parse(in);
    return from_json(j);
}

void RunConfig::apply_modes() const {
    set_summation_mode(summation == "plain" ? SummationMode::plain : SummationMode::compensated);
    set_derivative_mode(derivative == "fd4" ? DerivativeMode::fd4 : DerivativeMode::spectral);
}

}  // namespace higgsflow
