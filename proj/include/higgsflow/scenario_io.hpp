#pragma once

#include "higgsflow/bundle.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace higgsflow {

using json = nlohmann::json;

/// Declarative scenario document:
///
/// {
///   "label": "...",
///   "manifold": {"n":1, "lengths":[1.0], "grid_points":32, "metric_diag":[1.0]},
///   "bundle":   {"rank":1, "twist_degree":0, "deformation":{"kind":"none"}},
///   "metric":   {"kind":"identity", "params":{}, "seed":0},
///   "higgs":    {"kind":"none", "params":{}},
///   "tolerances": {}
/// }
///
/// metric.kind: identity | conformal {amplitude, mode} |
///              random_bandlimited {amplitude, max_mode} (seeded)
/// higgs.kind:  none | nilpotent {c0, mode} (mode != 0 breaks holomorphy;
///              useful for validation tests)
/// deformation.kind: none | nilpotent_01 {eps, axis} | noncommuting_01 {eps}
struct ScenarioSpec {
    std::string label = "scenario";
    std::string expectation;
    int n = 1;
    std::vector<double> lengths{1.0};
    int grid_points = 32;
    std::vector<double> metric_diag{1.0};
    int rank = 1;
    int twist_degree = 0;
    json deformation = json{{"kind", "none"}};
    json metric = json{{"kind", "identity"}, {"params", json::object()}, {"seed", 0}};
    json higgs = json{{"kind", "none"}, {"params", json::object()}};
    json tolerances = json::object();

    json to_json() const;
    static ScenarioSpec from_json(const json& j);
};

/// Instantiate and validate a scenario from its spec.
HiggsBundleScenario build_scenario(const ScenarioSpec& spec);

/// Named builders for the canonical instances used across the test suites.
std::vector<std::string> catalog_names();
ScenarioSpec catalog_scenario(const std::string& name);

/// Batch-run configuration shared by the CLI commands.
struct RunConfig {
    std::vector<ScenarioSpec> scenarios;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::string summation = "compensated";
    std::string derivative = "spectral";
    // flow
    int flow_max_steps = 500;
    double flow_step0 = 0.0;
    double flow_shrink = 0.5;
    double flow_tol = 1e-6;
    int flow_filter_modes = -1;
    // variation sampling
    int variation_directions = 8;
    double variation_amplitude = 0.3;
    int variation_max_mode = 2;
    double variation_rel_tol = 1e-4;
    // verify tolerance overrides: {identity name: tolerance}
    json verify_tolerances = json::object();

    static RunConfig from_json(const json& j);
    static RunConfig from_file(const std::string& path);
    void apply_modes() const;  // summation/derivative knobs
};

}  // namespace higgsflow
