#pragma once

#include "higgsflow/scenario_io.hpp"

namespace higgsflow {

/// One row of the identity-verification table.
struct VerifyRow {
    std::string scenario;
    std::string identity;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass() const { return residual <= tolerance; }
};

/// All identity checks applicable to a scenario's dimension, with the
/// config's seeds driving the sampled directions.
std::vector<VerifyRow> verify_rows(const HiggsBundleScenario& S, const RunConfig& cfg);

/// Exit codes: 0 all good, 1 tolerance failure, 2 invalid input.
int cmd_verify(const RunConfig& cfg);
int cmd_evaluate(const RunConfig& cfg);
int cmd_flow(const RunConfig& cfg);
int cmd_variation(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);

/// Scenario construction with the run seed folded into the field seeds.
HiggsBundleScenario build_with_seed(const ScenarioSpec& spec, std::uint64_t run_seed);

}  // namespace higgsflow
