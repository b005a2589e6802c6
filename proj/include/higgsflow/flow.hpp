#pragma once

#include "higgsflow/functionals.hpp"

namespace higgsflow {

/// One-parameter family of metrics through h with tangent k at t = 0:
/// linear h + t k, or exponential h exp(t v) with v = h^{-1} k. Both have
/// d/dt h_t |_0 = k; the exponential family stays positive for all t.
class MetricPath {
public:
    enum class Kind { linear, exponential };

    MetricPath(MetricField base, EndoFormField direction_k, Kind kind = Kind::exponential);

    const MetricField& base() const { return base_; }
    const EndoFormField& direction() const { return k_; }
    Kind kind() const { return kind_; }

    /// v = h^{-1} k, the h-Hermitian endomorphism tangent to the path.
    EndoFormField endomorphism() const;

    /// For linear paths, |t| below this keeps h + t k positive definite.
    double t_max() const;

    MetricField at(double t) const;

private:
    MetricField base_;
    EndoFormField k_;
    Kind kind_;
};

/// d/dt J(h_t)|_0 = n! Re <D'_h v, D'_h K_h>; the n! reconciles the omega^n
/// normalization of J with the omega^n/n! one of the L2 product (pinned
/// against the finite-difference oracle).
double analytic_first_variation(const HiggsBundleScenario& S, const MetricPath& path);

/// Central difference of J along the path, Richardson-extrapolated over
/// {t, t/2} when requested. A step t <= 0 picks the default
/// 1e-3 * |h| / |k|.
double fd_first_variation(const HiggsBundleScenario& S, const MetricPath& path, double t_step = 0.0,
                          bool richardson = true);

/// Default finite-difference step for a path.
double default_fd_step(const MetricPath& path);

/// d/dt K_t|_0 two ways: analytically as the (1,1)-contraction of D'' D'_h v
/// and by central differences of the recomputed mean curvature.
struct MeanCurvatureVariation {
    EndoFormField analytic;
    EndoFormField fd;
    double residual = 0.0;      // max-norm difference
    double residual_rel = 0.0;  // relative to max(1, |analytic|)
};
MeanCurvatureVariation variation_of_mean_curvature(const HiggsBundleScenario& S,
                                                   const MetricPath& path);

/// Max-norm residual of d/dt phi*_t|_0 = [phi*_h, v].
double verify_adjoint_variation(const HiggsBundleScenario& S, const MetricPath& path,
                                double t_step = 0.0);

/// Both sides of <i Lambda D'' D'_h v, K_h> = <D'_h v, D'_h K_h>, plus the
/// Higgs-only sub-identity <i Lambda [phi,[phi*,v]], K> = <[phi*,v],[phi*,K]>.
struct InnerProductLemma {
    cplx lhs, rhs;
    cplx sub_lhs, sub_rhs;
    double residual = 0.0;
    double sub_residual = 0.0;
};
InnerProductLemma verify_inner_product_lemma(const HiggsBundleScenario& S, const MetricField& h,
                                             const EndoFormField& v);

struct FlowParams {
    int max_steps = 500;
    double step0 = 0.0;  // <= 0: use 0.1 / (1 + |c|)
    double shrink = 0.5;
    double tol = 1e-6;  // stop when ||D K||^2 falls below
    // Dealiasing low-pass applied to the update direction, in modes per
    // axis: -1 picks N/3, 0 disables. Keeps roundoff at the stiff Nyquist
    // scales from feeding back into the step-size control; the unfiltered
    // residual still gates termination.
    int filter_modes = -1;
};

struct FlowStep {
    int step = 0;
    double t = 0.0;
    double J = 0.0;
    double hym_residual = 0.0;
    double el_residual = 0.0;
    double step_size = 0.0;
    int backtracks = 0;
};

struct FlowTrace {
    std::vector<FlowStep> steps;
    bool converged = false;
    bool stalled = false;
};

/// Heat-flow style descent for J: h <- h exp(-eps (K_h - c I)) with a
/// backtracking line search accepting only non-increasing J. The direction
/// -(K - cI) is h-Hermitian, so the exponential update keeps h positive.
std::pair<MetricField, FlowTrace> descend_J(const HiggsBundleScenario& S, const MetricField& h0,
                                            const FlowParams& params = {});

}  // namespace higgsflow
