#include "higgsflow/flow.hpp"

#include <cmath>

namespace higgsflow {

namespace {

double factorial(int n) {
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

// h^{1/2} exp(t S) h^{1/2} with S = h^{-1/2} k h^{-1/2}; equals h exp(t v)
// and is Hermitian positive by construction.
MetricField exp_update(const MetricField& h, const EndoFormField& k, double t) {
    const EndoFormField hs = h.sqrt();
    const EndoFormField his = h.inv_sqrt();
    EndoFormField out(h.lattice(), 0, 0, h.rank());
    Eigen::SelfAdjointEigenSolver<Mat> es;
    for (std::int64_t x = 0; x < out.num_points(); ++x) {
        const Mat S = (his.matrix(0, x) * k.matrix(0, x) * his.matrix(0, x)).eval();
        es.compute((S + S.adjoint()).eval() / 2.0);
        const Mat e = es.eigenvectors() *
                      (t * es.eigenvalues().array()).exp().matrix().asDiagonal() *
                      es.eigenvectors().adjoint();
        out.matrix(0, x) = hs.matrix(0, x) * e * hs.matrix(0, x);
    }
    return MetricField(std::move(out));
}

double field_scale(const EndoFormField& f) { return std::max(f.max_norm(), 1e-300); }

}  // namespace

MetricPath::MetricPath(MetricField base, EndoFormField direction_k, Kind kind)
    : base_(std::move(base)), k_(std::move(direction_k)), kind_(kind) {
    if (!k_.same_shape(base_.field()))
        throw std::invalid_argument("MetricPath: direction shape mismatch");
    double herm = 0.0;
    for (std::int64_t x = 0; x < k_.num_points(); ++x) {
        auto m = k_.matrix(0, x);
        herm = std::max(herm, (m - m.adjoint().eval()).norm());
    }
    if (herm > 1e-12 * std::max(1.0, field_scale(k_)))
        throw std::invalid_argument("MetricPath: direction must be a Hermitian form field");
}

EndoFormField MetricPath::endomorphism() const {
    const EndoFormField hinv = base_.inverse();
    EndoFormField v(k_.lattice(), 0, 0, k_.rank());
    for (std::int64_t x = 0; x < v.num_points(); ++x)
        v.matrix(0, x) = hinv.matrix(0, x) * k_.matrix(0, x);
    return v;
}

double MetricPath::t_max() const {
    // h + t k > 0 iff 1 + t lambda > 0 for every eigenvalue lambda of
    // h^{-1} k (real, by h-Hermiticity).
    const EndoFormField his = base_.inv_sqrt();
    double rho = 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es;
    for (std::int64_t x = 0; x < k_.num_points(); ++x) {
        const Mat S = (his.matrix(0, x) * k_.matrix(0, x) * his.matrix(0, x)).eval();
        es.compute((S + S.adjoint()).eval() / 2.0, Eigen::EigenvaluesOnly);
        rho = std::max(rho, es.eigenvalues().cwiseAbs().maxCoeff());
    }
    return rho > 0.0 ? 1.0 / rho : std::numeric_limits<double>::infinity();
}

MetricField MetricPath::at(double t) const {
    if (t == 0.0) return base_;
    if (kind_ == Kind::linear) {
        if (std::abs(t) >= t_max())
            throw std::invalid_argument("MetricPath: linear path leaves the positive cone");
        EndoFormField h = base_.field();
        EndoFormField step = k_;
        step *= cplx(t, 0.0);
        h += step;
        return MetricField(std::move(h));
    }
    return exp_update(base_, k_, t);
}

double analytic_first_variation(const HiggsBundleScenario& S, const MetricPath& path) {
    const MetricField& h = path.base();
    const CurvatureBundle cb = hs_curvature(h, S);
    HsOperators ops(S, h);
    const EndoFormField v = path.endomorphism();
    const cplx ip = l2_inner(ops.hs_prime(v), ops.hs_prime(cb.mean_curvature), h.field(), S.M());
    return factorial(S.M().n()) * ip.real();
}

double default_fd_step(const MetricPath& path) {
    return 1e-3 * field_scale(path.base().field()) / field_scale(path.direction());
}

namespace {

double central_difference_J(const HiggsBundleScenario& S, const MetricPath& path, double t) {
    const double Jp = kobayashi_J(S, path.at(t));
    const double Jm = kobayashi_J(S, path.at(-t));
    return (Jp - Jm) / (2.0 * t);
}

}  // namespace

double fd_first_variation(const HiggsBundleScenario& S, const MetricPath& path, double t_step,
                          bool richardson) {
    double t = t_step > 0.0 ? t_step : default_fd_step(path);
    if (path.kind() == MetricPath::Kind::linear) t = std::min(t, 0.25 * path.t_max());
    const double d1 = central_difference_J(S, path, t);
    if (!richardson) return d1;
    const double d2 = central_difference_J(S, path, t / 2.0);
    return (4.0 * d2 - d1) / 3.0;
}

MeanCurvatureVariation variation_of_mean_curvature(const HiggsBundleScenario& S,
                                                   const MetricPath& path) {
    const MetricField& h = path.base();
    HsOperators ops(S, h);
    const EndoFormField v = path.endomorphism();

    MeanCurvatureVariation out;
    // (1,1) part of D'' D'_h v, contracted: the variation of K along the path.
    const MixedForm ddv = ops.hs_second(ops.hs_prime(v));
    const EndoFormField* part11 = ddv.part(1, 1);
    out.analytic = part11 ? lambda_contract(*part11, S.M())
                          : EndoFormField(S.lattice(), 0, 0, S.rank);

    auto K_at = [&](double t) {
        return hs_curvature(path.at(t), S).mean_curvature;
    };
    const double t = default_fd_step(path);
    auto central = [&](double step) {
        EndoFormField diff = K_at(step);
        diff -= K_at(-step);
        diff *= cplx(1.0 / (2.0 * step), 0.0);
        return diff;
    };
    EndoFormField d1 = central(t);
    EndoFormField d2 = central(t / 2.0);
    d2 *= cplx(4.0 / 3.0, 0.0);
    d1 *= cplx(1.0 / 3.0, 0.0);
    out.fd = d2 - d1;

    EndoFormField diff = out.analytic - out.fd;
    out.residual = diff.max_norm();
    out.residual_rel = out.residual / std::max(1.0, out.analytic.max_norm());
    return out;
}

double verify_adjoint_variation(const HiggsBundleScenario& S, const MetricPath& path,
                                double t_step) {
    const double t = t_step > 0.0 ? t_step : default_fd_step(path);
    auto phistar_at = [&](double s) {
        return adjoint_form(S.higgs.phi, path.at(s).field());
    };
    auto central = [&](double step) {
        EndoFormField diff = phistar_at(step);
        diff -= phistar_at(-step);
        diff *= cplx(1.0 / (2.0 * step), 0.0);
        return diff;
    };
    EndoFormField d1 = central(t);
    EndoFormField d2 = central(t / 2.0);
    d2 *= cplx(4.0 / 3.0, 0.0);
    d1 *= cplx(1.0 / 3.0, 0.0);
    const EndoFormField fd = d2 - d1;

    const EndoFormField phi_star = adjoint_form(S.higgs.phi, path.base().field());
    const EndoFormField analytic = graded_bracket(phi_star, path.endomorphism());
    return (fd - analytic).max_norm();
}

InnerProductLemma verify_inner_product_lemma(const HiggsBundleScenario& S, const MetricField& h,
                                             const EndoFormField& v) {
    const KahlerTorus& M = S.M();
    const CurvatureBundle cb = hs_curvature(h, S);
    HsOperators ops(S, h);
    const EndoFormField& K = cb.mean_curvature;

    InnerProductLemma out;
    const MixedForm ddv = ops.hs_second(ops.hs_prime(v));
    const EndoFormField* part11 = ddv.part(1, 1);
    const EndoFormField contracted = part11 ? lambda_contract(*part11, M)
                                            : EndoFormField(S.lattice(), 0, 0, S.rank);
    out.lhs = l2_inner(contracted, K, h.field(), M);
    out.rhs = l2_inner(ops.hs_prime(v), ops.hs_prime(K), h.field(), M);
    out.residual = std::abs(out.lhs - out.rhs);

    // Higgs-only sub-identity.
    const EndoFormField& phi = S.higgs.phi;
    const EndoFormField& phi_star = ops.phi_adjoint();
    const EndoFormField bracket_v = graded_bracket(phi_star, v);
    const EndoFormField nested = graded_bracket(phi, bracket_v);
    out.sub_lhs = l2_inner(lambda_contract(nested, M), K, h.field(), M);
    out.sub_rhs = l2_inner(bracket_v, graded_bracket(phi_star, K), h.field(), M);
    out.sub_residual = std::abs(out.sub_lhs - out.sub_rhs);
    return out;
}

std::pair<MetricField, FlowTrace> descend_J(const HiggsBundleScenario& S, const MetricField& h0,
                                            const FlowParams& params) {
    const KahlerTorus& M = S.M();
    const double c = constant_c(S, h0).value();
    const Mat cI = c * Mat::Identity(S.rank, S.rank);

    MetricField h = h0;
    FlowTrace trace;

    auto evaluate = [&](const MetricField& metric) {
        const CurvatureBundle cb = hs_curvature(metric, S);
        HsOperators ops(S, metric);
        FlowStep st;
        st.J = kobayashi_J(S, metric, cb);
        st.hym_residual = hym_residual(S, metric, cb, c);
        st.el_residual = l2_norm_sq(ops.hs_prime(cb.mean_curvature), metric.field(), M) +
                         l2_norm_sq(ops.hs_second(cb.mean_curvature), metric.field(), M);
        return std::make_pair(st, cb);
    };

    auto [state, cb] = evaluate(h);
    state.step = 0;
    trace.steps.push_back(state);

    const int filter = params.filter_modes < 0
                           ? std::max(2, M.lattice().points_per_axis / 8)
                           : params.filter_modes;

    // Default step: the generic 0.1/(1+|c|), additionally capped by the
    // explicit-Euler stability bound of the highest mode the filter admits
    // (the contracted dbar-del linearization at the band corner).
    double step_cap = params.step0;
    if (step_cap <= 0.0) {
        step_cap = 0.1 / (1.0 + std::abs(c));
        if (filter > 0) {
            double eig = 0.0;
            for (int a = 0; a < M.n(); ++a) {
                const double kc = 2.0 * pi * filter / M.lattice().lengths[static_cast<size_t>(a)];
                eig += M.metric_dual()(a, a).real() * kc * kc;
            }
            eig /= 2.0;
            if (eig > 0.0) step_cap = std::min(step_cap, 0.9 * 2.0 / eig);
        }
    }
    double eps = step_cap;

    for (int k = 1; k <= params.max_steps; ++k) {
        if (trace.steps.back().el_residual < params.tol) {
            trace.converged = true;
            break;
        }
        // v = -(K - cI): h-Hermitian, and a guaranteed descent direction.
        EndoFormField direction(S.lattice(), 0, 0, S.rank);
        for (std::int64_t x = 0; x < direction.num_points(); ++x)
            direction.matrix(0, x) = -(cb.mean_curvature.matrix(0, x) - cI);
        if (filter > 0) direction = low_pass(direction, filter);

        const double J_prev = trace.steps.back().J;
        int backtracks = 0;
        bool accepted = false;
        MetricField h_try;
        FlowStep st_try;
        CurvatureBundle cb_try;
        while (eps > 1e-16 * step_cap) {
            // exp update along v: h^{1/2} exp(eps S) h^{1/2} with
            // S = h^{1/2} v h^{-1/2}, i.e. k = h v.
            EndoFormField k_dir(S.lattice(), 0, 0, S.rank);
            for (std::int64_t x = 0; x < k_dir.num_points(); ++x)
                k_dir.matrix(0, x) = h.field().matrix(0, x) * direction.matrix(0, x);
            // symmetrize against roundoff drift
            for (std::int64_t x = 0; x < k_dir.num_points(); ++x) {
                auto m = k_dir.matrix(0, x);
                k_dir.matrix(0, x) = ((m + m.adjoint().eval()) / 2.0).eval();
            }
            h_try = MetricPath(h, k_dir, MetricPath::Kind::exponential).at(eps);
            std::tie(st_try, cb_try) = evaluate(h_try);
            if (st_try.J <= J_prev) {
                accepted = true;
                break;
            }
            eps *= params.shrink;
            ++backtracks;
        }
        if (!accepted) {
            trace.stalled = true;
            break;
        }
        h = h_try;
        cb = cb_try;
        st_try.step = k;
        st_try.t = trace.steps.back().t + eps;
        st_try.step_size = eps;
        st_try.backtracks = backtracks;
        trace.steps.push_back(st_try);
        if (backtracks == 0) eps = std::min(2.0 * eps, step_cap);
    }
    if (!trace.converged && !trace.steps.empty())
        trace.converged = trace.steps.back().el_residual < params.tol;
    return {h, trace};
}

}  // namespace higgsflow
