#include "higgsflow/geometry.hpp"

#include <cmath>

namespace higgsflow {

namespace {

// theta = h^{-1} del h - a*_h, the (1,0) connection form relative to the
// reference structure.
EndoFormField connection_form_impl(const MetricField& h, const HiggsBundleScenario& S) {
    const EndoFormField dh = d(h.field());
    const EndoFormField hinv = h.inverse();
    EndoFormField theta(h.lattice(), 1, 0, h.rank());
    for (int c = 0; c < theta.num_components(); ++c)
        for (std::int64_t x = 0; x < theta.num_points(); ++x)
            theta.matrix(c, x) = hinv.matrix(0, x) * dh.matrix(c, x);
    if (S.twist.deformation) theta -= adjoint_form(*S.twist.deformation, h.field());
    return theta;
}

}  // namespace

HsOperators::HsOperators(const HiggsBundleScenario& S, const MetricField& h)
    : S_(S),
      h_(h),
      theta_(connection_form_impl(h, S)),
      phi_star_(adjoint_form(S.higgs.phi, h.field())) {}

EndoFormField HsOperators::dbar_E(const EndoFormField& f) const {
    EndoFormField out = d_bar(f);
    if (S_.twist.deformation) out += graded_bracket(*S_.twist.deformation, f);
    return out;
}

EndoFormField HsOperators::d_prime(const EndoFormField& f) const {
    return d(f) + graded_bracket(theta_, f);
}

MixedForm HsOperators::hs_prime(const EndoFormField& f) const {
    MixedForm out(d_prime(f));
    out.add(graded_bracket(phi_star_, f));
    return out;
}

MixedForm HsOperators::hs_second(const EndoFormField& f) const {
    MixedForm out(dbar_E(f));
    out.add(graded_bracket(S_.higgs.phi, f));
    return out;
}

MixedForm HsOperators::hs_prime(const MixedForm& f) const {
    MixedForm out;
    for (const auto& part : f.parts()) out += hs_prime(part);
    return out;
}

MixedForm HsOperators::hs_second(const MixedForm& f) const {
    MixedForm out;
    for (const auto& part : f.parts()) out += hs_second(part);
    return out;
}

EndoFormField chern_connection_form(const MetricField& h, const HiggsBundleScenario& S) {
    return connection_form_impl(h, S);
}

EndoFormField chern_curvature(const MetricField& h, const HiggsBundleScenario& S) {
    const EndoFormField theta = connection_form_impl(h, S);
    EndoFormField R = S.twist.background_form(S.M(), S.rank);
    R += d_bar(theta);
    if (S.twist.deformation) {
        R += d(*S.twist.deformation);
        R += graded_bracket(theta, *S.twist.deformation);
    }
    return R;
}

namespace {

double r11_hermiticity_residual(const EndoFormField& r11, const MetricField& h) {
    // (R_{a bbar})*_h = R_{b abar} componentwise.
    double m = 0.0;
    const int n = r11.lattice().n;
    const EndoFormField hinv = h.inverse();
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const int c = r11.component_position({a}, {b});
            const int ct = r11.component_position({b}, {a});
            for (std::int64_t x = 0; x < r11.num_points(); ++x) {
                const Mat adj =
                    hinv.matrix(0, x) * r11.matrix(c, x).adjoint() * h.field().matrix(0, x);
                m = std::max(m, (adj - r11.matrix(ct, x)).norm());
            }
        }
    }
    return m;
}

double k_hermiticity_residual(const EndoFormField& K, const MetricField& h) {
    double m = 0.0;
    for (std::int64_t x = 0; x < K.num_points(); ++x) {
        auto hm = h.field().matrix(0, x);
        const Mat adj = hm.inverse() * K.matrix(0, x).adjoint() * hm;
        m = std::max(m, (adj - K.matrix(0, x)).norm());
    }
    return m;
}

}  // namespace

CurvatureBundle hs_curvature(const MetricField& h, const HiggsBundleScenario& S) {
    const KahlerTorus& M = S.M();
    HsOperators ops(S, h);

    CurvatureBundle cb;
    cb.chern = chern_curvature(h, S);
    cb.higgs_bracket = graded_bracket(S.higgs.phi, ops.phi_adjoint());
    cb.r11 = cb.chern + cb.higgs_bracket;
    cb.r20 = ops.d_prime(S.higgs.phi);
    cb.r02 = ops.dbar_E(ops.phi_adjoint());
    cb.r11_minus = ops.dbar_E(S.higgs.phi) + ops.d_prime(ops.phi_adjoint());
    cb.mean_curvature = lambda_contract(cb.r11, M);
    cb.scalar_curvature = trace_field(cb.mean_curvature);

    cb.residuals.r11_hermiticity = r11_hermiticity_residual(cb.r11, h);
    cb.residuals.K_hermiticity = k_hermiticity_residual(cb.mean_curvature, h);
    cb.residuals.r11_minus = cb.r11_minus.max_norm();
    return cb;
}

double verify_mean_curvature_identity(const CurvatureBundle& cb, const HiggsBundleScenario& S) {
    const KahlerTorus& M = S.M();
    const int n = M.n();

    EndoFormField omega_n = M.kahler_form();
    for (int k = 1; k < n; ++k) omega_n = wedge(omega_n, M.kahler_form());
    EndoFormField lhs = wedge(cb.mean_curvature, omega_n);

    EndoFormField rhs = cb.r11;
    for (int k = 1; k < n; ++k) rhs = wedge(rhs, M.kahler_form());
    rhs *= cplx(0.0, static_cast<double>(n));

    return (lhs - rhs).max_norm();
}

ElResidual euler_lagrange_residual(const HiggsBundleScenario& S, const MetricField& h) {
    const CurvatureBundle cb = hs_curvature(h, S);
    HsOperators ops(S, h);
    ElResidual r;
    r.prime = l2_norm_sq(ops.hs_prime(cb.mean_curvature), h.field(), S.M());
    r.second = l2_norm_sq(ops.hs_second(cb.mean_curvature), h.field(), S.M());
    r.total = r.prime + r.second;
    return r;
}

}  // namespace higgsflow
