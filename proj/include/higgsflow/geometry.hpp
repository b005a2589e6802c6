#pragma once

#include "higgsflow/bundle.hpp"

namespace higgsflow {

/// The curvature data of the Hitchin-Simpson connection D_h + phi + phi*_h,
/// split by type, with the mean curvature K = lambda-contraction of the
/// (1,1) part and scalar curvature sigma = tr K. r20 and r02 are
/// structurally zero fields when n = 1.
struct CurvatureBundle {
    EndoFormField chern;         // R_h, background included
    EndoFormField higgs_bracket; // [phi, phi*_h]
    EndoFormField r11;           // chern + higgs_bracket
    EndoFormField r20;           // D'_h phi
    EndoFormField r02;           // dbar_E phi*_h
    EndoFormField r11_minus;     // dbar_E phi + D'_h phi*_h (vanishing part)
    EndoFormField mean_curvature;   // K_h
    EndoFormField scalar_curvature; // sigma_h = tr K_h, rank 1

    struct Residuals {
        double r11_hermiticity = 0.0;  // max |(R_{a bbar})*_h - R_{b abar}|
        double K_hermiticity = 0.0;    // max |K*_h - K|
        double r11_minus = 0.0;        // sup norm of the mixed part
    } residuals;
};

/// Differential operators of a fixed (scenario, metric) pair. The Chern
/// (1,0) form is theta = h^{-1} del h - a*_h; operators act on End E-valued
/// forms by graded bracket.
class HsOperators {
public:
    HsOperators(const HiggsBundleScenario& S, const MetricField& h);

    const EndoFormField& connection_form() const { return theta_; }
    const EndoFormField& phi_adjoint() const { return phi_star_; }
    const MetricField& metric() const { return h_; }

    EndoFormField dbar_E(const EndoFormField& f) const;
    EndoFormField d_prime(const EndoFormField& f) const;  // D'_h

    MixedForm hs_prime(const EndoFormField& f) const;   // D'_h + [phi*_h, .]
    MixedForm hs_second(const EndoFormField& f) const;  // dbar_E + [phi, .]
    MixedForm hs_prime(const MixedForm& f) const;
    MixedForm hs_second(const MixedForm& f) const;

private:
    const HiggsBundleScenario& S_;
    MetricField h_;
    EndoFormField theta_;
    EndoFormField phi_star_;
};

EndoFormField chern_connection_form(const MetricField& h, const HiggsBundleScenario& S);
EndoFormField chern_curvature(const MetricField& h, const HiggsBundleScenario& S);

CurvatureBundle hs_curvature(const MetricField& h, const HiggsBundleScenario& S);

/// Max-norm residual of K_h omega^n = i n R_h /\ omega^{n-1}, compared on
/// top-form coefficients.
double verify_mean_curvature_identity(const CurvatureBundle& cb, const HiggsBundleScenario& S);

/// ||D'_h K||^2 and ||D'' K||^2; the two halves agree since K is
/// h-Hermitian, and their sum vanishes exactly at critical metrics.
struct ElResidual {
    double total = 0.0;
    double prime = 0.0;
    double second = 0.0;
};
ElResidual euler_lagrange_residual(const HiggsBundleScenario& S, const MetricField& h);

}  // namespace higgsflow
