#pragma once

#include "higgsflow/calculus.hpp"
#include "higgsflow/torus.hpp"

#include <memory>
#include <optional>
#include <string>

namespace higgsflow {

/// Tolerances used when validating a scenario's invariants.
struct ToleranceSet {
    double holomorphy = 1e-8;
    double metric_hermiticity = 1e-12;
    double higgs_commutator = 1e-10;
    double twist_degree = 1e-8;
    double integrability = 1e-8;
    double volume_check = 1e-12;
};

/// Reference holomorphic structure: a constant-curvature determinant twist
/// realizing an integer degree, plus an optional smooth (0,1) deformation a
/// with dbar_E = dbar_0 + a. The background curvature is the scalar (1,1)
/// form F0 = s * (omega/i) times the identity, where s is fixed so the
/// Chern-Weil degree equals `degree`.
struct TwistData {
    int degree = 0;
    std::optional<EndoFormField> deformation;  // (0,1), rank r

    static double background_scale(int degree, int rank, const KahlerTorus& M);
    /// F0 * I as an End E-valued (1,1) field (coefficients s*g_{a bbar}*I).
    EndoFormField background_form(const KahlerTorus& M, int rank) const;
};

/// Pointwise Hermitian positive-definite metric on the bundle, relative to
/// the reference metric whose Chern curvature is the background F0 * I.
class MetricField {
public:
    MetricField() = default;
    explicit MetricField(EndoFormField h);

    static MetricField identity(const Lattice& lat, int rank);

    const EndoFormField& field() const { return h_; }
    int rank() const { return h_.rank(); }
    const Lattice& lattice() const { return h_.lattice(); }

    double hermiticity_residual() const;
    double min_eigenvalue() const;
    void validate(double herm_tol = 1e-12) const;

    EndoFormField inverse() const;
    EndoFormField sqrt() const;
    EndoFormField inv_sqrt() const;

private:
    EndoFormField h_;
};

/// The Higgs field: an End E-valued (1,0)-form, phi = sum phi_a dz^a.
struct HiggsField {
    EndoFormField phi;  // (1,0), rank r

    static HiggsField zero(const Lattice& lat, int rank);
};

/// A complete problem instance: torus, holomorphic structure, metric and
/// Higgs field, with the label and stability expectation carried as
/// documentation only.
struct HiggsBundleScenario {
    std::shared_ptr<const KahlerTorus> torus;
    int rank = 1;
    TwistData twist;
    MetricField metric;
    HiggsField higgs;
    std::string label;
    std::string expectation;
    ToleranceSet tol;

    const KahlerTorus& M() const { return *torus; }
    const Lattice& lattice() const { return torus->lattice(); }
};

/// h-adjoint of the Higgs field: (phi*_h)_abar = h^{-1} phi_a^dagger h,
/// the unique (0,1)-form with h(phi* s, s') = h(s, phi s').
EndoFormField adjoint_higgs(const HiggsField& phi, const MetricField& h);

/// dbar_E on End E-valued forms: dbar + [a, .] (graded).
EndoFormField dbar_E(const EndoFormField& f, const HiggsBundleScenario& S);

/// Chern-Weil degree deg = int c1(E,h) /\ omega^{n-1} and slope deg/rank;
/// metric-independent to quadrature accuracy.
double degree(const HiggsBundleScenario& S, const MetricField& h);
double slope(const HiggsBundleScenario& S, const MetricField& h);

/// Check every declared invariant; throws validation_error naming the
/// violated one.
void validate_scenario(const HiggsBundleScenario& S);

}  // namespace higgsflow
