#include "higgsflow/bundle.hpp"

#include "higgsflow/geometry.hpp"

#include <cmath>

namespace higgsflow {

namespace {
double factorial(int n) {
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}
}  // namespace

double TwistData::background_scale(int degree, int rank, const KahlerTorus& M) {
    return 2.0 * pi * degree / (rank * factorial(M.n()) * M.volume());
}

EndoFormField TwistData::background_form(const KahlerTorus& M, int rank) const {
    const double s = background_scale(degree, rank, M);
    EndoFormField f(M.lattice(), 1, 1, rank);
    const Mat id = Mat::Identity(rank, rank);
    for (int c = 0; c < f.num_components(); ++c) {
        const int a = f.comp_z_index(c)[0];
        const int b = f.comp_zbar_index(c)[0];
        const cplx v = s * M.metric()(a, b);
        for (std::int64_t x = 0; x < f.num_points(); ++x) f.matrix(c, x) = v * id;
    }
    return f;
}

MetricField::MetricField(EndoFormField h) : h_(std::move(h)) {
    if (h_.p() != 0 || h_.q() != 0)
        throw std::invalid_argument("MetricField: metric must be a (0,0) field");
}

MetricField MetricField::identity(const Lattice& lat, int rank) {
    return MetricField(EndoFormField::identity(lat, rank));
}

double MetricField::hermiticity_residual() const {
    double m = 0.0;
    for (std::int64_t x = 0; x < h_.num_points(); ++x) {
        auto hm = h_.matrix(0, x);
        m = std::max(m, (hm - hm.adjoint().eval()).norm());
    }
    return m;
}

double MetricField::min_eigenvalue() const {
    double m = std::numeric_limits<double>::infinity();
    Eigen::SelfAdjointEigenSolver<Mat> es;
    for (std::int64_t x = 0; x < h_.num_points(); ++x) {
        es.compute(h_.matrix(0, x), Eigen::EigenvaluesOnly);
        m = std::min(m, es.eigenvalues().minCoeff());
    }
    return m;
}

void MetricField::validate(double herm_tol) const {
    if (hermiticity_residual() > herm_tol)
        throw validation_error("metric field is not Hermitian to tolerance");
    if (!(min_eigenvalue() > 0.0))
        throw validation_error("metric field is not positive definite");
}

EndoFormField MetricField::inverse() const {
    EndoFormField out(h_.lattice(), 0, 0, h_.rank());
    for (std::int64_t x = 0; x < h_.num_points(); ++x)
        out.matrix(0, x) = h_.matrix(0, x).inverse();
    return out;
}

namespace {
EndoFormField metric_power(const EndoFormField& h, double expo) {
    EndoFormField out(h.lattice(), 0, 0, h.rank());
    Eigen::SelfAdjointEigenSolver<Mat> es;
    for (std::int64_t x = 0; x < h.num_points(); ++x) {
        es.compute(h.matrix(0, x));
        out.matrix(0, x) = es.eigenvectors() *
                           es.eigenvalues().array().pow(expo).matrix().asDiagonal() *
                           es.eigenvectors().adjoint();
    }
    return out;
}
}  // namespace

EndoFormField MetricField::sqrt() const { return metric_power(h_, 0.5); }
EndoFormField MetricField::inv_sqrt() const { return metric_power(h_, -0.5); }

HiggsField HiggsField::zero(const Lattice& lat, int rank) {
    return HiggsField{EndoFormField(lat, 1, 0, rank)};
}

EndoFormField adjoint_higgs(const HiggsField& phi, const MetricField& h) {
    return adjoint_form(phi.phi, h.field());
}

EndoFormField dbar_E(const EndoFormField& f, const HiggsBundleScenario& S) {
    EndoFormField out = d_bar(f);
    if (S.twist.deformation) out += graded_bracket(*S.twist.deformation, f);
    return out;
}

double degree(const HiggsBundleScenario& S, const MetricField& h) {
    const KahlerTorus& M = S.M();
    const EndoFormField R = chern_curvature(h, S);
    // c1(E,h) = (i/2pi) tr R_h
    EndoFormField c1 = cplx(0.0, 1.0 / (2.0 * pi)) * trace_field(R);
    EndoFormField top = c1;
    for (int k = 1; k < M.n(); ++k) top = wedge(top, M.kahler_form());
    return integrate_top(top, M).real();
}

double slope(const HiggsBundleScenario& S, const MetricField& h) {
    return degree(S, h) / S.rank;
}

void validate_scenario(const HiggsBundleScenario& S) {
    const KahlerTorus& M = S.M();
    const ToleranceSet& tol = S.tol;

    if (M.volume_quadrature_residual() > tol.volume_check)
        throw validation_error("torus: quadrature volume disagrees with closed form");

    if (S.metric.rank() != S.rank) throw validation_error("metric rank mismatch");
    S.metric.validate(tol.metric_hermiticity);

    if (S.higgs.phi.rank() != S.rank || S.higgs.phi.p() != 1 || S.higgs.phi.q() != 0)
        throw validation_error("higgs field must be a rank-matched (1,0) form");

    if (S.twist.deformation) {
        const EndoFormField& a = *S.twist.deformation;
        if (a.rank() != S.rank || a.p() != 0 || a.q() != 1)
            throw validation_error("deformation must be a rank-matched (0,1) form");
        if (M.n() == 2) {
            EndoFormField integrability = d_bar(a) + wedge(a, a);
            if (integrability.max_norm() > tol.integrability)
                throw validation_error("twist: deformation is not integrable (dbar a + a^a != 0)");
        }
    }

    const double deg = degree(S, S.metric);
    if (std::abs(deg - S.twist.degree) > tol.twist_degree)
        throw validation_error("twist: computed degree deviates from the prescribed integer");

    const EndoFormField holo = dbar_E(S.higgs.phi, S);
    if (holo.max_norm() > tol.holomorphy)
        throw validation_error("higgs: field is not holomorphic (dbar_E phi != 0)");

    if (M.n() == 2) {
        // phi /\ phi = 0 pointwise: the component commutator must vanish.
        const EndoFormField& phi = S.higgs.phi;
        double m = 0.0;
        for (std::int64_t x = 0; x < phi.num_points(); ++x) {
            const Mat c = phi.matrix(0, x) * phi.matrix(1, x) - phi.matrix(1, x) * phi.matrix(0, x);
            m = std::max(m, c.norm());
        }
        if (m > tol.higgs_commutator)
            throw validation_error("higgs: components do not commute (phi ^ phi != 0)");
    }
}

}  // namespace higgsflow
