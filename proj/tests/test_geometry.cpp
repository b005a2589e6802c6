#include <doctest.h>

#include "higgsflow/geometry.hpp"
#include "higgsflow/random_fields.hpp"
#include "higgsflow/scenario_io.hpp"

#include <cmath>

using namespace higgsflow;

namespace {

HiggsBundleScenario catalog(const std::string& name) {
    return build_scenario(catalog_scenario(name));
}

Mat diag2(double a, double b) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

}  // namespace

TEST_CASE("Chern connection form") {
    // h = I gives theta = 0
    HiggsBundleScenario F = catalog("FLAT");
    CHECK(chern_connection_form(F.metric, F).max_norm() == 0.0);

    // rank 1, h = e^u: theta = del u
    HiggsBundleScenario C = catalog("CONFORMAL");
    EndoFormField u(C.lattice(), 0, 0, 1);
    for (std::int64_t x = 0; x < u.num_points(); ++x)
        u.matrix(0, x)(0, 0) = std::log(C.metric.field().matrix(0, x)(0, 0).real());
    EndoFormField theta = chern_connection_form(C.metric, C);
    CHECK((theta - d(u)).max_norm() < 1e-9);

    // product rule: del h = h theta for random rank-2 h
    ScenarioSpec spec = catalog_scenario("PERTURBED_NILPOTENT");
    HiggsBundleScenario P = build_scenario(spec);
    EndoFormField dh = d(P.metric.field());
    EndoFormField th = chern_connection_form(P.metric, P);
    double worst = 0.0;
    for (int c = 0; c < dh.num_components(); ++c)
        for (std::int64_t x = 0; x < dh.num_points(); ++x) {
            const Mat expect = P.metric.field().matrix(0, x) * th.matrix(c, x);
            worst = std::max(worst, (dh.matrix(c, x) - expect).norm());
        }
    CHECK(worst < 1e-10);
}

TEST_CASE("Chern curvature") {
    // reference metric of a twist: constant background F0 I
    HiggsBundleScenario T = catalog("TWISTED");
    EndoFormField R = chern_curvature(T.metric, T);
    EndoFormField F0 = T.twist.background_form(T.M(), T.rank);
    CHECK((R - F0).max_norm() < 1e-12);

    // rank 1 untwisted conformal: R = dbar del u, checked against the
    // analytic second derivative of a single-mode u
    ScenarioSpec spec = catalog_scenario("FLAT");
    spec.grid_points = 32;
    HiggsBundleScenario S = build_scenario(spec);
    const Lattice& lat = S.lattice();
    const double L = lat.lengths[0];
    const double amp = 0.3;
    EndoFormField hf(lat, 0, 0, 1);
    for (std::int64_t x = 0; x < hf.num_points(); ++x) {
        const double x1 = axis_coordinate(lat, x, 0);
        hf.matrix(0, x)(0, 0) = std::exp(amp * std::cos(2.0 * pi * x1 / L));
    }
    MetricField h(hf);
    EndoFormField Ru = chern_curvature(h, S);
    // u = amp cos(2 pi x/L), R_{1 1bar} = -d_z d_zbar u = amp (pi/L)^2 cos(2 pi x/L)
    double worst = 0.0;
    for (std::int64_t x = 0; x < Ru.num_points(); ++x) {
        const double x1 = axis_coordinate(lat, x, 0);
        const double expect = amp * (pi / L) * (pi / L) * std::cos(2.0 * pi * x1 / L);
        worst = std::max(worst, std::abs(Ru.matrix(0, x)(0, 0) - expect));
    }
    CHECK(worst < 1e-10);

    // constant rank-2 metric != I on the untwisted bundle is flat
    ScenarioSpec flat2 = catalog_scenario("NILPOTENT");
    HiggsBundleScenario N = build_scenario(flat2);
    Mat hconst(2, 2);
    hconst << cplx(2.0, 0.0), cplx(0.4, 0.2), cplx(0.4, -0.2), cplx(1.0, 0.0);
    MetricField hc(EndoFormField::constant(N.lattice(), 0, 0, hconst));
    CHECK(chern_curvature(hc, N).max_norm() < 1e-12);
}

TEST_CASE("Hitchin-Simpson operators") {
    HiggsBundleScenario N = catalog("NILPOTENT");
    HsOperators ops(N, N.metric);

    // identity section is parallel for both operators
    EndoFormField id = EndoFormField::identity(N.lattice(), 2);
    const MixedForm pid = ops.hs_prime(id);
    const MixedForm sid = ops.hs_second(id);
    for (const auto& part : pid.parts()) CHECK(part.max_norm() == 0.0);
    for (const auto& part : sid.parts()) CHECK(part.max_norm() == 0.0);

    // phi = 0 reduces them to the Chern pieces
    HiggsBundleScenario C = catalog("CONFORMAL");
    HsOperators cops(C, C.metric);
    Rng rng(8);
    EndoFormField v = random_endo_form(C.lattice(), 1, 0, 0, 2, 1.0, rng);
    const MixedForm hp = cops.hs_prime(v);
    CHECK(hp.parts().size() == 2);  // the (0,1) bracket part is the zero field
    CHECK(hp.part(0, 1)->max_norm() == 0.0);
    CHECK((*hp.part(1, 0) - cops.d_prime(v)).max_norm() == 0.0);

    // linearity
    Rng rng2(12);
    EndoFormField a = random_endo_form(N.lattice(), 2, 0, 0, 2, 1.0, rng2);
    EndoFormField b = random_endo_form(N.lattice(), 2, 0, 0, 2, 1.0, rng2);
    const cplx ca(0.7, -0.2), cb(-1.1, 0.4);
    EndoFormField lin = ca * a + cb * b;
    MixedForm left = ops.hs_prime(lin);
    MixedForm right;
    {
        MixedForm pa = ops.hs_prime(a);
        MixedForm pb = ops.hs_prime(b);
        for (const auto& part : pa.parts()) right.add(ca * part);
        for (const auto& part : pb.parts()) right.add(cb * part);
    }
    for (const auto& part : left.parts()) {
        const EndoFormField* other = right.part(part.p(), part.q());
        REQUIRE(other != nullptr);
        CHECK((part - *other).max_norm() < 1e-12);
    }
}

TEST_CASE("Hitchin-Simpson curvature bundle") {
    // FLAT: everything vanishes
    HiggsBundleScenario F = catalog("FLAT");
    CurvatureBundle cbF = hs_curvature(F.metric, F);
    CHECK(cbF.r11.max_norm() == 0.0);
    CHECK(cbF.mean_curvature.max_norm() == 0.0);

    // rank 1 with a holomorphic (constant) Higgs scalar: bracket = 0
    ScenarioSpec spec = catalog_scenario("CONFORMAL");
    spec.higgs = {{"kind", "constant_scalar"}, {"params", {{"c0", 1.7}}}};
    HiggsBundleScenario C = build_scenario(spec);
    CurvatureBundle cbC = hs_curvature(C.metric, C);
    CHECK(cbC.higgs_bracket.max_norm() < 1e-14);
    CHECK((cbC.r11 - cbC.chern).max_norm() < 1e-14);

    // NILPOTENT on the unit-area torus: the frozen 2x2 values
    HiggsBundleScenario N = catalog("NILPOTENT");
    CurvatureBundle cb = hs_curvature(N.metric, N);
    const Mat D = diag2(1.0, -1.0);
    for (std::int64_t x = 0; x < cb.mean_curvature.num_points(); ++x) {
        CHECK((cb.higgs_bracket.matrix(0, x) - D).norm() < 1e-13);
        CHECK((cb.mean_curvature.matrix(0, x) - D).norm() < 1e-13);
        // |K|^2 = 2 pointwise
        CHECK(std::abs((cb.mean_curvature.matrix(0, x) * cb.mean_curvature.matrix(0, x))
                           .trace()
                           .real() -
                       2.0) < 1e-12);
    }
    CHECK(cb.residuals.r11_hermiticity < 1e-12);
    CHECK(cb.residuals.K_hermiticity < 1e-12);
    CHECK(cb.residuals.r11_minus < 1e-12);

    // r20/r02 are structurally zero in one complex dimension
    CHECK(cb.r20.is_structurally_zero());
    CHECK(cb.r02.is_structurally_zero());

    // scale invariance: hs_curvature(2h) = hs_curvature(h) field by field
    HiggsBundleScenario P = catalog("PERTURBED_NILPOTENT");
    CurvatureBundle cb1 = hs_curvature(P.metric, P);
    EndoFormField h2 = P.metric.field();
    h2 *= cplx(2.0, 0.0);
    CurvatureBundle cb2 = hs_curvature(MetricField(h2), P);
    CHECK((cb1.r11 - cb2.r11).max_norm() < 1e-12);
    CHECK((cb1.mean_curvature - cb2.mean_curvature).max_norm() < 1e-12);
    CHECK((cb1.r02 - cb2.r02).max_norm() < 1e-12);

    // hermiticity on perturbed scenarios
    CHECK(cb1.residuals.r11_hermiticity < 1e-10);
    CHECK(cb1.residuals.K_hermiticity < 1e-10);
    CHECK(cb1.residuals.r11_minus < 1e-8);

    // phi = 0 reduction: K equals the Chern mean curvature
    HiggsBundleScenario CF = catalog("CONFORMAL");
    CurvatureBundle cbCF = hs_curvature(CF.metric, CF);
    EndoFormField chernK = lambda_contract(chern_curvature(CF.metric, CF), CF.M());
    CHECK((cbCF.mean_curvature - chernK).max_norm() < 1e-13);
}

TEST_CASE("mean curvature identity") {
    HiggsBundleScenario F = catalog("FLAT");
    CHECK(verify_mean_curvature_identity(hs_curvature(F.metric, F), F) == 0.0);

    HiggsBundleScenario T = catalog("TWISTED");
    CHECK(verify_mean_curvature_identity(hs_curvature(T.metric, T), T) < 1e-10);

    HiggsBundleScenario P2 = catalog("PERTURBED_2D");
    const CurvatureBundle cb = hs_curvature(P2.metric, P2);
    CHECK(verify_mean_curvature_identity(cb, P2) < 1e-8);

    // one-point oracle: contract by explicit index loops and compare against
    // the wedge route at a single grid point
    const KahlerTorus& M = P2.M();
    const Mat gd = M.metric_dual();
    const std::int64_t x = 5;
    Mat K = Mat::Zero(2, 2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            K += gd(a, b) * cb.r11.matrix(cb.r11.component_position({a}, {b}), x);
    CHECK((K - cb.mean_curvature.matrix(0, x)).norm() < 1e-12);

    // the identity also holds on a non-diagonal constant metric
    Mat g(2, 2);
    g << cplx(1.5, 0.0), cplx(0.3, 0.2), cplx(0.3, -0.2), cplx(1.1, 0.0);
    ScenarioSpec skew = catalog_scenario("NILPOTENT_2D");
    HiggsBundleScenario S = build_scenario(skew);
    HiggsBundleScenario Sg = S;
    Sg.torus = std::make_shared<KahlerTorus>(2, std::vector<double>{1.0, 1.0}, 8, g);
    CHECK(verify_mean_curvature_identity(hs_curvature(Sg.metric, Sg), Sg) < 1e-10);
}

TEST_CASE("euler-lagrange residual") {
    HiggsBundleScenario F = catalog("FLAT");
    CHECK(euler_lagrange_residual(F, F.metric).total == 0.0);

    ScenarioSpec spec = catalog_scenario("TWISTED");
    spec.twist_degree = 2;
    HiggsBundleScenario T = build_scenario(spec);
    CHECK(euler_lagrange_residual(T, T.metric).total < 1e-10);

    // NILPOTENT at h = I on the unit-area torus: the constant-field bracket
    // oracle gives ||D' K||^2 = ||D'' K||^2 = 4, total 8.
    HiggsBundleScenario N = catalog("NILPOTENT");
    const ElResidual el = euler_lagrange_residual(N, N.metric);
    CHECK(el.prime == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(el.second == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(el.total == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(std::abs(el.prime - el.second) < 1e-12);
}
