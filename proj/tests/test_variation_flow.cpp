#include <doctest.h>

#include "higgsflow/flow.hpp"
#include "higgsflow/random_fields.hpp"
#include "higgsflow/scenario_io.hpp"

#include <cmath>

using namespace higgsflow;

namespace {

HiggsBundleScenario catalog(const std::string& name) {
    return build_scenario(catalog_scenario(name));
}

EndoFormField random_direction(const HiggsBundleScenario& S, std::uint64_t seed,
                               double amplitude = 0.4, int max_mode = 2) {
    Rng rng(seed);
    const int mm = std::min(max_mode, S.lattice().points_per_axis / 4);
    return random_hermitian_field(S.lattice(), S.rank, std::max(1, mm), amplitude, rng);
}

}  // namespace

TEST_CASE("metric paths") {
    HiggsBundleScenario N = catalog("NILPOTENT");
    EndoFormField k = random_direction(N, 3);
    MetricPath lin(N.metric, k, MetricPath::Kind::linear);
    MetricPath expo(N.metric, k, MetricPath::Kind::exponential);

    // both have derivative k at t = 0 (finite differences of the family)
    const double t = 1e-5;
    for (const MetricPath& path : {lin, expo}) {
        EndoFormField diff = path.at(t).field();
        diff -= path.at(-t).field();
        diff *= cplx(1.0 / (2.0 * t), 0.0);
        CHECK((diff - k).max_norm() < 1e-8);
    }

    // validity window: h + t k stays positive inside, construction refuses outside
    const double tmax = lin.t_max();
    CHECK(tmax > 0.0);
    CHECK(MetricField(lin.at(0.9 * tmax).field()).min_eigenvalue() > 0.0);
    CHECK_THROWS_AS(lin.at(1.1 * tmax), std::invalid_argument);

    // exponential path is positive far beyond the linear window
    CHECK(MetricField(expo.at(3.0 * tmax).field()).min_eigenvalue() > 0.0);

    // v = h^{-1} k is h-Hermitian
    EndoFormField v = expo.endomorphism();
    double worst = 0.0;
    for (std::int64_t x = 0; x < v.num_points(); ++x) {
        const Mat hm = N.metric.field().matrix(0, x);
        const Mat lhs = hm * v.matrix(0, x);
        worst = std::max(worst, (lhs - lhs.adjoint().eval()).norm());
    }
    CHECK(worst < 1e-12);

    // non-Hermitian directions are rejected
    EndoFormField badk(N.lattice(), 0, 0, 2);
    for (std::int64_t x = 0; x < badk.num_points(); ++x) badk.matrix(0, x)(0, 1) = 1.0;
    CHECK_THROWS_AS(MetricPath(N.metric, badk), std::invalid_argument);
}

TEST_CASE("first variation of J") {
    // v = lambda I: exact zero both analytically and by differencing
    HiggsBundleScenario T = catalog("TWISTED");
    {
        EndoFormField k = T.metric.field();
        k *= cplx(0.8, 0.0);
        MetricPath path(T.metric, k, MetricPath::Kind::exponential);
        CHECK(analytic_first_variation(T, path) == 0.0);
        CHECK(std::abs(fd_first_variation(T, path)) < 1e-9);
    }

    // FLAT: K = 0, so the variation vanishes along any direction
    HiggsBundleScenario F = catalog("FLAT");
    MetricPath pf(F.metric, random_direction(F, 5), MetricPath::Kind::exponential);
    CHECK(analytic_first_variation(F, pf) == 0.0);

    // NILPOTENT with the frozen 2x2 oracle: along k = diag(1,-1) at h = I,
    // J(t) = e^{4t} so dJ/dt|_0 = 4.
    HiggsBundleScenario N = catalog("NILPOTENT");
    {
        EndoFormField k(N.lattice(), 0, 0, 2);
        for (std::int64_t x = 0; x < k.num_points(); ++x) {
            k.matrix(0, x)(0, 0) = 1.0;
            k.matrix(0, x)(1, 1) = -1.0;
        }
        MetricPath path(N.metric, k, MetricPath::Kind::exponential);
        CHECK(analytic_first_variation(N, path) == doctest::Approx(4.0).epsilon(1e-11));
        CHECK(fd_first_variation(N, path) == doctest::Approx(4.0).epsilon(1e-9));
    }

    // random directions on random-ish scenarios, linear and exponential
    int idx = 0;
    for (const std::string name : {"NILPOTENT", "PERTURBED_TWISTED", "DEFORMED", "PERTURBED_2D"}) {
        CAPTURE(name);
        HiggsBundleScenario S = catalog(name);
        for (int trial = 0; trial < 3; ++trial) {
            EndoFormField k = random_direction(S, 100 + 7 * idx++);
            for (auto kind : {MetricPath::Kind::exponential, MetricPath::Kind::linear}) {
                MetricPath path(S.metric, k, kind);
                const double analytic = analytic_first_variation(S, path);
                const double fd = fd_first_variation(S, path);
                CHECK(std::abs(analytic - fd) / std::max(1.0, std::abs(fd)) < 1e-5);
            }
        }
    }

    // the Richardson helper nails polynomial families: J(h + t k) for the
    // quadratic fixture below is quadratic in t, so the extrapolated
    // difference is exact to roundoff
    {
        auto quad = [](double t) { return 3.0 + 2.5 * t + 0.75 * t * t; };
        const double t = 0.125;
        const double d1 = (quad(t) - quad(-t)) / (2.0 * t);
        const double d2 = (quad(t / 2) - quad(-t / 2)) / t;
        const double rich = (4.0 * d2 - d1) / 3.0;
        CHECK(rich == doctest::Approx(2.5).epsilon(1e-12));
    }
}

TEST_CASE("variation of the mean curvature") {
    // v = I: both routes vanish
    HiggsBundleScenario N = catalog("NILPOTENT");
    {
        MetricPath path(N.metric, N.metric.field(), MetricPath::Kind::exponential);
        MeanCurvatureVariation mv = variation_of_mean_curvature(N, path);
        CHECK(mv.analytic.max_norm() == 0.0);
        CHECK(mv.fd.max_norm() < 1e-9);
    }

    // phi = 0 conformal rank 1: the analytic route reduces to the classical
    // contraction of dbar del v
    HiggsBundleScenario C = catalog("CONFORMAL");
    {
        EndoFormField k = random_direction(C, 9, 0.3);
        MetricPath path(C.metric, k, MetricPath::Kind::exponential);
        MeanCurvatureVariation mv = variation_of_mean_curvature(C, path);
        const EndoFormField v = path.endomorphism();
        HsOperators ops(C, C.metric);
        EndoFormField classical = lambda_contract(d_bar(ops.d_prime(v)), C.M());
        CHECK((mv.analytic - classical).max_norm() < 1e-12);
        CHECK(mv.residual_rel < 1e-6);
    }

    // frozen 2x2 oracle: K_t = e^{2t} diag(1,-1) along k = diag(1,-1), so
    // dK/dt|_0 = 2 diag(1,-1)
    {
        EndoFormField k(N.lattice(), 0, 0, 2);
        for (std::int64_t x = 0; x < k.num_points(); ++x) {
            k.matrix(0, x)(0, 0) = 1.0;
            k.matrix(0, x)(1, 1) = -1.0;
        }
        MetricPath path(N.metric, k, MetricPath::Kind::exponential);
        MeanCurvatureVariation mv = variation_of_mean_curvature(N, path);
        Mat expect = Mat::Zero(2, 2);
        expect(0, 0) = 2.0;
        expect(1, 1) = -2.0;
        for (std::int64_t x = 0; x < mv.analytic.num_points(); ++x)
            CHECK((mv.analytic.matrix(0, x) - expect).norm() < 1e-12);
        CHECK(mv.residual_rel < 1e-9);
    }

    // random directions
    int idx = 0;
    for (const std::string name : {"NILPOTENT", "PERTURBED_NILPOTENT", "PERTURBED_2D"}) {
        CAPTURE(name);
        HiggsBundleScenario S = catalog(name);
        EndoFormField k = random_direction(S, 300 + 11 * idx++);
        MetricPath path(S.metric, k, MetricPath::Kind::exponential);
        MeanCurvatureVariation mv = variation_of_mean_curvature(S, path);
        CHECK(mv.residual_rel < 1e-5);

        // two-term split of the same variation: the Chern piece plus the
        // contracted double bracket reproduce the combined operator route
        HsOperators ops(S, S.metric);
        const EndoFormField v = path.endomorphism();
        EndoFormField chern_piece = lambda_contract(ops.dbar_E(ops.d_prime(v)), S.M());
        EndoFormField nested =
            lambda_contract(graded_bracket(S.higgs.phi,
                                           graded_bracket(ops.phi_adjoint(), v)),
                            S.M());
        CHECK((chern_piece + nested - mv.analytic).max_norm() < 1e-10);
    }
}

TEST_CASE("variation of the Higgs adjoint") {
    // rank 1: phi* is metric-independent and the bracket vanishes
    ScenarioSpec spec = catalog_scenario("CONFORMAL");
    spec.higgs = {{"kind", "constant_scalar"}, {"params", {{"c0", 1.3}}}};
    HiggsBundleScenario C = build_scenario(spec);
    {
        EndoFormField k = random_direction(C, 4, 0.3);
        MetricPath path(C.metric, k, MetricPath::Kind::exponential);
        CHECK(verify_adjoint_variation(C, path) < 1e-10);
    }

    // h = I, k = diag(1,-1), constant nilpotent phi: the 2x2 bracket gives
    // d/dt phi*_t|_0 = 2 conj(c0) E21 dzbar, and the fd route matches it
    HiggsBundleScenario N = catalog("NILPOTENT");
    {
        EndoFormField k(N.lattice(), 0, 0, 2);
        for (std::int64_t x = 0; x < k.num_points(); ++x) {
            k.matrix(0, x)(0, 0) = 1.0;
            k.matrix(0, x)(1, 1) = -1.0;
        }
        MetricPath path(N.metric, k, MetricPath::Kind::exponential);
        // the residual against [phi*, v] is the tested quantity
        CHECK(verify_adjoint_variation(N, path) < 1e-10);
        // and [phi*, v] itself is the hand value 2 E21
        const EndoFormField phi_star = adjoint_higgs(N.higgs, N.metric);
        const EndoFormField bracket = graded_bracket(phi_star, path.endomorphism());
        Mat expect = Mat::Zero(2, 2);
        expect(1, 0) = 2.0;
        for (std::int64_t x = 0; x < bracket.num_points(); ++x)
            CHECK((bracket.matrix(0, x) - expect).norm() < 1e-13);
    }

    // random rank-2 metrics and directions
    HiggsBundleScenario P = catalog("PERTURBED_NILPOTENT");
    EndoFormField k = random_direction(P, 6);
    MetricPath path(P.metric, k, MetricPath::Kind::exponential);
    CHECK(verify_adjoint_variation(P, path) < 1e-6);
}

TEST_CASE("inner product lemma") {
    HiggsBundleScenario F = catalog("FLAT");
    {
        EndoFormField v = random_direction(F, 2);
        InnerProductLemma lem = verify_inner_product_lemma(F, F.metric, v);
        CHECK(std::abs(lem.lhs) == 0.0);
        CHECK(std::abs(lem.rhs) == 0.0);
    }

    // phi = 0 conformal rank 1: the classical two-sided identity
    HiggsBundleScenario C = catalog("CONFORMAL");
    {
        MetricPath path(C.metric, random_direction(C, 21, 0.4), MetricPath::Kind::exponential);
        InnerProductLemma lem = verify_inner_product_lemma(C, C.metric, path.endomorphism());
        CHECK(lem.residual < 1e-8);
        CHECK(std::abs(lem.sub_lhs) < 1e-14);  // no Higgs field
    }

    // Higgs scenarios: full identity and the Higgs-only sub-identity
    for (const std::string name :
         {"NILPOTENT", "PERTURBED_NILPOTENT", "DEFORMED", "NILPOTENT_2D", "PERTURBED_2D"}) {
        CAPTURE(name);
        HiggsBundleScenario S = catalog(name);
        MetricPath path(S.metric, random_direction(S, 23, 0.4), MetricPath::Kind::exponential);
        InnerProductLemma lem = verify_inner_product_lemma(S, S.metric, path.endomorphism());
        CHECK(lem.residual < 1e-8);
        CHECK(lem.sub_residual < 1e-8);
    }

    // frozen NILPOTENT oracle: v = diag(1,-1) gives 4 on both sides
    HiggsBundleScenario N = catalog("NILPOTENT");
    {
        EndoFormField v(N.lattice(), 0, 0, 2);
        for (std::int64_t x = 0; x < v.num_points(); ++x) {
            v.matrix(0, x)(0, 0) = 1.0;
            v.matrix(0, x)(1, 1) = -1.0;
        }
        InnerProductLemma lem = verify_inner_product_lemma(N, N.metric, v);
        CHECK(lem.lhs.real() == doctest::Approx(4.0).epsilon(1e-12));
        CHECK(lem.rhs.real() == doctest::Approx(4.0).epsilon(1e-12));
        CHECK(lem.sub_lhs.real() == doctest::Approx(4.0).epsilon(1e-12));
        CHECK(lem.sub_rhs.real() == doctest::Approx(4.0).epsilon(1e-12));
    }
}

TEST_CASE("descent flow") {
    // start at a critical metric: single-row trace
    HiggsBundleScenario T = catalog("TWISTED");
    {
        auto [h, trace] = descend_J(T, T.metric, {});
        CHECK(trace.steps.size() == 1);
        CHECK(trace.converged);
    }

    // perturbed twisted line bundle descends to the HYM value
    {
        ScenarioSpec spec = catalog_scenario("PERTURBED_TWISTED");
        spec.metric["params"]["amplitude"] = 0.05;
        HiggsBundleScenario P = build_scenario(spec);
        FlowParams params;
        params.max_steps = 500;
        params.tol = 1e-6;
        auto [h, trace] = descend_J(P, P.metric, params);
        CHECK(trace.converged);
        const double C = lower_bound_C(P);
        CHECK(std::abs(trace.steps.back().J - C) < 1e-6);
        for (size_t i = 1; i < trace.steps.size(); ++i)
            CHECK(trace.steps[i].J <= trace.steps[i - 1].J + 1e-10);
        CHECK(MetricField(h.field()).min_eigenvalue() > 0.0);

        // critical-point characterization: at termination the derivative
        // along a random direction is tiny
        MetricPath path(h, random_direction(P, 41, 0.3), MetricPath::Kind::exponential);
        CHECK(std::abs(fd_first_variation(P, path)) < 1e-3);
        CHECK(std::abs(analytic_first_variation(P, path)) < 1e-3);
    }

    // NILPOTENT: strict decrease from J = 1, monotone, no convergence claim
    {
        HiggsBundleScenario N = catalog("NILPOTENT");
        FlowParams params;
        params.max_steps = 60;
        params.tol = 1e-12;
        auto [h, trace] = descend_J(N, N.metric, params);
        CHECK(trace.steps.front().J == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(trace.steps.back().J < 1.0);
        for (size_t i = 1; i < trace.steps.size(); ++i)
            CHECK(trace.steps[i].J <= trace.steps[i - 1].J + 1e-10);
        CHECK(MetricField(h.field()).min_eigenvalue() > 0.0);
    }
}
