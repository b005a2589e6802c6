#include <doctest.h>

#include "higgsflow/cli.hpp"
#include "higgsflow/geometry.hpp"
#include "higgsflow/random_fields.hpp"
#include "higgsflow/scenario_io.hpp"

#include <cmath>

using namespace higgsflow;

namespace {

HiggsBundleScenario catalog(const std::string& name) {
    return build_scenario(catalog_scenario(name));
}

}  // namespace

TEST_CASE("adjoint of the Higgs field") {
    HiggsBundleScenario S = catalog("NILPOTENT");
    const Lattice& lat = S.lattice();

    // h = I: the adjoint is the conjugate transpose componentwise
    EndoFormField star = adjoint_higgs(S.higgs, S.metric);
    CHECK(star.p() == 0);
    CHECK(star.q() == 1);
    for (std::int64_t x = 0; x < star.num_points(); ++x) {
        const Mat expect = S.higgs.phi.matrix(0, x).adjoint();
        CHECK((star.matrix(0, x) - expect).norm() < 1e-14);
    }

    // rank 1, h = e^u: the scalar metric cancels, phi* = conj(phi)
    HiggsBundleScenario C = catalog("CONFORMAL");
    HiggsField phi1{EndoFormField(C.lattice(), 1, 0, 1)};
    Rng rng(3);
    phi1.phi = random_endo_form(C.lattice(), 1, 1, 0, 2, 1.0, rng);
    EndoFormField star1 = adjoint_higgs(phi1, C.metric);
    for (std::int64_t x = 0; x < star1.num_points(); ++x)
        CHECK(std::abs(star1.matrix(0, x)(0, 0) - std::conj(phi1.phi.matrix(0, x)(0, 0))) <
              1e-14);

    // defining pairing h(phi* s, s') = h(s, phi s') on random vectors,
    // random rank-2 metric
    Rng rng2(9);
    EndoFormField hfield = hermitian_exp(random_hermitian_field(lat, 2, 2, 0.5, rng2));
    MetricField h(hfield);
    EndoFormField phir = random_endo_form(lat, 2, 1, 0, 2, 1.0, rng2);
    EndoFormField starr = adjoint_form(phir, hfield);
    double worst = 0.0;
    for (std::int64_t x = 0; x < 40; ++x) {
        Eigen::Vector2cd s(rng2.cgaussian(), rng2.cgaussian());
        Eigen::Vector2cd sp(rng2.cgaussian(), rng2.cgaussian());
        const Mat hm = hfield.matrix(0, x);
        // h(u, v) = v^dagger h u (linear in the first slot)
        const cplx lhs = (sp.adjoint() * hm * (starr.matrix(0, x) * s))(0, 0);
        const cplx rhs = ((phir.matrix(0, x) * sp).adjoint() * hm * s)(0, 0);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    CHECK(worst < 1e-10);

    // involution through the pairing: applying the definition twice returns phi
    EndoFormField back = adjoint_form(starr, hfield);
    CHECK((back - phir).max_norm() < 1e-12);

    // phi* ^ phi* vanishes whenever phi ^ phi does
    EndoFormField star_nil = adjoint_higgs(S.higgs, S.metric);
    CHECK(wedge(star_nil, star_nil).max_norm() < 1e-10);
    HiggsBundleScenario P2 = catalog("PERTURBED_2D");
    EndoFormField star_p2 = adjoint_higgs(P2.higgs, P2.metric);
    CHECK(wedge(star_p2, star_p2).max_norm() < 1e-10);
}

TEST_CASE("degree and slope") {
    // untwisted trivial bundle: zero for any metric
    HiggsBundleScenario F = catalog("CONFORMAL");
    CHECK(std::abs(degree(F, F.metric)) < 1e-8);

    // twist d = 3, rank 1
    ScenarioSpec spec = catalog_scenario("TWISTED");
    spec.twist_degree = 3;
    HiggsBundleScenario T3 = build_scenario(spec);
    CHECK(degree(T3, T3.metric) == doctest::Approx(3.0).epsilon(1e-9));

    // any valid metric gives the same degree (Chern-Weil independence)
    Rng rng(17);
    MetricField other(hermitian_exp(random_hermitian_field(T3.lattice(), 1, 2, 0.3, rng)));
    CHECK(std::abs(degree(T3, other) - 3.0) < 1e-8);

    // rank-2 uniform twist behaves like a direct sum of d-twist lines
    ScenarioSpec r2 = catalog_scenario("TWISTED");
    r2.rank = 2;
    r2.twist_degree = 4;  // 2 * d with d = 2 per line
    HiggsBundleScenario D = build_scenario(r2);
    CHECK(degree(D, D.metric) == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(slope(D, D.metric) == doctest::Approx(2.0).epsilon(1e-9));

    // n = 2 twist
    HiggsBundleScenario T2 = catalog("TWISTED_2D");
    CHECK(degree(T2, T2.metric) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("scenario catalog and validation") {
    for (const auto& name : catalog_names()) {
        CAPTURE(name);
        CHECK_NOTHROW(build_scenario(catalog_scenario(name)));
    }
    CHECK_THROWS_AS(catalog_scenario("NOPE"), validation_error);

    HiggsBundleScenario F = catalog("FLAT");
    CHECK(std::abs(degree(F, F.metric)) < 1e-10);

    // NILPOTENT: constant field, holomorphy residual at roundoff
    HiggsBundleScenario N = catalog("NILPOTENT");
    CHECK(dbar_E(N.higgs.phi, N).max_norm() < 1e-12);
    CHECK(N.M().volume() == doctest::Approx(1.0).epsilon(1e-14));

    // TWISTED(2)
    ScenarioSpec spec = catalog_scenario("TWISTED");
    spec.twist_degree = 2;
    HiggsBundleScenario T = build_scenario(spec);
    CHECK(degree(T, T.metric) == doctest::Approx(2.0).epsilon(1e-9));

    // corrupted phi: a non-holomorphic mode is rejected naming the invariant
    ScenarioSpec bad = catalog_scenario("NILPOTENT");
    bad.higgs["params"]["mode"] = 1;
    CHECK_THROWS_WITH_AS(build_scenario(bad), doctest::Contains("holomorphic"),
                         validation_error);

    // non-integrable deformation rejected on n = 2
    ScenarioSpec nonint = catalog_scenario("NILPOTENT_2D");
    nonint.deformation = {{"kind", "noncommuting_01"}, {"eps", 0.5}};
    nonint.higgs = {{"kind", "none"}, {"params", json::object()}};
    CHECK_THROWS_WITH_AS(build_scenario(nonint), doctest::Contains("integrable"),
                         validation_error);

    // the same deformation is fine on n = 1 (no (0,2) forms)
    ScenarioSpec onedim = catalog_scenario("DEFORMED");
    onedim.deformation = {{"kind", "noncommuting_01"}, {"eps", 0.5}};
    onedim.higgs = {{"kind", "none"}, {"params", json::object()}};
    CHECK_NOTHROW(build_scenario(onedim));
}

TEST_CASE("scenario spec round-trips through json") {
    ScenarioSpec spec = catalog_scenario("PERTURBED_2D");
    const json doc = spec.to_json();
    ScenarioSpec back = ScenarioSpec::from_json(doc);
    CHECK(back.to_json() == doc);
    CHECK(back.label == spec.label);
    CHECK(back.rank == spec.rank);

    // run seed folds into the field seed: different seeds, different metrics
    HiggsBundleScenario a = build_with_seed(spec, 1);
    HiggsBundleScenario b = build_with_seed(spec, 2);
    CHECK((a.metric.field() - b.metric.field()).max_norm() > 1e-6);
    HiggsBundleScenario a2 = build_with_seed(spec, 1);
    CHECK((a.metric.field() - a2.metric.field()).max_norm() == 0.0);
}

TEST_CASE("metric field machinery") {
    Lattice lat{1, 8, {1.0, 1.0}};
    Rng rng(5);
    EndoFormField A = random_hermitian_field(lat, 2, 2, 0.4, rng);
    MetricField h(hermitian_exp(A));
    CHECK(h.hermiticity_residual() < 1e-12);
    CHECK(h.min_eigenvalue() > 0.0);

    const EndoFormField inv = h.inverse();
    const EndoFormField s = h.sqrt();
    const EndoFormField is = h.inv_sqrt();
    double worst = 0.0;
    for (std::int64_t x = 0; x < h.field().num_points(); ++x) {
        worst = std::max(worst,
                         (h.field().matrix(0, x) * inv.matrix(0, x) - Mat::Identity(2, 2)).norm());
        worst = std::max(worst,
                         (s.matrix(0, x) * s.matrix(0, x) - h.field().matrix(0, x)).norm());
        worst = std::max(worst, (s.matrix(0, x) * is.matrix(0, x) - Mat::Identity(2, 2)).norm());
    }
    CHECK(worst < 1e-12);
}
