#include "higgsflow/cli.hpp"

#include "higgsflow/flow.hpp"
#include "higgsflow/random_fields.hpp"
#include "higgsflow/snapshot.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

namespace higgsflow {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string sanitize(const std::string& label) {
    std::string out;
    for (char c : label) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    return out;
}

void write_atomic(const fs::path& path, const std::string& contents) {
    fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        out << contents;
        if (!out) throw std::runtime_error("write failed: " + path.string());
    }
    fs::rename(tmp, path);
}

std::uint64_t scenario_stream(const RunConfig& cfg, const std::string& label, std::uint64_t salt) {
    std::uint64_t h = cfg.seed ^ (salt * 0x9e3779b97f4a7c15ULL);
    for (char c : label) h = h * 1099511628211ULL + static_cast<unsigned char>(c);
    return h;
}

double tol_for(const RunConfig& cfg, const std::string& name, double fallback) {
    return cfg.verify_tolerances.value(name, fallback);
}

EndoFormField random_direction(const HiggsBundleScenario& S, const RunConfig& cfg,
                               std::uint64_t seed) {
    Rng rng(seed);
    const int max_mode =
        std::min(cfg.variation_max_mode, S.lattice().points_per_axis / 4);
    return random_hermitian_field(S.lattice(), S.rank, std::max(1, max_mode),
                                  cfg.variation_amplitude, rng);
}

}  // namespace

HiggsBundleScenario build_with_seed(const ScenarioSpec& spec, std::uint64_t run_seed) {
    ScenarioSpec patched = spec;
    const std::uint64_t base = patched.metric.value("seed", std::uint64_t{0});
    patched.metric["seed"] = base + run_seed;
    return build_scenario(patched);
}

std::vector<VerifyRow> verify_rows(const HiggsBundleScenario& S, const RunConfig& cfg) {
    const KahlerTorus& M = S.M();
    const int n = M.n();
    const MetricField& h = S.metric;
    std::vector<VerifyRow> rows;
    auto push = [&](const std::string& name, double residual, double tol) {
        rows.push_back({S.label, name, residual, tol_for(cfg, name, tol)});
    };

    push("volume_quadrature", M.volume_quadrature_residual(), 1e-12);

    const double deg = degree(S, h);
    push("twist_degree", std::abs(deg - S.twist.degree), S.tol.twist_degree);

    push("holomorphy", dbar_E(S.higgs.phi, S).max_norm(), S.tol.holomorphy);

    const CurvatureBundle cb = hs_curvature(h, S);
    push("r11_minus", cb.residuals.r11_minus, S.tol.holomorphy);
    push("r11_hermiticity", cb.residuals.r11_hermiticity, 1e-10);
    push("K_hermiticity", cb.residuals.K_hermiticity, 1e-10);
    push("mean_curvature_identity", verify_mean_curvature_identity(cb, S), 1e-8);

    const EndoFormField phi_star = adjoint_form(S.higgs.phi, h.field());
    push("phi_star_wedge", wedge(phi_star, phi_star).max_norm(), 1e-10);
    push("bracket_trace_square",
         trace_field(wedge(cb.higgs_bracket, cb.higgs_bracket)).max_norm(), 1e-12);

    const FunctionalReport rep = functional_report(S, h);
    for (const auto& check : rep.checks)
        push(check.name, check.residual, check.tolerance);

    if (n == 2) {
        push("trace_square_lemma", verify_trace_square_lemma(S, h), 1e-8);
        const IJDecomposition dec = i_minus_j_decomposition(S, h);
        push("i_minus_j_decomposition", dec.residual(), 1e-8);
        if (S.higgs.phi.max_norm() == 0.0)
            push("higgs_coupling_vanishes", std::abs(dec.higgs_coupling), 1e-12);
    }

    // Metric independence of the degree under a seeded replacement metric.
    {
        Rng rng(scenario_stream(cfg, S.label, 101));
        const int mm = std::max(1, std::min(2, S.lattice().points_per_axis / 4));
        const double amp = n == 1 ? 0.1 : 0.02;
        MetricField other(hermitian_exp(random_hermitian_field(S.lattice(), S.rank, mm, amp, rng)));
        push("degree_metric_independence", std::abs(degree(S, other) - deg), 1e-8);
    }

    // Scale invariance of the curvature data under h -> 2h.
    {
        EndoFormField h2 = h.field();
        h2 *= cplx(2.0, 0.0);
        const CurvatureBundle cb2 = hs_curvature(MetricField(h2), S);
        double diff = (cb2.r11 - cb.r11).max_norm();
        diff = std::max(diff, (cb2.mean_curvature - cb.mean_curvature).max_norm());
        push("scale_invariance", diff, 1e-12);
    }

    // Sampled variation identities.
    {
        const std::uint64_t seed = scenario_stream(cfg, S.label, 202);
        const EndoFormField k = random_direction(S, cfg, seed);
        MetricPath path(h, k, MetricPath::Kind::exponential);

        const double analytic = analytic_first_variation(S, path);
        const double fd = fd_first_variation(S, path);
        push("first_variation", std::abs(analytic - fd) / std::max(1.0, std::abs(fd)), 1e-5);

        const MeanCurvatureVariation mv = variation_of_mean_curvature(S, path);
        push("mean_curvature_variation", mv.residual_rel, 1e-5);

        push("adjoint_variation", verify_adjoint_variation(S, path), 1e-5);

        const InnerProductLemma lemma = verify_inner_product_lemma(S, h, path.endomorphism());
        push("inner_product_lemma", lemma.residual, 1e-8);
        push("inner_product_lemma_higgs_part", lemma.sub_residual, 1e-8);
    }

    // v = I is a flat direction: both variation routes must vanish.
    {
        MetricPath path(h, h.field(), MetricPath::Kind::exponential);
        push("first_variation_scale_direction",
             std::max(std::abs(analytic_first_variation(S, path)),
                      std::abs(fd_first_variation(S, path))),
             1e-9);
    }

    const ElResidual el = euler_lagrange_residual(S, h);
    push("el_halves_agree", std::abs(el.prime - el.second), 1e-10 * std::max(1.0, el.total));

    return rows;
}

namespace {

int run_scenarios(const RunConfig& cfg,
                  const std::function<int(const HiggsBundleScenario&, const ScenarioSpec&)>& fn) {
    int worst = 0;
    for (const auto& spec : cfg.scenarios) {
        HiggsBundleScenario S;
        try {
            S = build_with_seed(spec, cfg.seed);
        } catch (const validation_error& e) {
            std::cerr << "invalid scenario '" << spec.label << "': " << e.what() << "\n";
            return 2;
        }
        worst = std::max(worst, fn(S, spec));
    }
    return worst;
}

}  // namespace

int cmd_verify(const RunConfig& cfg) {
    cfg.apply_modes();
    std::string csv = "scenario,identity,residual,tolerance,status\n";
    int exit_code = run_scenarios(cfg, [&](const HiggsBundleScenario& S, const ScenarioSpec&) {
        int rc = 0;
        for (const auto& row : verify_rows(S, cfg)) {
            csv += row.scenario + "," + row.identity + "," + fmt(row.residual) + "," +
                   fmt(row.tolerance) + "," + (row.pass() ? "pass" : "FAIL") + "\n";
            if (!row.pass()) {
                std::cerr << "verify: " << row.scenario << " " << row.identity
                          << " residual=" << fmt(row.residual) << " tol=" << fmt(row.tolerance)
                          << "\n";
                rc = 1;
            }
        }
        return rc;
    });
    if (exit_code == 2) return 2;
    write_atomic(fs::path(cfg.out_dir) / "verify.csv", csv);
    std::cout << "verify: " << (exit_code == 0 ? "all identities within tolerance" : "FAILURES")
              << "\n";
    return exit_code;
}

int cmd_evaluate(const RunConfig& cfg) {
    cfg.apply_modes();
    std::string csv = "label,n,rank,deg,Vol,c,C_bound,J,I,gap,hym_residual,el_residual\n";
    int exit_code = run_scenarios(cfg, [&](const HiggsBundleScenario& S, const ScenarioSpec&) {
        const FunctionalReport rep = functional_report(S, S.metric);
        csv += rep.label + "," + std::to_string(rep.n) + "," + std::to_string(rep.rank) + "," +
               fmt(rep.deg) + "," + fmt(rep.volume) + "," + fmt(rep.c) + "," + fmt(rep.C_bound) +
               "," + fmt(rep.J) + "," + fmt(rep.I) + "," + fmt(rep.gap_J_minus_C) + "," +
               fmt(rep.hym_residual) + "," + fmt(rep.el_residual) + "\n";
        return rep.all_ok() ? 0 : 1;
    });
    if (exit_code == 2) return 2;
    write_atomic(fs::path(cfg.out_dir) / "evaluate.csv", csv);
    return exit_code;
}

int cmd_flow(const RunConfig& cfg) {
    cfg.apply_modes();
    FlowParams params;
    params.max_steps = cfg.flow_max_steps;
    params.step0 = cfg.flow_step0;
    params.shrink = cfg.flow_shrink;
    params.tol = cfg.flow_tol;
    params.filter_modes = cfg.flow_filter_modes;
    return run_scenarios(cfg, [&](const HiggsBundleScenario& S, const ScenarioSpec&) {
        auto [h_final, trace] = descend_J(S, S.metric, params);
        std::string csv = "step,t,J,hym_residual,el_residual,step_size,backtracks\n";
        for (const auto& st : trace.steps)
            csv += std::to_string(st.step) + "," + fmt(st.t) + "," + fmt(st.J) + "," +
                   fmt(st.hym_residual) + "," + fmt(st.el_residual) + "," + fmt(st.step_size) +
                   "," + std::to_string(st.backtracks) + "\n";
        const std::string stem = sanitize(S.label);
        write_atomic(fs::path(cfg.out_dir) / ("flow_" + stem + ".csv"), csv);
        save_metric((fs::path(cfg.out_dir) / ("metric_" + stem + ".hfms")).string(), h_final);

        const double J0 = trace.steps.front().J;
        const double J1 = trace.steps.back().J;
        const bool decreased = J1 < J0 - 1e-14 * std::max(1.0, J0) || trace.steps.size() == 1;
        if (!trace.converged && trace.stalled && !decreased) {
            std::cerr << "flow: stalled without decrease on '" << S.label << "'\n";
            return 1;
        }
        return 0;
    });
}

int cmd_variation(const RunConfig& cfg) {
    cfg.apply_modes();
    std::string csv = "scenario,seed,analytic,fd,rel_error\n";
    int exit_code =
        run_scenarios(cfg, [&](const HiggsBundleScenario& S, const ScenarioSpec& spec) {
            int rc = 0;
            for (int i = 0; i < cfg.variation_directions; ++i) {
                const std::uint64_t seed = scenario_stream(cfg, spec.label, 1000 + i);
                const EndoFormField k = random_direction(S, cfg, seed);
                MetricPath path(S.metric, k, MetricPath::Kind::exponential);
                const double analytic = analytic_first_variation(S, path);
                const double fd = fd_first_variation(S, path);
                const double rel = std::abs(analytic - fd) / std::max(1.0, std::abs(fd));
                csv += S.label + "," + std::to_string(seed) + "," + fmt(analytic) + "," + fmt(fd) +
                       "," + fmt(rel) + "\n";
                if (rel >= cfg.variation_rel_tol) rc = 1;
            }
            return rc;
        });
    if (exit_code == 2) return 2;
    write_atomic(fs::path(cfg.out_dir) / "variation.csv", csv);
    return exit_code;
}

int cmd_sweep(const RunConfig& cfg) {
    const int a = cmd_verify(cfg);
    if (a == 2) return 2;
    const int b = cmd_evaluate(cfg);
    if (b == 2) return 2;
    const int c = cmd_variation(cfg);
    return std::max({a, b, c});
}

}  // namespace higgsflow
