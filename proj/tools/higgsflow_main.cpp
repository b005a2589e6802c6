#include "higgsflow/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"higgsflow: Hermitian metrics on Higgs bundles over flat tori"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool have_seed = false;

    auto add_common = [&](CLI::App* cmd, bool config_required) {
        auto* copt = cmd->add_option("--config", config_path, "run configuration (JSON)");
        if (config_required) copt->required();
        cmd->add_option("--out", out_dir, "output directory override");
        cmd->add_option("--seed", seed, "seed override for randomized fields")
            ->each([&](const std::string&) { have_seed = true; });
    };

    CLI::App* verify = app.add_subcommand("verify", "run every applicable identity check");
    CLI::App* evaluate = app.add_subcommand("evaluate", "emit functional reports as CSV");
    CLI::App* flow = app.add_subcommand("flow", "run the descent flow, write trace + metric");
    CLI::App* variation = app.add_subcommand("variation", "analytic vs finite-difference rows");
    CLI::App* sweep = app.add_subcommand("sweep", "verify + evaluate + variation over the catalog");
    add_common(verify, true);
    add_common(evaluate, true);
    add_common(flow, true);
    add_common(variation, true);
    add_common(sweep, false);

    CLI11_PARSE(app, argc, argv);

    try {
        higgsflow::RunConfig cfg = config_path.empty()
                                       ? higgsflow::RunConfig::from_json(higgsflow::json::object())
                                       : higgsflow::RunConfig::from_file(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (have_seed) cfg.seed = seed;

        if (verify->parsed()) return higgsflow::cmd_verify(cfg);
        if (evaluate->parsed()) return higgsflow::cmd_evaluate(cfg);
        if (flow->parsed()) return higgsflow::cmd_flow(cfg);
        if (variation->parsed()) return higgsflow::cmd_variation(cfg);
        if (sweep->parsed()) return higgsflow::cmd_sweep(cfg);
    } catch (const higgsflow::validation_error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const higgsflow::json::exception& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
