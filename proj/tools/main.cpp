#include <CLI11.hpp>

#include <iostream>

#include "gou/cli.hpp"
#include "gou/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Cramer-type ruin asymptotics for generalised "
                 "Ornstein-Uhlenbeck processes"};
    app.set_version_flag("--version", gou::kToolVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    bool force = false;
    int workers = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration file")
            ->required();
        sub->add_flag("--force", force,
                      "run even when Conditions A/B/C are not all verified");
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--workers", workers,
                        "worker threads (0 = hardware); results do not depend "
                        "on this");
    };

    const char* commands[] = {"analyze", "simulate", "ruin",
                              "ldp",     "constant", "verify"};
    const char* descriptions[] = {
        "Lundberg coefficient, rate function, condition report",
        "dump one simulated path",
        "Monte Carlo ruin probability curve",
        "finite-time ruin law at thresholds x ln z",
        "Cramer constant estimate",
        "full pipeline with pass/fail report"};
    for (std::size_t i = 0; i < 6; ++i) add_common(app.add_subcommand(commands[i], descriptions[i]));

    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        gou::RunConfig cfg = gou::parse_config_file(config_path, force);
        cfg.workers = workers;
        return gou::run_command(command, cfg, force, out_dir);
    } catch (const gou::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return gou::kExitConfig;
    } catch (const gou::ValidationError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return e.code() == gou::ErrorCode::ConditionAViolation
                   ? gou::kExitConditionGate
                   : gou::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return gou::kExitConfig;
    }
}
