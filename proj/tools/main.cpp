#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "floq/config.hpp"
#include "floq/errors.hpp"
#include "floq/runner.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "path to the JSON config")
        ->required();
    cmd->add_option("--out", args.out_dir, "output directory (overrides output.dir)");
    cmd->add_option("--seed", args.seed, "driver seed (overrides flow.seed)")
        ->each([&](const std::string&) { args.seed_set = true; });
    cmd->add_option("--threads", args.threads, "worker count for sweeps and ensembles")
        ->check(CLI::PositiveNumber);
}

floq::RunConfig resolve(const CommonArgs& args) {
    floq::RunConfig cfg = floq::load_config(args.config_path);
    if (!args.out_dir.empty()) cfg.output.dir = args.out_dir;
    if (args.seed_set) cfg.flow.seed = args.seed;
    floq::validate_config(cfg);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"generalized principal Floquet subspaces, Lyapunov exponents, and "
                 "exponential separation for the scalar random delay equation"};
    app.require_subcommand(1);

    CommonArgs sim_args, bundle_args, verify_args, sweep_args;
    bool inject_fault = false;

    CLI::App* sim = app.add_subcommand(
        "simulate", "integrate one trajectory and write trajectory.csv");
    add_common(sim, sim_args);

    CLI::App* bundle = app.add_subcommand(
        "bundle", "compute the principal bundle report and write bundle.json");
    add_common(bundle, bundle_args);

    CLI::App* verify = app.add_subcommand(
        "verify", "run the identity battery and write battery.json");
    add_common(verify, verify_args);
    verify->add_flag("--inject-fault", inject_fault,
                     "negate one propagator entry so the battery must fail");

    CLI::App* sweep = app.add_subcommand(
        "sweep", "repeat the bundle computation over a sweep axis");
    add_common(sweep, sweep_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return floq::run_simulate(resolve(sim_args));
        if (bundle->parsed()) return floq::run_bundle(resolve(bundle_args));
        if (verify->parsed()) return floq::run_verify(resolve(verify_args), inject_fault);
        if (sweep->parsed()) return floq::run_sweep(resolve(sweep_args), sweep_args.threads);
    } catch (const floq::ConfigError& ex) {
        std::fprintf(stderr, "config error: %s\n", ex.what());
        return 2;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 3;
    }
    return 0;
}
