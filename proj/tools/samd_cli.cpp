#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "samd/commands.hpp"
#include "samd/config.hpp"
#include "samd/errors.hpp"
#include "samd/verify.hpp"

int main(int argc, char** argv) {
    CLI::App app{"samd: continuous-time (stochastic, accelerated) mirror descent simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    int threads = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "scenario config (flat key = value); defaults if omitted")
            ->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
        sub->add_option("--seed", seed, "base seed (overrides ensemble.seed)");
        sub->add_option("--threads", threads, "worker threads, 0 = hardware concurrency")->check(CLI::NonNegativeNumber);
    };

    auto* simulate = app.add_subcommand("simulate", "one trajectory to trajectory.csv");
    auto* ensemble = app.add_subcommand("ensemble", "seeded ensemble statistics and rate fit");
    auto* rates = app.add_subcommand("rates", "sweep rate exponents over the configured grid");
    auto* compare = app.add_subcommand("compare", "paired SMD and SAMD ensembles per sigma0");
    for (auto* sub : {simulate, ensemble, rates, compare}) add_common(sub);

    auto* verify = app.add_subcommand("verify", "run a named check suite; exit 0 iff every check passes");
    std::string suite = "acceptance";
    std::string suite_help = "one of:";
    for (const auto& n : samd::verify_suite_names()) suite_help += " " + n;
    verify->add_option("suite", suite, suite_help);
    verify->add_option("--threads", threads, "worker threads, 0 = hardware concurrency")->check(CLI::NonNegativeNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) {
            const auto checks = samd::run_verify(suite, threads);
            return samd::print_checks(std::cout, checks) ? 0 : 1;
        }

        samd::ScenarioConfig config =
            config_path.empty() ? samd::ScenarioConfig{} : samd::load_config(config_path);
        if (seed) config.seed = *seed;
        if (!out_dir.empty()) config.out_dir = out_dir;
        const samd::RunContext ctx{config.out_dir, threads};

        if (simulate->parsed()) samd::cmd_simulate(config, ctx, std::cout);
        if (ensemble->parsed()) samd::cmd_ensemble(config, ctx, std::cout);
        if (rates->parsed()) samd::cmd_rates(config, ctx, std::cout);
        if (compare->parsed()) samd::cmd_compare(config, ctx, std::cout);
    } catch (const samd::Error& e) {
        std::cerr << "samd: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
