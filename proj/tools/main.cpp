// qflux command-line front end: builds channels, their stationary states and
// time reversals, emits entropy-production quasi-probability distributions,
// and runs the fluctuation-theorem verifiers.

#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "qflux/errors.hpp"
#include "qflux/version.hpp"
#include "qflux_cli/commands.hpp"

using namespace qflux;

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<double> theta;
    std::optional<uint64_t> shots;
    std::optional<uint64_t> seed;
    std::optional<std::string> out;
};

void attach_common(CLI::App *cmd, CommonFlags &flags) {
    cmd->add_option("--config", flags.config_path, "JSON experiment configuration");
    cmd->add_option("--theta", flags.theta, "reversal parameter for single-theta commands");
    cmd->add_option("--shots", flags.shots, "finite-statistics shot count (0 = exact)");
    cmd->add_option("--seed", flags.seed, "sampling seed");
    cmd->add_option("--out", flags.out, "output directory for CSV/JSON emission");
}

cli::ExperimentConfig resolve(const CommonFlags &flags) {
    cli::ExperimentConfig config = flags.config_path.empty()
                                       ? cli::default_config()
                                       : cli::load_config_file(flags.config_path);
    if (flags.theta) {
        config.theta_single = *flags.theta;
        config.theta_single_set = true;
    }
    if (flags.shots) {
        if (*flags.shots == 0)
            config.shots.reset();
        else
            config.shots = *flags.shots;
    }
    if (flags.seed)
        config.seed = *flags.seed;
    if (flags.out)
        config.out_dir = *flags.out;
    return config;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"quantum-channel fluctuation-theorem laboratory"};
    app.set_version_flag("--version", version_string);
    app.require_subcommand(1);

    CommonFlags flags;
    std::string direction = "forward";
    std::string which;

    CLI::App *stationary = app.add_subcommand("stationary", "stationary state of the channel");
    attach_common(stationary, flags);

    CLI::App *distribution =
        app.add_subcommand("distribution", "quasi-probability distribution emission");
    attach_common(distribution, flags);
    distribution->add_option("--direction", direction, "forward or reverse")
        ->check(CLI::IsMember({"forward", "reverse"}));

    CLI::App *verify = app.add_subcommand("verify", "fluctuation-theorem verifiers");
    attach_common(verify, flags);
    verify->add_option("--which", which, "crooks|integral|secondlaw|marginals|tpm")->required();

    CLI::App *sweep = app.add_subcommand("sweep-theta", "integral FT and reversal distance sweep");
    attach_common(sweep, flags);

    CLI::App *sample = app.add_subcommand("sample-tpm", "two-point measurement emulation");
    attach_common(sample, flags);

    CLI11_PARSE(app, argc, argv);

    try {
        const cli::ExperimentConfig config = resolve(flags);
        if (stationary->parsed())
            return cli::cmd_stationary(config, std::cout);
        if (distribution->parsed())
            return cli::cmd_distribution(config, direction, std::cout);
        if (verify->parsed())
            return cli::cmd_verify(config, which, std::cout);
        if (sweep->parsed())
            return cli::cmd_sweep_theta(config, std::cout);
        if (sample->parsed())
            return cli::cmd_sample_tpm(config, std::cout);
    } catch (const cli::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
