// carbonsim — scenario runner for the climate-economy pricing analytics.
//
//   carbonsim run <scenario.cfg> [--key value ...]
//   carbonsim calibrate <scenario.cfg> [--key value ...]
//   carbonsim validate <scenario.cfg> [--key value ...]
//
// Any config key can be overridden with a dotted --section.key value pair,
// e.g. --model.time_horizon_years 300. Convenience flags: --output-dir DIR,
// --horizons LIST, --skip-rates, --skip-prices, --threads N.

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "carbon/config.hpp"
#include "carbon/errors.hpp"
#include "carbon/report.hpp"

namespace {

void usage(std::ostream& out) {
    out << "usage: carbonsim <run|calibrate|validate> <scenario.cfg> [--key value ...]\n"
        << "       carbonsim --help\n\n"
        << "subcommands:\n"
        << "  run        calibrate or load a policy, run the analytics, write the CSV bundle\n"
        << "  calibrate  calibrate the abatement policy and write policy.csv only\n"
        << "  validate   check the configuration and print violations\n\n"
        << "overrides: any config key as --section.key value (e.g. --model.numeraire_rate 0.02)\n"
        << "flags:     --output-dir DIR | --horizons a,b,c | --skip-rates | --skip-prices |\n"
        << "           --threads N\n";
}

struct CommandLine {
    std::string subcommand;
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
};

CommandLine parse_args(int argc, char** argv) {
    CommandLine cmd;
    std::vector<std::string> args(argv + 1, argv + argc);
    std::size_t i = 0;
    for (; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--help" || a == "-h") {
            usage(std::cout);
            std::exit(carbon::exit_ok);
        }
        if (a.rfind("--", 0) == 0) {
            std::string key = a.substr(2);
            if (key == "skip-rates") {
                cmd.overrides.emplace_back("analytics.rates", "false");
                continue;
            }
            if (key == "skip-prices") {
                cmd.overrides.emplace_back("analytics.prices", "false");
                continue;
            }
            if (i + 1 >= args.size())
                throw carbon::ConfigError("flag --" + key + " expects a value");
            const std::string value = args[++i];
            if (key == "output-dir")
                cmd.overrides.emplace_back("output.directory", value);
            else if (key == "horizons")
                cmd.overrides.emplace_back("analytics.horizons", value);
            else if (key == "threads")
                cmd.overrides.emplace_back("analytics.threads", value);
            else
                cmd.overrides.emplace_back(key, value);
            continue;
        }
        if (cmd.subcommand.empty())
            cmd.subcommand = a;
        else if (cmd.config_path.empty())
            cmd.config_path = a;
        else
            throw carbon::ConfigError("unexpected argument: " + a);
    }
    if (cmd.subcommand.empty())
        throw carbon::ConfigError("missing subcommand (run, calibrate, or validate)");
    if (cmd.subcommand != "run" && cmd.subcommand != "calibrate" && cmd.subcommand != "validate")
        throw carbon::ConfigError("unknown subcommand: " + cmd.subcommand);
    if (cmd.config_path.empty()) throw carbon::ConfigError("missing scenario config path");
    return cmd;
}

int do_validate(const carbon::cli::ScenarioConfig& config) {
    const std::vector<std::string> violations = carbon::cli::validate_config(config);
    if (violations.empty()) {
        std::cout << "configuration ok\n";
        return carbon::exit_ok;
    }
    for (const std::string& v : violations) std::cout << "violation: " << v << "\n";
    return carbon::exit_config;
}

int do_calibrate(const carbon::cli::ScenarioConfig& config) {
    const std::vector<std::string> violations = carbon::cli::validate_config(config);
    if (!violations.empty()) {
        std::string msg = "configuration is invalid:";
        for (const std::string& s : violations) msg += "\n  - " + s;
        throw carbon::ConfigError(msg);
    }
    const carbon::dice::Simulator sim(config.parameters);
    const carbon::dice::AbatementPolicy initial = carbon::dice::AbatementPolicy::ramp(
        sim.periods(), sim.derived().dt, config.parameters.emissions.mu0,
        config.parameters.max_abatement, 150.0);
    std::cout << "calibrating abatement policy (" << sim.periods() << " periods)...\n";
    carbon::optimizer::Result result = carbon::optimizer::calibrate(sim, initial, config.optimizer);
    const std::filesystem::path out = config.output_dir / "policy.csv";
    carbon::cli::write_policy_csv(out, result.policy, sim.derived().dt,
                                  config.parameters.start_year);
    std::cout << "iterations: " << result.certificate.iterations << "\n"
              << "converged: " << (result.certificate.converged ? "yes" : "no") << "\n"
              << "projected gradient max-norm: "
              << carbon::cli::format_number(result.certificate.projected_gradient_norm) << "\n"
              << "welfare: " << carbon::cli::format_number(result.certificate.welfare_initial)
              << " -> " << carbon::cli::format_number(result.certificate.welfare_final) << "\n"
              << "kkt sign conditions: " << (result.certificate.kkt_ok ? "ok" : "violated") << "\n"
              << "policy written to " << out.string() << "\n";
    if (!result.certificate.converged) return carbon::exit_calibration;
    return carbon::exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        const CommandLine cmd = parse_args(argc, argv);
        const carbon::cli::ScenarioConfig config =
            carbon::cli::load_scenario(cmd.config_path, cmd.overrides);
        if (cmd.subcommand == "validate") return do_validate(config);
        if (cmd.subcommand == "calibrate") return do_calibrate(config);
        return carbon::cli::run_scenario(config, std::cout);
    } catch (const carbon::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
