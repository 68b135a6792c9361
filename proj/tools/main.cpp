#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"

namespace {

void add_common_options(CLI::App* cmd, qseq::cli::RunConfig& config) {
    cmd->add_option("--seed", config.seed, "PRNG seed");
    cmd->add_option("--n", config.n, "sequence length N");
    cmd->add_option("--trials", config.trials, "number of independent trials");
    cmd->add_option("--strategy", config.strategy,
                    "passive | intercept-resend-uniform | intercept-resend-family0 | "
                    "intercept-resend-family1 | intercept-measure-resend | reflect-to-alice | "
                    "reflect-to-bob");
    cmd->add_option("--policy", config.policy, "analyzer | expected-state");
    cmd->add_option("--out", config.out, "write records to this file instead of stdout");
    cmd->add_option("--format", config.format, "jsonl | csv");
    cmd->add_option("--bits", config.bits, "bits per session");
    cmd->add_option("--min-designated", config.min_designated,
                    "designated-position floor per pair (default: clamp(n/4, 1, 8))");
    cmd->add_option("--max-retries", config.max_retries, "retries per bit before aborting");
    cmd->add_option("--store-size", config.store_size,
                    "pre-shared pairs per session (default: bits*(max_retries+1))");
    cmd->add_option("--threads", config.threads, "worker threads (results are independent)");
}

}  // namespace

int main(int argc, char** argv) {
    qseq::cli::RunConfig config;

    // The config file seeds the defaults; explicit flags override it.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                qseq::cli::apply_config_file(config, argv[i + 1]);
            } catch (const qseq::cli::UsageError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 2;
            }
        }
    }

    CLI::App app{"Simulator and analytic verifier for sequence-coded quantum authentication"};
    app.require_subcommand(1);
    std::string config_path;

    CLI::App* analytics =
        app.add_subcommand("analytics", "recompute the closed-form protocol statistics");
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo protocol sessions");
    CLI::App* sweep = app.add_subcommand("sweep", "tabulate a quantity over a parameter range");
    CLI::App* scenario = app.add_subcommand("scenario", "scripted impersonation attacks");

    for (CLI::App* cmd : {analytics, simulate, sweep, scenario}) {
        add_common_options(cmd, config);
        cmd->add_option("--config", config_path, "flat JSON config file (flags override)");
    }

    simulate->add_option("--codes-in", config.codes_in,
                         "run one session over code pairs imported from this file");
    simulate->add_option("--codes-out", config.codes_out,
                         "export the first trial's generated code store");
    simulate->add_option("--transcript", config.transcript_out,
                         "export the first trial's session transcript");

    sweep->add_option("--variable", config.variable, "n_checks | k | N");
    sweep->add_option("--from", config.from, "range start (inclusive)");
    sweep->add_option("--to", config.to, "range end (inclusive)");
    sweep->add_option("--step", config.step, "range step");
    sweep->add_option("--leakage-n", config.leakage_n, "sequence length for k sweeps");
    sweep->add_option("--leakage-k", config.leakage_k, "copies for N sweeps");

    scenario->add_option("--name", config.scenario,
                         "reflect-to-alice | reflect-to-bob | same-sequence-echo");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    const bool to_file = !config.out.empty();
    try {
        // Records to stdout by default; the summary moves to stderr so the
        // record stream stays machine-readable.
        return qseq::cli::run_command(command, config, std::cout,
                                      to_file ? std::cout : std::cerr);
    } catch (const qseq::cli::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
