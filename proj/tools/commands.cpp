#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <vector>

#include "json.hpp"
#include "qseq/analysis.hpp"
#include "qseq/scenarios.hpp"
#include "qseq/serialize.hpp"

namespace qseq::cli {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Display rounding for the human summary; record files keep full precision.
std::string fmt_display(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Fixed CSV header shared by every command's mirror file.
constexpr const char* kCsvHeader = "kind,name,value,exact,estimate,ci_lo,ci_hi,pass";

struct Record {
    std::string kind;
    std::string name;
    double value = std::nan("");
    double exact = std::nan("");
    double estimate = std::nan("");
    double ci_lo = std::nan("");
    double ci_hi = std::nan("");
    int pass = -1;  // -1: not a check
    json extra;     // merged into the JSON object

    json to_json() const {
        json j;
        j["kind"] = kind;
        if (!name.empty()) j["name"] = name;
        if (!std::isnan(value)) j["value"] = value;
        if (!std::isnan(exact)) j["exact"] = exact;
        if (!std::isnan(estimate)) j["estimate"] = estimate;
        if (!std::isnan(ci_lo)) j["ci95"] = json::array({ci_lo, ci_hi});
        if (pass >= 0) j["pass"] = pass == 1;
        for (const auto& [key, val] : extra.items()) j[key] = val;
        return j;
    }

    std::string to_csv() const {
        auto cell = [](double v) { return std::isnan(v) ? std::string() : fmt(v); };
        return kind + "," + name + "," + cell(value) + "," + cell(exact) + "," +
               cell(estimate) + "," + cell(ci_lo) + "," + cell(ci_hi) + "," +
               (pass < 0 ? std::string() : std::string(pass == 1 ? "true" : "false"));
    }
};

class RecordWriter {
public:
    RecordWriter(std::ostream& out, const std::string& format)
        : out_(out), csv_(format == "csv") {
        if (csv_) out_ << kCsvHeader << '\n';
    }

    void write(const Record& record) {
        if (csv_) {
            out_ << record.to_csv() << '\n';
        } else {
            out_ << record.to_json().dump() << '\n';
        }
    }

    void write_json_only(const json& j) {
        if (!csv_) out_ << j.dump() << '\n';
    }

private:
    std::ostream& out_;
    bool csv_;
};

struct Check {
    std::string name;
    double expected;
    double actual;
    double tol;
    bool pass;
};

Check make_check(std::string name, double expected, double actual, double tol) {
    const bool pass = std::abs(expected - actual) <= tol;
    return {std::move(name), expected, actual, tol, pass};
}

json params_json(const RunConfig& config) {
    json p;
    p["seed"] = config.seed;
    p["n"] = config.n;
    p["trials"] = config.trials;
    p["strategy"] = config.strategy;
    p["policy"] = config.policy;
    p["min_designated"] = resolved_min_designated(config);
    p["max_retries"] = config.max_retries;
    return p;
}

}  // namespace

int cmd_analytics(const RunConfig& config, std::ostream& records, std::ostream& summary,
                  const StatePrepConvention& conv) {
    std::vector<Check> checks;

    // Density matrices of the two families against the closed form.
    const DensityMatrix rho0 = family_density_matrix(0, conv);
    const DensityMatrix rho1 = family_density_matrix(1, conv);
    const double expected_diag[4] = {0.5, 0.0, 0.25, 0.25};
    double rho_dev = 0.0;
    double family_dev = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const double want = i == j ? expected_diag[i] : 0.0;
            rho_dev = std::max(rho_dev, std::abs(rho0.at(i, j) - Amplitude{want, 0.0}));
            family_dev = std::max(family_dev, std::abs(rho0.at(i, j) - rho1.at(i, j)));
        }
    }
    checks.push_back(make_check("density-matrix-closed-form", 0.0, rho_dev, 1e-12));
    checks.push_back(make_check("density-matrix-families-equal", 0.0, family_dev, 1e-12));
    checks.push_back(
        make_check("trace-distance-families", 0.0, trace_distance(rho0, rho1), 1e-12));

    // Analyzer statistics on the eight prepared states.
    const Projector pa = projector_pa();
    const Projector pc = projector_pc();
    const struct {
        const char* name;
        const Projector& p;
        int family;
        Coin c1;
        double expected;
    } born_rows[] = {
        {"born-pa-d", pa, 1, Coin::Tails, 0.25},  {"born-pa-b", pa, 0, Coin::Tails, 0.0},
        {"born-pc-b", pc, 0, Coin::Tails, 0.25},  {"born-pc-d", pc, 1, Coin::Tails, 0.0},
        {"born-pa-a", pa, 0, Coin::Heads, 0.5},   {"born-pc-c", pc, 1, Coin::Heads, 0.5},
    };
    for (const auto& row : born_rows) {
        for (Coin c2 : {Coin::Heads, Coin::Tails}) {
            const StateVector psi = prepare_state(row.family, {row.c1, c2}, conv);
            const std::string suffix = c2 == Coin::Heads ? "+" : "-";
            checks.push_back(make_check(std::string(row.name) + suffix, row.expected,
                                        born_probability(row.p, psi), 1e-12));
        }
    }

    // Same-letter orthogonality.
    for (int family = 0; family < 2; ++family) {
        for (Coin c1 : {Coin::Heads, Coin::Tails}) {
            const StateVector plus = prepare_state(family, {c1, Coin::Heads}, conv);
            const StateVector minus = prepare_state(family, {c1, Coin::Tails}, conv);
            const char* letter = family == 0 ? (c1 == Coin::Heads ? "a" : "b")
                                             : (c1 == Coin::Heads ? "c" : "d");
            checks.push_back(make_check(std::string("orthogonal-") + letter, 0.0,
                                        std::abs(inner(plus, minus)), 1e-12));
        }
    }

    // Identification and intercept-resend rates from the enumeration oracle.
    checks.push_back(make_check("identification-probability-honest", 0.125,
                                exact_identification_probability({StrategyKind::Passive}, conv),
                                1e-15));
    checks.push_back(make_check(
        "intercept-resend-error-designated", 0.125,
        exact_error_probability({StrategyKind::InterceptResendUniform},
                                {VerifyMode::Analyzer, true}, PositionKind::Designated, conv),
        1e-15));

    // Undetected-eavesdropping value at 100 checks against plain repeated
    // multiplication, plus its order of magnitude.
    double product = 1.0;
    for (int i = 0; i < 100; ++i) product *= 7.0 / 8.0;
    const double p_ne = undetected_probability(0.125, 100);
    checks.push_back(make_check("undetected-100-checks", product, p_ne, product * 1e-10));
    Check magnitude{"undetected-100-magnitude", 1e-6, p_ne, 0.0,
                    p_ne > 1e-7 && p_ne < 1e-5};
    checks.push_back(magnitude);

    checks.push_back(make_check("helstrom-single-copy", 0.5,
                                helstrom_bound(trace_distance(rho0, rho1)), 1e-12));
    checks.push_back(make_check("reflect-detection-16-case", 0.625,
                                exact_reflect_detection_probability(conv), 1e-12));

    // Reuse leakage: blind at one use, leaking from two on.
    const LeakageReport k1 = reuse_leakage(1, 1, conv);
    const LeakageReport k2 = reuse_leakage(1, 2, conv);
    checks.push_back(make_check("reuse-leakage-single-use", 0.0, k1.trace_distance, 1e-9));
    Check leak{"reuse-leakage-two-uses-positive", 0.0, k2.trace_distance, 0.0,
               k2.trace_distance > 1e-9};
    checks.push_back(leak);

    RecordWriter writer(records, config.format);
    bool all_pass = true;
    for (const Check& check : checks) {
        all_pass = all_pass && check.pass;
        Record record;
        record.kind = "analytic_check";
        record.name = check.name;
        record.exact = check.expected;
        record.estimate = check.actual;
        record.pass = check.pass ? 1 : 0;
        record.extra["tol"] = check.tol;
        writer.write(record);
    }

    json matrix = json::array();
    for (std::size_t i = 0; i < 4; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < 4; ++j) row.push_back(rho0.at(i, j).real());
        matrix.push_back(row);
    }
    writer.write_json_only({{"kind", "density_matrix"}, {"entries", matrix}});

    summary << "analytic checks: " << checks.size() << "\n";
    summary << "eavesdropper density matrix (both families):\n";
    for (std::size_t i = 0; i < 4; ++i) {
        summary << " ";
        for (std::size_t j = 0; j < 4; ++j) {
            summary << " " << fmt_display(rho0.at(i, j).real());
        }
        summary << "\n";
    }
    for (const Check& check : checks) {
        summary << (check.pass ? "  pass  " : "  FAIL  ") << check.name
                << "  expected=" << fmt_display(check.expected)
                << "  actual=" << fmt_display(check.actual) << "\n";
    }
    summary << (all_pass ? "all analytic checks passed\n" : "ANALYTIC CHECK FAILURE\n");
    return all_pass ? 0 : 1;
}

int cmd_simulate(const RunConfig& config, std::ostream& records, std::ostream& summary) {
    RecordWriter writer(records, config.format);

    if (!config.codes_in.empty()) {
        // Single deterministic session over an imported store; the transcript
        // is the record stream.
        std::ifstream in(config.codes_in);
        if (!in) throw UsageError("cannot open codes file: " + config.codes_in);
        std::vector<CodePair> pairs;
        try {
            pairs = read_code_pairs(in);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        if (pairs.empty()) throw UsageError("codes file holds no pairs");
        for (const CodePair& pair : pairs) {
            if (pair.length() != config.n) {
                throw UsageError("codes file pair length does not match --n");
            }
        }
        CodeStore store(std::move(pairs));
        Rng session_rng = Rng::stream(config.seed, 0);
        Rng eve_rng = Rng::stream(config.seed, 1);
        AdversaryStrategy eve(parse_strategy(config.strategy), std::move(eve_rng));
        std::vector<int> bits(config.bits);
        for (int& b : bits) b = session_rng.coin() ? 1 : 0;
        const Transcript transcript =
            run_session(bits, store, eve, parse_policy(config.policy), session_rng,
                        config.max_retries);
        write_transcript(records, transcript);
        summary << "session over " << store.size() << " imported pairs: "
                << transcript.trials.size() << " attempts"
                << (transcript.aborted ? " (aborted: " + transcript.abort_reason + ")" : "")
                << "\n";
        return 0;
    }

    MonteCarloConfig mc;
    mc.trials = config.trials;
    mc.n = config.n;
    mc.bits_per_session = config.bits;
    mc.strategy = parse_strategy(config.strategy);
    mc.policy = parse_policy(config.policy);
    mc.seed = config.seed;
    mc.min_designated = resolved_min_designated(config);
    mc.max_retries = config.max_retries;
    mc.store_size = resolved_store_size(config);
    mc.threads = config.threads;

    if (!config.codes_out.empty()) {
        // The store trial 0 uses, for reproduction or import elsewhere.
        Rng code_rng = Rng::stream(mc.seed, 2);
        std::vector<CodePair> pairs;
        for (std::size_t i = 0; i < mc.store_size; ++i) {
            pairs.push_back(generate_code_pair(code_rng, mc.n, mc.min_designated, i));
        }
        std::ofstream out(config.codes_out);
        if (!out) throw UsageError("cannot open codes output file: " + config.codes_out);
        write_code_pairs(out, pairs);
    }

    if (!config.transcript_out.empty()) {
        std::ofstream out(config.transcript_out, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw UsageError("cannot open transcript output file: " + config.transcript_out);
        }
        write_transcript(out, replay_trial(mc, 0));
    }

    const DetectionReport report = monte_carlo(mc);

    for (const DetectionRow& row : report.rows) {
        Record record;
        record.kind = "detection";
        record.name =
            row.kind == PositionKind::Designated ? "designated" : "non-designated";
        record.exact = row.exact;
        record.estimate = row.estimate;
        record.ci_lo = row.ci95.lo;
        record.ci_hi = row.ci95.hi;
        record.extra["params"] = params_json(config);
        record.extra["checks"] = row.checks;
        record.extra["errors"] = row.errors;
        writer.write(record);
    }

    const OutcomeHistogram& h = report.histogram;
    Record hist;
    hist.kind = "histogram";
    hist.extra["params"] = params_json(config);
    hist.extra["sessions"] = h.sessions;
    hist.extra["attempts"] = h.attempts;
    hist.extra["delivered"] = h.delivered;
    hist.extra["error_by_bob"] = h.error_by_bob;
    hist.extra["error_by_alice"] = h.error_by_alice;
    hist.extra["inconclusive"] = h.inconclusive;
    hist.extra["sessions_aborted"] = h.sessions_aborted;
    hist.extra["identified_correct"] = h.identified_correct;
    hist.extra["identified_wrong"] = h.identified_wrong;
    hist.extra["bits_delivered"] = h.bits_delivered;
    writer.write(hist);

    summary << "simulate: strategy=" << report.strategy << " policy=" << report.policy
            << " sessions=" << h.sessions << " attempts=" << h.attempts << "\n";
    for (const DetectionRow& row : report.rows) {
        summary << "  "
                << (row.kind == PositionKind::Designated ? "designated" : "non-designated")
                << " checks=" << row.checks << " errors=" << row.errors
                << " estimate=" << fmt_display(row.estimate);
        if (!std::isnan(row.exact)) summary << " exact=" << fmt_display(row.exact);
        summary << " ci95=[" << fmt_display(row.ci95.lo) << "," << fmt_display(row.ci95.hi)
                << "]\n";
    }
    return 0;
}

int cmd_sweep(const RunConfig& config, std::ostream& records, std::ostream& summary) {
    RecordWriter writer(records, config.format);

    if (config.variable == "n_checks") {
        const StrategySpec strategy = parse_strategy(config.strategy);
        const VerificationPolicy policy{VerifyMode::Analyzer, true};
        double p_exact = 0.0;
        if (strategy.kind != StrategyKind::Passive) {
            try {
                p_exact = exact_error_probability(strategy, policy, PositionKind::Designated);
            } catch (const std::invalid_argument& e) {
                throw UsageError(std::string("sweep needs an enumerable strategy: ") + e.what());
            }
        }

        // One Monte Carlo run estimates p_e; the empirical column applies the
        // same exponent to the estimate.
        double p_emp = 0.0;
        if (strategy.kind != StrategyKind::Passive) {
            MonteCarloConfig mc;
            mc.trials = config.trials;
            mc.n = config.n;
            mc.strategy = strategy;
            mc.policy = policy;
            mc.seed = config.seed;
            mc.min_designated = resolved_min_designated(config);
            mc.max_retries = 0;
            mc.store_size = 1;
            mc.threads = config.threads;
            const DetectionReport report = monte_carlo(mc);
            p_emp = report.rows.empty() ? 0.0 : report.rows[0].estimate;
        }

        for (std::int64_t n = config.from; n <= config.to; n += config.step) {
            Record record;
            record.kind = "sweep_point";
            record.name = "n_checks";
            record.value = static_cast<double>(n);
            record.exact = undetected_probability(p_exact, static_cast<std::uint64_t>(n));
            record.estimate = undetected_probability(p_emp, static_cast<std::uint64_t>(n));
            record.extra["params"] = {{"p_e_exact", p_exact}, {"p_e_estimate", p_emp},
                                      {"strategy", config.strategy}};
            writer.write(record);
        }
        summary << "sweep n_checks " << config.from << ".." << config.to
                << " at p_e=" << fmt(p_exact) << "\n";
        return 0;
    }

    // k and N sweeps tabulate the reuse-leakage trace distance.
    for (std::int64_t v = config.from; v <= config.to; v += config.step) {
        const std::size_t n_positions =
            config.variable == "k" ? config.leakage_n : static_cast<std::size_t>(v);
        const std::size_t copies =
            config.variable == "k" ? static_cast<std::size_t>(v) : config.leakage_k;
        LeakageReport leak;
        try {
            leak = reuse_leakage(n_positions, copies);
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("sweep range out of scale: ") + e.what());
        }
        Record record;
        record.kind = "sweep_point";
        record.name = config.variable;
        record.value = static_cast<double>(v);
        record.exact = leak.trace_distance;
        record.extra["params"] = {{"N", n_positions},
                                  {"k", copies},
                                  {"helstrom_bound", leak.helstrom_bound}};
        writer.write(record);
    }
    summary << "sweep " << config.variable << " " << config.from << ".." << config.to << "\n";
    return 0;
}

int cmd_scenario(const RunConfig& config, std::ostream& records, std::ostream& summary) {
    ScenarioConfig sc;
    sc.trials = config.trials;
    sc.n = config.n;
    sc.seed = config.seed;
    sc.min_designated = resolved_min_designated(config);
    const ScenarioReport report = run_scenario(config.scenario, sc);

    RecordWriter writer(records, config.format);

    Record accept;
    accept.kind = "scenario";
    accept.name = report.name + ".alice_accept_rate";
    accept.estimate = report.alice_accept_rate;
    accept.extra["params"] = params_json(config);
    writer.write(accept);

    Record guess;
    guess.kind = "scenario";
    guess.name = report.name + ".eve_guess_accuracy";
    guess.exact = 0.5;
    guess.estimate = report.eve_guess_accuracy;
    guess.ci_lo = report.eve_guess_ci.lo;
    guess.ci_hi = report.eve_guess_ci.hi;
    writer.write(guess);

    if (report.positions_tested > 0) {
        Record detection;
        detection.kind = "scenario";
        detection.name = report.name + ".per_position_detection";
        detection.exact = report.per_position_detection_exact;
        detection.estimate = report.per_position_detection_estimate;
        detection.ci_lo = report.per_position_detection_ci.lo;
        detection.ci_hi = report.per_position_detection_ci.hi;
        detection.extra["positions_tested"] = report.positions_tested;
        detection.extra["detections"] = report.detections;
        writer.write(detection);
    }

    if (report.name == "reflect-to-bob") {
        Record phantom;
        phantom.kind = "scenario";
        phantom.name = "reflect-to-bob.bob_phantom_accept_rate";
        phantom.estimate = report.bob_phantom_accept_rate;
        writer.write(phantom);

        Record sustained;
        sustained.kind = "scenario";
        sustained.name = "reflect-to-bob.both_impersonations_rate";
        sustained.estimate = report.both_impersonations_rate;
        writer.write(sustained);

        Record caught;
        caught.kind = "scenario";
        caught.name = "reflect-to-bob.alice_detection_rate";
        caught.estimate = report.alice_detection_rate;
        writer.write(caught);
    }

    summary << "scenario " << report.name << ": alice_accept_rate="
            << fmt(report.alice_accept_rate)
            << " eve_guess_accuracy=" << fmt(report.eve_guess_accuracy);
    if (report.positions_tested > 0) {
        summary << " per_position_detection=" << fmt(report.per_position_detection_estimate)
                << " (exact " << fmt(report.per_position_detection_exact) << ")";
    }
    if (report.name == "reflect-to-bob") {
        summary << " bob_phantom_accept=" << fmt(report.bob_phantom_accept_rate)
                << " both_sustained=" << fmt(report.both_impersonations_rate);
    }
    summary << "\n";
    return 0;
}

int run_command(const std::string& command, const RunConfig& config, std::ostream& fallback,
                std::ostream& summary) {
    validate(config);

    std::ofstream file;
    std::ostream* records = &fallback;
    if (!config.out.empty()) {
        file.open(config.out, std::ios::binary | std::ios::trunc);
        if (!file) throw UsageError("cannot open output file: " + config.out);
        records = &file;
    }

    if (command == "analytics") return cmd_analytics(config, *records, summary);
    if (command == "simulate") return cmd_simulate(config, *records, summary);
    if (command == "sweep") return cmd_sweep(config, *records, summary);
    if (command == "scenario") return cmd_scenario(config, *records, summary);
    throw UsageError("unknown command: " + command);
}

}  // namespace qseq::cli
