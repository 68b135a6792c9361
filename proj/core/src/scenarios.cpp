#include "qseq/scenarios.hpp"

#include <stdexcept>

#include "qseq/adversary.hpp"
#include "qseq/protocol.hpp"

namespace qseq {

namespace {

struct TrialRngs {
    Rng session;
    Rng eve;
    Rng codes;
};

TrialRngs trial_rngs(std::uint64_t seed, std::uint64_t trial) {
    return {Rng::stream(seed, trial * 3), Rng::stream(seed, trial * 3 + 1),
            Rng::stream(seed, trial * 3 + 2)};
}

}  // namespace

ScenarioReport run_reflect_to_alice(const ScenarioConfig& config) {
    ScenarioReport report;
    report.name = "reflect-to-alice";
    report.trials = config.trials;
    report.seed = config.seed;
    report.n = config.n;
    report.per_position_detection_exact = exact_reflect_detection_probability(config.convention);

    std::uint64_t accepts = 0;
    std::uint64_t eve_correct = 0;

    for (std::uint64_t t = 0; t < config.trials; ++t) {
        TrialRngs rngs = trial_rngs(config.seed, t);
        const CodePair pair =
            generate_code_pair(rngs.codes, config.n, config.min_designated);
        const int bit = rngs.session.coin() ? 1 : 0;

        const SequenceMessage sent = alice_send_bit(bit, pair, config.convention);
        AdversaryStrategy eve({StrategyKind::ReflectToAlice}, std::move(rngs.eve));
        const ForwardResult fwd =
            eve_forward(sent, Direction::AliceToBob, eve, config.convention);

        // Alice expects the complementary family. Every position is tested so
        // the per-position statistic is binomial; the protocol path would
        // stop at the first failure.
        const SequenceCode& expected_code = pair.code_for(1 - bit);
        bool any_fail = false;
        for (std::size_t pos = 0; pos < config.n; ++pos) {
            const StateVector expected =
                prepare_state(expected_code.family, expected_code.tosses[pos], config.convention);
            const ExpectedStateOutcome et =
                expected_state_test(expected, fwd.seq[pos], rngs.session);
            ++report.positions_tested;
            if (et.result == TestResult::Fail) {
                ++report.detections;
                any_fail = true;
            }
        }
        if (!any_fail) ++accepts;

        const EveGuess guess = eve_guess_bit(eve.log, {GuessMethod::Recorded}, eve.rng);
        if (guess.bit == bit) ++eve_correct;
    }

    report.alice_accept_rate =
        static_cast<double>(accepts) / static_cast<double>(config.trials);
    report.eve_guess_accuracy =
        static_cast<double>(eve_correct) / static_cast<double>(config.trials);
    report.eve_guess_ci = wilson95(eve_correct, config.trials);
    report.per_position_detection_estimate =
        static_cast<double>(report.detections) / static_cast<double>(report.positions_tested);
    report.per_position_detection_ci = wilson95(report.detections, report.positions_tested);
    return report;
}

ScenarioReport run_same_sequence_echo(const ScenarioConfig& config) {
    ScenarioReport report;
    report.name = "same-sequence-echo";
    report.trials = config.trials;
    report.seed = config.seed;
    report.n = config.n;
    report.per_position_detection_exact = 0.0;

    std::uint64_t accepts = 0;
    std::uint64_t eve_correct = 0;

    for (std::uint64_t t = 0; t < config.trials; ++t) {
        TrialRngs rngs = trial_rngs(config.seed, t);
        const CodePair pair =
            generate_code_pair(rngs.codes, config.n, config.min_designated);
        const int bit = rngs.session.coin() ? 1 : 0;

        const SequenceMessage sent = alice_send_bit(bit, pair, config.convention);
        AdversaryStrategy eve({StrategyKind::ReflectToAlice}, std::move(rngs.eve));
        const ForwardResult fwd =
            eve_forward(sent, Direction::AliceToBob, eve, config.convention);

        // Weak variant: the echo is the same sequence, so Alice expects her
        // own states and the reflection passes every test with probability 1.
        const SequenceCode& expected_code = pair.code_for(bit);
        bool any_fail = false;
        for (std::size_t pos = 0; pos < config.n; ++pos) {
            const StateVector expected =
                prepare_state(expected_code.family, expected_code.tosses[pos], config.convention);
            const ExpectedStateOutcome et =
                expected_state_test(expected, fwd.seq[pos], rngs.session);
            ++report.positions_tested;
            if (et.result == TestResult::Fail) {
                ++report.detections;
                any_fail = true;
            }
        }
        if (!any_fail) ++accepts;

        const EveGuess guess = eve_guess_bit(eve.log, {GuessMethod::Recorded}, eve.rng);
        if (guess.bit == bit) ++eve_correct;
    }

    report.alice_accept_rate =
        static_cast<double>(accepts) / static_cast<double>(config.trials);
    report.eve_guess_accuracy =
        static_cast<double>(eve_correct) / static_cast<double>(config.trials);
    report.eve_guess_ci = wilson95(eve_correct, config.trials);
    report.per_position_detection_estimate =
        report.positions_tested == 0
            ? 0.0
            : static_cast<double>(report.detections) /
                  static_cast<double>(report.positions_tested);
    report.per_position_detection_ci = wilson95(report.detections, report.positions_tested);
    return report;
}

ScenarioReport run_reflect_to_bob(const ScenarioConfig& config) {
    ScenarioReport report;
    report.name = "reflect-to-bob";
    report.trials = config.trials;
    report.seed = config.seed;
    report.n = config.n;
    report.per_position_detection_exact = exact_reflect_detection_probability(config.convention);

    const VerificationPolicy policy;  // analyzer policy, measure once
    std::uint64_t bob_phantom = 0;
    std::uint64_t alice_detected = 0;
    std::uint64_t both_sustained = 0;
    std::uint64_t eve_correct = 0;

    for (std::uint64_t t = 0; t < config.trials; ++t) {
        TrialRngs rngs = trial_rngs(config.seed, t);
        const CodePair pair =
            generate_code_pair(rngs.codes, config.n, config.min_designated);
        const int bit = rngs.session.coin() ? 1 : 0;

        AdversaryStrategy eve({StrategyKind::ReflectToBob}, std::move(rngs.eve));

        // Bit 1 goes through untouched; Eve waits for the echo.
        const SequenceMessage sent = alice_send_bit(bit, pair, config.convention);
        const BobResult first = bob_process(sent, pair, policy, rngs.session, config.convention);

        bool phantom_accepted = false;
        bool alice_caught = false;

        if (first.status == BobResult::Status::Identified) {
            // Eve steals the echo S_(1−bit) and plays it back to Bob as the
            // next transmission. The states are genuine, so if any analyzer
            // fires Bob accepts a bit Alice never sent.
            const ForwardResult stolen =
                eve_forward(*first.reply, Direction::BobToAlice, eve, config.convention);
            const BobResult second =
                bob_process(stolen.seq, pair, policy, rngs.session, config.convention);
            if (second.status == BobResult::Status::Identified) {
                phantom_accepted = second.identified_bit == 1 - bit;
                if (phantom_accepted) ++bob_phantom;

                // Bob's answer to the phantom bit is S_bit; Eve forwards it
                // to Alice, who is still waiting for S_(1−bit). Every
                // position is tested for the per-position statistic.
                const SequenceMessage& forged = *second.reply;
                const SequenceCode& expected_code = pair.code_for(1 - bit);
                bool any_fail = false;
                for (std::size_t pos = 0; pos < config.n; ++pos) {
                    const StateVector expected = prepare_state(
                        expected_code.family, expected_code.tosses[pos], config.convention);
                    const ExpectedStateOutcome et =
                        expected_state_test(expected, forged[pos], rngs.session);
                    ++report.positions_tested;
                    if (et.result == TestResult::Fail) {
                        ++report.detections;
                        any_fail = true;
                    }
                }
                alice_caught = any_fail;
                if (alice_caught) ++alice_detected;
                if (phantom_accepted && !alice_caught) ++both_sustained;
            } else {
                // Eve never obtained a second echo; Alice is left waiting and
                // the session stalls. The attack failed this trial.
            }
        }

        // With an empty log (Bob never echoed) Eve guesses blind.
        const int guess_bit =
            eve.log.entries.empty()
                ? (eve.rng.coin() ? 1 : 0)
                : eve_guess_bit(eve.log, {GuessMethod::Recorded}, eve.rng).bit;
        if (guess_bit == bit) ++eve_correct;
    }

    const double trials = static_cast<double>(config.trials);
    report.bob_phantom_accept_rate = static_cast<double>(bob_phantom) / trials;
    report.alice_detection_rate = static_cast<double>(alice_detected) / trials;
    report.both_impersonations_rate = static_cast<double>(both_sustained) / trials;
    report.eve_guess_accuracy = static_cast<double>(eve_correct) / trials;
    report.eve_guess_ci = wilson95(eve_correct, config.trials);
    report.alice_accept_rate = 1.0 - report.alice_detection_rate;
    if (report.positions_tested > 0) {
        report.per_position_detection_estimate =
            static_cast<double>(report.detections) /
            static_cast<double>(report.positions_tested);
        report.per_position_detection_ci = wilson95(report.detections, report.positions_tested);
    }
    return report;
}

ScenarioReport run_scenario(const std::string& name, const ScenarioConfig& config) {
    if (name == "reflect-to-alice") return run_reflect_to_alice(config);
    if (name == "same-sequence-echo") return run_same_sequence_echo(config);
    if (name == "reflect-to-bob") return run_reflect_to_bob(config);
    throw std::invalid_argument("unknown scenario: " + name);
}

}  // namespace qseq
