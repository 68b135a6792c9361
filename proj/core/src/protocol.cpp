#include "qseq/protocol.hpp"

#include <stdexcept>
#include <utility>

namespace qseq {

SequenceMessage alice_send_bit(int bit, const CodePair& pair, const StatePrepConvention& conv) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("alice_send_bit: bit must be 0 or 1");
    return prepare_sequence(pair.code_for(bit), conv);
}

BobResult bob_process(const SequenceMessage& seq, const CodePair& pair,
                      const VerificationPolicy& policy, Rng& rng,
                      const StatePrepConvention& conv) {
    const std::size_t n = pair.length();
    if (seq.size() != n) throw std::invalid_argument("bob_process: sequence length mismatch");

    const Projector pa = projector_pa();
    const Projector pc = projector_pc();
    BobResult result;
    SequenceMessage local = seq;

    std::vector<std::size_t> order = designated_positions(pair);
    rng.shuffle(order);

    std::vector<bool> measured(n, false);

    // Phase 1: hunt for a positive. A P_s^A positive means the states are D±,
    // so the sequence is the family-1 one; a P_s^C positive means B±, family 0.
    std::size_t identify_index = order.size();
    for (std::size_t oi = 0; oi < order.size() && result.identified_bit < 0; ++oi) {
        const std::size_t pos = order[oi];
        const int first_op = rng.coin() ? 1 : 0;
        const int tries = policy.measure_once_per_designated ? 1 : 2;
        for (int attempt = 0; attempt < tries; ++attempt) {
            const int op = attempt == 0 ? first_op : 1 - first_op;
            const MeasurementOutcome mo = measure(op == 0 ? pa : pc, local[pos], rng);
            const bool fired = mo.result == MeasureResult::Positive;
            result.consumed.push_back({pos, CheckPhase::Identify,
                                       op == 0 ? CheckKind::AnalyzerPA : CheckKind::AnalyzerPC,
                                       fired, true});
            local[pos] = mo.post_state;
            measured[pos] = true;
            if (fired) {
                result.identified_bit = op == 0 ? 1 : 0;
                identify_index = oi;
                break;
            }
        }
    }

    if (result.identified_bit < 0) {
        result.status = BobResult::Status::Inconclusive;
        return result;
    }

    // Pre-identification nulls taken with the analyzer that disturbs the
    // identified family's honest states have altered those positions; they
    // are excluded from verification. The other analyzer annihilates those
    // states, so its null branch left them untouched.
    const CheckKind altering_kind =
        result.identified_bit == 1 ? CheckKind::AnalyzerPA : CheckKind::AnalyzerPC;
    for (const PositionCheck& check : result.consumed) {
        if (check.phase == CheckPhase::Identify && !check.fired && check.kind == altering_kind) {
            result.spoiled.push_back(check.position);
        }
    }

    const int null_op = result.identified_bit == 1 ? 1 : 0;  // PC must stay null on D±, PA on B±
    bool error = false;
    std::size_t error_pos = 0;

    if (policy.mode == VerifyMode::Analyzer) {
        for (std::size_t oi = identify_index + 1; oi < order.size() && !error; ++oi) {
            const std::size_t pos = order[oi];
            const int op = rng.coin() ? 1 : 0;
            const MeasurementOutcome mo = measure(op == 0 ? pa : pc, local[pos], rng);
            const bool fired = mo.result == MeasureResult::Positive;
            result.consumed.push_back({pos, CheckPhase::Verify,
                                       op == 0 ? CheckKind::AnalyzerPA : CheckKind::AnalyzerPC,
                                       fired, true});
            local[pos] = mo.post_state;
            measured[pos] = true;
            if (op == null_op && fired) {
                error = true;
                error_pos = pos;
            }
        }
    } else {
        const SequenceCode& code = pair.code_for(result.identified_bit);
        for (std::size_t pos = 0; pos < n && !error; ++pos) {
            if (measured[pos]) continue;
            const StateVector expected = prepare_state(code.family, code.tosses[pos], conv);
            const ExpectedStateOutcome et = expected_state_test(expected, local[pos], rng);
            const bool failed = et.result == TestResult::Fail;
            const bool designated = pair.code0.tosses[pos].c1 == Coin::Tails &&
                                    pair.code1.tosses[pos].c1 == Coin::Tails;
            result.consumed.push_back(
                {pos, CheckPhase::Verify, CheckKind::Expected, failed, designated});
            local[pos] = et.post_state;
            if (failed) {
                error = true;
                error_pos = pos;
            }
        }
    }

    if (error) {
        result.status = BobResult::Status::ErrorDetected;
        result.error_position = static_cast<int>(error_pos);
        return result;
    }

    result.status = BobResult::Status::Identified;
    result.reply = prepare_sequence(pair.code_for(1 - result.identified_bit), conv);
    return result;
}

AliceVerdict alice_verify_reply(const SequenceMessage& reply, const CodePair& pair, int sent_bit,
                                Rng& rng, const StatePrepConvention& conv) {
    const std::size_t n = pair.length();
    if (reply.size() != n) throw std::invalid_argument("alice_verify_reply: length mismatch");
    const SequenceCode& code = pair.code_for(1 - sent_bit);
    AliceVerdict verdict;
    for (std::size_t pos = 0; pos < n; ++pos) {
        const StateVector expected = prepare_state(code.family, code.tosses[pos], conv);
        const ExpectedStateOutcome et = expected_state_test(expected, reply[pos], rng);
        ++verdict.positions_tested;
        if (et.result == TestResult::Fail) {
            verdict.accepted = false;
            verdict.error_position = static_cast<int>(pos);
            return verdict;
        }
    }
    verdict.accepted = true;
    return verdict;
}

namespace {

TrialStats fold_bob_stats(const BobResult& bres) {
    TrialStats stats;
    stats.identified_bit = bres.identified_bit;
    stats.reply_sent = bres.reply.has_value();
    const CheckKind null_kind =
        bres.identified_bit == 1 ? CheckKind::AnalyzerPC : CheckKind::AnalyzerPA;
    for (const PositionCheck& check : bres.consumed) {
        if (check.phase != CheckPhase::Verify) continue;
        const bool is_error = check.kind == CheckKind::Expected
                                  ? check.fired
                                  : (check.kind == null_kind && check.fired);
        if (check.designated) {
            ++stats.designated_checks;
            if (is_error) ++stats.designated_errors;
        } else {
            ++stats.nondesignated_checks;
            if (is_error) ++stats.nondesignated_errors;
        }
    }
    return stats;
}

}  // namespace

Transcript run_session(const std::vector<int>& bits, CodeStore& store,
                       AdversaryStrategy& adversary, const VerificationPolicy& policy, Rng& rng,
                       int max_retries, const StatePrepConvention& conv) {
    Transcript transcript;

    for (std::size_t bit_index = 0; bit_index < bits.size(); ++bit_index) {
        const int bit = bits[bit_index];
        bool delivered = false;

        for (int attempt = 0; attempt <= max_retries && !delivered; ++attempt) {
            if (store.exhausted()) {
                transcript.aborted = true;
                transcript.abort_reason = "code store exhausted";
                return transcript;
            }
            const CodePair& pair = store.active();

            TrialOutcome trial;
            trial.bit_index = bit_index;
            trial.attempt = attempt;
            trial.bit_sent = bit;
            trial.pair_id = pair.id;
            trial.events.push_back({"alice", "send", -1, ""});

            const SequenceMessage sent = alice_send_bit(bit, pair, conv);

            // Reflect strategies act on one direction only; the session
            // passes them through on the other.
            ForwardResult fwd;
            if (adversary.spec.kind == StrategyKind::ReflectToBob) {
                fwd.route = ForwardResult::Route::Delivered;
                fwd.seq = sent;
            } else {
                fwd = eve_forward(sent, Direction::AliceToBob, adversary, conv);
            }

            bool error_detected = false;

            if (fwd.route == ForwardResult::Route::ReflectedToAlice) {
                trial.events.push_back({"eve", "reflect_to_alice", -1, ""});
                const AliceVerdict verdict = alice_verify_reply(fwd.seq, pair, bit, rng, conv);
                trial.stats.alice_checks = static_cast<std::uint32_t>(verdict.positions_tested);
                if (verdict.accepted) {
                    // Bob never saw the bit; Alice was fooled into accepting.
                    trial.status = TrialStatus::Delivered;
                    trial.events.push_back({"alice", "accept_reply", -1, "bob never reached"});
                    transcript.trials.push_back(std::move(trial));
                    delivered = true;
                    break;
                }
                error_detected = true;
                trial.status = TrialStatus::ErrorDetectedByAlice;
                trial.stats.alice_errors = 1;
                trial.events.push_back(
                    {"alice", "error_detected", verdict.error_position, "reflected sequence"});
            } else {
                const BobResult bres = bob_process(fwd.seq, pair, policy, rng, conv);
                trial.stats = fold_bob_stats(bres);

                if (bres.status == BobResult::Status::Inconclusive) {
                    // No error evidence; retry with the same pair.
                    trial.status = TrialStatus::Inconclusive;
                    trial.events.push_back({"bob", "inconclusive", -1, ""});
                    transcript.trials.push_back(std::move(trial));
                    continue;
                }
                if (bres.status == BobResult::Status::ErrorDetected) {
                    error_detected = true;
                    trial.status = TrialStatus::ErrorDetectedByBob;
                    trial.events.push_back({"bob", "error_detected", bres.error_position, ""});
                } else {
                    trial.events.push_back(
                        {"bob", "identified", -1, bres.identified_bit == 1 ? "bit=1" : "bit=0"});
                    trial.events.push_back({"bob", "reply", -1, "complementary sequence"});

                    ForwardResult back;
                    if (adversary.spec.kind == StrategyKind::ReflectToAlice) {
                        back.route = ForwardResult::Route::Delivered;
                        back.seq = *bres.reply;
                    } else {
                        back = eve_forward(*bres.reply, Direction::BobToAlice, adversary, conv);
                    }

                    if (back.route == ForwardResult::Route::ReflectedToBob) {
                        // The echo bounced back to Bob; Alice receives nothing
                        // and has no error evidence, so the attempt counts as
                        // inconclusive and the pair is kept. The scripted
                        // reflect-to-bob scenario models the full masquerade.
                        trial.status = TrialStatus::Inconclusive;
                        trial.events.push_back({"eve", "reflect_to_bob", -1, "echo stolen"});
                        transcript.trials.push_back(std::move(trial));
                        continue;
                    }

                    const AliceVerdict verdict = alice_verify_reply(back.seq, pair, bit, rng, conv);
                    trial.stats.alice_checks =
                        static_cast<std::uint32_t>(verdict.positions_tested);
                    if (verdict.accepted) {
                        trial.status = TrialStatus::Delivered;
                        trial.events.push_back({"alice", "accept_reply", -1, ""});
                        transcript.trials.push_back(std::move(trial));
                        delivered = true;
                        break;
                    }
                    error_detected = true;
                    trial.status = TrialStatus::ErrorDetectedByAlice;
                    trial.stats.alice_errors = 1;
                    trial.events.push_back({"alice", "error_detected", verdict.error_position, ""});
                }
            }

            if (error_detected) {
                trial.events.push_back({"session", "retire_pair", -1, ""});
                transcript.trials.push_back(std::move(trial));
                // Step 5: a pair that produced an error is never reused.
                try {
                    store.advance();
                } catch (const std::runtime_error&) {
                    transcript.aborted = true;
                    transcript.abort_reason = "code store exhausted";
                    return transcript;
                }
            }
        }

        if (!delivered) {
            transcript.aborted = true;
            transcript.abort_reason = "retry limit exceeded";
            return transcript;
        }
    }

    return transcript;
}

}  // namespace qseq
