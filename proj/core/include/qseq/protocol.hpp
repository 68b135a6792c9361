#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qseq/adversary.hpp"
#include "qseq/codebook.hpp"
#include "qseq/qstate.hpp"
#include "qseq/rng.hpp"

namespace qseq {

enum class VerifyMode {
    // Verification with the two analyzers only, at designated positions: a
    // positive under the operator that must yield null for the identified
    // family flags an error. Gives the 1/8 per-check error rate against
    // wholesale resending and exactly zero false alarms on honest states.
    Analyzer,
    // Stronger check: every remaining non-spoiled position is tested against
    // the identified family's prepared state.
    ExpectedState,
};

struct VerificationPolicy {
    VerifyMode mode = VerifyMode::Analyzer;
    // When false, Bob re-measures a designated position with the second
    // analyzer if the first came up null (exploration variant; re-measurement
    // can misidentify even honest sequences).
    bool measure_once_per_designated = true;
};

enum class CheckPhase { Identify, Verify };
enum class CheckKind { AnalyzerPA, AnalyzerPC, Expected };

// One measurement Bob made, in order.
struct PositionCheck {
    std::size_t position = 0;
    CheckPhase phase = CheckPhase::Identify;
    CheckKind kind = CheckKind::AnalyzerPA;
    bool fired = false;  // analyzer positive, or expected-state test failed
    bool designated = false;
};

struct BobResult {
    enum class Status { Identified, Inconclusive, ErrorDetected };

    Status status = Status::Inconclusive;
    int identified_bit = -1;  // set once any analyzer fired
    int error_position = -1;  // set when status == ErrorDetected
    std::vector<PositionCheck> consumed;
    std::vector<std::size_t> spoiled;  // excluded from verification
    std::optional<SequenceMessage> reply;  // present iff status == Identified
};

struct AliceVerdict {
    bool accepted = false;
    int error_position = -1;
    std::size_t positions_tested = 0;
};

enum class TrialStatus { Delivered, ErrorDetectedByBob, ErrorDetectedByAlice, Inconclusive };

struct TrialEvent {
    std::string actor;
    std::string action;
    long position = -1;
    std::string detail;
};

// Counters folded out of one attempt, used by the Monte Carlo layer.
struct TrialStats {
    int identified_bit = -1;
    std::uint32_t designated_checks = 0;
    std::uint32_t designated_errors = 0;
    std::uint32_t nondesignated_checks = 0;
    std::uint32_t nondesignated_errors = 0;
    std::uint32_t alice_checks = 0;
    std::uint32_t alice_errors = 0;
    bool reply_sent = false;
};

// One transmission attempt for one bit. Retries of the same bit appear as
// separate records so that pair retirement stays visible in the transcript.
struct TrialOutcome {
    std::size_t bit_index = 0;
    int attempt = 0;
    int bit_sent = 0;
    TrialStatus status = TrialStatus::Inconclusive;
    std::uint64_t pair_id = 0;
    TrialStats stats;
    std::vector<TrialEvent> events;
};

struct Transcript {
    std::vector<TrialOutcome> trials;
    bool aborted = false;
    std::string abort_reason;
};

// Step 2: Alice prepares and transmits the bit's sequence. Preparation is
// deterministic given the code, so resending over the same pair reproduces
// the same states; that is the reuse model the leakage analysis studies.
SequenceMessage alice_send_bit(int bit, const CodePair& pair,
                               const StatePrepConvention& conv = {});

// Step 3 and the error check. Phase 1 hunts for a positive at designated
// positions in random order with a uniformly chosen analyzer; P_s^A positive
// identifies the D family (bit 1), P_s^C positive the B family (bit 0).
// Phase 2 verifies the remaining positions per the policy. Positions measured
// before identification with the analyzer that disturbs the identified
// family's honest states are marked spoiled and excluded from verification.
// Throws std::invalid_argument on a length mismatch.
BobResult bob_process(const SequenceMessage& seq, const CodePair& pair,
                      const VerificationPolicy& policy, Rng& rng,
                      const StatePrepConvention& conv = {});

// Step 4, Alice's side: the reply must be the complementary sequence; every
// position is tested against the expected prepared state, first failure wins.
AliceVerdict alice_verify_reply(const SequenceMessage& reply, const CodePair& pair, int sent_bit,
                                Rng& rng, const StatePrepConvention& conv = {});

// Steps 1–5 composed. Delivered keeps the active pair for the next bit; any
// detected error retires the pair and retries the bit (up to max_retries);
// Inconclusive retries with the same pair. The session aborts when the store
// or the retry budget is exhausted.
Transcript run_session(const std::vector<int>& bits, CodeStore& store,
                       AdversaryStrategy& adversary, const VerificationPolicy& policy, Rng& rng,
                       int max_retries = 3, const StatePrepConvention& conv = {});

}  // namespace qseq
