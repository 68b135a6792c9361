#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qseq/adversary.hpp"
#include "qseq/codebook.hpp"
#include "qseq/protocol.hpp"
#include "qseq/qstate.hpp"

namespace qseq {

enum class PositionKind { Designated, NonDesignated };

// To the eavesdropper a transmitted sequence is, position by position, a
// uniform mixture of the family's four states. Both families produce the
// same matrix, (1/4)·diag(2,0,1,1).
DensityMatrix family_density_matrix(int family, const StatePrepConvention& conv = {});

// (1 + trace distance)/2: best success probability for guessing between two
// equiprobable states with one measurement.
double helstrom_bound(double trace_distance);

// Per-check error probability at one position, by exhaustive enumeration over
// the honest coin tosses, Eve's discrete randomness and Bob's operator coin,
// with exact Born weights. No sampling. The check is the post-identification
// verification Bob runs under the given policy; for the analyzer policy a
// non-designated position carries no check and the probability is 0.
// Throws std::invalid_argument for strategies with no Bob-side check
// (the reflect strategies).
double exact_error_probability(const StrategySpec& strategy, const VerificationPolicy& policy,
                               PositionKind kind, const StatePrepConvention& conv = {});

// Probability that one designated-position identification attempt (uniform
// analyzer choice) yields a positive, under the given channel. Honest: 1/8.
double exact_identification_probability(const StrategySpec& strategy,
                                        const StatePrepConvention& conv = {});

// Per-position probability that Alice's expected-state test fails when her
// own sequence is reflected back in place of the complementary echo,
// averaged over the 16 coin-pair combinations. Exactly 5/8.
double exact_reflect_detection_probability(const StatePrepConvention& conv = {});

// (1 − p_e)^n_checks: probability that an attack disturbing n_checks checked
// states triggers no error flag.
double undetected_probability(double p_e, std::uint64_t n_checks);

struct LeakageReport {
    std::size_t n_positions = 1;  // sequence length N
    std::size_t copies = 1;       // k interceptions of the same pair
    double trace_distance = 0.0;
    double helstrom_bound = 0.5;
};

// Distinguishability of the two families when the same pair is used k times:
// builds both k-copy ensembles Σ 4^(−N) (|S_code⟩⟨S_code|)^⊗k over all 4^N
// codes and reports their trace distance. The ensembles have rank ≤ 4^N, so
// the eigenvalues of the difference are computed exactly in the span of the
// 2·4^N product vectors rather than on the dense 4^(Nk) matrix.
// Requires 4^(N·k) ≤ 4096.
LeakageReport reuse_leakage(std::size_t n_positions, std::size_t copies,
                            const StatePrepConvention& conv = {});

struct WilsonInterval {
    double lo = 0.0;
    double hi = 1.0;
};

// Wilson 95% score interval for successes/trials.
WilsonInterval wilson95(std::uint64_t successes, std::uint64_t trials);

struct DetectionRow {
    PositionKind kind = PositionKind::Designated;
    double exact = 0.0;
    double estimate = 0.0;
    WilsonInterval ci95;
    std::uint64_t checks = 0;
    std::uint64_t errors = 0;
};

struct OutcomeHistogram {
    std::uint64_t delivered = 0;
    std::uint64_t error_by_bob = 0;
    std::uint64_t error_by_alice = 0;
    std::uint64_t inconclusive = 0;
    std::uint64_t attempts = 0;
    std::uint64_t sessions = 0;
    std::uint64_t sessions_aborted = 0;
    std::uint64_t identified_correct = 0;
    std::uint64_t identified_wrong = 0;
    std::uint64_t bits_delivered = 0;
};

struct DetectionReport {
    std::string strategy;
    std::string policy;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::vector<DetectionRow> rows;
    OutcomeHistogram histogram;
};

struct MonteCarloConfig {
    std::uint64_t trials = 10000;
    std::size_t n = 100;
    std::size_t bits_per_session = 1;
    StrategySpec strategy;
    VerificationPolicy policy;
    std::uint64_t seed = 1;
    std::size_t min_designated = 8;
    int max_retries = 3;
    std::size_t store_size = 0;  // 0: bits_per_session * (max_retries + 1)
    unsigned threads = 1;
    StatePrepConvention convention;
};

// Runs independent sessions with per-trial derived seeds and reports the
// per-check error frequency against the exact oracle. Designated-check
// statistics are folded only from attempts whose identification matched the
// sent bit, which is the conditioning under which the oracle value is
// defined. Results are identical for any thread count.
DetectionReport monte_carlo(const MonteCarloConfig& config);

// The exact session monte_carlo runs as trial `trial`, with its transcript
// retained. Backs transcript export.
Transcript replay_trial(const MonteCarloConfig& config, std::uint64_t trial);

}  // namespace qseq
