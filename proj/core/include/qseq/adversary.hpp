#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qseq/codebook.hpp"
#include "qseq/qstate.hpp"
#include "qseq/rng.hpp"

namespace qseq {

enum class StrategyKind {
    Passive,
    InterceptResendUniform,
    InterceptMeasureResend,
    ReflectToAlice,
    ReflectToBob,
};

// Readings of "resends another random sequence of the same states". Full8 is
// the default: i.i.d. uniform over the whole 8-state alphabet. The
// family-restricted readings are kept for comparison; the enumeration oracle
// computes exact probabilities for each.
enum class ResendAlphabet { Full8, Family0, Family1 };

// Analyzer choice rule for the measure-and-resend strategy.
enum class EveAnalyzerPolicy { Uniform, AlwaysPA, AlwaysPC };

enum class Direction { AliceToBob, BobToAlice };

// Strategy parameters without any runtime state; this is what the exact
// oracles and run configs consume.
struct StrategySpec {
    StrategyKind kind = StrategyKind::Passive;
    ResendAlphabet alphabet = ResendAlphabet::Full8;
    EveAnalyzerPolicy analyzer_policy = EveAnalyzerPolicy::Uniform;
};

std::string strategy_name(const StrategySpec& spec);

struct EveLogEntry {
    enum class Action { Forwarded, Replaced, Measured, Reflected };

    std::size_t position = 0;
    Action action = Action::Forwarded;
    int analyzer = -1;      // 0 = P_s^A, 1 = P_s^C (Measured only)
    int outcome = -1;       // 1 = positive, 0 = null (Measured only)
    int resent_index = -1;  // alphabet index 0..7 (Replaced only)
    std::optional<StateVector> original;
};

// Append-only record of Eve's actions within one session.
struct EveLog {
    std::vector<EveLogEntry> entries;

    bool has_measurements() const;
};

// A live adversary: parameters plus an independent generator and its log.
struct AdversaryStrategy {
    StrategySpec spec;
    Rng rng;
    EveLog log;

    AdversaryStrategy(StrategySpec s, Rng r) : spec(s), rng(std::move(r)) {}
};

// The 8-state alphabet in a fixed order:
// 0=A+, 1=A−, 2=B+, 3=B−, 4=C+, 5=C−, 6=D+, 7=D−.
StateVector alphabet_state(int index, const StatePrepConvention& conv = {});

struct ForwardResult {
    enum class Route { Delivered, ReflectedToAlice, ReflectedToBob };
    Route route = Route::Delivered;
    SequenceMessage seq;
};

// Applies the strategy to an in-flight sequence. Reflect strategies only act
// on their matching direction and throw std::invalid_argument otherwise; the
// session layer routes around them.
ForwardResult eve_forward(const SequenceMessage& seq, Direction direction,
                          AdversaryStrategy& strategy, const StatePrepConvention& conv = {});

enum class GuessMethod { SingleCopyOptimal, Recorded };

struct GuessQuery {
    GuessMethod method = GuessMethod::Recorded;
    // View size for SingleCopyOptimal: the Helstrom bound for guessing the
    // family from `copies` interceptions of an N-position sequence.
    std::size_t n_positions = 1;
    std::size_t copies = 1;
};

struct EveGuess {
    int bit = 0;
    double success_bound = 0.5;
};

// Eve's best guess of the transmitted bit. SingleCopyOptimal reports the
// Helstrom bound for the configured view; Recorded forms a likelihood-ratio
// guess from logged measurement outcomes (ties are a fair coin).
// Throws std::invalid_argument on an empty log.
EveGuess eve_guess_bit(const EveLog& log, const GuessQuery& query, Rng& rng,
                       const StatePrepConvention& conv = {});

}  // namespace qseq
