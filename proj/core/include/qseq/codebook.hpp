#pragma once

#include <cstdint>
#include <vector>

#include "qseq/qstate.hpp"
#include "qseq/rng.hpp"

namespace qseq {

enum class Coin : std::uint8_t { Heads, Tails };

// One position's preparation record: coin 1 picks the polarization letter,
// coin 2 picks the phase sign.
struct CoinPair {
    Coin c1 = Coin::Heads;
    Coin c2 = Coin::Heads;

    bool operator==(const CoinPair&) const = default;
};

// Overall sign of the 135°-rotated polarization axis,
// |↖⟩s = sign·(−|↔⟩s + |↕⟩s)/√2. Flipping it swaps D+ and D− as prepared
// states and leaves every measurement statistic unchanged.
struct StatePrepConvention {
    double diag135_sign = 1.0;
};

// The secret preparation record for one sequence. Family 0 draws from the
// {A±, B±} alphabet, family 1 from {C±, D±}.
struct SequenceCode {
    int family = 0;
    std::vector<CoinPair> tosses;

    std::size_t length() const { return tosses.size(); }
};

// A family-0 and family-1 code of equal length, used as one disposable unit.
struct CodePair {
    std::uint64_t id = 0;
    SequenceCode code0;
    SequenceCode code1;

    std::size_t length() const { return code0.length(); }
    const SequenceCode& code_for(int bit) const { return bit == 0 ? code0 : code1; }
};

// The in-flight photon train: one prepared state per position.
struct SequenceMessage {
    std::vector<StateVector> positions;

    std::size_t size() const { return positions.size(); }
    const StateVector& operator[](std::size_t i) const { return positions[i]; }
    StateVector& operator[](std::size_t i) { return positions[i]; }
};

// Pre-shared pile of code pairs. A pair stays active until an error retires
// it; retired pairs are never reused.
class CodeStore {
public:
    explicit CodeStore(std::vector<CodePair> pairs);

    const CodePair& active() const;  // throws std::runtime_error when exhausted
    const CodePair& advance();       // retires the active pair; throws when none remain
    bool exhausted() const { return cursor_ >= pairs_.size(); }
    std::size_t remaining() const { return pairs_.size() - cursor_; }
    std::size_t size() const { return pairs_.size(); }
    std::size_t cursor() const { return cursor_; }

private:
    std::vector<CodePair> pairs_;
    std::size_t cursor_ = 0;
};

// State preparation per the double coin toss. Family 0: H→A, T→B; family 1:
// H→C, T→D; coin 2 Heads → "+" phase, Tails → "−".
// In the fixed basis: A± = (1/√2, 0, ±1/√2, 0), B± = (1/√2, 0, 0, ±1/√2),
// C± = (1/√2, 0, ±1/2, ±1/2), D± = (1/√2, 0, ±sign/2, ±1/2).
StateVector prepare_state(int family, CoinPair cp, const StatePrepConvention& conv = {});

SequenceMessage prepare_sequence(const SequenceCode& code, const StatePrepConvention& conv = {});

// Indices where both codes tossed Tails on coin 1, i.e. the state is B± if
// the family-0 sequence was sent and D± if family 1 was. These are the only
// positions where the analyzer pair discriminates the sequences.
std::vector<std::size_t> designated_positions(const CodePair& pair);

// All 4N coin outcomes i.i.d. uniform; regenerates until the designated count
// reaches min_designated. Throws std::runtime_error after 1000 attempts.
CodePair generate_code_pair(Rng& rng, std::size_t n, std::size_t min_designated = 8,
                            std::uint64_t id = 0);

CodeStore generate_code_store(Rng& rng, std::size_t pairs, std::size_t n,
                              std::size_t min_designated = 8);

}  // namespace qseq
