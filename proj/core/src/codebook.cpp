#include "qseq/codebook.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace qseq {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

}  // namespace

CodeStore::CodeStore(std::vector<CodePair> pairs) : pairs_(std::move(pairs)) {}

const CodePair& CodeStore::active() const {
    if (exhausted()) throw std::runtime_error("code store exhausted");
    return pairs_[cursor_];
}

const CodePair& CodeStore::advance() {
    if (cursor_ + 1 >= pairs_.size()) {
        cursor_ = pairs_.size();
        throw std::runtime_error("code store exhausted");
    }
    ++cursor_;
    return pairs_[cursor_];
}

StateVector prepare_state(int family, CoinPair cp, const StatePrepConvention& conv) {
    if (family != 0 && family != 1) throw std::invalid_argument("prepare_state: family must be 0 or 1");
    const double sign = cp.c2 == Coin::Heads ? 1.0 : -1.0;
    std::vector<Amplitude> amps(4, Amplitude{0.0, 0.0});
    amps[0] = kInvSqrt2;
    if (family == 0) {
        if (cp.c1 == Coin::Heads) {
            amps[2] = sign * kInvSqrt2;  // A±
        } else {
            amps[3] = sign * kInvSqrt2;  // B±
        }
    } else {
        if (cp.c1 == Coin::Heads) {
            amps[2] = sign * 0.5;  // C±
            amps[3] = sign * 0.5;
        } else {
            amps[2] = sign * conv.diag135_sign * -0.5;  // D±
            amps[3] = sign * conv.diag135_sign * 0.5;
        }
    }
    return StateVector::from_amplitudes(std::move(amps));
}

SequenceMessage prepare_sequence(const SequenceCode& code, const StatePrepConvention& conv) {
    SequenceMessage msg;
    msg.positions.reserve(code.length());
    for (const CoinPair& cp : code.tosses) {
        msg.positions.push_back(prepare_state(code.family, cp, conv));
    }
    return msg;
}

std::vector<std::size_t> designated_positions(const CodePair& pair) {
    if (pair.code0.length() != pair.code1.length()) {
        throw std::invalid_argument("designated_positions: code length mismatch");
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pair.code0.length(); ++i) {
        if (pair.code0.tosses[i].c1 == Coin::Tails && pair.code1.tosses[i].c1 == Coin::Tails) {
            out.push_back(i);
        }
    }
    return out;
}

namespace {

SequenceCode random_code(Rng& rng, int family, std::size_t n) {
    SequenceCode code;
    code.family = family;
    code.tosses.resize(n);
    for (CoinPair& cp : code.tosses) {
        cp.c1 = rng.coin() ? Coin::Tails : Coin::Heads;
        cp.c2 = rng.coin() ? Coin::Tails : Coin::Heads;
    }
    return code;
}

}  // namespace

CodePair generate_code_pair(Rng& rng, std::size_t n, std::size_t min_designated,
                            std::uint64_t id) {
    if (n == 0) throw std::invalid_argument("generate_code_pair: n must be positive");
    if (min_designated > n) {
        throw std::invalid_argument("generate_code_pair: min_designated exceeds n");
    }
    for (int attempt = 0; attempt < 1000; ++attempt) {
        CodePair pair;
        pair.id = id;
        pair.code0 = random_code(rng, 0, n);
        pair.code1 = random_code(rng, 1, n);
        if (designated_positions(pair).size() >= min_designated) return pair;
    }
    throw std::runtime_error(
        "generate_code_pair: designated-position target unreachable in 1000 attempts");
}

CodeStore generate_code_store(Rng& rng, std::size_t pairs, std::size_t n,
                              std::size_t min_designated) {
    if (pairs == 0) throw std::invalid_argument("generate_code_store: empty store");
    std::vector<CodePair> out;
    out.reserve(pairs);
    for (std::size_t i = 0; i < pairs; ++i) {
        out.push_back(generate_code_pair(rng, n, min_designated, i));
    }
    return CodeStore(std::move(out));
}

}  // namespace qseq
