#include "qseq/adversary.hpp"

#include <cmath>
#include <stdexcept>

#include "qseq/analysis.hpp"

namespace qseq {

std::string strategy_name(const StrategySpec& spec) {
    switch (spec.kind) {
        case StrategyKind::Passive:
            return "passive";
        case StrategyKind::InterceptResendUniform:
            switch (spec.alphabet) {
                case ResendAlphabet::Full8:
                    return "intercept-resend-uniform";
                case ResendAlphabet::Family0:
                    return "intercept-resend-family0";
                case ResendAlphabet::Family1:
                    return "intercept-resend-family1";
            }
            break;
        case StrategyKind::InterceptMeasureResend:
            switch (spec.analyzer_policy) {
                case EveAnalyzerPolicy::Uniform:
                    return "intercept-measure-resend";
                case EveAnalyzerPolicy::AlwaysPA:
                    return "intercept-measure-resend-pa";
                case EveAnalyzerPolicy::AlwaysPC:
                    return "intercept-measure-resend-pc";
            }
            break;
        case StrategyKind::ReflectToAlice:
            return "reflect-to-alice";
        case StrategyKind::ReflectToBob:
            return "reflect-to-bob";
    }
    return "unknown";
}

bool EveLog::has_measurements() const {
    for (const EveLogEntry& e : entries) {
        if (e.action == EveLogEntry::Action::Measured) return true;
    }
    return false;
}

StateVector alphabet_state(int index, const StatePrepConvention& conv) {
    if (index < 0 || index > 7) throw std::invalid_argument("alphabet_state: index out of range");
    const int family = index / 4;
    CoinPair cp;
    cp.c1 = ((index / 2) % 2 == 0) ? Coin::Heads : Coin::Tails;
    cp.c2 = (index % 2 == 0) ? Coin::Heads : Coin::Tails;
    return prepare_state(family, cp, conv);
}

namespace {

int draw_alphabet_index(ResendAlphabet alphabet, Rng& rng) {
    switch (alphabet) {
        case ResendAlphabet::Full8:
            return static_cast<int>(rng.below(8));
        case ResendAlphabet::Family0:
            return static_cast<int>(rng.below(4));
        case ResendAlphabet::Family1:
            return 4 + static_cast<int>(rng.below(4));
    }
    throw std::logic_error("unreachable");
}

}  // namespace

ForwardResult eve_forward(const SequenceMessage& seq, Direction direction,
                          AdversaryStrategy& strategy, const StatePrepConvention& conv) {
    ForwardResult out;
    switch (strategy.spec.kind) {
        case StrategyKind::Passive:
            out.seq = seq;
            return out;

        case StrategyKind::ReflectToAlice: {
            if (direction != Direction::AliceToBob) {
                throw std::invalid_argument("reflect-to-alice acts on the forward channel only");
            }
            for (std::size_t i = 0; i < seq.size(); ++i) {
                strategy.log.entries.push_back(
                    {i, EveLogEntry::Action::Reflected, -1, -1, -1, std::nullopt});
            }
            out.route = ForwardResult::Route::ReflectedToAlice;
            out.seq = seq;  // untouched
            return out;
        }

        case StrategyKind::ReflectToBob: {
            if (direction != Direction::BobToAlice) {
                throw std::invalid_argument("reflect-to-bob acts on the return channel only");
            }
            for (std::size_t i = 0; i < seq.size(); ++i) {
                strategy.log.entries.push_back(
                    {i, EveLogEntry::Action::Reflected, -1, -1, -1, std::nullopt});
            }
            out.route = ForwardResult::Route::ReflectedToBob;
            out.seq = seq;  // untouched
            return out;
        }

        case StrategyKind::InterceptResendUniform: {
            out.seq.positions.reserve(seq.size());
            for (std::size_t i = 0; i < seq.size(); ++i) {
                const int idx = draw_alphabet_index(strategy.spec.alphabet, strategy.rng);
                strategy.log.entries.push_back(
                    {i, EveLogEntry::Action::Replaced, -1, -1, idx, seq[i]});
                out.seq.positions.push_back(alphabet_state(idx, conv));
            }
            return out;
        }

        case StrategyKind::InterceptMeasureResend: {
            const Projector pa = projector_pa();
            const Projector pc = projector_pc();
            out.seq.positions.reserve(seq.size());
            for (std::size_t i = 0; i < seq.size(); ++i) {
                int analyzer = 0;
                switch (strategy.spec.analyzer_policy) {
                    case EveAnalyzerPolicy::Uniform:
                        analyzer = strategy.rng.coin() ? 1 : 0;
                        break;
                    case EveAnalyzerPolicy::AlwaysPA:
                        analyzer = 0;
                        break;
                    case EveAnalyzerPolicy::AlwaysPC:
                        analyzer = 1;
                        break;
                }
                const MeasurementOutcome mo =
                    measure(analyzer == 0 ? pa : pc, seq[i], strategy.rng);
                strategy.log.entries.push_back(
                    {i, EveLogEntry::Action::Measured, analyzer,
                     mo.result == MeasureResult::Positive ? 1 : 0, -1, seq[i]});
                out.seq.positions.push_back(mo.post_state);
            }
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

EveGuess eve_guess_bit(const EveLog& log, const GuessQuery& query, Rng& rng,
                       const StatePrepConvention& conv) {
    if (log.entries.empty()) throw std::invalid_argument("eve_guess_bit: empty log");

    if (query.method == GuessMethod::SingleCopyOptimal) {
        EveGuess g;
        if (query.copies <= 1) {
            g.success_bound = helstrom_bound(
                trace_distance(family_density_matrix(0, conv), family_density_matrix(1, conv)));
        } else {
            g.success_bound =
                reuse_leakage(query.n_positions, query.copies, conv).helstrom_bound;
        }
        g.bit = rng.coin() ? 1 : 0;
        return g;
    }

    // Recorded: log-likelihood ratio of the measurement outcomes under the
    // two uniform-code hypotheses. One analyzer outcome on a single copy has
    // identical likelihood under both families, so with no reuse the ratio is
    // flat and the guess degenerates to a fair coin.
    const Projector pa = projector_pa();
    const Projector pc = projector_pc();
    double llr = 0.0;
    for (const EveLogEntry& e : log.entries) {
        if (e.action != EveLogEntry::Action::Measured) continue;
        const Projector& p = e.analyzer == 0 ? pa : pc;
        double like[2] = {0.0, 0.0};
        for (int family = 0; family < 2; ++family) {
            for (int letter = 0; letter < 2; ++letter) {
                for (int sign = 0; sign < 2; ++sign) {
                    const StateVector psi = alphabet_state(family * 4 + letter * 2 + sign, conv);
                    const double prob = born_probability(p, psi);
                    like[family] += 0.25 * (e.outcome == 1 ? prob : 1.0 - prob);
                }
            }
        }
        if (like[0] > 0.0 && like[1] > 0.0) llr += std::log(like[1]) - std::log(like[0]);
    }
    EveGuess g;
    g.success_bound = 0.5;
    if (std::abs(llr) < 1e-12) {
        g.bit = rng.coin() ? 1 : 0;
    } else {
        g.bit = llr > 0.0 ? 1 : 0;
    }
    return g;
}

}  // namespace qseq
