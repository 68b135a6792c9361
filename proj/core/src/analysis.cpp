#include "qseq/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>
#include <utility>

namespace qseq {

DensityMatrix family_density_matrix(int family, const StatePrepConvention& conv) {
    std::vector<std::pair<StateVector, double>> ensemble;
    ensemble.reserve(4);
    for (int letter = 0; letter < 2; ++letter) {
        for (int sign = 0; sign < 2; ++sign) {
            CoinPair cp{letter == 0 ? Coin::Heads : Coin::Tails,
                        sign == 0 ? Coin::Heads : Coin::Tails};
            ensemble.emplace_back(prepare_state(family, cp, conv), 0.25);
        }
    }
    return mix(ensemble);
}

double helstrom_bound(double trace_distance) { return 0.5 * (1.0 + trace_distance); }

namespace {

// Discrete distribution over pure states: what the channel emits for one
// honest input state.
using StateDistribution = std::vector<std::pair<double, StateVector>>;

StateDistribution channel_output(const StrategySpec& strategy, const StateVector& honest,
                                 const StatePrepConvention& conv) {
    switch (strategy.kind) {
        case StrategyKind::Passive:
            return {{1.0, honest}};

        case StrategyKind::InterceptResendUniform: {
            StateDistribution dist;
            int lo = 0, hi = 8;
            if (strategy.alphabet == ResendAlphabet::Family0) hi = 4;
            if (strategy.alphabet == ResendAlphabet::Family1) lo = 4;
            const double w = 1.0 / static_cast<double>(hi - lo);
            for (int i = lo; i < hi; ++i) dist.emplace_back(w, alphabet_state(i, conv));
            return dist;
        }

        case StrategyKind::InterceptMeasureResend: {
            std::vector<std::pair<double, int>> ops;
            switch (strategy.analyzer_policy) {
                case EveAnalyzerPolicy::Uniform:
                    ops = {{0.5, 0}, {0.5, 1}};
                    break;
                case EveAnalyzerPolicy::AlwaysPA:
                    ops = {{1.0, 0}};
                    break;
                case EveAnalyzerPolicy::AlwaysPC:
                    ops = {{1.0, 1}};
                    break;
            }
            const Projector pa = projector_pa();
            const Projector pc = projector_pc();
            StateDistribution dist;
            for (const auto& [opw, op] : ops) {
                const Projector& p = op == 0 ? pa : pc;
                const double prob = born_probability(p, honest);
                if (prob > kProbTol) {
                    dist.emplace_back(opw * prob,
                                      StateVector::from_amplitudes(p.apply(honest)));
                }
                if (1.0 - prob > kProbTol) {
                    std::vector<Amplitude> rest(honest.dim());
                    const std::vector<Amplitude> projected = p.apply(honest);
                    for (std::size_t i = 0; i < honest.dim(); ++i) {
                        rest[i] = honest[i] - projected[i];
                    }
                    dist.emplace_back(opw * (1.0 - prob),
                                      StateVector::from_amplitudes(std::move(rest)));
                }
            }
            return dist;
        }

        case StrategyKind::ReflectToAlice:
        case StrategyKind::ReflectToBob:
            throw std::invalid_argument(
                "exact oracle: reflect strategies deliver nothing to Bob; no check to enumerate");
    }
    throw std::logic_error("unreachable");
}

// Honest states at one position of the given kind, with their weights.
// Designated positions carry the Tails letter of the true family (B± or D±);
// non-designated positions carry Heads with conditional weight 2/3 and Tails
// with 1/3, since the other code's coin is constrained away from double
// Tails. Families are averaged with weight 1/2 each.
StateDistribution honest_position_distribution(PositionKind kind,
                                               const StatePrepConvention& conv) {
    StateDistribution dist;
    for (int family = 0; family < 2; ++family) {
        for (int sign = 0; sign < 2; ++sign) {
            const Coin c2 = sign == 0 ? Coin::Heads : Coin::Tails;
            if (kind == PositionKind::Designated) {
                dist.emplace_back(0.5 * 0.5,
                                  prepare_state(family, {Coin::Tails, c2}, conv));
            } else {
                dist.emplace_back(0.5 * 0.5 * (2.0 / 3.0),
                                  prepare_state(family, {Coin::Heads, c2}, conv));
                dist.emplace_back(0.5 * 0.5 * (1.0 / 3.0),
                                  prepare_state(family, {Coin::Tails, c2}, conv));
            }
        }
    }
    return dist;
}

}  // namespace

double exact_error_probability(const StrategySpec& strategy, const VerificationPolicy& policy,
                               PositionKind kind, const StatePrepConvention& conv) {
    if (policy.mode == VerifyMode::Analyzer && kind == PositionKind::NonDesignated) {
        return 0.0;  // the analyzer policy checks designated positions only
    }

    const Projector pa = projector_pa();
    const Projector pc = projector_pc();

    double error = 0.0;
    // Enumerate honest family and phase; the identified family in the oracle
    // frame is the true one, fixing which operator must stay null.
    for (int family = 0; family < 2; ++family) {
        for (int sign = 0; sign < 2; ++sign) {
            const Coin c2 = sign == 0 ? Coin::Heads : Coin::Tails;
            std::vector<std::pair<double, Coin>> letters;
            if (kind == PositionKind::Designated) {
                letters = {{1.0, Coin::Tails}};
            } else {
                letters = {{2.0 / 3.0, Coin::Heads}, {1.0 / 3.0, Coin::Tails}};
            }
            for (const auto& [lw, c1] : letters) {
                const StateVector honest = prepare_state(family, {c1, c2}, conv);
                const StateDistribution out = channel_output(strategy, honest, conv);
                double per_state = 0.0;
                for (const auto& [w, state] : out) {
                    if (policy.mode == VerifyMode::Analyzer) {
                        const Projector& null_op = family == 1 ? pc : pa;
                        per_state += w * 0.5 * born_probability(null_op, state);
                    } else {
                        per_state += w * (1.0 - overlap2(honest, state));
                    }
                }
                error += 0.5 * 0.5 * lw * per_state;
            }
        }
    }
    return error;
}

double exact_identification_probability(const StrategySpec& strategy,
                                        const StatePrepConvention& conv) {
    const Projector pa = projector_pa();
    const Projector pc = projector_pc();
    const StateDistribution honest = honest_position_distribution(PositionKind::Designated, conv);
    double prob = 0.0;
    for (const auto& [hw, state] : honest) {
        const StateDistribution out = channel_output(strategy, state, conv);
        for (const auto& [w, s] : out) {
            prob += hw * w * 0.5 * (born_probability(pa, s) + born_probability(pc, s));
        }
    }
    return prob;
}

double exact_reflect_detection_probability(const StatePrepConvention& conv) {
    // Alice expects the complementary family's state; the reflected state is
    // her own. Both coin pairs are uniform and independent: 16 combinations.
    double detect = 0.0;
    for (int c1a = 0; c1a < 2; ++c1a)
        for (int c2a = 0; c2a < 2; ++c2a)
            for (int c1b = 0; c1b < 2; ++c1b)
                for (int c2b = 0; c2b < 2; ++c2b) {
                    const StateVector sent = prepare_state(
                        0, {c1a ? Coin::Tails : Coin::Heads, c2a ? Coin::Tails : Coin::Heads},
                        conv);
                    const StateVector expected = prepare_state(
                        1, {c1b ? Coin::Tails : Coin::Heads, c2b ? Coin::Tails : Coin::Heads},
                        conv);
                    detect += (1.0 - overlap2(expected, sent)) / 16.0;
                }
    return detect;
}

double undetected_probability(double p_e, std::uint64_t n_checks) {
    if (p_e < 0.0 || p_e > 1.0) throw std::invalid_argument("undetected_probability: p_e outside [0,1]");
    return std::pow(1.0 - p_e, static_cast<double>(n_checks));
}

namespace {

std::size_t pow4(std::size_t e) { return std::size_t{1} << (2 * e); }

CoinPair coin_pair_from_digit(std::size_t digit) {
    return {(digit / 2) % 2 == 0 ? Coin::Heads : Coin::Tails,
            digit % 2 == 0 ? Coin::Heads : Coin::Tails};
}

}  // namespace

LeakageReport reuse_leakage(std::size_t n_positions, std::size_t copies,
                            const StatePrepConvention& conv) {
    if (n_positions == 0 || copies == 0) {
        throw std::invalid_argument("reuse_leakage: N and k must be positive");
    }
    if (n_positions * copies > 6) {  // 4^6 = 4096
        throw std::invalid_argument("reuse_leakage: 4^(N·k) exceeds 4096");
    }

    const std::size_t codes = pow4(n_positions);
    const double weight = 1.0 / static_cast<double>(codes);

    // Signed ensemble vectors: +w for family 0, −w for family 1.
    std::vector<std::pair<double, StateVector>> signed_vectors;
    signed_vectors.reserve(2 * codes);
    for (int family = 0; family < 2; ++family) {
        for (std::size_t code = 0; code < codes; ++code) {
            std::size_t rest = code;
            StateVector product = prepare_state(family, coin_pair_from_digit(rest % 4), conv);
            rest /= 4;
            for (std::size_t pos = 1; pos < n_positions; ++pos) {
                product = tensor(product, prepare_state(family, coin_pair_from_digit(rest % 4), conv));
                rest /= 4;
            }
            StateVector stacked = product;
            for (std::size_t copy = 1; copy < copies; ++copy) stacked = tensor(stacked, product);
            signed_vectors.emplace_back(family == 0 ? weight : -weight, std::move(stacked));
        }
    }

    const std::size_t dim = pow4(n_positions * copies);

    // Orthonormal basis of the span via modified Gram-Schmidt with
    // re-orthogonalization; the difference of the ensembles acts only there.
    std::vector<std::vector<Amplitude>> basis;
    for (const auto& [w, v] : signed_vectors) {
        std::vector<Amplitude> r(v.amplitudes().begin(), v.amplitudes().end());
        for (int round = 0; round < 2; ++round) {
            for (const std::vector<Amplitude>& q : basis) {
                Amplitude coeff{0.0, 0.0};
                for (std::size_t i = 0; i < dim; ++i) coeff += std::conj(q[i]) * r[i];
                for (std::size_t i = 0; i < dim; ++i) r[i] -= coeff * q[i];
            }
        }
        double norm2 = 0.0;
        for (const Amplitude& a : r) norm2 += std::norm(a);
        if (norm2 > 1e-20) {
            const double inv = 1.0 / std::sqrt(norm2);
            for (Amplitude& a : r) a *= inv;
            basis.push_back(std::move(r));
        }
    }

    const std::size_t rank = basis.size();
    std::vector<Amplitude> projected(rank * rank, Amplitude{0.0, 0.0});
    std::vector<Amplitude> coeffs(rank);
    for (const auto& [w, v] : signed_vectors) {
        for (std::size_t a = 0; a < rank; ++a) {
            Amplitude c{0.0, 0.0};
            for (std::size_t i = 0; i < dim; ++i) c += std::conj(basis[a][i]) * v[i];
            coeffs[a] = c;
        }
        for (std::size_t a = 0; a < rank; ++a) {
            for (std::size_t b = 0; b < rank; ++b) {
                projected[a * rank + b] += w * coeffs[a] * std::conj(coeffs[b]);
            }
        }
    }

    const std::vector<double> eigs = hermitian_eigenvalues(rank, std::move(projected));
    double sum = 0.0;
    for (double e : eigs) sum += std::abs(e);

    LeakageReport report;
    report.n_positions = n_positions;
    report.copies = copies;
    report.trace_distance = std::min(1.0, std::max(0.0, 0.5 * sum));
    report.helstrom_bound = helstrom_bound(report.trace_distance);
    return report;
}

WilsonInterval wilson95(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

struct TrialFold {
    OutcomeHistogram histogram;
    std::uint64_t designated_checks = 0;
    std::uint64_t designated_errors = 0;
    std::uint64_t nondesignated_checks = 0;
    std::uint64_t nondesignated_errors = 0;
};

TrialFold run_one_trial(const MonteCarloConfig& config, std::uint64_t trial) {
    const Transcript transcript = replay_trial(config, trial);

    TrialFold fold;
    fold.histogram.sessions = 1;
    if (transcript.aborted) fold.histogram.sessions_aborted = 1;
    for (const TrialOutcome& trial_outcome : transcript.trials) {
        ++fold.histogram.attempts;
        switch (trial_outcome.status) {
            case TrialStatus::Delivered:
                ++fold.histogram.delivered;
                ++fold.histogram.bits_delivered;
                break;
            case TrialStatus::ErrorDetectedByBob:
                ++fold.histogram.error_by_bob;
                break;
            case TrialStatus::ErrorDetectedByAlice:
                ++fold.histogram.error_by_alice;
                break;
            case TrialStatus::Inconclusive:
                ++fold.histogram.inconclusive;
                break;
        }
        const TrialStats& stats = trial_outcome.stats;
        if (stats.identified_bit >= 0) {
            if (stats.identified_bit == trial_outcome.bit_sent) {
                ++fold.histogram.identified_correct;
                // The oracle's per-check value is defined under matched
                // identification; only these attempts feed the estimate.
                fold.designated_checks += stats.designated_checks;
                fold.designated_errors += stats.designated_errors;
                fold.nondesignated_checks += stats.nondesignated_checks;
                fold.nondesignated_errors += stats.nondesignated_errors;
            } else {
                ++fold.histogram.identified_wrong;
            }
        }
    }
    return fold;
}

void accumulate(TrialFold& total, const TrialFold& part) {
    total.histogram.delivered += part.histogram.delivered;
    total.histogram.error_by_bob += part.histogram.error_by_bob;
    total.histogram.error_by_alice += part.histogram.error_by_alice;
    total.histogram.inconclusive += part.histogram.inconclusive;
    total.histogram.attempts += part.histogram.attempts;
    total.histogram.sessions += part.histogram.sessions;
    total.histogram.sessions_aborted += part.histogram.sessions_aborted;
    total.histogram.identified_correct += part.histogram.identified_correct;
    total.histogram.identified_wrong += part.histogram.identified_wrong;
    total.histogram.bits_delivered += part.histogram.bits_delivered;
    total.designated_checks += part.designated_checks;
    total.designated_errors += part.designated_errors;
    total.nondesignated_checks += part.nondesignated_checks;
    total.nondesignated_errors += part.nondesignated_errors;
}

}  // namespace

Transcript replay_trial(const MonteCarloConfig& config, std::uint64_t trial) {
    Rng session_rng = Rng::stream(config.seed, trial * 3);
    Rng eve_rng = Rng::stream(config.seed, trial * 3 + 1);
    Rng code_rng = Rng::stream(config.seed, trial * 3 + 2);

    const std::size_t store_size =
        config.store_size > 0
            ? config.store_size
            : config.bits_per_session * static_cast<std::size_t>(config.max_retries + 1);
    CodeStore store = generate_code_store(code_rng, store_size, config.n, config.min_designated);

    std::vector<int> bits(config.bits_per_session);
    for (int& b : bits) b = session_rng.coin() ? 1 : 0;

    AdversaryStrategy adversary(config.strategy, std::move(eve_rng));
    return run_session(bits, store, adversary, config.policy, session_rng, config.max_retries,
                       config.convention);
}

DetectionReport monte_carlo(const MonteCarloConfig& config) {
    if (config.trials == 0) throw std::invalid_argument("monte_carlo: trials must be >= 1");

    std::vector<TrialFold> folds(config.trials);
    const unsigned workers = std::max(1u, config.threads);
    if (workers == 1) {
        for (std::uint64_t t = 0; t < config.trials; ++t) folds[t] = run_one_trial(config, t);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::uint64_t t = w; t < config.trials; t += workers) {
                    folds[t] = run_one_trial(config, t);
                }
            });
        }
        for (std::thread& th : pool) th.join();
    }

    // Reduce in trial order: the report is identical for any worker count.
    TrialFold total;
    for (const TrialFold& fold : folds) accumulate(total, fold);

    DetectionReport report;
    report.strategy = strategy_name(config.strategy);
    report.policy =
        config.policy.mode == VerifyMode::Analyzer ? "analyzer" : "expected-state";
    report.trials = config.trials;
    report.seed = config.seed;
    report.n = config.n;
    report.histogram = total.histogram;

    const bool enumerable = config.strategy.kind == StrategyKind::Passive ||
                            config.strategy.kind == StrategyKind::InterceptResendUniform ||
                            config.strategy.kind == StrategyKind::InterceptMeasureResend;

    DetectionRow designated;
    designated.kind = PositionKind::Designated;
    designated.exact = enumerable
                           ? exact_error_probability(config.strategy, config.policy,
                                                     PositionKind::Designated, config.convention)
                           : std::nan("");
    designated.checks = total.designated_checks;
    designated.errors = total.designated_errors;
    designated.estimate =
        total.designated_checks == 0
            ? 0.0
            : static_cast<double>(total.designated_errors) /
                  static_cast<double>(total.designated_checks);
    designated.ci95 = wilson95(total.designated_errors, total.designated_checks);
    report.rows.push_back(designated);

    if (config.policy.mode == VerifyMode::ExpectedState) {
        DetectionRow nondesignated;
        nondesignated.kind = PositionKind::NonDesignated;
        nondesignated.exact =
            enumerable ? exact_error_probability(config.strategy, config.policy,
                                                 PositionKind::NonDesignated, config.convention)
                       : std::nan("");
        nondesignated.checks = total.nondesignated_checks;
        nondesignated.errors = total.nondesignated_errors;
        nondesignated.estimate =
            total.nondesignated_checks == 0
                ? 0.0
                : static_cast<double>(total.nondesignated_errors) /
                      static_cast<double>(total.nondesignated_checks);
        nondesignated.ci95 = wilson95(total.nondesignated_errors, total.nondesignated_checks);
        report.rows.push_back(nondesignated);
    }

    return report;
}

}  // namespace qseq
