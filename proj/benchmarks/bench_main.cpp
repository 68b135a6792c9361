#include <benchmark/benchmark.h>

#include "qseq/analysis.hpp"
#include "qseq/protocol.hpp"

namespace {

using namespace qseq;

void BM_Measure(benchmark::State& state) {
    Rng rng(1);
    const Projector pa = projector_pa();
    const StateVector d = prepare_state(1, {Coin::Tails, Coin::Heads});
    for (auto _ : state) {
        auto outcome = measure(pa, d, rng);
        benchmark::DoNotOptimize(outcome);
    }
}
BENCHMARK(BM_Measure);

void BM_BobProcess(benchmark::State& state) {
    Rng code_rng(2);
    const auto n = static_cast<std::size_t>(state.range(0));
    const CodePair pair = generate_code_pair(code_rng, n, std::min<std::size_t>(8, n / 4));
    Rng rng(3);
    const SequenceMessage seq = alice_send_bit(1, pair);
    for (auto _ : state) {
        auto result = bob_process(seq, pair, {}, rng);
        benchmark::DoNotOptimize(result);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BobProcess)->Arg(40)->Arg(100)->Arg(400)->Complexity();

void BM_TraceDistanceDense(benchmark::State& state) {
    const auto copies = static_cast<std::size_t>(state.range(0));
    std::vector<std::pair<StateVector, double>> ens0;
    std::vector<std::pair<StateVector, double>> ens1;
    for (int family = 0; family < 2; ++family) {
        for (int i = 0; i < 4; ++i) {
            CoinPair cp{(i / 2) == 0 ? Coin::Heads : Coin::Tails,
                        (i % 2) == 0 ? Coin::Heads : Coin::Tails};
            StateVector base = prepare_state(family, cp);
            StateVector stacked = base;
            for (std::size_t c = 1; c < copies; ++c) stacked = tensor(stacked, base);
            (family == 0 ? ens0 : ens1).emplace_back(std::move(stacked), 0.25);
        }
    }
    const DensityMatrix rho0 = mix(ens0);
    const DensityMatrix rho1 = mix(ens1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(trace_distance(rho0, rho1));
    }
}
BENCHMARK(BM_TraceDistanceDense)->Arg(1)->Arg(2)->Arg(3);

void BM_ReuseLeakage(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto k = static_cast<std::size_t>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(reuse_leakage(n, k));
    }
}
BENCHMARK(BM_ReuseLeakage)->Args({1, 2})->Args({2, 2})->Args({2, 3});

void BM_MonteCarlo(benchmark::State& state) {
    MonteCarloConfig config;
    config.trials = 200;
    config.n = 40;
    config.min_designated = 8;
    config.seed = 4;
    config.strategy = {StrategyKind::InterceptResendUniform};
    for (auto _ : state) {
        benchmark::DoNotOptimize(monte_carlo(config));
    }
}
BENCHMARK(BM_MonteCarlo);

}  // namespace

BENCHMARK_MAIN();
