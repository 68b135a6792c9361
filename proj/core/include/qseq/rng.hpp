#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace qseq {

// splitmix64 step; used to whiten user seeds and derive substreams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic random source. The engine (mt19937_64) is fully specified by
// the standard; the mappings to doubles and bounded integers are done by hand
// so that a given seed produces the same stream on every platform and
// standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(whiten(seed)) {}

    // Substream derived from (seed, stream_id). Substreams are independent of
    // how many values other streams have consumed, which is what makes
    // per-trial seeding reproducible under any thread schedule.
    static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
        std::uint64_t s = seed;
        splitmix64(s);
        s ^= 0x9e3779b97f4a7c15ULL * (stream_id + 1);
        return Rng(splitmix64(s));
    }

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool coin() { return (next() >> 63) != 0; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Uniform in [0, n); unbiased via rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below: empty range");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % n;
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    static std::uint64_t whiten(std::uint64_t seed) {
        std::uint64_t s = seed;
        return splitmix64(s);
    }

    std::mt19937_64 engine_;
};

}  // namespace qseq
