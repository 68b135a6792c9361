#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "qseq/codebook.hpp"
#include "qseq/qstate.hpp"
#include "test_support.hpp"

using namespace qseq;

namespace {

CoinPair cp(char c1, char c2) {
    return {c1 == 'H' ? Coin::Heads : Coin::Tails, c2 == 'H' ? Coin::Heads : Coin::Tails};
}

StateVector ref_state(int index) {
    const auto& amps = refq::states()[index];
    return StateVector::from_amplitudes({amps[0], amps[1], amps[2], amps[3]});
}

}  // namespace

TEST_CASE("prepare_state matches the coin-to-state table") {
    // Family 0: H→A, T→B; family 1: H→C, T→D; coin 2 H→"+", T→"−".
    CHECK(same_up_to_phase(prepare_state(0, cp('H', 'H')), ref_state(0)));
    CHECK(same_up_to_phase(prepare_state(0, cp('H', 'T')), ref_state(1)));
    CHECK(same_up_to_phase(prepare_state(0, cp('T', 'H')), ref_state(2)));
    CHECK(same_up_to_phase(prepare_state(0, cp('T', 'T')), ref_state(3)));
    CHECK(same_up_to_phase(prepare_state(1, cp('H', 'H')), ref_state(4)));
    CHECK(same_up_to_phase(prepare_state(1, cp('H', 'T')), ref_state(5)));
    CHECK(same_up_to_phase(prepare_state(1, cp('T', 'H')), ref_state(6)));
    CHECK(same_up_to_phase(prepare_state(1, cp('T', 'T')), ref_state(7)));

    // D− amplitudes spelled out: (1/√2, 0, +1/2, −1/2) under the default
    // 135° sign convention.
    const StateVector dm = prepare_state(1, cp('T', 'T'));
    CHECK(dm[0].real() == doctest::Approx(refq::kInvSqrt2).epsilon(1e-15));
    CHECK(dm[1].real() == doctest::Approx(0.0));
    CHECK(dm[2].real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(dm[3].real() == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("the eight prepared states are distinct and follow the overlap table") {
    std::vector<StateVector> all;
    for (int family = 0; family < 2; ++family) {
        for (char c1 : {'H', 'T'}) {
            for (char c2 : {'H', 'T'}) {
                all.push_back(prepare_state(family, cp(c1, c2)));
            }
        }
    }
    REQUIRE(all.size() == 8);

    const double plus = 0.72855339059327373;   // (1 + 1/√2)²/4
    const double minus = 0.02144660940672624;  // (1 − 1/√2)²/4

    for (int i = 0; i < 8; ++i) {
        for (int j = i + 1; j < 8; ++j) {
            const double got = overlap2(all[i], all[j]);
            const double want = refq::overlap2(refq::states()[i], refq::states()[j]);
            CHECK(got == doctest::Approx(want).epsilon(1e-12));

            const int letter_i = i / 2;  // 0=A,1=B,2=C,3=D
            const int letter_j = j / 2;
            if (letter_i == letter_j) {
                // X+ ⊥ X−.
                CHECK(got == doctest::Approx(0.0).epsilon(1e-12));
            } else if ((letter_i / 2) == (letter_j / 2)) {
                // Same family, different letter: always 1/4.
                CHECK(got == doctest::Approx(0.25).epsilon(1e-12));
            } else {
                // Cross family: (1 ± 1/√2)²/4, never orthogonal, never equal.
                const bool is_plus = std::abs(got - plus) < 1e-12;
                const bool is_minus = std::abs(got - minus) < 1e-12;
                CHECK((is_plus || is_minus));
                CHECK(got < 1.0);
                CHECK(got > 0.0);
            }
        }
    }
}

TEST_CASE("prepare_sequence maps positions through prepare_state") {
    SequenceCode code;
    code.family = 1;
    code.tosses = {cp('H', 'H'), cp('T', 'T')};
    const SequenceMessage msg = prepare_sequence(code);
    REQUIRE(msg.size() == 2);
    CHECK(same_up_to_phase(msg[0], ref_state(4)));  // C+
    CHECK(same_up_to_phase(msg[1], ref_state(7)));  // D−
    for (std::size_t i = 0; i < msg.size(); ++i) {
        CHECK(msg[i].norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("cross-family sequence states never coincide") {
    for (char c1a : {'H', 'T'}) {
        for (char c2a : {'H', 'T'}) {
            for (char c1b : {'H', 'T'}) {
                for (char c2b : {'H', 'T'}) {
                    const double o = overlap2(prepare_state(0, cp(c1a, c2a)),
                                              prepare_state(1, cp(c1b, c2b)));
                    CHECK(o < 1.0 - 1e-9);
                }
            }
        }
    }
}

TEST_CASE("designated positions are the double-Tails coincidences") {
    CodePair pair;
    pair.code0.family = 0;
    pair.code1.family = 1;
    pair.code0.tosses = {cp('T', 'H'), cp('H', 'H'), cp('T', 'T')};
    pair.code1.tosses = {cp('T', 'T'), cp('T', 'H'), cp('H', 'H')};
    CHECK(designated_positions(pair) == std::vector<std::size_t>{0});

    pair.code0.tosses = {cp('H', 'H'), cp('H', 'T')};
    pair.code1.tosses = {cp('H', 'T'), cp('H', 'H')};
    CHECK(designated_positions(pair).empty());
}

TEST_CASE("designated positions depend on coin 1 only") {
    Rng rng(99);
    for (int round = 0; round < 50; ++round) {
        CodePair pair = generate_code_pair(rng, 16, 0);
        const std::vector<std::size_t> before = designated_positions(pair);
        // Flip every second coin; the designated set must not move.
        for (CoinPair& t : pair.code0.tosses) {
            t.c2 = t.c2 == Coin::Heads ? Coin::Tails : Coin::Heads;
        }
        for (CoinPair& t : pair.code1.tosses) {
            t.c2 = t.c2 == Coin::Heads ? Coin::Tails : Coin::Heads;
        }
        CHECK(designated_positions(pair) == before);
    }
}

TEST_CASE("designated fraction approaches 1/4 for random codes") {
    Rng rng(4);
    const std::size_t n = 10000;
    const CodePair pair = generate_code_pair(rng, n, 0);
    const double frac =
        static_cast<double>(designated_positions(pair).size()) / static_cast<double>(n);
    CHECK(std::abs(frac - 0.25) <= refq::four_sigma(0.25, static_cast<double>(n)));
}

TEST_CASE("generate_code_pair is deterministic and honors the floor") {
    Rng rng1(17);
    Rng rng2(17);
    const CodePair a = generate_code_pair(rng1, 100, 8, 3);
    const CodePair b = generate_code_pair(rng2, 100, 8, 3);
    CHECK(a.id == 3);
    CHECK(a.code0.tosses == b.code0.tosses);
    CHECK(a.code1.tosses == b.code1.tosses);
    CHECK(designated_positions(a).size() >= 8);

    // N=1 with a floor of 1 retries until the single position is designated.
    Rng rng3(5);
    const CodePair single = generate_code_pair(rng3, 1, 1);
    CHECK(designated_positions(single) == std::vector<std::size_t>{0});

    CHECK_THROWS_AS(generate_code_pair(rng3, 4, 5), std::invalid_argument);
    // All 30 positions designated has probability 4^−30 per attempt; the
    // 1000-attempt cap fires deterministically for any seed.
    CHECK_THROWS_AS(generate_code_pair(rng3, 30, 30), std::runtime_error);
}

TEST_CASE("code store advances monotonically and errors when exhausted") {
    Rng rng(8);
    CodeStore store = generate_code_store(rng, 3, 10, 0);
    CHECK(store.size() == 3);
    CHECK(store.active().id == 0);
    CHECK(store.advance().id == 1);
    CHECK(store.cursor() == 1);
    CHECK(store.advance().id == 2);
    CHECK_THROWS_AS(store.advance(), std::runtime_error);
    CHECK(store.exhausted());
    CHECK_THROWS_AS(store.active(), std::runtime_error);

    // Ids are handed out once each.
    Rng rng2(8);
    CodeStore fresh = generate_code_store(rng2, 5, 10, 0);
    std::set<std::uint64_t> seen;
    seen.insert(fresh.active().id);
    while (fresh.remaining() > 1) seen.insert(fresh.advance().id);
    CHECK(seen.size() == 5);
}

TEST_CASE("a flipped 135° sign convention leaves all statistics unchanged") {
    const StatePrepConvention flipped{-1.0};
    const Projector pa = projector_pa();
    const Projector pc = projector_pc();

    // The D states swap signs as a set; every analyzer probability and the
    // cross-family overlap value set are unchanged.
    for (char c2 : {'H', 'T'}) {
        const StateVector d = prepare_state(1, cp('T', c2), flipped);
        CHECK(born_probability(pa, d) == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(born_probability(pc, d) == doctest::Approx(0.0).epsilon(1e-12));
    }
    const StateVector d_plus_flipped = prepare_state(1, cp('T', 'H'), flipped);
    CHECK(same_up_to_phase(d_plus_flipped, prepare_state(1, cp('T', 'T'))));
}
