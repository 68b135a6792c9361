#include "doctest.h"

#include <array>
#include <cmath>

#include "qseq/adversary.hpp"
#include "qseq/analysis.hpp"
#include "qseq/codebook.hpp"
#include "qseq/protocol.hpp"
#include "test_support.hpp"

using namespace qseq;

TEST_CASE("passive forwarding leaves every state untouched") {
    Rng rng(10);
    const CodePair pair = generate_code_pair(rng, 16, 0);
    const SequenceMessage sent = alice_send_bit(1, pair);
    AdversaryStrategy eve({StrategyKind::Passive}, Rng(11));
    const ForwardResult fwd = eve_forward(sent, Direction::AliceToBob, eve);
    CHECK(fwd.route == ForwardResult::Route::Delivered);
    REQUIRE(fwd.seq.size() == sent.size());
    for (std::size_t i = 0; i < sent.size(); ++i) {
        CHECK(same_up_to_phase(fwd.seq[i], sent[i]));
    }
    CHECK(eve.log.entries.empty());
}

TEST_CASE("intercept-resend draws uniformly from the eight-state alphabet") {
    Rng rng(20);
    const CodePair pair = generate_code_pair(rng, 100, 0);
    AdversaryStrategy eve({StrategyKind::InterceptResendUniform}, Rng(21));

    std::array<std::uint64_t, 8> counts{};
    const int rounds = 1000;  // 100 positions each → 1e5 draws
    for (int r = 0; r < rounds; ++r) {
        const ForwardResult fwd =
            eve_forward(alice_send_bit(0, pair), Direction::AliceToBob, eve);
        CHECK(fwd.seq.size() == 100);
    }
    for (const EveLogEntry& entry : eve.log.entries) {
        REQUIRE(entry.action == EveLogEntry::Action::Replaced);
        REQUIRE(entry.resent_index >= 0);
        REQUIRE(entry.resent_index < 8);
        ++counts[static_cast<std::size_t>(entry.resent_index)];
        CHECK(entry.original.has_value());
    }
    const double total = 100.0 * rounds;
    for (std::uint64_t c : counts) {
        const double freq = static_cast<double>(c) / total;
        CHECK(std::abs(freq - 0.125) <= refq::four_sigma(0.125, total));
    }

    // Replaced states match the alphabet entry Eve logged.
    Rng rng2(22);
    AdversaryStrategy eve2({StrategyKind::InterceptResendUniform}, Rng(23));
    const ForwardResult fwd = eve_forward(alice_send_bit(1, pair), Direction::AliceToBob, eve2);
    for (std::size_t i = 0; i < fwd.seq.size(); ++i) {
        CHECK(same_up_to_phase(fwd.seq[i],
                               alphabet_state(eve2.log.entries[i].resent_index)));
    }
}

TEST_CASE("family-restricted resend alphabets stay inside their family") {
    Rng rng(24);
    const CodePair pair = generate_code_pair(rng, 50, 0);
    AdversaryStrategy eve({StrategyKind::InterceptResendUniform, ResendAlphabet::Family1},
                          Rng(25));
    eve_forward(alice_send_bit(0, pair), Direction::AliceToBob, eve);
    for (const EveLogEntry& entry : eve.log.entries) {
        CHECK(entry.resent_index >= 4);
    }
}

TEST_CASE("measure-and-resend leaves analyzer eigenbranch states behind") {
    Rng rng(26);
    const CodePair pair = generate_code_pair(rng, 40, 0);
    AdversaryStrategy eve({StrategyKind::InterceptMeasureResend}, Rng(27));
    const SequenceMessage sent = alice_send_bit(1, pair);
    const ForwardResult fwd = eve_forward(sent, Direction::AliceToBob, eve);

    const Projector pa = projector_pa();
    const Projector pc = projector_pc();
    for (std::size_t i = 0; i < fwd.seq.size(); ++i) {
        const EveLogEntry& entry = eve.log.entries[i];
        REQUIRE(entry.action == EveLogEntry::Action::Measured);
        const Projector& p = entry.analyzer == 0 ? pa : pc;
        const double born = born_probability(p, fwd.seq[i]);
        if (entry.outcome == 1) {
            CHECK(born == doctest::Approx(1.0).epsilon(1e-9));
        } else {
            CHECK(born == doctest::Approx(0.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("reflection strategies act on their matching direction only") {
    Rng rng(28);
    const CodePair pair = generate_code_pair(rng, 8, 0);
    const SequenceMessage sent = alice_send_bit(0, pair);

    AdversaryStrategy to_alice({StrategyKind::ReflectToAlice}, Rng(29));
    const ForwardResult fwd = eve_forward(sent, Direction::AliceToBob, to_alice);
    CHECK(fwd.route == ForwardResult::Route::ReflectedToAlice);
    for (std::size_t i = 0; i < sent.size(); ++i) {
        CHECK(same_up_to_phase(fwd.seq[i], sent[i]));  // undisturbed
    }
    CHECK_THROWS_AS(eve_forward(sent, Direction::BobToAlice, to_alice), std::invalid_argument);

    AdversaryStrategy to_bob({StrategyKind::ReflectToBob}, Rng(30));
    const ForwardResult back = eve_forward(sent, Direction::BobToAlice, to_bob);
    CHECK(back.route == ForwardResult::Route::ReflectedToBob);
    CHECK_THROWS_AS(eve_forward(sent, Direction::AliceToBob, to_bob), std::invalid_argument);
}

TEST_CASE("single-copy optimal guessing is blind") {
    EveLog log;
    log.entries.push_back({0, EveLogEntry::Action::Reflected, -1, -1, -1, std::nullopt});
    Rng rng(31);
    const EveGuess guess = eve_guess_bit(log, {GuessMethod::SingleCopyOptimal, 1, 1}, rng);
    CHECK(guess.success_bound == doctest::Approx(0.5).epsilon(1e-12));

    EveLog empty;
    CHECK_THROWS_AS(eve_guess_bit(empty, {GuessMethod::Recorded}, rng), std::invalid_argument);
}

TEST_CASE("two interceptions of the same short pair leak") {
    EveLog log;
    log.entries.push_back({0, EveLogEntry::Action::Reflected, -1, -1, -1, std::nullopt});
    Rng rng(32);
    const EveGuess guess =
        eve_guess_bit(log, {GuessMethod::SingleCopyOptimal, 1, 2}, rng);
    CHECK(guess.success_bound > 0.5 + 1e-6);
}

TEST_CASE("recorded guesses from reflection logs are fair coins") {
    Rng rng(33);
    const CodePair pair = generate_code_pair(rng, 10, 0);
    const int trials = 10000;
    int correct = 0;
    for (int t = 0; t < trials; ++t) {
        const int bit = rng.coin() ? 1 : 0;
        AdversaryStrategy eve({StrategyKind::ReflectToAlice},
                              Rng::stream(34, static_cast<std::uint64_t>(t)));
        eve_forward(alice_send_bit(bit, pair), Direction::AliceToBob, eve);
        const EveGuess guess = eve_guess_bit(eve.log, {GuessMethod::Recorded}, eve.rng);
        if (guess.bit == bit) ++correct;
    }
    const double accuracy = static_cast<double>(correct) / trials;
    CHECK(std::abs(accuracy - 0.5) <= refq::four_sigma(0.5, trials));
}

TEST_CASE("recorded guesses from single-copy measurements are fair coins") {
    Rng rng(35);
    const CodePair pair = generate_code_pair(rng, 20, 0);
    const int trials = 10000;
    int correct = 0;
    for (int t = 0; t < trials; ++t) {
        const int bit = rng.coin() ? 1 : 0;
        AdversaryStrategy eve({StrategyKind::InterceptMeasureResend},
                              Rng::stream(36, static_cast<std::uint64_t>(t)));
        eve_forward(alice_send_bit(bit, pair), Direction::AliceToBob, eve);
        const EveGuess guess = eve_guess_bit(eve.log, {GuessMethod::Recorded}, eve.rng);
        if (guess.bit == bit) ++correct;
    }
    const double accuracy = static_cast<double>(correct) / trials;
    CHECK(std::abs(accuracy - 0.5) <= refq::four_sigma(0.5, trials));
}
