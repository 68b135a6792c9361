#pragma once

#include <cstdint>
#include <string>

#include "qseq/analysis.hpp"
#include "qseq/codebook.hpp"

namespace qseq {

struct ScenarioConfig {
    std::uint64_t trials = 10000;
    std::size_t n = 20;
    std::uint64_t seed = 1;
    std::size_t min_designated = 5;
    StatePrepConvention convention;
};

struct ScenarioReport {
    std::string name;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::size_t n = 0;

    double alice_accept_rate = 0.0;
    double eve_guess_accuracy = 0.0;
    WilsonInterval eve_guess_ci;

    // Per-position statistics of Alice's expected-state tests, with the exact
    // 16-case enumeration value alongside. Every position is tested in
    // scenario mode so the estimate is a clean binomial.
    std::uint64_t positions_tested = 0;
    std::uint64_t detections = 0;
    double per_position_detection_estimate = 0.0;
    double per_position_detection_exact = 0.0;
    WilsonInterval per_position_detection_ci;

    // reflect-to-bob only.
    double bob_phantom_accept_rate = 0.0;   // Bob accepted a bit Alice never sent
    double alice_detection_rate = 0.0;      // Alice caught the forged echo
    double both_impersonations_rate = 0.0;  // attack sustained end to end
};

// Eve bounces Alice's transmission straight back at her while the protocol
// expects the complementary echo. Alice's per-position detection follows the
// 16-case cross-family overlap enumeration.
ScenarioReport run_reflect_to_alice(const ScenarioConfig& config);

// Protocol variant in which Bob echoes the sequence he received instead of
// the complementary one. Reflection is then undetectable: Alice accepts her
// own states with probability 1, and Eve, having measured nothing, learns
// nothing about the bit.
ScenarioReport run_same_sequence_echo(const ScenarioConfig& config);

// Two-bit choreography: Eve steals Bob's echo and hands it back to him as
// "Alice's next bit" (which he accepts: the states are genuine), then must
// answer Alice with the only sequence she holds, which is the wrong family.
// One-sided masquerade succeeds for a single bit; sustaining both sides fails.
ScenarioReport run_reflect_to_bob(const ScenarioConfig& config);

ScenarioReport run_scenario(const std::string& name, const ScenarioConfig& config);

}  // namespace qseq
