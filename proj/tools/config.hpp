#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "qseq/adversary.hpp"
#include "qseq/protocol.hpp"

namespace qseq::cli {

// Malformed invocation or config file; the driver maps this to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::uint64_t seed = 1;
    std::size_t n = 100;
    std::uint64_t trials = 10000;
    std::size_t bits = 1;
    std::string strategy = "passive";
    std::string policy = "analyzer";
    std::int64_t min_designated = -1;  // -1: resolve to clamp(n/4, 1, 8)
    int max_retries = 3;
    std::size_t store_size = 0;  // 0: bits * (max_retries + 1)
    std::string format = "jsonl";
    std::string out;  // empty: records go to stdout
    unsigned threads = 1;
    std::string codes_in;
    std::string codes_out;
    std::string transcript_out;  // write trial 0's session transcript here

    // sweep
    std::string variable = "n_checks";  // n_checks | k | N
    std::int64_t from = 1;
    std::int64_t to = 100;
    std::int64_t step = 1;
    std::size_t leakage_n = 1;  // sequence length for k sweeps
    std::size_t leakage_k = 2;  // copies for N sweeps

    // scenario
    std::string scenario = "reflect-to-alice";
};

// Loads a flat key/value JSON document over the defaults. Unknown keys and
// type mismatches are rejected.
void apply_config_file(RunConfig& config, const std::string& path);

StrategySpec parse_strategy(const std::string& name);
VerificationPolicy parse_policy(const std::string& name);

std::size_t resolved_min_designated(const RunConfig& config);
std::size_t resolved_store_size(const RunConfig& config);

// Range and cross-field checks; throws UsageError.
void validate(const RunConfig& config);

}  // namespace qseq::cli
