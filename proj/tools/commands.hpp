#pragma once

#include <iosfwd>

#include "config.hpp"
#include "qseq/codebook.hpp"

namespace qseq::cli {

// Each command writes machine-readable records (JSON lines or CSV per the
// config) to config.out, or to `records` when config.out is empty, and a
// short human-readable summary to `summary`. Exit codes: 0 success, 1 an
// analytic check failed, 2 usage error (thrown as UsageError).

// The convention parameter is a test hook: every analytic value is invariant
// under a flipped 135° sign, and the suite verifies that by rerunning the
// checks with it.
int cmd_analytics(const RunConfig& config, std::ostream& records, std::ostream& summary,
                  const StatePrepConvention& conv = {});
int cmd_simulate(const RunConfig& config, std::ostream& records, std::ostream& summary);
int cmd_sweep(const RunConfig& config, std::ostream& records, std::ostream& summary);
int cmd_scenario(const RunConfig& config, std::ostream& records, std::ostream& summary);

// Dispatch helper used by main and the tests: opens config.out if set.
int run_command(const std::string& command, const RunConfig& config, std::ostream& fallback,
                std::ostream& summary);

}  // namespace qseq::cli
