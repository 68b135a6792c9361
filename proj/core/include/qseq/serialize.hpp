#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qseq/codebook.hpp"
#include "qseq/protocol.hpp"

namespace qseq {

// Code pair records, one JSON object per line:
//   {"id":0,"N":4,"code0":[["H","T"],...],"code1":[["T","H"],...]}
// with coin values in {"H","T"} and code arrays of exactly N entries.
std::string code_pair_to_json(const CodePair& pair);
void write_code_pairs(std::ostream& out, const std::vector<CodePair>& pairs);

// Strict parse: unknown keys, bad coin values or length mismatches are
// rejected with std::invalid_argument naming the offending line.
std::vector<CodePair> read_code_pairs(std::istream& in);

// Transcript export, one JSON object per line: each attempt as
//   {"kind":"trial","bit_index":..,"attempt":..,"bit_sent":..,"status":..,
//    "pair_id":..,"stats":{...},"events":[{"actor":..,"action":..,...},...]}
// followed by a {"kind":"session",...} summary line.
void write_transcript(std::ostream& out, const Transcript& transcript);

std::string trial_status_name(TrialStatus status);

}  // namespace qseq
