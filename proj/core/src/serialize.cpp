#include "qseq/serialize.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace qseq {

namespace {

using nlohmann::json;

json coin_pair_to_json(const CoinPair& cp) {
    return json::array({cp.c1 == Coin::Heads ? "H" : "T", cp.c2 == Coin::Heads ? "H" : "T"});
}

Coin parse_coin(const json& j, const char* where) {
    if (!j.is_string()) throw std::invalid_argument(std::string(where) + ": coin must be a string");
    const std::string s = j.get<std::string>();
    if (s == "H") return Coin::Heads;
    if (s == "T") return Coin::Tails;
    throw std::invalid_argument(std::string(where) + ": coin must be \"H\" or \"T\"");
}

SequenceCode parse_code(const json& j, int family, std::size_t n, const char* where) {
    if (!j.is_array() || j.size() != n) {
        throw std::invalid_argument(std::string(where) + ": code must be an array of N pairs");
    }
    SequenceCode code;
    code.family = family;
    code.tosses.reserve(n);
    for (const json& entry : j) {
        if (!entry.is_array() || entry.size() != 2) {
            throw std::invalid_argument(std::string(where) + ": each toss must be [c1,c2]");
        }
        code.tosses.push_back({parse_coin(entry[0], where), parse_coin(entry[1], where)});
    }
    return code;
}

}  // namespace

std::string code_pair_to_json(const CodePair& pair) {
    json j;
    j["id"] = pair.id;
    j["N"] = pair.length();
    json c0 = json::array();
    for (const CoinPair& cp : pair.code0.tosses) c0.push_back(coin_pair_to_json(cp));
    json c1 = json::array();
    for (const CoinPair& cp : pair.code1.tosses) c1.push_back(coin_pair_to_json(cp));
    j["code0"] = std::move(c0);
    j["code1"] = std::move(c1);
    return j.dump();
}

void write_code_pairs(std::ostream& out, const std::vector<CodePair>& pairs) {
    for (const CodePair& pair : pairs) out << code_pair_to_json(pair) << '\n';
}

std::vector<CodePair> read_code_pairs(std::istream& in) {
    std::vector<CodePair> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string where = "code pair line " + std::to_string(line_no);
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw std::invalid_argument(where + ": " + e.what());
        }
        if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
        for (const auto& [key, value] : j.items()) {
            (void)value;
            if (key != "id" && key != "N" && key != "code0" && key != "code1") {
                throw std::invalid_argument(where + ": unknown key \"" + key + "\"");
            }
        }
        if (!j.contains("id") || !j.contains("N") || !j.contains("code0") || !j.contains("code1")) {
            throw std::invalid_argument(where + ": missing key");
        }
        if (!j["N"].is_number_unsigned() || j["N"].get<std::uint64_t>() == 0) {
            throw std::invalid_argument(where + ": N must be a positive integer");
        }
        const std::size_t n = j["N"].get<std::size_t>();
        CodePair pair;
        if (!j["id"].is_number_unsigned()) {
            throw std::invalid_argument(where + ": id must be a non-negative integer");
        }
        pair.id = j["id"].get<std::uint64_t>();
        pair.code0 = parse_code(j["code0"], 0, n, where.c_str());
        pair.code1 = parse_code(j["code1"], 1, n, where.c_str());
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

std::string trial_status_name(TrialStatus status) {
    switch (status) {
        case TrialStatus::Delivered:
            return "delivered";
        case TrialStatus::ErrorDetectedByBob:
            return "error-detected-by-bob";
        case TrialStatus::ErrorDetectedByAlice:
            return "error-detected-by-alice";
        case TrialStatus::Inconclusive:
            return "inconclusive";
    }
    return "unknown";
}

void write_transcript(std::ostream& out, const Transcript& transcript) {
    for (const TrialOutcome& trial : transcript.trials) {
        json j;
        j["kind"] = "trial";
        j["bit_index"] = trial.bit_index;
        j["attempt"] = trial.attempt;
        j["bit_sent"] = trial.bit_sent;
        j["status"] = trial_status_name(trial.status);
        j["pair_id"] = trial.pair_id;
        j["stats"] = {{"identified_bit", trial.stats.identified_bit},
                      {"designated_checks", trial.stats.designated_checks},
                      {"designated_errors", trial.stats.designated_errors},
                      {"nondesignated_checks", trial.stats.nondesignated_checks},
                      {"nondesignated_errors", trial.stats.nondesignated_errors},
                      {"alice_checks", trial.stats.alice_checks},
                      {"alice_errors", trial.stats.alice_errors},
                      {"reply_sent", trial.stats.reply_sent}};
        json events = json::array();
        for (const TrialEvent& event : trial.events) {
            json e;
            e["actor"] = event.actor;
            e["action"] = event.action;
            if (event.position >= 0) e["position"] = event.position;
            if (!event.detail.empty()) e["detail"] = event.detail;
            events.push_back(std::move(e));
        }
        j["events"] = std::move(events);
        out << j.dump() << '\n';
    }
    json summary;
    summary["kind"] = "session";
    summary["attempts"] = transcript.trials.size();
    summary["aborted"] = transcript.aborted;
    if (transcript.aborted) summary["abort_reason"] = transcript.abort_reason;
    out << summary.dump() << '\n';
}

}  // namespace qseq
