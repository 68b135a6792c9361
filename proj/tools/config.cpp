#include "config.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"

namespace qseq::cli {

namespace {

using nlohmann::json;

template <typename T>
T get_as(const json& value, const std::string& key) {
    try {
        return value.get<T>();
    } catch (const json::exception&) {
        throw UsageError("config: bad value for key \"" + key + "\"");
    }
}

}  // namespace

void apply_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("config: cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw UsageError("config: " + std::string(e.what()));
    }
    if (!doc.is_object()) throw UsageError("config: expected a flat JSON object");

    for (const auto& [key, value] : doc.items()) {
        if (key == "seed") {
            config.seed = get_as<std::uint64_t>(value, key);
        } else if (key == "n") {
            config.n = get_as<std::size_t>(value, key);
        } else if (key == "trials") {
            config.trials = get_as<std::uint64_t>(value, key);
        } else if (key == "bits") {
            config.bits = get_as<std::size_t>(value, key);
        } else if (key == "strategy") {
            config.strategy = get_as<std::string>(value, key);
        } else if (key == "policy") {
            config.policy = get_as<std::string>(value, key);
        } else if (key == "min_designated") {
            config.min_designated = get_as<std::int64_t>(value, key);
        } else if (key == "max_retries") {
            config.max_retries = get_as<int>(value, key);
        } else if (key == "store_size") {
            config.store_size = get_as<std::size_t>(value, key);
        } else if (key == "format") {
            config.format = get_as<std::string>(value, key);
        } else if (key == "out") {
            config.out = get_as<std::string>(value, key);
        } else if (key == "threads") {
            config.threads = get_as<unsigned>(value, key);
        } else if (key == "codes_in") {
            config.codes_in = get_as<std::string>(value, key);
        } else if (key == "codes_out") {
            config.codes_out = get_as<std::string>(value, key);
        } else if (key == "transcript_out") {
            config.transcript_out = get_as<std::string>(value, key);
        } else if (key == "variable") {
            config.variable = get_as<std::string>(value, key);
        } else if (key == "from") {
            config.from = get_as<std::int64_t>(value, key);
        } else if (key == "to") {
            config.to = get_as<std::int64_t>(value, key);
        } else if (key == "step") {
            config.step = get_as<std::int64_t>(value, key);
        } else if (key == "leakage_n") {
            config.leakage_n = get_as<std::size_t>(value, key);
        } else if (key == "leakage_k") {
            config.leakage_k = get_as<std::size_t>(value, key);
        } else if (key == "scenario") {
            config.scenario = get_as<std::string>(value, key);
        } else {
            throw UsageError("config: unknown key \"" + key + "\"");
        }
    }
}

StrategySpec parse_strategy(const std::string& name) {
    if (name == "passive") return {StrategyKind::Passive};
    if (name == "intercept-resend-uniform") return {StrategyKind::InterceptResendUniform};
    if (name == "intercept-resend-family0") {
        return {StrategyKind::InterceptResendUniform, ResendAlphabet::Family0};
    }
    if (name == "intercept-resend-family1") {
        return {StrategyKind::InterceptResendUniform, ResendAlphabet::Family1};
    }
    if (name == "intercept-measure-resend") return {StrategyKind::InterceptMeasureResend};
    if (name == "intercept-measure-resend-pa") {
        return {StrategyKind::InterceptMeasureResend, ResendAlphabet::Full8,
                EveAnalyzerPolicy::AlwaysPA};
    }
    if (name == "intercept-measure-resend-pc") {
        return {StrategyKind::InterceptMeasureResend, ResendAlphabet::Full8,
                EveAnalyzerPolicy::AlwaysPC};
    }
    if (name == "reflect-to-alice") return {StrategyKind::ReflectToAlice};
    if (name == "reflect-to-bob") return {StrategyKind::ReflectToBob};
    throw UsageError("unknown strategy: " + name);
}

VerificationPolicy parse_policy(const std::string& name) {
    if (name == "analyzer") return {VerifyMode::Analyzer, true};
    if (name == "expected-state") return {VerifyMode::ExpectedState, true};
    throw UsageError("unknown policy: " + name);
}

std::size_t resolved_min_designated(const RunConfig& config) {
    if (config.min_designated >= 0) return static_cast<std::size_t>(config.min_designated);
    return std::clamp<std::size_t>(config.n / 4, 1, 8);
}

std::size_t resolved_store_size(const RunConfig& config) {
    if (config.store_size > 0) return config.store_size;
    return config.bits * static_cast<std::size_t>(config.max_retries + 1);
}

void validate(const RunConfig& config) {
    if (config.n == 0) throw UsageError("n must be positive");
    if (config.trials == 0) throw UsageError("trials must be positive");
    if (config.bits == 0) throw UsageError("bits must be positive");
    if (config.max_retries < 0) throw UsageError("max_retries must be non-negative");
    if (config.threads == 0) throw UsageError("threads must be positive");
    if (config.format != "jsonl" && config.format != "csv") {
        throw UsageError("format must be jsonl or csv");
    }
    if (resolved_min_designated(config) > config.n) {
        throw UsageError("min_designated exceeds n");
    }
    parse_strategy(config.strategy);
    parse_policy(config.policy);
    if (config.variable != "n_checks" && config.variable != "k" && config.variable != "N") {
        throw UsageError("variable must be n_checks, k or N");
    }
    if (config.step <= 0) throw UsageError("step must be positive");
    if (config.from > config.to) throw UsageError("empty sweep range");
    if (config.from < 1) throw UsageError("sweep range starts at 1");
    if (config.scenario != "reflect-to-alice" && config.scenario != "reflect-to-bob" &&
        config.scenario != "same-sequence-echo") {
        throw UsageError("unknown scenario: " + config.scenario);
    }
}

}  // namespace qseq::cli
