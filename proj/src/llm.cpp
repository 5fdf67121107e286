#include "elicit/llm.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "elicit/errors.hpp"
#include "elicit/hash.hpp"
#include "http_client.hpp"

namespace elicit {

std::string_view to_string(LlmProviderKind kind) {
    return kind == LlmProviderKind::scripted ? "scripted" : "remote_http";
}

LlmProviderKind llm_provider_kind_from_string(std::string_view name) {
    if (name == "scripted") return LlmProviderKind::scripted;
    if (name == "remote_http") return LlmProviderKind::remote_http;
    throw ConfigError("unknown LLM provider '" + std::string(name) + "'");
}

void LlmProviderConfig::validate() const {
    if (kind == LlmProviderKind::scripted && script_path.empty())
        throw ConfigError("scripted LLM provider requires script_path");
    if (kind == LlmProviderKind::remote_http && endpoint.empty())
        throw ConfigError("remote_http LLM provider requires an endpoint");
    if (max_features == 0) throw ConfigError("max_features must be positive");
    if (max_tokens <= 0) throw ConfigError("max_tokens must be positive");
}

ScriptedLlmProvider::ScriptedLlmProvider(std::vector<Entry> entries) : entries_(std::move(entries)) {}

ScriptedLlmProvider ScriptedLlmProvider::from_json_text(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("LLM script is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || doc.value("version", 0) != 1 || !doc.contains("entries") || !doc["entries"].is_array())
        throw ParseError("LLM script must be {\"version\": 1, \"entries\": [...]}");

    std::vector<Entry> entries;
    std::size_t n = 0;
    for (const auto& e : doc["entries"]) {
        ++n;
        if (!e.is_object() || !e.contains("key") || !e.contains("response") || !e["response"].is_string())
            throw ParseError("script entry " + std::to_string(n) + " needs 'key' and a string 'response'");
        Entry entry;
        const std::string match = e.value("match", "substring");
        if (match == "substring")
            entry.match = MatchKind::substring;
        else if (match == "hash")
            entry.match = MatchKind::hash;
        else
            throw ParseError("script entry " + std::to_string(n) + ": unknown match kind '" + match + "'");
        const auto& key = e["key"];
        if (key.is_string()) {
            entry.keys.push_back(key.get<std::string>());
        } else if (key.is_array() && entry.match == MatchKind::substring) {
            for (const auto& k : key) {
                if (!k.is_string()) throw ParseError("script entry " + std::to_string(n) + ": keys must be strings");
                entry.keys.push_back(k.get<std::string>());
            }
        } else {
            throw ParseError("script entry " + std::to_string(n) + ": 'key' must be a string or array of strings");
        }
        if (entry.keys.empty() ||
            std::any_of(entry.keys.begin(), entry.keys.end(), [](const std::string& k) { return k.empty(); }))
            throw ParseError("script entry " + std::to_string(n) + " has an empty key");
        entry.response = e["response"].get<std::string>();
        entries.push_back(std::move(entry));
    }
    return ScriptedLlmProvider(std::move(entries));
}

ScriptedLlmProvider ScriptedLlmProvider::from_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read LLM script " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
}

std::string ScriptedLlmProvider::complete(std::string_view prompt, int /*max_tokens*/) {
    const std::string prompt_hash = fingerprint(prompt);
    for (const auto& e : entries_) {
        const bool hit = e.match == MatchKind::hash
                             ? e.keys.front() == prompt_hash
                             : std::all_of(e.keys.begin(), e.keys.end(), [&](const std::string& k) {
                                   return prompt.find(k) != std::string_view::npos;
                               });
        if (hit) return e.response;
    }
    throw ScriptMissError("no scripted response for prompt " + prompt_hash);
}

std::string ScriptedLlmProvider::config_fingerprint() const {
    std::uint64_t h = kFnvOffsetBasis;
    for (const auto& e : entries_) {
        for (const auto& k : e.keys) h = fnv1a64(k, h);
        h = fnv1a64(e.response, h);
    }
    return "scripted/" + to_hex(h);
}

RemoteLlmProvider::RemoteLlmProvider(LlmProviderConfig config) : config_(std::move(config)) {
    config_.validate();
    detail::parse_endpoint(config_.endpoint);
}

std::string RemoteLlmProvider::complete(std::string_view prompt, int max_tokens) {
    const auto answer =
        detail::post_json(config_.endpoint, {{"prompt", prompt}, {"max_tokens", max_tokens}}, config_.api_key);
    if (!answer.is_object() || !answer.contains("text") || !answer["text"].is_string())
        throw ProviderFormatError("LLM answer must be {\"text\": \"...\"}", answer.dump());
    return answer["text"].get<std::string>();
}

std::string RemoteLlmProvider::config_fingerprint() const { return "remote_http/" + config_.endpoint; }

std::shared_ptr<LlmProvider> make_llm_provider(const LlmProviderConfig& config) {
    config.validate();
    if (config.kind == LlmProviderKind::remote_http) return std::make_shared<RemoteLlmProvider>(config);
    return std::make_shared<ScriptedLlmProvider>(ScriptedLlmProvider::from_file(config.script_path));
}

}  // namespace elicit
