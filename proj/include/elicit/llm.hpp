#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace elicit {

enum class LlmProviderKind { scripted, remote_http };

std::string_view to_string(LlmProviderKind kind);
LlmProviderKind llm_provider_kind_from_string(std::string_view name);

struct LlmProviderConfig {
    LlmProviderKind kind = LlmProviderKind::scripted;
    std::string endpoint;
    std::string api_key;
    std::string script_path;
    std::size_t max_features = 30;
    int max_tokens = 1024;

    void validate() const;  // throws ConfigError
    bool operator==(const LlmProviderConfig&) const = default;
};

class LlmProvider {
public:
    virtual ~LlmProvider() = default;

    // Returns the raw completion text. Throws ProviderUnavailableError on
    // transport failure.
    virtual std::string complete(std::string_view prompt, int max_tokens) = 0;
    virtual std::string_view kind() const = 0;
    virtual std::string config_fingerprint() const = 0;
};

// Canned responses for tests and offline demos.
//
// Script file:
//   {"version": 1,
//    "entries": [{"match": "substring", "key": "...", "response": "..."},
//                {"match": "substring", "key": ["...", "..."], "response": "..."},
//                {"match": "hash", "key": "<fnv1a64 hex of the prompt>", "response": "..."}]}
//
// A substring entry matches when the prompt contains every key string.
// Entries are tried in file order; the first match wins. A prompt without a
// match raises ScriptMissError.
class ScriptedLlmProvider final : public LlmProvider {
public:
    enum class MatchKind { substring, hash };

    struct Entry {
        MatchKind match = MatchKind::substring;
        std::vector<std::string> keys;
        std::string response;
    };

    explicit ScriptedLlmProvider(std::vector<Entry> entries);
    static ScriptedLlmProvider from_file(const std::filesystem::path& path);
    static ScriptedLlmProvider from_json_text(std::string_view text);

    std::string complete(std::string_view prompt, int max_tokens) override;
    std::string_view kind() const override { return "scripted"; }
    std::string config_fingerprint() const override;

    const std::vector<Entry>& entries() const { return entries_; }

private:
    std::vector<Entry> entries_;
};

// POST {"prompt": "...", "max_tokens": n} -> {"text": "..."}.
class RemoteLlmProvider final : public LlmProvider {
public:
    explicit RemoteLlmProvider(LlmProviderConfig config);

    std::string complete(std::string_view prompt, int max_tokens) override;
    std::string_view kind() const override { return "remote_http"; }
    std::string config_fingerprint() const override;

private:
    LlmProviderConfig config_;
};

std::shared_ptr<LlmProvider> make_llm_provider(const LlmProviderConfig& config);

}  // namespace elicit
