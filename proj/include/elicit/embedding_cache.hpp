#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>

#include "elicit/corpus.hpp"
#include "elicit/embedding.hpp"

namespace elicit {

inline constexpr int kEmbeddingCacheVersion = 1;

enum class ArtifactKind { full_text, description };

std::string_view to_string(ArtifactKind kind);

struct ArtifactKey {
    std::string gui_id;
    ArtifactKind kind = ArtifactKind::full_text;
    std::size_t index = 0;

    auto operator<=>(const ArtifactKey&) const = default;
};

struct CacheBuildStats {
    std::size_t computed = 0;
    std::size_t reused = 0;
};

// Corpus-wide embedding cache plus a memo for ad-hoc texts (queries,
// feature descriptions, component candidates).
//
// Reads take a shared lock; inserts take the exclusive lock, so concurrent
// sessions can score against the same cache.
class EmbeddingCache {
public:
    explicit EmbeddingCache(std::shared_ptr<const EmbeddingProvider> provider);

    const EmbeddingProvider& provider() const { return *provider_; }
    std::size_t dim() const { return provider_->dim(); }

    EmbeddingVector text(std::string_view text) const;
    EmbeddingVector gui_text(const GuiDocument& doc) const;
    EmbeddingVector description(const GuiDocument& doc, std::size_t index) const;

    // One vector per GUI full text and per description. Entries whose text
    // and provider fingerprint are unchanged are reused; a changed provider
    // configuration invalidates everything.
    CacheBuildStats build(const CorpusIndex& index);

    std::size_t artifact_count() const;
    bool contains(const ArtifactKey& key) const;

    // Number of vectors requested from the provider so far.
    std::size_t embeddings_computed() const { return computed_.load(); }

    std::string corpus_fingerprint() const;

    // JSON table keyed by (gui_id, kind, index) with the provider
    // fingerprint. Loading a file written under another configuration
    // yields an empty cache.
    void save(const std::filesystem::path& path) const;
    void load(const std::filesystem::path& path);

private:
    struct Entry {
        std::string text_hash;
        EmbeddingVector vector;
    };

    EmbeddingVector artifact(const ArtifactKey& key, std::string_view text) const;

    std::shared_ptr<const EmbeddingProvider> provider_;
    std::string config_hash_;
    mutable std::shared_mutex mutex_;
    std::map<ArtifactKey, Entry> artifacts_;
    mutable std::unordered_map<std::string, EmbeddingVector> memo_;
    std::string corpus_hash_;
    mutable std::atomic<std::size_t> computed_{0};
};

}  // namespace elicit
