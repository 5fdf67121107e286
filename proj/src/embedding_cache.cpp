#include "elicit/embedding_cache.hpp"

#include <fstream>
#include <sstream>

#include "elicit/errors.hpp"
#include "elicit/hash.hpp"
#include "elicit/serialization.hpp"

namespace elicit {

namespace {

constexpr std::size_t kBatchSize = 64;

struct Pending {
    ArtifactKey key;
    std::string text;
    std::string text_hash;
};

}  // namespace

std::string_view to_string(ArtifactKind kind) {
    return kind == ArtifactKind::full_text ? "full_text" : "description";
}

EmbeddingCache::EmbeddingCache(std::shared_ptr<const EmbeddingProvider> provider)
    : provider_(std::move(provider)), config_hash_(fingerprint(provider_->config_fingerprint())) {}

EmbeddingVector EmbeddingCache::text(std::string_view text) const {
    const std::string key(text);
    {
        std::shared_lock lock(mutex_);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    EmbeddingVector v = provider_->embed(text);
    ++computed_;
    std::unique_lock lock(mutex_);
    return memo_.try_emplace(key, std::move(v)).first->second;
}

EmbeddingVector EmbeddingCache::artifact(const ArtifactKey& key, std::string_view text) const {
    const std::string hash = fingerprint(text);
    {
        std::shared_lock lock(mutex_);
        if (auto it = artifacts_.find(key); it != artifacts_.end() && it->second.text_hash == hash)
            return it->second.vector;
    }
    return this->text(text);
}

EmbeddingVector EmbeddingCache::gui_text(const GuiDocument& doc) const {
    return artifact({doc.gui_id, ArtifactKind::full_text, 0}, gui_full_text(doc));
}

EmbeddingVector EmbeddingCache::description(const GuiDocument& doc, std::size_t index) const {
    if (index >= doc.s2w_descriptions.size())
        throw ContractViolation("description index out of range for " + doc.gui_id);
    return artifact({doc.gui_id, ArtifactKind::description, index}, doc.s2w_descriptions[index]);
}

CacheBuildStats EmbeddingCache::build(const CorpusIndex& index) {
    std::vector<Pending> wanted;
    for (const auto& [id, doc] : index.documents) {
        std::string full = gui_full_text(doc);
        std::string hash = fingerprint(full);
        wanted.push_back({{id, ArtifactKind::full_text, 0}, std::move(full), std::move(hash)});
        for (std::size_t i = 0; i < doc.s2w_descriptions.size(); ++i)
            wanted.push_back({{id, ArtifactKind::description, i}, doc.s2w_descriptions[i],
                              fingerprint(doc.s2w_descriptions[i])});
    }

    CacheBuildStats stats;
    std::vector<const Pending*> missing;
    std::map<ArtifactKey, Entry> next;
    {
        std::shared_lock lock(mutex_);
        for (const auto& p : wanted) {
            auto it = artifacts_.find(p.key);
            if (it != artifacts_.end() && it->second.text_hash == p.text_hash) {
                next.emplace(p.key, it->second);
                ++stats.reused;
            } else {
                missing.push_back(&p);
            }
        }
    }

    for (std::size_t start = 0; start < missing.size(); start += kBatchSize) {
        const std::size_t end = std::min(missing.size(), start + kBatchSize);
        std::vector<std::string> texts;
        for (std::size_t i = start; i < end; ++i) texts.push_back(missing[i]->text);
        auto vectors = provider_->embed_batch(texts);
        computed_ += vectors.size();
        for (std::size_t i = start; i < end; ++i)
            next.emplace(missing[i]->key, Entry{missing[i]->text_hash, std::move(vectors[i - start])});
    }
    stats.computed = missing.size();

    std::unique_lock lock(mutex_);
    artifacts_ = std::move(next);
    corpus_hash_ = elicit::corpus_fingerprint(index);
    return stats;
}

std::size_t EmbeddingCache::artifact_count() const {
    std::shared_lock lock(mutex_);
    return artifacts_.size();
}

bool EmbeddingCache::contains(const ArtifactKey& key) const {
    std::shared_lock lock(mutex_);
    return artifacts_.count(key) > 0;
}

std::string EmbeddingCache::corpus_fingerprint() const {
    std::shared_lock lock(mutex_);
    return corpus_hash_;
}

void EmbeddingCache::save(const std::filesystem::path& path) const {
    json entries = json::array();
    std::string corpus_hash;
    {
        std::shared_lock lock(mutex_);
        corpus_hash = corpus_hash_;
        for (const auto& [key, entry] : artifacts_)
            entries.push_back({{"gui_id", key.gui_id},
                               {"kind", to_string(key.kind)},
                               {"index", key.index},
                               {"text_hash", entry.text_hash},
                               {"values", entry.vector.values}});
    }
    json doc{{"version", kEmbeddingCacheVersion},
             {"config_hash", config_hash_},
             {"corpus_hash", corpus_hash},
             {"entries", std::move(entries)}};

    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw PersistenceError("cannot write embedding cache " + tmp);
        out << doc.dump();
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw PersistenceError("cannot move embedding cache into place: " + ec.message());
}

void EmbeddingCache::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return;
    std::ostringstream buffer;
    buffer << in.rdbuf();

    json doc;
    try {
        doc = json::parse(buffer.str());
    } catch (const json::exception&) {
        return;  // unreadable cache behaves like a cold one
    }
    if (doc.value("version", 0) != kEmbeddingCacheVersion || doc.value("config_hash", "") != config_hash_) return;

    std::map<ArtifactKey, Entry> loaded;
    try {
        for (const auto& e : doc.at("entries")) {
            ArtifactKey key{e.at("gui_id").get<std::string>(),
                            e.at("kind").get<std::string>() == "full_text" ? ArtifactKind::full_text
                                                                           : ArtifactKind::description,
                            e.at("index").get<std::size_t>()};
            EmbeddingVector v{e.at("values").get<std::vector<double>>()};
            if (v.dim() != provider_->dim()) return;
            loaded.emplace(std::move(key), Entry{e.at("text_hash").get<std::string>(), std::move(v)});
        }
    } catch (const json::exception&) {
        return;
    }
    std::unique_lock lock(mutex_);
    artifacts_ = std::move(loaded);
    corpus_hash_ = doc.value("corpus_hash", "");
}

}  // namespace elicit
