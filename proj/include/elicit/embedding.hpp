#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace elicit {

// Unit-length vector, or all zeros for text without tokens.
struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
    bool is_zero() const;
    double norm() const;

    static EmbeddingVector zero(std::size_t dim) { return {std::vector<double>(dim, 0.0)}; }
    bool operator==(const EmbeddingVector&) const = default;
};

// Dot product of two normalized vectors, clamped to [-1, 1]; 0 when either
// is the zero vector. Throws ContractViolation on dimension mismatch.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

// Scales to unit L2 norm in place; leaves zero vectors untouched.
void normalize(std::vector<double>& values);

enum class EmbeddingProviderKind { deterministic_hash, remote_http };

std::string_view to_string(EmbeddingProviderKind kind);
EmbeddingProviderKind embedding_provider_kind_from_string(std::string_view name);

struct EmbeddingProviderConfig {
    EmbeddingProviderKind kind = EmbeddingProviderKind::deterministic_hash;
    std::size_t dim = 256;
    std::string endpoint;  // http://host:port/path, remote only
    std::string api_key;   // sent as a bearer token when non-empty
    std::optional<std::string> cache_path;

    void validate() const;  // throws ConfigError
    bool operator==(const EmbeddingProviderConfig&) const = default;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    virtual EmbeddingVector embed(std::string_view text) const = 0;
    virtual std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const;
    virtual std::size_t dim() const = 0;

    // Stable description of everything that influences the vectors; part of
    // the embedding cache key.
    virtual std::string config_fingerprint() const = 0;
    virtual std::string_view kind() const = 0;
};

// Lowercase ASCII, split on non-alphanumeric bytes (bytes >= 0x80 are kept
// inside tokens so UTF-8 words stay whole).
std::vector<std::string> tokenize(std::string_view text);

// Bag-of-tokens embedding: each token is hashed with FNV-1a 64 into
// `hash % dim`, counts accumulate, and the vector is L2-normalized in index
// order. Pure and platform independent.
class HashEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit HashEmbeddingProvider(std::size_t dim = 256);

    EmbeddingVector embed(std::string_view text) const override;
    std::size_t dim() const override { return dim_; }
    std::string config_fingerprint() const override;
    std::string_view kind() const override { return "deterministic_hash"; }

private:
    std::size_t dim_;
};

// POST {"texts": [...]} -> {"vectors": [[...], ...]}. Transport failures
// raise ProviderUnavailableError; malformed answers ProviderFormatError.
class RemoteEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit RemoteEmbeddingProvider(EmbeddingProviderConfig config);

    EmbeddingVector embed(std::string_view text) const override;
    std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const override;
    std::size_t dim() const override { return config_.dim; }
    std::string config_fingerprint() const override;
    std::string_view kind() const override { return "remote_http"; }

private:
    EmbeddingProviderConfig config_;
};

std::shared_ptr<const EmbeddingProvider> make_embedding_provider(const EmbeddingProviderConfig& config);

}  // namespace elicit
