#include "elicit/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "elicit/errors.hpp"
#include "elicit/hash.hpp"
#include "http_client.hpp"

namespace elicit {

bool EmbeddingVector::is_zero() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
}

double EmbeddingVector::norm() const {
    double sum = 0.0;
    for (double v : values) sum += v * v;
    return std::sqrt(sum);
}

void normalize(std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v * v;
    if (sum == 0.0) return;
    const double n = std::sqrt(sum);
    for (double& v : values) v /= n;
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim())
        throw ContractViolation("cosine of vectors with different dimensions (" + std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()) + ")");
    double dot = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) dot += a.values[i] * b.values[i];
    return std::clamp(dot, -1.0, 1.0);
}

std::string_view to_string(EmbeddingProviderKind kind) {
    return kind == EmbeddingProviderKind::deterministic_hash ? "deterministic_hash" : "remote_http";
}

EmbeddingProviderKind embedding_provider_kind_from_string(std::string_view name) {
    if (name == "deterministic_hash") return EmbeddingProviderKind::deterministic_hash;
    if (name == "remote_http") return EmbeddingProviderKind::remote_http;
    throw ConfigError("unknown embedding provider '" + std::string(name) + "'");
}

void EmbeddingProviderConfig::validate() const {
    if (dim == 0) throw ConfigError("embedding dim must be positive");
    if (kind == EmbeddingProviderKind::remote_http && endpoint.empty())
        throw ConfigError("remote_http embedding provider requires an endpoint");
}

std::vector<EmbeddingVector> EmbeddingProvider::embed_batch(std::span<const std::string> texts) const {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embed(t));
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c) || c >= 0x80) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

HashEmbeddingProvider::HashEmbeddingProvider(std::size_t dim) : dim_(dim) {
    if (dim_ == 0) throw ConfigError("embedding dim must be positive");
}

EmbeddingVector HashEmbeddingProvider::embed(std::string_view text) const {
    std::vector<double> counts(dim_, 0.0);
    for (const auto& token : tokenize(text)) counts[mix64(fnv1a64(token)) % dim_] += 1.0;
    normalize(counts);
    return {std::move(counts)};
}

std::string HashEmbeddingProvider::config_fingerprint() const {
    return "deterministic_hash/fnv1a64-fmix64/v2/dim=" + std::to_string(dim_);
}

RemoteEmbeddingProvider::RemoteEmbeddingProvider(EmbeddingProviderConfig config) : config_(std::move(config)) {
    config_.validate();
    detail::parse_endpoint(config_.endpoint);
}

EmbeddingVector RemoteEmbeddingProvider::embed(std::string_view text) const {
    std::string owned(text);
    return embed_batch(std::span<const std::string>(&owned, 1)).front();
}

std::vector<EmbeddingVector> RemoteEmbeddingProvider::embed_batch(std::span<const std::string> texts) const {
    std::vector<EmbeddingVector> out(texts.size(), EmbeddingVector::zero(config_.dim));

    // Empty texts never reach the endpoint.
    nlohmann::json request_texts = nlohmann::json::array();
    std::vector<std::size_t> positions;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (tokenize(texts[i]).empty()) continue;
        request_texts.push_back(texts[i]);
        positions.push_back(i);
    }
    if (positions.empty()) return out;

    const auto answer = detail::post_json(config_.endpoint, {{"texts", request_texts}}, config_.api_key);
    if (!answer.is_object() || !answer.contains("vectors") || !answer["vectors"].is_array() ||
        answer["vectors"].size() != positions.size())
        throw ProviderFormatError("embedding answer must hold one vector per text", answer.dump());

    for (std::size_t k = 0; k < positions.size(); ++k) {
        const auto& raw = answer["vectors"][k];
        if (!raw.is_array() || raw.size() != config_.dim)
            throw ProviderFormatError("embedding of wrong dimension (expected " + std::to_string(config_.dim) + ")",
                                      answer.dump());
        std::vector<double> values;
        values.reserve(config_.dim);
        for (const auto& v : raw) {
            if (!v.is_number()) throw ProviderFormatError("embedding holds a non-number", answer.dump());
            values.push_back(v.get<double>());
        }
        normalize(values);
        out[positions[k]] = {std::move(values)};
    }
    return out;
}

std::string RemoteEmbeddingProvider::config_fingerprint() const {
    return "remote_http/" + config_.endpoint + "/dim=" + std::to_string(config_.dim);
}

std::shared_ptr<const EmbeddingProvider> make_embedding_provider(const EmbeddingProviderConfig& config) {
    config.validate();
    if (config.kind == EmbeddingProviderKind::remote_http) return std::make_shared<RemoteEmbeddingProvider>(config);
    return std::make_shared<HashEmbeddingProvider>(config.dim);
}

}  // namespace elicit
