#include "elicit/ranking.hpp"

#include <cctype>

#include "elicit/errors.hpp"
#include "elicit/feature_match.hpp"

namespace elicit {

void RankingConfig::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
    if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("beta must lie in [0, 1]");
    if (top_k == 0) throw ConfigError("top_k must be positive");
}

std::string normalize_query(std::string_view query) {
    std::string out;
    bool pending_space = false;
    for (char ch : query) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(ch);
    }
    return out;
}

double score_s1(std::string_view query, const GuiDocument& doc, const EmbeddingCache& embeddings) {
    return cosine(embeddings.text(query), embeddings.gui_text(doc));
}

std::optional<double> score_s2(std::string_view query, const GuiDocument& doc, const EmbeddingCache& embeddings) {
    const std::size_t n = doc.s2w_descriptions.size();
    if (n == 0) return std::nullopt;
    const EmbeddingVector q = embeddings.text(query);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += cosine(q, embeddings.description(doc, i));
    return sum / static_cast<double>(n);
}

double ensemble_score(double s1, std::optional<double> s2, double alpha) {
    if (!s2) return s1;
    return alpha * s1 + (1.0 - alpha) * *s2;
}

double ensemble_score(std::string_view query, const GuiDocument& doc, const RankingConfig& config,
                      const EmbeddingCache& embeddings) {
    return ensemble_score(score_s1(query, doc, embeddings), score_s2(query, doc, embeddings), config.alpha);
}

std::vector<RankedGui> rank_guis(std::string_view query, const CorpusIndex& index, const RankingConfig& config,
                                 const EmbeddingCache& embeddings) {
    config.validate();
    const std::string normalized = normalize_query(query);
    if (normalized.empty()) throw QueryError("GUI query is empty");

    std::vector<RankedGui> ranked;
    ranked.reserve(index.size());
    for (const auto& [id, doc] : index.documents) {
        RankedGui r;
        r.gui_id = id;
        r.s1 = score_s1(normalized, doc, embeddings);
        r.s2 = score_s2(normalized, doc, embeddings);
        r.ensemble = ensemble_score(r.s1, r.s2, config.alpha);
        ranked.push_back(std::move(r));
    }
    sort_and_assign_ranks(ranked, [](const RankedGui& r) { return r.ensemble; });
    if (ranked.size() > config.top_k) ranked.resize(config.top_k);
    return ranked;
}

std::vector<RankedGui> rerank(std::span<const RankedGui> ranked, std::span<const FeatureQuery> confirmed,
                              const RankingConfig& config, const CorpusIndex& index,
                              const EmbeddingCache& embeddings) {
    config.validate();
    if (confirmed.empty()) throw ContractViolation("rerank needs at least one confirmed feature");

    std::vector<RankedGui> out(ranked.begin(), ranked.end());
    const double n = static_cast<double>(confirmed.size());
    for (auto& r : out) {
        const GuiDocument& doc = index.at(r.gui_id);
        double sum = 0.0;
        for (const auto& f : confirmed) sum += score_feature_gui(f.text, doc, embeddings).score;
        r.rerank_score = config.beta * r.ensemble + (1.0 - config.beta) * (sum / n);
    }
    sort_and_assign_ranks(out, [](const RankedGui& r) { return *r.rerank_score; });
    return out;
}

}  // namespace elicit
