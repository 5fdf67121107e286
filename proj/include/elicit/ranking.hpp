#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elicit/corpus.hpp"
#include "elicit/embedding_cache.hpp"
#include "elicit/feature.hpp"

namespace elicit {

struct RankingConfig {
    double alpha = 0.5;      // ensemble weight on the GUI-text score
    double beta = 0.5;       // rerank weight on the query score
    std::size_t top_k = 30;

    void validate() const;  // throws ConfigError
    bool operator==(const RankingConfig&) const = default;
};

struct RankedGui {
    std::string gui_id;
    double s1 = 0.0;
    std::optional<double> s2;
    double ensemble = 0.0;
    std::optional<double> rerank_score;
    std::size_t rank = 0;

    bool operator==(const RankedGui&) const = default;
};

// Trims and collapses whitespace.
std::string normalize_query(std::string_view query);

// Cosine between the query and the GUI's full text.
double score_s1(std::string_view query, const GuiDocument& doc, const EmbeddingCache& embeddings);

// Mean cosine against the available crowd descriptions; nullopt if none.
std::optional<double> score_s2(std::string_view query, const GuiDocument& doc, const EmbeddingCache& embeddings);

// alpha * s1 + (1 - alpha) * s2, or s1 alone when s2 is absent.
double ensemble_score(double s1, std::optional<double> s2, double alpha);
double ensemble_score(std::string_view query, const GuiDocument& doc, const RankingConfig& config,
                      const EmbeddingCache& embeddings);

// Scores every GUI of the index; returns the top_k. Throws QueryError for a
// blank query.
std::vector<RankedGui> rank_guis(std::string_view query, const CorpusIndex& index, const RankingConfig& config,
                                 const EmbeddingCache& embeddings);

// Feedback reranking restricted to `ranked`:
//   rerank_score = beta * ensemble + (1 - beta) * mean_f S_g(f, GUI)
// Throws ContractViolation when `confirmed` is empty.
std::vector<RankedGui> rerank(std::span<const RankedGui> ranked, std::span<const FeatureQuery> confirmed,
                              const RankingConfig& config, const CorpusIndex& index,
                              const EmbeddingCache& embeddings);

// Orders by `score_of` descending, ties by ascending gui_id, and assigns
// ranks 1..n.
template <typename ScoreFn>
void sort_and_assign_ranks(std::vector<RankedGui>& ranked, ScoreFn score_of) {
    std::sort(ranked.begin(), ranked.end(), [&](const RankedGui& a, const RankedGui& b) {
        const double sa = score_of(a);
        const double sb = score_of(b);
        if (sa != sb) return sa > sb;
        return a.gui_id < b.gui_id;
    });
    for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i].rank = i + 1;
}

}  // namespace elicit
