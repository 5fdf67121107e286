#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elicit/corpus.hpp"
#include "elicit/embedding_cache.hpp"
#include "elicit/feature.hpp"
#include "elicit/llm.hpp"
#include "elicit/ranking.hpp"

namespace elicit {

struct FewShotExample {
    std::string context;
    std::string output;

    bool operator==(const FewShotExample&) const = default;
};

struct FewShotExamples {
    std::vector<FewShotExample> recommendation;
    std::vector<FewShotExample> explanation;

    // Exemplars compiled into the library.
    static FewShotExamples builtin();
    // {"recommendation": [{"context": ..., "output": ...}], "explanation": [...]}
    static FewShotExamples from_file(const std::filesystem::path& path);
};

struct PromptBundle {
    std::string task_instructions;
    std::string nlr_gui;
    std::vector<std::string> specified_features;
    std::string flattened_gui;
    std::vector<FewShotExample> few_shot_examples;
    std::string rendered;
};

// Renders the fields of a bundle in section order: task, requirements,
// selected GUI, specified features, examples.
std::string render_recommendation_prompt(const PromptBundle& bundle);

PromptBundle build_recommendation_prompt(std::string_view nlr_gui, std::span<const FeatureQuery> features,
                                         const GuiDocument& selected, std::span<const FewShotExample> examples,
                                         std::size_t max_features = 30);

PromptBundle build_explanation_prompt(const FeatureQuery& feature, std::string_view nlr_gui,
                                      std::span<const FewShotExample> examples);

// Parses a JSON array of feature strings (a surrounding code fence or prose
// is tolerated). Blank entries are dropped, duplicates are removed case
// insensitively, and the list is cut at max_features. Ids are
// `id_prefix + position`. Throws ProviderFormatError with the raw text.
std::vector<FeatureQuery> parse_feature_list(std::string_view raw, std::size_t max_features,
                                             std::string_view id_prefix = "rec-");

// Mean of the best per-GUI match over the ranked GUIs.
double score_predicted_feature(std::string_view feature_text, std::span<const RankedGui> ranked,
                               const CorpusIndex& index, const EmbeddingCache& embeddings);

struct FeatureRecommendation {
    FeatureQuery feature;
    std::string explanation;
    double coverage_score = 0.0;
    std::vector<AspectGui> aspect_ranking;

    bool operator==(const FeatureRecommendation&) const = default;
};

// Provider output for one recommendation, before scoring.
struct PredictedFeature {
    FeatureQuery feature;
    std::string explanation;

    bool operator==(const PredictedFeature&) const = default;
};

struct RecommendationContext {
    std::string nlr_gui;
    std::vector<FeatureQuery> features;  // features already in the slot
    const GuiDocument* selected = nullptr;
    std::vector<RankedGui> ranked;
};

struct RecommendationSettings {
    std::size_t max_features = 30;
    std::size_t k_aspect = 15;
    int max_tokens = 1024;
    std::string id_prefix = "rec-";
};

// Builds the prompt, queries the provider, drops features that duplicate
// specified or confirmed ones, and fetches an explanation for each remaining
// feature. A missing scripted explanation degrades to an empty string with a
// logged warning.
std::vector<PredictedFeature> predict_features(const RecommendationContext& context, LlmProvider& provider,
                                               const FewShotExamples& examples,
                                               const RecommendationSettings& settings);

// Scores predictions by coverage over the ranked GUIs and sorts them
// (descending, ties keep provider order). Pure given the embeddings.
std::vector<FeatureRecommendation> score_recommendations(std::span<const PredictedFeature> predicted,
                                                         std::span<const RankedGui> ranked,
                                                         std::size_t k_aspect, const CorpusIndex& index,
                                                         const EmbeddingCache& embeddings);

std::vector<FeatureRecommendation> recommend_features(const RecommendationContext& context, LlmProvider& provider,
                                                      const FewShotExamples& examples,
                                                      const RecommendationSettings& settings,
                                                      const CorpusIndex& index, const EmbeddingCache& embeddings);

}  // namespace elicit
