#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elicit/corpus.hpp"
#include "elicit/embedding_cache.hpp"
#include "elicit/feature.hpp"
#include "elicit/ranking.hpp"

namespace elicit {

inline constexpr std::size_t kDefaultAspectK = 15;

struct FeatureGuiMatch {
    double score = 0.0;
    std::optional<std::string> component_id;
};

// Best cosine between the feature text and any text candidate of the
// component; 0 when the component has no candidates.
double score_feature_component(std::string_view feature_text, const GuiComponent& component,
                               const EmbeddingCache& embeddings);

// Maximum over all components of the GUI. Ties go to the first component in
// document order.
FeatureGuiMatch score_feature_gui(std::string_view feature_text, const GuiDocument& doc,
                                  const EmbeddingCache& embeddings);

// One aspect-GUI per ranked GUI, ordered by GUI score (desc) then gui_id,
// truncated to k_aspect.
std::vector<AspectGui> rank_aspect_guis(std::string_view feature_text, std::span<const RankedGui> ranked,
                                        std::size_t k_aspect, const CorpusIndex& index,
                                        const EmbeddingCache& embeddings);

}  // namespace elicit
