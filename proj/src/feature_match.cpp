#include "elicit/feature_match.hpp"

#include <algorithm>

namespace elicit {

double score_feature_component(std::string_view feature_text, const GuiComponent& component,
                               const EmbeddingCache& embeddings) {
    const auto candidates = component_text_candidates(component);
    if (candidates.empty()) return 0.0;
    const EmbeddingVector feature = embeddings.text(feature_text);
    double best = cosine(feature, embeddings.text(candidates.front()));
    for (std::size_t i = 1; i < candidates.size(); ++i)
        best = std::max(best, cosine(feature, embeddings.text(candidates[i])));
    return best;
}

FeatureGuiMatch score_feature_gui(std::string_view feature_text, const GuiDocument& doc,
                                  const EmbeddingCache& embeddings) {
    FeatureGuiMatch best;
    for_each_component(doc.root, [&](const GuiComponent& c) {
        const double s = score_feature_component(feature_text, c, embeddings);
        if (!best.component_id || s > best.score) {
            best.score = s;
            best.component_id = c.component_id;
        }
    });
    return best;
}

std::vector<AspectGui> rank_aspect_guis(std::string_view feature_text, std::span<const RankedGui> ranked,
                                        std::size_t k_aspect, const CorpusIndex& index,
                                        const EmbeddingCache& embeddings) {
    std::vector<AspectGui> out;
    out.reserve(ranked.size());
    for (const auto& r : ranked) {
        const auto match = score_feature_gui(feature_text, index.at(r.gui_id), embeddings);
        if (!match.component_id) continue;
        out.push_back({r.gui_id, *match.component_id, match.score, match.score});
    }
    std::sort(out.begin(), out.end(), [](const AspectGui& a, const AspectGui& b) {
        if (a.gui_score != b.gui_score) return a.gui_score > b.gui_score;
        return a.gui_id < b.gui_id;
    });
    if (out.size() > k_aspect) out.resize(k_aspect);
    return out;
}

}  // namespace elicit
