#include "elicit/recommend.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "elicit/errors.hpp"
#include "elicit/feature_match.hpp"

namespace elicit {

namespace {

std::string trim(std::string_view s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

std::string recommendation_instructions(std::size_t max_features) {
    return "You help a customer prototype the GUIs of a mobile app. Given the requirements for the current GUI, "
           "the features the customer already specified and the GUI the customer selected as a starting point, "
           "recommend the top-" +
           std::to_string(max_features) +
           " additional GUI features that are relevant in this context and not yet covered. Describe each "
           "feature in a few words. Answer with a JSON array of strings and nothing else.";
}

constexpr std::string_view kExplanationInstructions =
    "Explain in one or two sentences why the GUI feature below is useful for the app described by the "
    "requirements. Answer with the explanation only.";

// Example bodies are indented so their GUI lines never read as part of the
// selected GUI.
void render_indented(std::ostringstream& out, std::string_view text) {
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find('\n', start), text.size());
        out << "    " << text.substr(start, end - start) << "\n";
        start = end + 1;
    }
}

void render_examples(std::ostringstream& out, std::span<const FewShotExample> examples) {
    std::size_t n = 0;
    for (const auto& ex : examples) {
        out << "### Example " << ++n << "\nContext:\n";
        render_indented(out, ex.context);
        out << "Answer:\n";
        render_indented(out, ex.output);
        out << "\n";
    }
}

std::vector<FewShotExample> parse_examples(const nlohmann::json& doc, const char* key) {
    std::vector<FewShotExample> out;
    if (!doc.contains(key)) return out;
    if (!doc[key].is_array()) throw ParseError(std::string("few-shot '") + key + "' must be an array");
    for (const auto& e : doc[key]) {
        if (!e.is_object() || !e.contains("context") || !e.contains("output") || !e["context"].is_string() ||
            !e["output"].is_string())
            throw ParseError(std::string("few-shot '") + key + "' entries need string context and output");
        out.push_back({e["context"].get<std::string>(), e["output"].get<std::string>()});
    }
    return out;
}

}  // namespace

FewShotExamples FewShotExamples::builtin() {
    FewShotExamples ex;
    ex.recommendation.push_back(
        {"Requirements: A screen where I can see the weather forecast for my city.\n"
         "Selected GUI:\n"
         "- \"\" (CONTAINER) (forecast_panel):\n"
         "  - \"Berlin\" (TEXT) (city_name)\n"
         "  - \"21°C\" (TEXT) (current_temperature)\n"
         "  - \"\" (IMAGE) (weather_icon)\n"
         "Specified features:\n"
         "- hourly forecast",
         "[\"search bar for cities\", \"weekly forecast list\", \"refresh button\", \"unit toggle celsius "
         "fahrenheit\", \"rain probability\", \"wind speed\"]"});
    ex.recommendation.push_back(
        {"Requirements: A login screen for a banking app.\n"
         "Selected GUI:\n"
         "- (ungrouped):\n"
         "  - \"\" (TEXT_INPUT) (username_input)\n"
         "  - \"\" (TEXT_INPUT) (password_input)\n"
         "  - \"Log in\" (BUTTON) (btn_login)\n"
         "Specified features:\n"
         "(none)",
         "[\"forgot password link\", \"remember me checkbox\", \"fingerprint login\", \"sign up button\", "
         "\"show password toggle\"]"});
    ex.explanation.push_back(
        {"Requirements: A screen where I can see the weather forecast for my city.\nFeature: weekly forecast list",
         "A weekly forecast list lets users plan ahead by showing the expected weather for the next days at a "
         "glance."});
    ex.explanation.push_back(
        {"Requirements: A login screen for a banking app.\nFeature: forgot password link",
         "Users who cannot remember their password need a way to recover their account without contacting "
         "support."});
    return ex;
}

FewShotExamples FewShotExamples::from_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read few-shot examples " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(buffer.str());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("few-shot file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("few-shot file must be a JSON object");
    return {parse_examples(doc, "recommendation"), parse_examples(doc, "explanation")};
}

std::string render_recommendation_prompt(const PromptBundle& bundle) {
    std::ostringstream out;
    out << "## Task\n" << bundle.task_instructions << "\n\n";
    out << "## Requirements for the GUI\n" << bundle.nlr_gui << "\n\n";
    out << "## Selected GUI\n" << bundle.flattened_gui << "\n";
    out << "## Specified features\n";
    if (bundle.specified_features.empty()) out << "(none)\n";
    for (const auto& f : bundle.specified_features) out << "- " << f << "\n";
    out << "\n## Examples\n";
    render_examples(out, bundle.few_shot_examples);
    out << "## Answer\n";
    return out.str();
}

PromptBundle build_recommendation_prompt(std::string_view nlr_gui, std::span<const FeatureQuery> features,
                                         const GuiDocument& selected, std::span<const FewShotExample> examples,
                                         std::size_t max_features) {
    PromptBundle bundle;
    bundle.task_instructions = recommendation_instructions(max_features);
    bundle.nlr_gui = std::string(nlr_gui);
    for (const auto& f : features)
        if (f.status != FeatureStatus::rejected) bundle.specified_features.push_back(f.text);
    bundle.flattened_gui = flatten_hierarchy_for_prompt(selected);
    bundle.few_shot_examples.assign(examples.begin(), examples.end());
    bundle.rendered = render_recommendation_prompt(bundle);
    return bundle;
}

PromptBundle build_explanation_prompt(const FeatureQuery& feature, std::string_view nlr_gui,
                                      std::span<const FewShotExample> examples) {
    PromptBundle bundle;
    bundle.task_instructions = std::string(kExplanationInstructions);
    bundle.nlr_gui = std::string(nlr_gui);
    bundle.specified_features = {feature.text};
    bundle.few_shot_examples.assign(examples.begin(), examples.end());

    std::ostringstream out;
    out << "## Task\n" << bundle.task_instructions << "\n\n## Examples\n";
    render_examples(out, bundle.few_shot_examples);
    out << "## Requirements for the GUI\n" << bundle.nlr_gui << "\n\n";
    out << "## Feature to explain\n" << feature.text << "\n\n## Answer\n";
    bundle.rendered = out.str();
    return bundle;
}

std::vector<FeatureQuery> parse_feature_list(std::string_view raw, std::size_t max_features,
                                             std::string_view id_prefix) {
    const std::string text = trim(raw);
    nlohmann::json parsed = nlohmann::json::parse(text, nullptr, false);
    if (!parsed.is_array()) {
        // Tolerate code fences or a sentence around the array.
        const auto open = text.find('[');
        const auto close = text.rfind(']');
        if (open != std::string::npos && close != std::string::npos && close > open)
            parsed = nlohmann::json::parse(text.substr(open, close - open + 1), nullptr, false);
    }
    if (!parsed.is_array()) throw ProviderFormatError("LLM output is not a JSON array of strings", std::string(raw));

    std::vector<FeatureQuery> out;
    std::unordered_set<std::string> seen;
    for (const auto& item : parsed) {
        if (!item.is_string()) throw ProviderFormatError("LLM output array holds a non-string", std::string(raw));
        std::string feature = trim(item.get<std::string>());
        if (feature.empty() || !seen.insert(fold_case(feature)).second) continue;
        if (out.size() == max_features) break;
        FeatureQuery q;
        q.feature_id = std::string(id_prefix) + std::to_string(out.size() + 1);
        q.text = std::move(feature);
        q.origin = FeatureOrigin::recommended;
        q.status = FeatureStatus::open;
        out.push_back(std::move(q));
    }
    return out;
}

double score_predicted_feature(std::string_view feature_text, std::span<const RankedGui> ranked,
                               const CorpusIndex& index, const EmbeddingCache& embeddings) {
    if (ranked.empty()) throw ContractViolation("coverage score needs a non-empty ranking");
    double sum = 0.0;
    for (const auto& r : ranked) sum += score_feature_gui(feature_text, index.at(r.gui_id), embeddings).score;
    return sum / static_cast<double>(ranked.size());
}

std::vector<PredictedFeature> predict_features(const RecommendationContext& context, LlmProvider& provider,
                                               const FewShotExamples& examples,
                                               const RecommendationSettings& settings) {
    if (!context.selected) throw ContractViolation("recommendations need a selected GUI");

    const PromptBundle prompt = build_recommendation_prompt(context.nlr_gui, context.features, *context.selected,
                                                            examples.recommendation, settings.max_features);
    const std::string raw = provider.complete(prompt.rendered, settings.max_tokens);
    auto parsed = parse_feature_list(raw, settings.max_features, settings.id_prefix);

    std::unordered_set<std::string> known;
    for (const auto& f : context.features)
        if (f.origin == FeatureOrigin::customer || f.is_confirmed()) known.insert(fold_case(f.text));

    std::vector<PredictedFeature> out;
    for (auto& feature : parsed) {
        if (known.count(fold_case(feature.text))) continue;
        PredictedFeature p{std::move(feature), {}};
        const auto explanation_prompt = build_explanation_prompt(p.feature, context.nlr_gui, examples.explanation);
        try {
            p.explanation = trim(provider.complete(explanation_prompt.rendered, settings.max_tokens));
        } catch (const ScriptMissError&) {
            spdlog::warn("no scripted explanation for feature '{}'", p.feature.text);
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<FeatureRecommendation> score_recommendations(std::span<const PredictedFeature> predicted,
                                                         std::span<const RankedGui> ranked,
                                                         std::size_t k_aspect, const CorpusIndex& index,
                                                         const EmbeddingCache& embeddings) {
    std::vector<FeatureRecommendation> out;
    out.reserve(predicted.size());
    for (const auto& p : predicted) {
        FeatureRecommendation rec;
        rec.feature = p.feature;
        rec.explanation = p.explanation;
        rec.coverage_score = score_predicted_feature(p.feature.text, ranked, index, embeddings);
        rec.aspect_ranking = rank_aspect_guis(p.feature.text, ranked, k_aspect, index, embeddings);
        out.push_back(std::move(rec));
    }
    std::stable_sort(out.begin(), out.end(), [](const FeatureRecommendation& a, const FeatureRecommendation& b) {
        return a.coverage_score > b.coverage_score;
    });
    return out;
}

std::vector<FeatureRecommendation> recommend_features(const RecommendationContext& context, LlmProvider& provider,
                                                      const FewShotExamples& examples,
                                                      const RecommendationSettings& settings,
                                                      const CorpusIndex& index, const EmbeddingCache& embeddings) {
    if (context.ranked.empty()) throw ContractViolation("recommendations need a current GUI ranking");
    const auto predicted = predict_features(context, provider, examples, settings);
    return score_recommendations(predicted, context.ranked, settings.k_aspect, index, embeddings);
}

}  // namespace elicit
