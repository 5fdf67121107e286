#include "elicit/serialization.hpp"

#include <algorithm>
#include <stdexcept>

#include "elicit/errors.hpp"

namespace elicit {

namespace {

const json& require(const json& j, const char* key) {
    if (!j.is_object()) throw std::runtime_error(std::string("expected an object holding '") + key + "'");
    auto it = j.find(key);
    if (it == j.end()) throw std::runtime_error(std::string("missing required field '") + key + "'");
    return *it;
}

std::string require_string(const json& j, const char* key) {
    const json& v = require(j, key);
    if (!v.is_string()) throw std::runtime_error(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

std::string optional_string(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return {};
    if (!it->is_string()) throw std::runtime_error(std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

std::vector<std::string> optional_string_list(const json& j, const char* key) {
    std::vector<std::string> out;
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return out;
    if (!it->is_array()) throw std::runtime_error(std::string("field '") + key + "' must be an array of strings");
    for (const auto& v : *it) {
        if (!v.is_string()) throw std::runtime_error(std::string("field '") + key + "' must be an array of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

template <typename T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_value(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<T>();
}

}  // namespace

// --- corpus ---------------------------------------------------------------

void to_json(json& j, const Bounds& b) { j = json::array({b.left, b.top, b.right, b.bottom}); }

void from_json(const json& j, Bounds& b) {
    if (!j.is_array() || j.size() != 4 || !std::all_of(j.begin(), j.end(), [](const json& v) {
            return v.is_number_integer();
        }))
        throw std::runtime_error("bounds must be four integers [left, top, right, bottom]");
    b = {j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}

void to_json(json& j, const GuiComponent& c) {
    j = json{{"component_id", c.component_id},
             {"component_type", c.component_type},
             {"displayed_text", c.displayed_text},
             {"resource_id", c.resource_id},
             {"semantic_classes", c.semantic_classes},
             {"bounds", c.bounds},
             {"children", c.children}};
}

void from_json(const json& j, GuiComponent& c) {
    c.component_id = require_string(j, "component_id");
    c.component_type = require_string(j, "component_type");
    c.displayed_text = optional_string(j, "displayed_text");
    c.resource_id = optional_string(j, "resource_id");
    c.semantic_classes = optional_string_list(j, "semantic_classes");
    c.bounds = require(j, "bounds").get<Bounds>();
    c.children.clear();
    if (auto it = j.find("children"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) throw std::runtime_error("children of '" + c.component_id + "' must be an array");
        for (const auto& child : *it) c.children.push_back(child.get<GuiComponent>());
    }
}

void to_json(json& j, const GuiDocument& d) {
    j = json{{"gui_id", d.gui_id},
             {"app_id", d.app_id},
             {"screenshot_ref", optional_json(d.screenshot_ref)},
             {"root", d.root},
             {"s2w_descriptions", d.s2w_descriptions},
             {"filter_flags", d.filter_flags},
             {"language_tag", d.language_tag}};
}

void from_json(const json& j, GuiDocument& d) {
    d.gui_id = require_string(j, "gui_id");
    d.app_id = require_string(j, "app_id");
    const std::string shot = optional_string(j, "screenshot_ref");
    d.screenshot_ref = shot.empty() ? std::nullopt : std::optional<std::string>(shot);
    d.root = require(j, "root").get<GuiComponent>();
    d.s2w_descriptions = optional_string_list(j, "s2w_descriptions");
    const auto flags = optional_string_list(j, "filter_flags");
    d.filter_flags = {flags.begin(), flags.end()};
    d.language_tag = j.contains("language_tag") ? require_string(j, "language_tag") : "en";
}

void to_json(json& j, const FilterReport& r) {
    json removed = json::array();
    for (const auto& g : r.removed) removed.push_back({{"gui_id", g.gui_id}, {"reasons", g.reasons}});
    j = json{{"removals_by_rule", r.removals_by_rule}, {"removed", removed}};
}

// --- ranking / features -------------------------------------------------

void to_json(json& j, const RankingConfig& c) {
    j = json{{"alpha", c.alpha}, {"beta", c.beta}, {"top_k", c.top_k}};
}

void from_json(const json& j, RankingConfig& c) {
    RankingConfig d;
    c.alpha = j.value("alpha", d.alpha);
    c.beta = j.value("beta", d.beta);
    c.top_k = j.value("top_k", d.top_k);
}

void to_json(json& j, const RankedGui& r) {
    j = json{{"gui_id", r.gui_id},
             {"s1", r.s1},
             {"s2", optional_json(r.s2)},
             {"ensemble", r.ensemble},
             {"rerank_score", optional_json(r.rerank_score)},
             {"rank", r.rank}};
}

void from_json(const json& j, RankedGui& r) {
    r.gui_id = j.at("gui_id").get<std::string>();
    r.s1 = j.at("s1").get<double>();
    r.s2 = optional_value<double>(j, "s2");
    r.ensemble = j.at("ensemble").get<double>();
    r.rerank_score = optional_value<double>(j, "rerank_score");
    r.rank = j.at("rank").get<std::size_t>();
}

void to_json(json& j, const FeatureQuery& f) {
    j = json{{"feature_id", f.feature_id},
             {"text", f.text},
             {"origin", to_string(f.origin)},
             {"status", to_string(f.status)}};
}

void from_json(const json& j, FeatureQuery& f) {
    f.feature_id = j.at("feature_id").get<std::string>();
    f.text = j.at("text").get<std::string>();
    f.origin = feature_origin_from_string(j.at("origin").get<std::string>());
    f.status = feature_status_from_string(j.at("status").get<std::string>());
}

void to_json(json& j, const AspectGui& a) {
    j = json{{"gui_id", a.gui_id}, {"component_id", a.component_id}, {"score", a.score}, {"gui_score", a.gui_score}};
}

void from_json(const json& j, AspectGui& a) {
    a.gui_id = j.at("gui_id").get<std::string>();
    a.component_id = j.at("component_id").get<std::string>();
    a.score = j.at("score").get<double>();
    a.gui_score = j.at("gui_score").get<double>();
}

void to_json(json& j, const PredictedFeature& p) {
    j = json{{"feature", p.feature}, {"explanation", p.explanation}};
}

void from_json(const json& j, PredictedFeature& p) {
    p.feature = j.at("feature").get<FeatureQuery>();
    p.explanation = j.at("explanation").get<std::string>();
}

void to_json(json& j, const FeatureRecommendation& r) {
    j = json{{"feature", r.feature},
             {"explanation", r.explanation},
             {"coverage_score", r.coverage_score},
             {"aspect_ranking", r.aspect_ranking}};
}

void from_json(const json& j, FeatureRecommendation& r) {
    r.feature = j.at("feature").get<FeatureQuery>();
    r.explanation = j.at("explanation").get<std::string>();
    r.coverage_score = j.at("coverage_score").get<double>();
    r.aspect_ranking = j.at("aspect_ranking").get<std::vector<AspectGui>>();
}

// --- session ----------------------------------------------------------------

void to_json(json& j, const AspectRef& a) { j = json{{"gui_id", a.gui_id}, {"component_id", a.component_id}}; }

void from_json(const json& j, AspectRef& a) {
    a.gui_id = require_string(j, "gui_id");
    a.component_id = require_string(j, "component_id");
}

void to_json(json& j, const SessionConfig& c) {
    j = json{{"ranking", c.ranking},
             {"k_aspect", c.k_aspect},
             {"max_features", c.max_features},
             {"corpus_fingerprint", c.corpus_fingerprint},
             {"embedding_provider", c.embedding_provider},
             {"llm_provider", c.llm_provider}};
}

void from_json(const json& j, SessionConfig& c) {
    SessionConfig d;
    c.ranking = j.contains("ranking") ? j["ranking"].get<RankingConfig>() : d.ranking;
    c.k_aspect = j.value("k_aspect", d.k_aspect);
    c.max_features = j.value("max_features", d.max_features);
    c.corpus_fingerprint = j.value("corpus_fingerprint", "");
    c.embedding_provider = j.value("embedding_provider", "");
    c.llm_provider = j.value("llm_provider", "");
}

void to_json(json& j, const GuiSlot& s) {
    j = json{{"nlr_gui", s.nlr_gui},
             {"phase", to_string(s.phase)},
             {"current_ranking", s.current_ranking},
             {"selected_gui", optional_json(s.selected_gui)},
             {"features", s.features},
             {"aspect_selections", s.aspect_selections},
             {"aspect_rankings", s.aspect_rankings},
             {"pending_recommendations", s.pending_recommendations},
             {"unmatched_requirements", s.unmatched_requirements}};
}

void from_json(const json& j, GuiSlot& s) {
    s.nlr_gui = j.at("nlr_gui").get<std::string>();
    s.phase = slot_phase_from_string(j.at("phase").get<std::string>());
    s.current_ranking = j.at("current_ranking").get<std::vector<RankedGui>>();
    s.selected_gui = optional_value<std::string>(j, "selected_gui");
    s.features = j.at("features").get<std::vector<FeatureQuery>>();
    s.aspect_selections = j.at("aspect_selections").get<std::map<std::string, AspectGui>>();
    s.aspect_rankings = j.at("aspect_rankings").get<std::map<std::string, std::vector<AspectGui>>>();
    s.pending_recommendations = j.at("pending_recommendations").get<std::vector<FeatureRecommendation>>();
    s.unmatched_requirements = j.at("unmatched_requirements").get<std::vector<std::string>>();
}

namespace {

struct PayloadWriter {
    json& j;

    void operator()(const events::SessionCreated& e) const {
        j["session_id"] = e.session_id;
        j["app_name"] = e.app_name;
        j["config"] = e.config;
    }
    void operator()(const events::GuiQuerySubmitted& e) const {
        j["slot"] = e.slot;
        j["nlr_gui"] = e.nlr_gui;
    }
    void operator()(const events::GuiSelected& e) const {
        j["slot"] = e.slot;
        j["gui_id"] = e.gui_id;
    }
    void operator()(const events::FeatureQuerySubmitted& e) const {
        j["slot"] = e.slot;
        j["feature_id"] = e.feature_id;
        j["text"] = e.text;
    }
    void operator()(const events::FeatureDecided& e) const { decision(e.slot, e.feature_id, e.decision, e.aspect); }
    void operator()(const events::RecommendationsReceived& e) const {
        j["slot"] = e.slot;
        j["predictions"] = e.predictions;
    }
    void operator()(const events::RecommendationDecided& e) const {
        decision(e.slot, e.feature_id, e.decision, e.aspect);
    }
    void operator()(const events::SlotCompleted& e) const { j["slot"] = e.slot; }

    void decision(std::size_t slot, const std::string& feature_id, FeatureDecision d,
                  const std::optional<AspectRef>& aspect) const {
        j["slot"] = slot;
        j["feature_id"] = feature_id;
        j["decision"] = to_string(d);
        j["aspect"] = optional_json(aspect);
    }
};

template <typename Event>
Event read_decision(const json& j) {
    Event e;
    e.slot = j.at("slot").get<std::size_t>();
    e.feature_id = j.at("feature_id").get<std::string>();
    e.decision = feature_decision_from_string(j.at("decision").get<std::string>());
    e.aspect = optional_value<AspectRef>(j, "aspect");
    return e;
}

}  // namespace

void to_json(json& j, const SessionEvent& e) {
    j = json{{"at", format_timestamp(e.at)}, {"type", event_type_name(e.payload)}};
    std::visit(PayloadWriter{j}, e.payload);
}

void from_json(const json& j, SessionEvent& e) {
    e.at = parse_timestamp(j.at("at").get<std::string>());
    const std::string type = j.at("type").get<std::string>();
    if (type == "session_created") {
        e.payload = events::SessionCreated{j.at("session_id").get<std::string>(), j.at("app_name").get<std::string>(),
                                           j.at("config").get<SessionConfig>()};
    } else if (type == "gui_query_submitted") {
        e.payload = events::GuiQuerySubmitted{j.at("slot").get<std::size_t>(), j.at("nlr_gui").get<std::string>()};
    } else if (type == "gui_selected") {
        e.payload = events::GuiSelected{j.at("slot").get<std::size_t>(), j.at("gui_id").get<std::string>()};
    } else if (type == "feature_query_submitted") {
        e.payload = events::FeatureQuerySubmitted{j.at("slot").get<std::size_t>(),
                                                  j.at("feature_id").get<std::string>(),
                                                  j.at("text").get<std::string>()};
    } else if (type == "feature_decided") {
        e.payload = read_decision<events::FeatureDecided>(j);
    } else if (type == "recommendations_received") {
        e.payload = events::RecommendationsReceived{j.at("slot").get<std::size_t>(),
                                                    j.at("predictions").get<std::vector<PredictedFeature>>()};
    } else if (type == "recommendation_decided") {
        e.payload = read_decision<events::RecommendationDecided>(j);
    } else if (type == "slot_completed") {
        e.payload = events::SlotCompleted{j.at("slot").get<std::size_t>()};
    } else {
        throw ParseError("unknown session event type '" + type + "'");
    }
}

json session_summary_json(const SessionState& s) {
    return json{{"session_id", s.session_id},
                {"app_name", s.app_name},
                {"slots", s.slots},
                {"active_slot_index", optional_json(s.active_slot_index)},
                {"created_at", format_timestamp(s.created_at)},
                {"updated_at", format_timestamp(s.updated_at)},
                {"config", s.config},
                {"next_feature_number", s.next_feature_number},
                {"event_count", s.event_log.size()}};
}

void to_json(json& j, const SessionState& s) {
    j = session_summary_json(s);
    j.erase("event_count");
    j["event_log"] = s.event_log;
}

void from_json(const json& j, SessionState& s) {
    s.session_id = j.at("session_id").get<std::string>();
    s.app_name = j.at("app_name").get<std::string>();
    s.slots = j.at("slots").get<std::vector<GuiSlot>>();
    s.active_slot_index = optional_value<std::size_t>(j, "active_slot_index");
    s.created_at = parse_timestamp(j.at("created_at").get<std::string>());
    s.updated_at = parse_timestamp(j.at("updated_at").get<std::string>());
    s.config = j.at("config").get<SessionConfig>();
    s.next_feature_number = j.at("next_feature_number").get<std::size_t>();
    s.event_log = j.at("event_log").get<std::vector<SessionEvent>>();
}

void to_json(json& j, const PrototypeArtifact& a) {
    json slots = json::array();
    for (const auto& r : a.slots) {
        json aspects = json::array();
        for (const auto& x : r.aspect_guis)
            aspects.push_back({{"feature_id", x.feature_id},
                               {"feature_text", x.feature_text},
                               {"gui_id", x.aspect.gui_id},
                               {"component_id", x.aspect.component_id},
                               {"score", x.aspect.score},
                               {"gui_score", x.aspect.gui_score}});
        slots.push_back({{"slot_index", r.slot_index},
                         {"nlr_gui", r.nlr_gui},
                         {"selected_gui", r.selected_gui},
                         {"aspect_guis", aspects},
                         {"textual_requirements", r.textual_requirements}});
    }
    j = json{{"schema_version", kArtifactSchemaVersion},
             {"app_name", a.app_name},
             {"slots", slots},
             {"preview_sequence", a.preview_sequence},
             {"exported_at", format_timestamp(a.exported_at)},
             {"corpus_fingerprint", a.corpus_fingerprint},
             {"embedding_provider", a.embedding_provider},
             {"llm_provider", a.llm_provider}};
}

void from_json(const json& j, PrototypeArtifact& a) {
    if (j.value("schema_version", 0) != kArtifactSchemaVersion) throw ParseError("unsupported artifact schema");
    a.app_name = j.at("app_name").get<std::string>();
    a.slots.clear();
    for (const auto& s : j.at("slots")) {
        SlotRecord r;
        r.slot_index = s.at("slot_index").get<std::size_t>();
        r.nlr_gui = s.at("nlr_gui").get<std::string>();
        r.selected_gui = s.at("selected_gui").get<std::string>();
        for (const auto& x : s.at("aspect_guis"))
            r.aspect_guis.push_back({x.at("feature_id").get<std::string>(), x.at("feature_text").get<std::string>(),
                                     {x.at("gui_id").get<std::string>(), x.at("component_id").get<std::string>(),
                                      x.at("score").get<double>(), x.at("gui_score").get<double>()}});
        r.textual_requirements = s.at("textual_requirements").get<std::vector<std::string>>();
        a.slots.push_back(std::move(r));
    }
    a.preview_sequence = j.at("preview_sequence").get<std::vector<std::string>>();
    a.exported_at = parse_timestamp(j.at("exported_at").get<std::string>());
    a.corpus_fingerprint = j.at("corpus_fingerprint").get<std::string>();
    a.embedding_provider = j.at("embedding_provider").get<std::string>();
    a.llm_provider = j.at("llm_provider").get<std::string>();
}

// --- eval -------------------------------------------------------------------

void to_json(json& j, const AnnotationRecord& r) {
    j = json{{"query_id", r.query_id}, {"ranked_item_ids", r.ranked_item_ids}, {"relevance", r.relevance}};
    if (r.selected_rank) j["selected_rank"] = *r.selected_rank;
    if (r.initial_rank) j["initial_rank"] = *r.initial_rank;
    if (r.updated_rank) j["updated_rank"] = *r.updated_rank;
}

void from_json(const json& j, AnnotationRecord& r) {
    const json& qid = require(j, "query_id");
    if (qid.is_string())
        r.query_id = qid.get<std::string>();
    else if (qid.is_number_integer())
        r.query_id = std::to_string(qid.get<long long>());
    else
        throw std::runtime_error("query_id must be a string or integer");
    r.ranked_item_ids = optional_string_list(j, "ranked_item_ids");
    r.relevance.clear();
    if (auto it = j.find("relevance"); it != j.end() && !it->is_null()) {
        if (!it->is_object()) throw std::runtime_error("relevance must map item ids to 0 or 1");
        for (const auto& [item, grade] : it->items()) {
            if (!grade.is_number_integer()) throw std::runtime_error("relevance of '" + item + "' must be 0 or 1");
            r.relevance[item] = grade.get<int>();
        }
    }
    auto read_int = [&](const char* key) -> std::optional<long> {
        auto it = j.find(key);
        if (it == j.end() || it->is_null()) return std::nullopt;
        if (!it->is_number_integer()) throw std::runtime_error(std::string(key) + " must be an integer");
        return it->get<long>();
    };
    if (auto rank = read_int("selected_rank")) {
        if (*rank < 1) throw std::runtime_error("selected_rank must be positive");
        r.selected_rank = static_cast<std::size_t>(*rank);
    } else {
        r.selected_rank.reset();
    }
    r.initial_rank = read_int("initial_rank");
    r.updated_rank = read_int("updated_rank");
}

void to_json(json& j, const MetricsReport& r) {
    json p = json::object();
    for (const auto& [k, v] : r.p_at_k) p[std::to_string(k)] = v;
    json h = json::object();
    for (const auto& [k, v] : r.hits_at_k) h[std::to_string(k)] = v;
    j = json{{"n_queries", r.n_queries}, {"map", r.map}, {"mrr", r.mrr}, {"p_at_k", p}, {"hits_at_k", h}};
    if (r.rank_delta)
        j["rank_delta"] = {{"count", r.rank_delta->count},
                           {"mean", r.rank_delta->mean},
                           {"stddev", r.rank_delta->stddev},
                           {"min", r.rank_delta->min},
                           {"max", r.rank_delta->max}};
    else
        j["rank_delta"] = nullptr;
}

}  // namespace elicit
