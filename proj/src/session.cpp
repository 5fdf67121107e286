#include "elicit/session.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "elicit/errors.hpp"
#include "elicit/feature_match.hpp"
#include "elicit/hash.hpp"
#include "elicit/serialization.hpp"

namespace elicit {

// --- time and ids -------------------------------------------------------------

Timestamp system_now() {
    return std::chrono::floor<std::chrono::milliseconds>(std::chrono::system_clock::now());
}

std::string random_session_id() {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    return to_hex(rng()) + to_hex(rng());
}

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const auto day = floor<days>(t);
    const year_month_day ymd{day};
    const hh_mm_ss hms{t - day};
    return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}.{:03d}Z", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), hms.hours().count(),
                       hms.minutes().count(), hms.seconds().count(), hms.subseconds().count());
}

Timestamp parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0, ms = 0;
    char tail = 0;
    const std::string copy(text);
    if (copy.size() != 24 ||
        std::sscanf(copy.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%3d%c", &y, &mo, &d, &h, &mi, &s, &ms, &tail) != 8 ||
        tail != 'Z')
        throw ParseError("invalid timestamp '" + copy + "'");
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 59) throw ParseError("invalid timestamp '" + copy + "'");
    return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s} + milliseconds{ms};
}

// --- enums --------------------------------------------------------------------

std::string_view to_string(SlotPhase phase) {
    switch (phase) {
        case SlotPhase::awaiting_query: return "awaiting_query";
        case SlotPhase::browsing_ranking: return "browsing_ranking";
        case SlotPhase::feature_elicitation: return "feature_elicitation";
        case SlotPhase::recommendation_review: return "recommendation_review";
        case SlotPhase::done: return "done";
    }
    return "unknown";
}

SlotPhase slot_phase_from_string(std::string_view name) {
    for (auto p : {SlotPhase::awaiting_query, SlotPhase::browsing_ranking, SlotPhase::feature_elicitation,
                   SlotPhase::recommendation_review, SlotPhase::done})
        if (to_string(p) == name) return p;
    throw ParseError("unknown slot phase '" + std::string(name) + "'");
}

std::string_view to_string(SessionOperation op) {
    switch (op) {
        case SessionOperation::submit_gui_query: return "submit_gui_query";
        case SessionOperation::select_gui: return "select_gui";
        case SessionOperation::submit_feature_query: return "submit_feature_query";
        case SessionOperation::select_aspect_gui: return "select_aspect_gui";
        case SessionOperation::request_recommendations: return "request_recommendations";
        case SessionOperation::respond_to_recommendation: return "respond_to_recommendation";
        case SessionOperation::complete_slot: return "complete_slot";
    }
    return "unknown";
}

bool phase_allows(SessionOperation op, SlotPhase phase) {
    using P = SlotPhase;
    switch (op) {
        case SessionOperation::submit_gui_query:
            return phase == P::awaiting_query || phase == P::browsing_ranking;
        case SessionOperation::select_gui:
        case SessionOperation::select_aspect_gui:
            return phase == P::browsing_ranking || phase == P::feature_elicitation ||
                   phase == P::recommendation_review;
        case SessionOperation::submit_feature_query:
            return phase == P::browsing_ranking || phase == P::feature_elicitation;
        case SessionOperation::request_recommendations:
        case SessionOperation::complete_slot:
            return phase == P::feature_elicitation || phase == P::recommendation_review;
        case SessionOperation::respond_to_recommendation:
            return phase == P::recommendation_review;
    }
    return false;
}

std::string_view to_string(FeatureDecision decision) {
    switch (decision) {
        case FeatureDecision::select_aspect: return "select_aspect";
        case FeatureDecision::text_only: return "relevant_no_aspect";
        case FeatureDecision::reject: return "not_relevant";
    }
    return "unknown";
}

FeatureDecision feature_decision_from_string(std::string_view name) {
    for (auto d : {FeatureDecision::select_aspect, FeatureDecision::text_only, FeatureDecision::reject})
        if (to_string(d) == name) return d;
    throw ParseError("unknown decision '" + std::string(name) +
                     "' (expected select_aspect, relevant_no_aspect or not_relevant)");
}

std::string_view event_type_name(const EventPayload& payload) {
    struct Namer {
        std::string_view operator()(const events::SessionCreated&) const { return "session_created"; }
        std::string_view operator()(const events::GuiQuerySubmitted&) const { return "gui_query_submitted"; }
        std::string_view operator()(const events::GuiSelected&) const { return "gui_selected"; }
        std::string_view operator()(const events::FeatureQuerySubmitted&) const {
            return "feature_query_submitted";
        }
        std::string_view operator()(const events::FeatureDecided&) const { return "feature_decided"; }
        std::string_view operator()(const events::RecommendationsReceived&) const {
            return "recommendations_received";
        }
        std::string_view operator()(const events::RecommendationDecided&) const { return "recommendation_decided"; }
        std::string_view operator()(const events::SlotCompleted&) const { return "slot_completed"; }
    };
    return std::visit(Namer{}, payload);
}

// --- value types --------------------------------------------------------------

void SessionConfig::validate() const {
    ranking.validate();
    if (k_aspect == 0) throw ConfigError("k_aspect must be positive");
    if (max_features == 0) throw ConfigError("max_features must be positive");
}

const FeatureQuery* GuiSlot::find_feature(std::string_view feature_id) const {
    auto it = std::find_if(features.begin(), features.end(),
                           [&](const FeatureQuery& f) { return f.feature_id == feature_id; });
    return it == features.end() ? nullptr : &*it;
}

std::vector<FeatureQuery> GuiSlot::aspect_confirmed_features() const {
    std::vector<FeatureQuery> out;
    for (const auto& f : features)
        if (f.status == FeatureStatus::confirmed_with_aspect) out.push_back(f);
    return out;
}

std::size_t SessionState::completed_slot_count() const {
    return static_cast<std::size_t>(
        std::count_if(slots.begin(), slots.end(), [](const GuiSlot& s) { return s.phase == SlotPhase::done; }));
}

// --- artifact rendering ---------------------------------------------------------

std::string render_artifact_json(const PrototypeArtifact& artifact) { return json(artifact).dump(2) + "\n"; }

std::string render_artifact_summary(const PrototypeArtifact& artifact, const CorpusIndex& corpus) {
    std::ostringstream out;
    out << "# " << artifact.app_name << "\n\n";
    out << "Exported " << format_timestamp(artifact.exported_at) << "\n\n";
    out << "- Corpus fingerprint: `" << artifact.corpus_fingerprint << "`\n";
    out << "- Embedding provider: `" << artifact.embedding_provider << "`\n";
    out << "- LLM provider: `" << artifact.llm_provider << "`\n\n";

    out << "## App preview\n\n";
    for (std::size_t i = 0; i < artifact.preview_sequence.size(); ++i)
        out << i + 1 << ". `" << artifact.preview_sequence[i] << "`\n";

    for (const auto& slot : artifact.slots) {
        out << "\n## GUI " << slot.slot_index + 1 << "\n\n";
        out << "Requirements: " << slot.nlr_gui << "\n\n";
        out << "Selected GUI: `" << slot.selected_gui << "`";
        if (const auto* doc = corpus.find(slot.selected_gui)) out << " (app `" << doc->app_id << "`)";
        out << "\n\n### Aspect-GUIs\n\n";
        if (slot.aspect_guis.empty()) out << "(none)\n";
        for (const auto& a : slot.aspect_guis)
            out << fmt::format("- {}: `{}` component `{}` (score {:.3f})\n", a.feature_text, a.aspect.gui_id,
                               a.aspect.component_id, a.aspect.score);
        out << "\n### Textual requirements\n\n";
        if (slot.textual_requirements.empty()) out << "(none)\n";
        for (const auto& t : slot.textual_requirements) out << "- " << t << "\n";
    }
    return out.str();
}

// --- engine ---------------------------------------------------------------------

SessionEngine::SessionEngine(const CorpusIndex& corpus, const EmbeddingCache& embeddings,
                             std::shared_ptr<LlmProvider> llm, FewShotExamples examples, Clock clock,
                             IdGenerator ids)
    : corpus_(corpus),
      embeddings_(embeddings),
      llm_(std::move(llm)),
      examples_(std::move(examples)),
      clock_(std::move(clock)),
      ids_(std::move(ids)) {
    if (!llm_) throw ContractViolation("session engine needs an LLM provider");
}

SessionState SessionEngine::create_session(std::string_view app_name, SessionConfig config) const {
    config.validate();
    const std::string name = normalize_query(app_name);
    if (name.empty()) throw QueryError("app name must not be empty");
    config.corpus_fingerprint = corpus_fingerprint(corpus_);
    config.embedding_provider = embeddings_.provider().config_fingerprint();
    config.llm_provider = llm_->config_fingerprint();

    SessionState state;
    commit(state, events::SessionCreated{ids_(), name, std::move(config)});
    return state;
}

void SessionEngine::commit(SessionState& state, EventPayload payload) const {
    SessionState next = state;
    apply(next, SessionEvent{clock_(), std::move(payload)});
    state = std::move(next);
}

GuiSlot& SessionEngine::mutable_slot(SessionState& state, std::size_t slot) const {
    if (slot >= state.slots.size()) throw NotFoundError("slot " + std::to_string(slot) + " does not exist");
    return state.slots[slot];
}

const GuiSlot& SessionEngine::checked_slot(const SessionState& state, std::size_t slot,
                                           SessionOperation op) const {
    // A fresh session has no slots yet; slot 0 behaves like an empty slot
    // awaiting its first query.
    static const GuiSlot kUnopened;
    const GuiSlot* s = nullptr;
    if (state.slots.empty() && slot == 0)
        s = &kUnopened;
    else if (slot < state.slots.size())
        s = &state.slots[slot];
    else
        throw NotFoundError("slot " + std::to_string(slot) + " does not exist");
    if (!phase_allows(op, s->phase))
        throw StateError(fmt::format("{} is not allowed while slot {} is in phase {}", to_string(op), slot,
                                     to_string(s->phase)));
    return *s;
}

std::optional<AspectGui> SessionEngine::resolve_aspect(const std::vector<AspectGui>& offered,
                                                       const std::optional<AspectRef>& aspect) const {
    if (!aspect) return std::nullopt;
    auto it = std::find_if(offered.begin(), offered.end(), [&](const AspectGui& a) {
        return a.gui_id == aspect->gui_id && a.component_id == aspect->component_id;
    });
    if (it == offered.end())
        throw SelectionError("aspect " + aspect->gui_id + "/" + aspect->component_id +
                             " is not in the aspect ranking offered for this feature");
    return *it;
}

void SessionEngine::rerank_slot(GuiSlot& slot, const SessionConfig& config) const {
    const auto confirmed = slot.aspect_confirmed_features();
    if (confirmed.empty() || slot.current_ranking.empty()) return;
    slot.current_ranking = rerank(slot.current_ranking, confirmed, config.ranking, corpus_, embeddings_);
}

const GuiSlot& SessionEngine::submit_gui_query(SessionState& state, std::size_t slot,
                                               std::string_view nlr_gui) const {
    checked_slot(state, slot, SessionOperation::submit_gui_query);
    std::string query = normalize_query(nlr_gui);
    if (query.empty()) throw QueryError("GUI requirements must not be empty");
    commit(state, events::GuiQuerySubmitted{slot, std::move(query)});
    return state.slots[slot];
}

const GuiSlot& SessionEngine::select_gui(SessionState& state, std::size_t slot, std::string_view gui_id) const {
    const GuiSlot& s = checked_slot(state, slot, SessionOperation::select_gui);
    if (std::none_of(s.current_ranking.begin(), s.current_ranking.end(),
                     [&](const RankedGui& r) { return r.gui_id == gui_id; }))
        throw SelectionError("GUI '" + std::string(gui_id) + "' is not in the current ranking");
    commit(state, events::GuiSelected{slot, std::string(gui_id)});
    return state.slots[slot];
}

FeatureSubmission SessionEngine::submit_feature_query(SessionState& state, std::size_t slot,
                                                      std::string_view text) const {
    const GuiSlot& s = checked_slot(state, slot, SessionOperation::submit_feature_query);
    if (s.current_ranking.empty()) throw StateError("feature queries need a non-empty GUI ranking");
    std::string feature = normalize_query(text);
    if (feature.empty()) throw QueryError("feature requirements must not be empty");
    const std::string folded = fold_case(feature);
    for (const auto& f : s.features)
        if (f.is_confirmed() && fold_case(f.text) == folded)
            throw SelectionError("feature '" + feature + "' duplicates confirmed feature " + f.feature_id);

    const std::string id = "f" + std::to_string(state.next_feature_number);
    commit(state, events::FeatureQuerySubmitted{slot, id, std::move(feature)});
    const GuiSlot& updated = state.slots[slot];
    return {*updated.find_feature(id), updated.aspect_rankings.at(id)};
}

const GuiSlot& SessionEngine::select_aspect_gui(SessionState& state, std::size_t slot,
                                                std::string_view feature_id, const std::optional<AspectRef>& aspect,
                                                bool keep_text_only) const {
    const GuiSlot& s = checked_slot(state, slot, SessionOperation::select_aspect_gui);
    const FeatureQuery* f = s.find_feature(feature_id);
    if (!f) throw NotFoundError("feature '" + std::string(feature_id) + "' does not exist in slot " +
                                std::to_string(slot));
    if (f->status != FeatureStatus::open) throw StateError("feature " + f->feature_id + " is already decided");
    if (aspect && keep_text_only) throw SelectionError("choose either an aspect-GUI or keep_text_only");
    if (aspect) {
        auto offered = s.aspect_rankings.find(f->feature_id);
        resolve_aspect(offered == s.aspect_rankings.end() ? std::vector<AspectGui>{} : offered->second, aspect);
    }
    const FeatureDecision decision = aspect           ? FeatureDecision::select_aspect
                                     : keep_text_only ? FeatureDecision::text_only
                                                      : FeatureDecision::reject;
    commit(state, events::FeatureDecided{slot, f->feature_id, decision, aspect});
    return state.slots[slot];
}

const std::vector<FeatureRecommendation>& SessionEngine::request_recommendations(SessionState& state,
                                                                                 std::size_t slot) const {
    const GuiSlot& s = checked_slot(state, slot, SessionOperation::request_recommendations);
    if (!s.selected_gui) throw StateError("recommendations need a selected GUI");

    RecommendationContext context{s.nlr_gui, s.features, &corpus_.at(*s.selected_gui), s.current_ranking};
    RecommendationSettings settings;
    settings.max_features = state.config.max_features;
    settings.k_aspect = state.config.k_aspect;
    auto predictions = predict_features(context, *llm_, examples_, settings);

    std::size_t number = state.next_feature_number;
    for (auto& p : predictions) p.feature.feature_id = "f" + std::to_string(number++);
    commit(state, events::RecommendationsReceived{slot, std::move(predictions)});
    return state.slots[slot].pending_recommendations;
}

const GuiSlot& SessionEngine::respond_to_recommendation(SessionState& state, std::size_t slot,
                                                        std::string_view feature_id, FeatureDecision decision,
                                                        const std::optional<AspectRef>& aspect) const {
    const GuiSlot& s = checked_slot(state, slot, SessionOperation::respond_to_recommendation);
    auto it = std::find_if(s.pending_recommendations.begin(), s.pending_recommendations.end(),
                           [&](const FeatureRecommendation& r) { return r.feature.feature_id == feature_id; });
    if (it == s.pending_recommendations.end())
        throw NotFoundError("recommendation '" + std::string(feature_id) + "' is not pending in slot " +
                            std::to_string(slot));
    if (it->feature.status != FeatureStatus::open)
        throw StateError("recommendation " + it->feature.feature_id + " is already decided");
    if (decision == FeatureDecision::select_aspect) {
        if (!aspect) throw SelectionError("select_aspect needs an aspect-GUI");
        resolve_aspect(it->aspect_ranking, aspect);
    } else if (aspect) {
        throw SelectionError("an aspect-GUI is only accepted with select_aspect");
    }
    commit(state, events::RecommendationDecided{slot, it->feature.feature_id, decision, aspect});
    return state.slots[slot];
}

const SessionState& SessionEngine::complete_slot(SessionState& state) const {
    if (!state.active_slot_index) throw StateError("the session has no active slot");
    const std::size_t slot = *state.active_slot_index;
    const GuiSlot& s = checked_slot(state, slot, SessionOperation::complete_slot);
    if (!s.selected_gui) throw StateError("slot " + std::to_string(slot) + " has no selected GUI");
    commit(state, events::SlotCompleted{slot});
    return state;
}

PrototypeArtifact SessionEngine::export_artifact(const SessionState& state) const {
    if (state.completed_slot_count() == 0) throw StateError("export needs at least one completed slot");
    PrototypeArtifact artifact;
    artifact.app_name = state.app_name;
    for (std::size_t i = 0; i < state.slots.size(); ++i) {
        const GuiSlot& s = state.slots[i];
        if (s.phase != SlotPhase::done) continue;
        SlotRecord record{i, s.nlr_gui, *s.selected_gui, {}, s.unmatched_requirements};
        for (const auto& f : s.features)
            if (f.status == FeatureStatus::confirmed_with_aspect)
                record.aspect_guis.push_back({f.feature_id, f.text, s.aspect_selections.at(f.feature_id)});
        artifact.preview_sequence.push_back(record.selected_gui);
        artifact.slots.push_back(std::move(record));
    }
    artifact.exported_at = state.updated_at;
    artifact.corpus_fingerprint = state.config.corpus_fingerprint;
    artifact.embedding_provider = state.config.embedding_provider;
    artifact.llm_provider = state.config.llm_provider;
    return artifact;
}

SessionState SessionEngine::replay(std::span<const SessionEvent> log) const {
    SessionState state;
    for (const auto& e : log) apply(state, e);
    return state;
}

namespace {

void record_decision(GuiSlot& slot, FeatureQuery& feature, FeatureDecision decision,
                     const std::optional<AspectGui>& aspect) {
    switch (decision) {
        case FeatureDecision::select_aspect:
            if (!aspect) throw ContractViolation("select_aspect event without an aspect");
            feature.status = FeatureStatus::confirmed_with_aspect;
            slot.aspect_selections[feature.feature_id] = *aspect;
            break;
        case FeatureDecision::text_only:
            feature.status = FeatureStatus::confirmed_text_only;
            slot.unmatched_requirements.push_back(feature.text);
            break;
        case FeatureDecision::reject:
            feature.status = FeatureStatus::rejected;
            break;
    }
}

}  // namespace

void SessionEngine::apply(SessionState& state, const SessionEvent& event) const {
    const bool created = std::holds_alternative<events::SessionCreated>(event.payload);
    if (created != state.event_log.empty())
        throw ContractViolation("session_created must be the first and only creation event");

    std::visit(
        [&](const auto& e) {
            using E = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<E, events::SessionCreated>) {
                state.session_id = e.session_id;
                state.app_name = e.app_name;
                state.config = e.config;
                state.created_at = event.at;
            } else if constexpr (std::is_same_v<E, events::GuiQuerySubmitted>) {
                if (state.slots.empty() && e.slot == 0) {
                    state.slots.emplace_back();
                    state.active_slot_index = 0;
                }
                GuiSlot& s = mutable_slot(state, e.slot);
                s.nlr_gui = e.nlr_gui;
                s.current_ranking = rank_guis(e.nlr_gui, corpus_, state.config.ranking, embeddings_);
                s.selected_gui.reset();
                s.pending_recommendations.clear();
                s.aspect_rankings.clear();
                s.phase = SlotPhase::browsing_ranking;
            } else if constexpr (std::is_same_v<E, events::GuiSelected>) {
                GuiSlot& s = mutable_slot(state, e.slot);
                s.selected_gui = e.gui_id;
                if (s.phase == SlotPhase::browsing_ranking) s.phase = SlotPhase::feature_elicitation;
            } else if constexpr (std::is_same_v<E, events::FeatureQuerySubmitted>) {
                GuiSlot& s = mutable_slot(state, e.slot);
                s.features.push_back({e.feature_id, e.text, FeatureOrigin::customer, FeatureStatus::open});
                s.aspect_rankings[e.feature_id] =
                    rank_aspect_guis(e.text, s.current_ranking, state.config.k_aspect, corpus_, embeddings_);
                ++state.next_feature_number;
            } else if constexpr (std::is_same_v<E, events::FeatureDecided>) {
                GuiSlot& s = mutable_slot(state, e.slot);
                auto it = std::find_if(s.features.begin(), s.features.end(),
                                       [&](const FeatureQuery& f) { return f.feature_id == e.feature_id; });
                if (it == s.features.end()) throw ContractViolation("decision for unknown feature " + e.feature_id);
                auto offered = s.aspect_rankings.find(e.feature_id);
                const auto aspect = resolve_aspect(
                    offered == s.aspect_rankings.end() ? std::vector<AspectGui>{} : offered->second, e.aspect);
                record_decision(s, *it, e.decision, aspect);
                if (e.decision == FeatureDecision::select_aspect) rerank_slot(s, state.config);
            } else if constexpr (std::is_same_v<E, events::RecommendationsReceived>) {
                GuiSlot& s = mutable_slot(state, e.slot);
                s.pending_recommendations =
                    score_recommendations(e.predictions, s.current_ranking, state.config.k_aspect, corpus_,
                                          embeddings_);
                s.phase = SlotPhase::recommendation_review;
                state.next_feature_number += e.predictions.size();
            } else if constexpr (std::is_same_v<E, events::RecommendationDecided>) {
                GuiSlot& s = mutable_slot(state, e.slot);
                auto it = std::find_if(
                    s.pending_recommendations.begin(), s.pending_recommendations.end(),
                    [&](const FeatureRecommendation& r) { return r.feature.feature_id == e.feature_id; });
                if (it == s.pending_recommendations.end())
                    throw ContractViolation("decision for unknown recommendation " + e.feature_id);
                const auto aspect = resolve_aspect(it->aspect_ranking, e.aspect);
                FeatureQuery feature = it->feature;
                record_decision(s, feature, e.decision, aspect);
                it->feature.status = feature.status;
                s.features.push_back(std::move(feature));
                if (e.decision == FeatureDecision::select_aspect) rerank_slot(s, state.config);
            } else if constexpr (std::is_same_v<E, events::SlotCompleted>) {
                GuiSlot& s = mutable_slot(state, e.slot);
                s.phase = SlotPhase::done;
                state.slots.emplace_back();
                state.active_slot_index = state.slots.size() - 1;
            }
        },
        event.payload);

    state.updated_at = event.at;
    state.event_log.push_back(event);
}

// --- persistence ----------------------------------------------------------------

SessionStore::SessionStore(std::filesystem::path directory) : directory_(std::move(directory)) {}

std::filesystem::path SessionStore::path_for(std::string_view session_id) const {
    const bool safe = !session_id.empty() && std::all_of(session_id.begin(), session_id.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
    });
    if (!safe) throw NotFoundError("session '" + std::string(session_id) + "' does not exist");
    return directory_ / (std::string(session_id) + ".json");
}

void SessionStore::save(const SessionState& state) const {
    std::error_code ec;
    std::filesystem::create_directories(directory_, ec);
    if (ec) throw PersistenceError("cannot create session directory " + directory_.string() + ": " + ec.message());

    const json doc{{"schema_version", kSessionSchemaVersion},
                   {"session_id", state.session_id},
                   {"events", state.event_log},
                   {"snapshot", session_summary_json(state)}};
    const auto target = path_for(state.session_id);
    const auto tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw PersistenceError("cannot write " + tmp);
        out << doc.dump(2) << "\n";
        if (!out) throw PersistenceError("cannot write " + tmp);
    }
    std::filesystem::rename(tmp, target, ec);
    if (ec) throw PersistenceError("cannot move session file into place: " + ec.message());
}

SessionState SessionStore::load(std::string_view session_id) const {
    const auto path = path_for(session_id);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError("session '" + std::string(session_id) + "' does not exist");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        json doc = json::parse(buffer.str());
        if (doc.value("schema_version", 0) != kSessionSchemaVersion)
            throw PersistenceError("unsupported session schema in " + path.string());
        json snapshot = doc.at("snapshot");
        snapshot.erase("event_count");
        snapshot["event_log"] = doc.at("events");
        return snapshot.get<SessionState>();
    } catch (const json::exception& e) {
        throw PersistenceError("corrupt session file " + path.string() + ": " + e.what());
    }
}

bool SessionStore::exists(std::string_view session_id) const {
    try {
        return std::filesystem::is_regular_file(path_for(session_id));
    } catch (const NotFoundError&) {
        return false;
    }
}

std::vector<std::string> SessionStore::list() const {
    std::vector<std::string> ids;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(directory_, ec))
        if (entry.is_regular_file() && entry.path().extension() == ".json") ids.push_back(entry.path().stem());
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace elicit
