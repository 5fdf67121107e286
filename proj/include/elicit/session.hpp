#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "elicit/corpus.hpp"
#include "elicit/embedding_cache.hpp"
#include "elicit/feature.hpp"
#include "elicit/llm.hpp"
#include "elicit/ranking.hpp"
#include "elicit/recommend.hpp"

namespace elicit {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;
using Clock = std::function<Timestamp()>;
using IdGenerator = std::function<std::string()>;

Timestamp system_now();
std::string random_session_id();

// ISO 8601, UTC, millisecond precision: 2026-10-16T08:30:00.000Z
std::string format_timestamp(Timestamp t);
Timestamp parse_timestamp(std::string_view text);

inline constexpr int kSessionSchemaVersion = 1;
inline constexpr int kArtifactSchemaVersion = 1;

enum class SlotPhase { awaiting_query, browsing_ranking, feature_elicitation, recommendation_review, done };

std::string_view to_string(SlotPhase phase);
SlotPhase slot_phase_from_string(std::string_view name);

enum class SessionOperation {
    submit_gui_query,
    select_gui,
    submit_feature_query,
    select_aspect_gui,
    request_recommendations,
    respond_to_recommendation,
    complete_slot,
};

std::string_view to_string(SessionOperation op);

// Phase guard table for the dialogue state machine.
bool phase_allows(SessionOperation op, SlotPhase phase);

// Outcome of a decision on a feature. For recommendations the API names are
// select_aspect / relevant_no_aspect / not_relevant.
enum class FeatureDecision { select_aspect, text_only, reject };

std::string_view to_string(FeatureDecision decision);
FeatureDecision feature_decision_from_string(std::string_view name);

struct AspectRef {
    std::string gui_id;
    std::string component_id;

    bool operator==(const AspectRef&) const = default;
};

struct SessionConfig {
    RankingConfig ranking;
    std::size_t k_aspect = 15;
    std::size_t max_features = 30;
    // Filled in by the engine.
    std::string corpus_fingerprint;
    std::string embedding_provider;
    std::string llm_provider;

    void validate() const;  // throws ConfigError
    bool operator==(const SessionConfig&) const = default;
};

struct GuiSlot {
    std::string nlr_gui;
    SlotPhase phase = SlotPhase::awaiting_query;
    std::vector<RankedGui> current_ranking;
    std::optional<std::string> selected_gui;
    std::vector<FeatureQuery> features;
    std::map<std::string, AspectGui> aspect_selections;
    // Last aspect ranking offered for each customer feature.
    std::map<std::string, std::vector<AspectGui>> aspect_rankings;
    std::vector<FeatureRecommendation> pending_recommendations;
    std::vector<std::string> unmatched_requirements;

    const FeatureQuery* find_feature(std::string_view feature_id) const;
    // Features confirmed with an aspect-GUI, in the order they were added.
    std::vector<FeatureQuery> aspect_confirmed_features() const;

    bool operator==(const GuiSlot&) const = default;
};

namespace events {

struct SessionCreated {
    std::string session_id;
    std::string app_name;
    SessionConfig config;
    bool operator==(const SessionCreated&) const = default;
};

struct GuiQuerySubmitted {
    std::size_t slot = 0;
    std::string nlr_gui;
    bool operator==(const GuiQuerySubmitted&) const = default;
};

struct GuiSelected {
    std::size_t slot = 0;
    std::string gui_id;
    bool operator==(const GuiSelected&) const = default;
};

struct FeatureQuerySubmitted {
    std::size_t slot = 0;
    std::string feature_id;
    std::string text;
    bool operator==(const FeatureQuerySubmitted&) const = default;
};

struct FeatureDecided {
    std::size_t slot = 0;
    std::string feature_id;
    FeatureDecision decision = FeatureDecision::reject;
    std::optional<AspectRef> aspect;
    bool operator==(const FeatureDecided&) const = default;
};

// Provider output is recorded verbatim so replay does not call the LLM.
struct RecommendationsReceived {
    std::size_t slot = 0;
    std::vector<PredictedFeature> predictions;
    bool operator==(const RecommendationsReceived&) const = default;
};

struct RecommendationDecided {
    std::size_t slot = 0;
    std::string feature_id;
    FeatureDecision decision = FeatureDecision::reject;
    std::optional<AspectRef> aspect;
    bool operator==(const RecommendationDecided&) const = default;
};

struct SlotCompleted {
    std::size_t slot = 0;
    bool operator==(const SlotCompleted&) const = default;
};

}  // namespace events

using EventPayload = std::variant<events::SessionCreated, events::GuiQuerySubmitted, events::GuiSelected,
                                  events::FeatureQuerySubmitted, events::FeatureDecided,
                                  events::RecommendationsReceived, events::RecommendationDecided,
                                  events::SlotCompleted>;

std::string_view event_type_name(const EventPayload& payload);

struct SessionEvent {
    Timestamp at{};
    EventPayload payload;

    bool operator==(const SessionEvent&) const = default;
};

struct SessionState {
    std::string session_id;
    std::string app_name;
    std::vector<GuiSlot> slots;
    std::optional<std::size_t> active_slot_index;
    Timestamp created_at{};
    Timestamp updated_at{};
    SessionConfig config;
    std::vector<SessionEvent> event_log;
    std::size_t next_feature_number = 1;

    std::size_t completed_slot_count() const;
    bool operator==(const SessionState&) const = default;
};

struct ArtifactAspect {
    std::string feature_id;
    std::string feature_text;
    AspectGui aspect;

    bool operator==(const ArtifactAspect&) const = default;
};

struct SlotRecord {
    std::size_t slot_index = 0;
    std::string nlr_gui;
    std::string selected_gui;
    std::vector<ArtifactAspect> aspect_guis;
    std::vector<std::string> textual_requirements;

    bool operator==(const SlotRecord&) const = default;
};

struct PrototypeArtifact {
    std::string app_name;
    std::vector<SlotRecord> slots;
    std::vector<std::string> preview_sequence;  // selected gui_ids, slot order
    Timestamp exported_at{};
    std::string corpus_fingerprint;
    std::string embedding_provider;
    std::string llm_provider;

    bool operator==(const PrototypeArtifact&) const = default;
};

// Serialized artifact.json (pretty-printed, trailing newline).
std::string render_artifact_json(const PrototypeArtifact& artifact);
// Human-readable summary.md.
std::string render_artifact_summary(const PrototypeArtifact& artifact, const CorpusIndex& corpus);

struct FeatureSubmission {
    FeatureQuery feature;
    std::vector<AspectGui> aspect_ranking;
};

// Drives the per-slot dialogue: GUI query, feature queries, recommendations
// and completion. Every successful operation appends one event and applies it
// through the same code path used for replay; a failed operation leaves the
// state untouched.
class SessionEngine {
public:
    SessionEngine(const CorpusIndex& corpus, const EmbeddingCache& embeddings, std::shared_ptr<LlmProvider> llm,
                  FewShotExamples examples = FewShotExamples::builtin(), Clock clock = system_now,
                  IdGenerator ids = random_session_id);

    SessionState create_session(std::string_view app_name, SessionConfig config) const;

    const GuiSlot& submit_gui_query(SessionState& state, std::size_t slot, std::string_view nlr_gui) const;
    const GuiSlot& select_gui(SessionState& state, std::size_t slot, std::string_view gui_id) const;
    FeatureSubmission submit_feature_query(SessionState& state, std::size_t slot, std::string_view text) const;
    const GuiSlot& select_aspect_gui(SessionState& state, std::size_t slot, std::string_view feature_id,
                                     const std::optional<AspectRef>& aspect, bool keep_text_only) const;
    const std::vector<FeatureRecommendation>& request_recommendations(SessionState& state,
                                                                      std::size_t slot) const;
    const GuiSlot& respond_to_recommendation(SessionState& state, std::size_t slot, std::string_view feature_id,
                                             FeatureDecision decision,
                                             const std::optional<AspectRef>& aspect = std::nullopt) const;
    // Completes the active slot and opens the next one.
    const SessionState& complete_slot(SessionState& state) const;

    PrototypeArtifact export_artifact(const SessionState& state) const;

    SessionState replay(std::span<const SessionEvent> log) const;
    void apply(SessionState& state, const SessionEvent& event) const;

    const CorpusIndex& corpus() const { return corpus_; }
    const EmbeddingCache& embeddings() const { return embeddings_; }

private:
    void commit(SessionState& state, EventPayload payload) const;
    GuiSlot& mutable_slot(SessionState& state, std::size_t slot) const;
    const GuiSlot& checked_slot(const SessionState& state, std::size_t slot, SessionOperation op) const;
    std::optional<AspectGui> resolve_aspect(const std::vector<AspectGui>& offered,
                                            const std::optional<AspectRef>& aspect) const;
    void rerank_slot(GuiSlot& slot, const SessionConfig& config) const;

    const CorpusIndex& corpus_;
    const EmbeddingCache& embeddings_;
    std::shared_ptr<LlmProvider> llm_;
    FewShotExamples examples_;
    Clock clock_;
    IdGenerator ids_;
};

// One JSON file per session: {"schema_version", "session_id", "events", "snapshot"}.
class SessionStore {
public:
    explicit SessionStore(std::filesystem::path directory);

    void save(const SessionState& state) const;
    SessionState load(std::string_view session_id) const;  // throws NotFoundError
    bool exists(std::string_view session_id) const;
    std::vector<std::string> list() const;
    std::filesystem::path path_for(std::string_view session_id) const;

private:
    std::filesystem::path directory_;
};

}  // namespace elicit
