#pragma once

#include <json.hpp>

#include "elicit/corpus.hpp"
#include "elicit/eval.hpp"
#include "elicit/feature.hpp"
#include "elicit/ranking.hpp"
#include "elicit/recommend.hpp"
#include "elicit/session.hpp"

// nlohmann::json adapters for the domain types. Field names are the wire
// names documented in docs/.
namespace elicit {

using json = nlohmann::json;

void to_json(json& j, const Bounds& b);
void from_json(const json& j, Bounds& b);
void to_json(json& j, const GuiComponent& c);
void from_json(const json& j, GuiComponent& c);
void to_json(json& j, const GuiDocument& d);
void from_json(const json& j, GuiDocument& d);
void to_json(json& j, const FilterReport& r);

void to_json(json& j, const RankingConfig& c);
void from_json(const json& j, RankingConfig& c);
void to_json(json& j, const RankedGui& r);
void from_json(const json& j, RankedGui& r);

void to_json(json& j, const FeatureQuery& f);
void from_json(const json& j, FeatureQuery& f);
void to_json(json& j, const AspectGui& a);
void from_json(const json& j, AspectGui& a);

void to_json(json& j, const PredictedFeature& p);
void from_json(const json& j, PredictedFeature& p);
void to_json(json& j, const FeatureRecommendation& r);
void from_json(const json& j, FeatureRecommendation& r);

void to_json(json& j, const AspectRef& a);
void from_json(const json& j, AspectRef& a);
void to_json(json& j, const SessionConfig& c);
void from_json(const json& j, SessionConfig& c);
void to_json(json& j, const GuiSlot& s);
void from_json(const json& j, GuiSlot& s);
void to_json(json& j, const SessionEvent& e);
void from_json(const json& j, SessionEvent& e);
void to_json(json& j, const SessionState& s);
void from_json(const json& j, SessionState& s);
void to_json(json& j, const PrototypeArtifact& a);
void from_json(const json& j, PrototypeArtifact& a);

void to_json(json& j, const AnnotationRecord& r);
void from_json(const json& j, AnnotationRecord& r);
void to_json(json& j, const MetricsReport& r);

// Session snapshot without the event log (API responses).
json session_summary_json(const SessionState& state);

}  // namespace elicit
