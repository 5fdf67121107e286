#pragma once

#include <string>
#include <string_view>

namespace elicit {

enum class FeatureOrigin { customer, recommended };

enum class FeatureStatus { open, confirmed_with_aspect, confirmed_text_only, rejected };

std::string_view to_string(FeatureOrigin origin);
std::string_view to_string(FeatureStatus status);
FeatureOrigin feature_origin_from_string(std::string_view name);
FeatureStatus feature_status_from_string(std::string_view name);

// A natural-language requirement for a single GUI feature.
struct FeatureQuery {
    std::string feature_id;
    std::string text;
    FeatureOrigin origin = FeatureOrigin::customer;
    FeatureStatus status = FeatureStatus::open;

    bool is_confirmed() const {
        return status == FeatureStatus::confirmed_with_aspect || status == FeatureStatus::confirmed_text_only;
    }
    bool operator==(const FeatureQuery&) const = default;
};

// A GUI together with its component that best matches a feature.
struct AspectGui {
    std::string gui_id;
    std::string component_id;
    double score = 0.0;      // match score of the component
    double gui_score = 0.0;  // best match over the whole GUI

    bool operator==(const AspectGui&) const = default;
};

// ASCII case folding used for feature text deduplication.
std::string fold_case(std::string_view text);

}  // namespace elicit
