#include <array>
#include <cctype>

#include "elicit/errors.hpp"
#include "elicit/feature.hpp"
#include "elicit/hash.hpp"

namespace elicit {

std::string to_hex(std::uint64_t value) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::bad_request: return "bad_request";
        case ErrorCode::not_found: return "not_found";
        case ErrorCode::state_conflict: return "state_conflict";
        case ErrorCode::provider_unavailable: return "provider_unavailable";
        case ErrorCode::provider_format: return "provider_format";
        case ErrorCode::internal: return "internal";
    }
    return "internal";
}

std::string_view to_string(FeatureOrigin origin) {
    return origin == FeatureOrigin::customer ? "customer" : "recommended";
}

std::string_view to_string(FeatureStatus status) {
    switch (status) {
        case FeatureStatus::open: return "open";
        case FeatureStatus::confirmed_with_aspect: return "confirmed_with_aspect";
        case FeatureStatus::confirmed_text_only: return "confirmed_text_only";
        case FeatureStatus::rejected: return "rejected";
    }
    return "open";
}

FeatureOrigin feature_origin_from_string(std::string_view name) {
    if (name == "customer") return FeatureOrigin::customer;
    if (name == "recommended") return FeatureOrigin::recommended;
    throw ParseError("unknown feature origin '" + std::string(name) + "'");
}

FeatureStatus feature_status_from_string(std::string_view name) {
    static constexpr std::array statuses{FeatureStatus::open, FeatureStatus::confirmed_with_aspect,
                                         FeatureStatus::confirmed_text_only, FeatureStatus::rejected};
    for (auto s : statuses)
        if (to_string(s) == name) return s;
    throw ParseError("unknown feature status '" + std::string(name) + "'");
}

std::string fold_case(std::string_view text) {
    std::string out(text);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace elicit
