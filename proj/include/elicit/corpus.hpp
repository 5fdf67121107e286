#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace elicit {

inline constexpr int kCorpusSchemaVersion = 1;
inline constexpr std::size_t kMaxDescriptionsPerGui = 5;
inline constexpr std::string_view kContainerType = "CONTAINER";

struct Bounds {
    int left = 0;
    int top = 0;
    int right = 0;
    int bottom = 0;

    bool operator==(const Bounds&) const = default;
};

struct GuiComponent {
    std::string component_id;
    std::string component_type;
    std::string displayed_text;
    std::string resource_id;
    std::vector<std::string> semantic_classes;
    Bounds bounds;
    std::vector<GuiComponent> children;

    bool is_leaf() const { return children.empty(); }
    bool operator==(const GuiComponent&) const = default;
};

struct GuiDocument {
    std::string gui_id;
    std::string app_id;
    std::optional<std::string> screenshot_ref;
    GuiComponent root;
    std::vector<std::string> s2w_descriptions;
    std::set<std::string> filter_flags;
    std::string language_tag = "en";

    bool operator==(const GuiDocument&) const = default;
};

// Closed vocabulary of component types accepted at load time.
const std::vector<std::string>& component_type_vocabulary();
bool is_known_component_type(std::string_view type);

struct LoadError {
    std::string file;
    std::string gui_id;  // empty when the record has none
    std::string reason;

    bool operator==(const LoadError&) const = default;
};

struct CorpusIndex {
    std::map<std::string, GuiDocument> documents;
    std::size_t count_total = 0;
    std::size_t count_filtered = 0;
    std::chrono::system_clock::time_point build_timestamp{};
    std::vector<LoadError> errors;

    const GuiDocument* find(std::string_view gui_id) const;
    const GuiDocument& at(std::string_view gui_id) const;  // throws NotFoundError
    std::size_t size() const { return documents.size(); }

    // Compares contents and counts; the build timestamp is ignored.
    bool operator==(const CorpusIndex& other) const;
};

struct RemovedGui {
    std::string gui_id;
    std::vector<std::string> reasons;

    bool operator==(const RemovedGui&) const = default;
};

struct FilterReport {
    std::map<std::string, std::size_t> removals_by_rule;
    std::vector<RemovedGui> removed;

    bool empty() const { return removed.empty(); }
    bool operator==(const FilterReport&) const = default;
};

// One filter predicate. Known names:
//   exclude_flag    value: flag name; drops documents carrying the flag
//   min_components  value: integer; drops documents with fewer components
//   language_tag    value: tag; drops documents with a different tag
struct FilterRule {
    std::string name;
    std::string value;

    std::string label() const { return name + ":" + value; }
    bool operator==(const FilterRule&) const = default;
};

struct FilterRules {
    std::vector<FilterRule> rules;

    // Parses {"rules": [{"name": ..., "value": ...}, ...]}; integer values
    // may be given as JSON numbers. Throws ConfigError on unknown names.
    static FilterRules from_json_text(std::string_view text);
    static FilterRules from_file(const std::filesystem::path& path);
    void validate() const;
};

// Loads every `<gui_id>.json` record in `source`. Malformed records are
// reported in CorpusIndex::errors and skipped; a missing or unreadable
// source throws CorpusError.
CorpusIndex load_corpus(const std::filesystem::path& source);

// Writes one file per document plus corpus.manifest.json.
void save_corpus(const CorpusIndex& index, const std::filesystem::path& target);

std::pair<CorpusIndex, FilterReport> filter_corpus(const CorpusIndex& index, const FilterRules& rules);

// Builds an index directly from documents (fixtures, tests). Throws
// ConfigError on duplicate gui_ids or invariant violations.
CorpusIndex make_index(std::vector<GuiDocument> documents);

// Structural checks applied at load; returns the first violation.
std::optional<std::string> validate_document(const GuiDocument& doc);

std::size_t component_count(const GuiComponent& root);

// Preorder traversal.
template <typename Fn>
void for_each_component(const GuiComponent& root, Fn&& fn) {
    fn(root);
    for (const auto& child : root.children) for_each_component(child, fn);
}

const GuiComponent* find_component(const GuiDocument& doc, std::string_view component_id);

// "btn_sign_in" -> "btn sign in", "searchBarInput" -> "search bar input".
// A leading package prefix ("com.app:id/") is dropped.
std::string split_resource_id(std::string_view resource_id);

// Displayed text, split resource id, then each semantic class; empty
// candidates are omitted.
std::vector<std::string> component_text_candidates(const GuiComponent& component);

// Space-joined text candidates of every component in document order.
std::string gui_full_text(const GuiDocument& doc);

// Two-level list of leaves grouped under their nearest CONTAINER ancestor:
//
//   - "Account" (CONTAINER) (account_box):
//     - "Sign in" (BUTTON) (btn_sign_in)
//   - (ungrouped):
//     - "" (IMAGE) ()
std::string flatten_hierarchy_for_prompt(const GuiDocument& doc);

// FNV-1a over the canonical serialization of all documents.
std::string corpus_fingerprint(const CorpusIndex& index);

}  // namespace elicit
