#include "elicit/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "elicit/errors.hpp"
#include "elicit/hash.hpp"
#include "elicit/serialization.hpp"

namespace elicit {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kManifestName = "corpus.manifest.json";

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool is_safe_id(std::string_view id) {
    if (id.empty() || id == "." || id == "..") return false;
    return std::all_of(id.begin(), id.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-' || c == '.';
    });
}

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string prompt_field(std::string_view s) {
    std::string out(s);
    for (auto& c : out)
        if (c == '\n' || c == '\r' || c == '\t') c = ' ';
    return out;
}

std::string prompt_line(const GuiComponent& c) {
    return "\"" + prompt_field(c.displayed_text) + "\" (" + c.component_type + ") (" + prompt_field(c.resource_id) +
           ")";
}

}  // namespace

const std::vector<std::string>& component_type_vocabulary() {
    static const std::vector<std::string> types{
        "ADVERTISEMENT", "BACKGROUND_IMAGE", "BOTTOM_NAVIGATION", "BUTTON",      "BUTTON_BAR", "CARD",
        "CHECKBOX",      "CONTAINER",        "DATE_PICKER",       "DRAWER",      "ICON",       "IMAGE",
        "IMAGE_BUTTON",  "LIST",             "LIST_ITEM",         "MAP_VIEW",    "MODAL",      "MULTI_TAB",
        "NUMBER_STEPPER", "PAGER_INDICATOR", "RADIO_BUTTON",      "SLIDER",      "SWITCH",     "TEXT",
        "TEXT_INPUT",    "TOOLBAR",          "VIDEO",             "WEB_VIEW",
    };
    return types;
}

bool is_known_component_type(std::string_view type) {
    const auto& types = component_type_vocabulary();
    return std::binary_search(types.begin(), types.end(), type);
}

const GuiDocument* CorpusIndex::find(std::string_view gui_id) const {
    auto it = documents.find(std::string(gui_id));
    return it == documents.end() ? nullptr : &it->second;
}

const GuiDocument& CorpusIndex::at(std::string_view gui_id) const {
    if (const auto* doc = find(gui_id)) return *doc;
    throw NotFoundError("unknown gui_id '" + std::string(gui_id) + "'");
}

bool CorpusIndex::operator==(const CorpusIndex& other) const {
    return documents == other.documents && count_total == other.count_total &&
           count_filtered == other.count_filtered && errors == other.errors;
}

std::size_t component_count(const GuiComponent& root) {
    std::size_t n = 0;
    for_each_component(root, [&](const GuiComponent&) { ++n; });
    return n;
}

const GuiComponent* find_component(const GuiDocument& doc, std::string_view component_id) {
    const GuiComponent* found = nullptr;
    for_each_component(doc.root, [&](const GuiComponent& c) {
        if (!found && c.component_id == component_id) found = &c;
    });
    return found;
}

std::optional<std::string> validate_document(const GuiDocument& doc) {
    if (!is_safe_id(doc.gui_id)) return "gui_id must be non-empty and use only [A-Za-z0-9._-]";
    if (doc.s2w_descriptions.size() > kMaxDescriptionsPerGui)
        return "at most " + std::to_string(kMaxDescriptionsPerGui) + " s2w_descriptions allowed";

    std::unordered_set<std::string> seen;
    std::optional<std::string> problem;
    for_each_component(doc.root, [&](const GuiComponent& c) {
        if (problem) return;
        if (c.component_id.empty()) {
            problem = "component without component_id";
        } else if (!seen.insert(c.component_id).second) {
            problem = "duplicate component_id '" + c.component_id + "'";
        } else if (!is_known_component_type(c.component_type)) {
            problem = "unknown component_type '" + c.component_type + "' on '" + c.component_id + "'";
        } else if (c.bounds.left > c.bounds.right || c.bounds.top > c.bounds.bottom) {
            problem = "invalid bounds on '" + c.component_id + "'";
        }
    });
    return problem;
}

CorpusIndex make_index(std::vector<GuiDocument> documents) {
    CorpusIndex index;
    index.build_timestamp = std::chrono::system_clock::now();
    for (auto& doc : documents) {
        if (auto problem = validate_document(doc)) throw ConfigError(doc.gui_id + ": " + *problem);
        std::string id = doc.gui_id;
        if (!index.documents.emplace(id, std::move(doc)).second)
            throw ConfigError("duplicate gui_id '" + id + "'");
    }
    index.count_total = index.documents.size();
    return index;
}

CorpusIndex load_corpus(const fs::path& source) {
    std::error_code ec;
    if (!fs::exists(source, ec)) throw CorpusError("corpus source does not exist: " + source.string());
    if (!fs::is_directory(source, ec)) throw CorpusError("corpus source is not a directory: " + source.string());

    const fs::path manifest_path = source / kManifestName;
    if (fs::exists(manifest_path)) {
        json manifest;
        try {
            manifest = json::parse(read_file(manifest_path));
        } catch (const json::exception& e) {
            throw CorpusError("corrupt corpus manifest: " + std::string(e.what()));
        }
        if (manifest.value("schema_version", 0) != kCorpusSchemaVersion)
            throw CorpusError("unsupported corpus schema_version in " + manifest_path.string());
    }

    std::vector<fs::path> files;
    fs::directory_iterator it(source, ec);
    if (ec) throw CorpusError("cannot list " + source.string() + ": " + ec.message());
    for (const auto& entry : it) {
        if (!entry.is_regular_file()) continue;
        const auto& p = entry.path();
        if (p.extension() != ".json" || p.filename() == kManifestName) continue;
        files.push_back(p);
    }
    std::sort(files.begin(), files.end());

    CorpusIndex index;
    index.build_timestamp = std::chrono::system_clock::now();
    for (const auto& file : files) {
        const std::string name = file.filename().string();
        json record;
        try {
            record = json::parse(read_file(file));
        } catch (const json::exception& e) {
            index.errors.push_back({name, "", std::string("invalid JSON: ") + e.what()});
            continue;
        }
        std::string gui_id;
        if (record.is_object() && record.contains("gui_id") && record["gui_id"].is_string())
            gui_id = record["gui_id"].get<std::string>();

        GuiDocument doc;
        try {
            doc = record.get<GuiDocument>();
        } catch (const std::exception& e) {
            index.errors.push_back({name, gui_id, e.what()});
            continue;
        }
        if (auto problem = validate_document(doc)) {
            index.errors.push_back({name, gui_id, *problem});
            continue;
        }
        if (file.stem().string() != doc.gui_id) {
            index.errors.push_back({name, gui_id, "file name does not match gui_id"});
            continue;
        }
        if (index.documents.count(doc.gui_id)) {
            index.errors.push_back({name, gui_id, "duplicate gui_id"});
            continue;
        }
        if (!doc.screenshot_ref) {
            const fs::path shot = source / "screenshots" / (doc.gui_id + ".png");
            if (fs::exists(shot, ec)) doc.screenshot_ref = "screenshots/" + doc.gui_id + ".png";
        }
        index.documents.emplace(doc.gui_id, std::move(doc));
    }
    index.count_total = index.documents.size();
    index.count_filtered = 0;
    return index;
}

void save_corpus(const CorpusIndex& index, const fs::path& target) {
    std::error_code ec;
    fs::create_directories(target, ec);
    if (ec) throw PersistenceError("cannot create " + target.string() + ": " + ec.message());
    for (const auto& [id, doc] : index.documents) {
        std::ofstream out(target / (id + ".json"), std::ios::binary);
        if (!out) throw PersistenceError("cannot write " + (target / (id + ".json")).string());
        out << json(doc).dump(2) << '\n';
    }
    json manifest{{"schema_version", kCorpusSchemaVersion},
                  {"documents", index.documents.size()},
                  {"count_total", index.count_total},
                  {"count_filtered", index.count_filtered},
                  {"fingerprint", corpus_fingerprint(index)}};
    std::ofstream out(target / kManifestName, std::ios::binary);
    if (!out) throw PersistenceError("cannot write corpus manifest in " + target.string());
    out << manifest.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Filtering

void FilterRules::validate() const {
    for (const auto& rule : rules) {
        if (rule.name == "exclude_flag" || rule.name == "language_tag") {
            if (rule.value.empty()) throw ConfigError("filter rule '" + rule.name + "' needs a value");
        } else if (rule.name == "min_components") {
            long n = -1;
            auto [ptr, err] = std::from_chars(rule.value.data(), rule.value.data() + rule.value.size(), n);
            if (err != std::errc{} || ptr != rule.value.data() + rule.value.size() || n < 0)
                throw ConfigError("min_components expects a non-negative integer, got '" + rule.value + "'");
        } else {
            throw ConfigError("unknown filter rule '" + rule.name + "'");
        }
    }
}

FilterRules FilterRules::from_json_text(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("filter rules are not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("rules") || !j["rules"].is_array())
        throw ConfigError("filter rules must be an object with a 'rules' array");
    FilterRules out;
    for (const auto& r : j["rules"]) {
        if (!r.is_object() || !r.contains("name") || !r["name"].is_string())
            throw ConfigError("each filter rule needs a string 'name'");
        FilterRule rule{r["name"].get<std::string>(), ""};
        if (r.contains("value")) {
            const auto& v = r["value"];
            rule.value = v.is_string() ? v.get<std::string>() : v.dump();
        }
        out.rules.push_back(std::move(rule));
    }
    out.validate();
    return out;
}

FilterRules FilterRules::from_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read filter rules " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
}

std::pair<CorpusIndex, FilterReport> filter_corpus(const CorpusIndex& index, const FilterRules& rules) {
    rules.validate();

    CorpusIndex out;
    out.build_timestamp = std::chrono::system_clock::now();
    out.errors = index.errors;
    FilterReport report;

    for (const auto& [id, doc] : index.documents) {
        std::vector<std::string> reasons;
        for (const auto& rule : rules.rules) {
            bool drop = false;
            if (rule.name == "exclude_flag") {
                drop = doc.filter_flags.count(rule.value) > 0;
            } else if (rule.name == "min_components") {
                drop = component_count(doc.root) < std::stoul(rule.value);
            } else if (rule.name == "language_tag") {
                drop = doc.language_tag != rule.value;
            }
            if (drop) {
                reasons.push_back(rule.label());
                ++report.removals_by_rule[rule.label()];
            }
        }
        if (reasons.empty())
            out.documents.emplace(id, doc);
        else
            report.removed.push_back({id, std::move(reasons)});
    }
    out.count_total = index.count_total;
    out.count_filtered = index.count_filtered + report.removed.size();
    return {std::move(out), std::move(report)};
}

// ---------------------------------------------------------------------------
// Text extraction

std::string split_resource_id(std::string_view resource_id) {
    if (auto slash = resource_id.rfind('/'); slash != std::string_view::npos)
        resource_id.remove_prefix(slash + 1);

    std::vector<std::string> words;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) words.push_back(std::exchange(current, {}));
    };
    char prev = '\0';
    for (char ch : resource_id) {
        const auto c = static_cast<unsigned char>(ch);
        if (ch == '_' || ch == '-' || std::isspace(c)) {
            flush();
        } else {
            if (std::isupper(c) && std::islower(static_cast<unsigned char>(prev))) flush();
            current.push_back(static_cast<char>(std::tolower(c)));
        }
        prev = ch;
    }
    flush();

    std::string joined;
    for (const auto& w : words) {
        if (!joined.empty()) joined.push_back(' ');
        joined += w;
    }
    return joined;
}

std::vector<std::string> component_text_candidates(const GuiComponent& component) {
    std::vector<std::string> out;
    if (!is_blank(component.displayed_text)) out.push_back(component.displayed_text);
    if (auto rid = split_resource_id(component.resource_id); !rid.empty()) out.push_back(std::move(rid));
    for (const auto& cls : component.semantic_classes)
        if (!is_blank(cls)) out.push_back(cls);
    return out;
}

std::string gui_full_text(const GuiDocument& doc) {
    std::string text;
    for_each_component(doc.root, [&](const GuiComponent& c) {
        for (const auto& candidate : component_text_candidates(c)) {
            if (!text.empty()) text.push_back(' ');
            text += candidate;
        }
    });
    return text;
}

namespace {

struct Group {
    const GuiComponent* container = nullptr;
    std::vector<const GuiComponent*> leaves;
};

void collect_groups(const GuiComponent& node, const GuiComponent* container, std::vector<Group>& groups,
                    std::unordered_map<const GuiComponent*, std::size_t>& slot_of) {
    if (node.is_leaf()) {
        auto [it, inserted] = slot_of.try_emplace(container, groups.size());
        if (inserted) groups.push_back({container, {}});
        groups[it->second].leaves.push_back(&node);
        return;
    }
    const GuiComponent* next = node.component_type == kContainerType ? &node : container;
    for (const auto& child : node.children) collect_groups(child, next, groups, slot_of);
}

}  // namespace

std::string flatten_hierarchy_for_prompt(const GuiDocument& doc) {
    std::vector<Group> groups;
    std::unordered_map<const GuiComponent*, std::size_t> slot_of;
    collect_groups(doc.root, nullptr, groups, slot_of);

    std::string out;
    for (const auto& group : groups) {
        out += group.container ? "- " + prompt_line(*group.container) + ":\n" : "- (ungrouped):\n";
        for (const auto* leaf : group.leaves) out += "  - " + prompt_line(*leaf) + "\n";
    }
    return out;
}

std::string corpus_fingerprint(const CorpusIndex& index) {
    std::uint64_t h = kFnvOffsetBasis;
    for (const auto& [id, doc] : index.documents) h = fnv1a64(json(doc).dump(), h);
    return to_hex(h);
}

}  // namespace elicit
