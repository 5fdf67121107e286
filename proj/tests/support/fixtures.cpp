#include "fixtures.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "elicit/embedding.hpp"

#ifndef ELICIT_SOURCE_DIR
#error "ELICIT_SOURCE_DIR must point at the repository root"
#endif

namespace fixtures {

namespace fs = std::filesystem;
using namespace elicit;

namespace {

const std::vector<std::string> kVocabulary = {
    "sign",   "in",      "login",  "password", "search", "bar",     "button", "menu",  "settings", "profile",
    "cart",   "weather", "map",    "list",     "item",   "account", "email",  "send",  "message",  "filter",
    "save",   "share",   "photo",  "dark",     "mode",   "toggle",  "font",   "size",  "price",    "checkout",
};

const std::vector<std::string> kTypes = {"TEXT", "BUTTON", "ICON", "IMAGE", "TEXT_INPUT", "CHECKBOX", "SWITCH"};

}  // namespace

fs::path source_dir() { return ELICIT_SOURCE_DIR; }
fs::path data_dir() { return source_dir() / "data"; }

TempDir::TempDir() {
    std::random_device rd;
    for (int attempt = 0; attempt < 100; ++attempt) {
        auto candidate = fs::temp_directory_path() / fmt::format("elicit-test-{:016x}", (std::uint64_t{rd()} << 32) ^ rd());
        if (fs::create_directories(candidate)) {
            path_ = candidate;
            return;
        }
    }
    throw std::runtime_error("cannot create a temporary directory");
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

GuiComponent leaf(std::string id, std::string type, std::string text, std::string rid,
                  std::vector<std::string> classes) {
    GuiComponent c;
    c.component_id = std::move(id);
    c.component_type = std::move(type);
    c.displayed_text = std::move(text);
    c.resource_id = std::move(rid);
    c.semantic_classes = std::move(classes);
    c.bounds = {0, 0, 100, 50};
    return c;
}

GuiComponent container(std::string id, std::vector<GuiComponent> children, std::string rid) {
    GuiComponent c = leaf(std::move(id), "CONTAINER", "", std::move(rid));
    c.bounds = {0, 0, 1440, 2560};
    c.children = std::move(children);
    return c;
}

GuiDocument document(std::string gui_id, GuiComponent root, std::vector<std::string> descriptions,
                     std::string app_id) {
    GuiDocument d;
    d.gui_id = std::move(gui_id);
    d.app_id = std::move(app_id);
    d.root = std::move(root);
    d.s2w_descriptions = std::move(descriptions);
    return d;
}

GuiDocument flat_document(std::string gui_id, const std::vector<std::string>& texts,
                          std::vector<std::string> descriptions) {
    std::vector<GuiComponent> leaves;
    for (std::size_t i = 0; i < texts.size(); ++i) leaves.push_back(leaf(fmt::format("c{}", i + 2), "TEXT", texts[i]));
    return document(std::move(gui_id), container("c1", std::move(leaves)), std::move(descriptions));
}

std::string token(std::size_t group, std::size_t i) { return fmt::format("u{}v{}", group, i); }
std::string gui_id(std::size_t n) { return fmt::format("g{:03}", n); }

std::shared_ptr<EmbeddingCache> hash_cache(std::size_t dim) {
    return std::make_shared<EmbeddingCache>(std::make_shared<HashEmbeddingProvider>(dim));
}

RandomJudgment random_judgment(std::mt19937_64& rng, std::size_t index) {
    std::uniform_int_distribution<std::size_t> length(1, 20);
    std::uniform_int_distribution<int> bit(0, 2);
    RandomJudgment j;
    const std::size_t n = length(rng);
    j.record.query_id = "q" + std::to_string(index);
    for (std::size_t i = 0; i < n; ++i) j.record.ranked_item_ids.push_back("item" + std::to_string(i));
    if (rng() % 4 == 0) {
        j.selected = std::uniform_int_distribution<std::size_t>(1, n)(rng);
        j.record.selected_rank = j.selected;
        j.relevance.assign(n, 0);
        j.relevance[j.selected - 1] = 1;
        return j;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const int r = bit(rng) == 0 ? 1 : 0;
        j.relevance.push_back(r);
        if (r || rng() % 2) j.record.relevance[j.record.ranked_item_ids[i]] = r;
    }
    return j;
}

std::string random_phrase(std::mt19937_64& rng, std::size_t min_words, std::size_t max_words) {
    std::uniform_int_distribution<std::size_t> len(min_words, max_words);
    std::uniform_int_distribution<std::size_t> pick(0, kVocabulary.size() - 1);
    std::string out;
    const auto n = len(rng);
    for (std::size_t i = 0; i < n; ++i) out += (i ? " " : "") + kVocabulary[pick(rng)];
    return out;
}

std::vector<GuiDocument> random_documents(std::mt19937_64& rng, std::size_t n, std::size_t max_components) {
    std::vector<GuiDocument> docs;
    std::uniform_int_distribution<std::size_t> coin(0, 3);
    std::uniform_int_distribution<std::size_t> type(0, kTypes.size() - 1);
    std::uniform_int_distribution<std::size_t> n_desc(0, kMaxDescriptionsPerGui);
    std::uniform_int_distribution<std::size_t> n_comp(1, max_components);
    for (std::size_t g = 1; g <= n; ++g) {
        std::size_t budget = n_comp(rng) - 1;  // root already counts
        std::size_t next_id = 2;
        // Two-level trees: groups of leaves below the root.
        std::vector<GuiComponent> groups;
        while (budget > 0) {
            if (budget >= 2 && coin(rng) == 0) {
                --budget;
                const std::size_t group_id = next_id++;
                std::vector<GuiComponent> leaves;
                std::uniform_int_distribution<std::size_t> n_leaves(1, std::min<std::size_t>(budget, 4));
                for (std::size_t k = n_leaves(rng); k > 0; --k, --budget)
                    leaves.push_back(leaf(fmt::format("c{}", next_id++), kTypes[type(rng)],
                                          coin(rng) ? random_phrase(rng) : "",
                                          coin(rng) ? "com.x:id/" + random_phrase(rng, 1, 2) : "",
                                          coin(rng) == 0 ? std::vector<std::string>{random_phrase(rng, 1, 2)}
                                                         : std::vector<std::string>{}));
                groups.push_back(container(fmt::format("c{}", group_id), std::move(leaves)));
            } else {
                --budget;
                groups.push_back(leaf(fmt::format("c{}", next_id++), kTypes[type(rng)],
                                      coin(rng) ? random_phrase(rng) : "",
                                      coin(rng) == 0 ? random_phrase(rng, 1, 2) : ""));
            }
        }
        std::vector<std::string> descriptions;
        for (std::size_t k = n_desc(rng); k > 0; --k) descriptions.push_back(random_phrase(rng, 2, 6));
        docs.push_back(document(gui_id(g), container("c1", std::move(groups)), std::move(descriptions)));
    }
    return docs;
}

PlantedRetrieval planted_retrieval(std::size_t n, std::size_t planted) {
    PlantedRetrieval out;
    std::vector<GuiDocument> docs;
    for (std::size_t g = 1; g <= n; ++g) {
        const std::string feature = token(g, 90) + " " + token(g, 91);
        docs.push_back(flat_document(gui_id(g),
                                     {token(g, 0) + " " + token(g, 1), token(g, 2), token(g, 3) + " " + token(g, 4),
                                      feature},
                                     {token(g, 0) + " " + token(g, 50), token(g, 51) + " " + token(g, 2)}));
        out.unique_features.emplace_back(gui_id(g), feature);
    }
    out.planted = gui_id(planted);
    out.query = gui_full_text(docs[planted - 1]);
    out.index = make_index(std::move(docs));
    return out;
}

PlantedRerank planted_rerank(std::size_t above, std::size_t below) {
    PlantedRerank out;
    std::vector<std::string> q;
    for (std::size_t i = 0; i < 6; ++i) q.push_back(token(0, i));
    for (const auto& t : q) out.query += (out.query.empty() ? "" : " ") + t;

    std::vector<GuiDocument> docs;
    std::size_t n = 0;
    // Strong query overlap: 3 to 5 query tokens plus own filler.
    for (std::size_t d = 0; d < above; ++d) {
        ++n;
        std::string head;
        for (std::size_t i = 0; i < 3 + d % 3; ++i) head += (i ? " " : "") + q[(d + i) % q.size()];
        docs.push_back(flat_document(gui_id(n), {head, token(n, 1), token(n, 2) + " " + token(n, 3)}));
    }
    ++n;
    out.planted = gui_id(n);
    out.features = {token(n, 10) + " " + token(n, 11), token(n, 20) + " " + token(n, 21),
                    token(n, 30) + " " + token(n, 31)};
    docs.push_back(flat_document(out.planted, {q[0], out.features[0], out.features[1], out.features[2]}));
    // Weak or no overlap.
    for (std::size_t d = 0; d < below; ++d) {
        ++n;
        docs.push_back(flat_document(gui_id(n), {token(n, 1) + " " + token(n, 2), token(n, 3)}));
    }
    out.index = make_index(std::move(docs));
    return out;
}

Clock step_clock() {
    auto tick = std::make_shared<std::int64_t>(0);
    return [tick] {
        using namespace std::chrono;
        const auto base = sys_days{year{2026} / 10 / 16} + hours{9};
        return Timestamp{duration_cast<milliseconds>(base.time_since_epoch()) + seconds{(*tick)++}};
    };
}

IdGenerator counter_ids(std::string prefix) {
    auto n = std::make_shared<int>(0);
    return [n, prefix] { return fmt::format("{}-{}", prefix, ++*n); };
}

const FixtureWorld& fixture_world() {
    static const FixtureWorld world = [] {
        FixtureWorld w;
        w.raw = load_corpus(data_dir() / "fixture_corpus");
        auto [filtered, report] = filter_corpus(w.raw, FilterRules::from_file(data_dir() / "filter_rules.json"));
        w.corpus = std::move(filtered);
        w.report = std::move(report);
        w.embeddings = hash_cache();
        w.embeddings->build(w.corpus);
        w.examples = FewShotExamples::from_file(data_dir() / "few_shot.json");
        return w;
    }();
    return world;
}

std::shared_ptr<LlmProvider> fixture_llm() {
    return std::make_shared<ScriptedLlmProvider>(ScriptedLlmProvider::from_file(data_dir() / "llm_script.json"));
}

}  // namespace fixtures
