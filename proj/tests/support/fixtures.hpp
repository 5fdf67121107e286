#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "elicit/corpus.hpp"
#include "elicit/embedding_cache.hpp"
#include "elicit/eval.hpp"
#include "elicit/llm.hpp"
#include "elicit/recommend.hpp"
#include "elicit/session.hpp"

namespace fixtures {

std::filesystem::path source_dir();
std::filesystem::path data_dir();

class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

elicit::GuiComponent leaf(std::string id, std::string type, std::string text, std::string rid = "",
                          std::vector<std::string> classes = {});
elicit::GuiComponent container(std::string id, std::vector<elicit::GuiComponent> children, std::string rid = "");
elicit::GuiDocument document(std::string gui_id, elicit::GuiComponent root, std::vector<std::string> descriptions = {},
                             std::string app_id = "com.test.app");
// Root container holding one TEXT leaf per string.
elicit::GuiDocument flat_document(std::string gui_id, const std::vector<std::string>& texts,
                                  std::vector<std::string> descriptions = {});

// Alphanumeric token unique to (group, i).
std::string token(std::size_t group, std::size_t i);
std::string gui_id(std::size_t n);  // g001, g002, ...

std::shared_ptr<elicit::EmbeddingCache> hash_cache(std::size_t dim = 256);

// Random GUIs over a small shared vocabulary, so that scores overlap and ties
// are possible. At most `max_components` components and 0..5 descriptions.
std::vector<elicit::GuiDocument> random_documents(std::mt19937_64& rng, std::size_t n,
                                                  std::size_t max_components = 20);
std::string random_phrase(std::mt19937_64& rng, std::size_t min_words = 1, std::size_t max_words = 4);

// Random judged ranking of 1..20 items. Either a relevance map (possibly
// empty) or, for one record in four, a selected rank.
struct RandomJudgment {
    elicit::AnnotationRecord record;
    std::vector<int> relevance;
    std::size_t selected = 0;  // 0 when the record carries a relevance map
};
RandomJudgment random_judgment(std::mt19937_64& rng, std::size_t index);

// 60 token-disjoint GUIs; `query` equals the full text of `planted`. Every GUI
// also carries a one-leaf feature whose text occurs nowhere else.
struct PlantedRetrieval {
    elicit::CorpusIndex index;
    std::string query;
    std::string planted;
    std::vector<std::pair<std::string, std::string>> unique_features;  // (gui_id, feature text)
};
PlantedRetrieval planted_retrieval(std::size_t n = 60, std::size_t planted = 17);

// `above` GUIs share more query tokens than the planted GUI, which alone
// holds three components whose texts equal `features`.
struct PlantedRerank {
    elicit::CorpusIndex index;
    std::string query;
    std::string planted;
    std::vector<std::string> features;
};
PlantedRerank planted_rerank(std::size_t above = 11, std::size_t below = 18);

// Clock advancing by one second per call from a fixed instant.
elicit::Clock step_clock();
elicit::IdGenerator counter_ids(std::string prefix = "session");

// Fixture corpus after the shipped filter rules, embedded with the hash
// provider. Built once per process.
struct FixtureWorld {
    elicit::CorpusIndex raw;
    elicit::CorpusIndex corpus;
    elicit::FilterReport report;
    std::shared_ptr<elicit::EmbeddingCache> embeddings;
    elicit::FewShotExamples examples;
};
const FixtureWorld& fixture_world();
std::shared_ptr<elicit::LlmProvider> fixture_llm();

}  // namespace fixtures
