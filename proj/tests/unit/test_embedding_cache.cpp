#include <doctest.h>

#include <thread>

#include "elicit/embedding_cache.hpp"
#include "elicit/errors.hpp"
#include "fixtures.hpp"

using namespace elicit;

namespace {

const CorpusIndex& raw_fixture() { return fixtures::fixture_world().raw; }

}  // namespace

TEST_SUITE("embedding_cache") {
    TEST_CASE("60 GUIs with 3 descriptions give 240 vectors") {
        auto cache = fixtures::hash_cache();
        const auto stats = cache->build(raw_fixture());
        CHECK(stats.computed == 240);
        CHECK(stats.reused == 0);
        CHECK(cache->artifact_count() == 240);
        CHECK(cache->contains({"g001", ArtifactKind::full_text, 0}));
        CHECK(cache->contains({"g060", ArtifactKind::description, 2}));
        CHECK_FALSE(cache->contains({"g060", ArtifactKind::description, 3}));
        CHECK(cache->corpus_fingerprint() == corpus_fingerprint(raw_fixture()));
    }

    TEST_CASE("rebuilding an unchanged corpus computes nothing") {
        auto cache = fixtures::hash_cache();
        cache->build(raw_fixture());
        const auto before = cache->embeddings_computed();
        const auto stats = cache->build(raw_fixture());
        CHECK(stats.computed == 0);
        CHECK(stats.reused == 240);
        CHECK(cache->embeddings_computed() == before);
    }

    TEST_CASE("changed documents are recomputed selectively") {
        auto cache = fixtures::hash_cache();
        cache->build(raw_fixture());
        std::vector<GuiDocument> docs;
        for (const auto& [id, doc] : raw_fixture().documents) docs.push_back(doc);
        docs[0].s2w_descriptions[1] = "a different caption";
        const auto stats = cache->build(make_index(docs));
        CHECK(stats.computed == 1);
        CHECK(stats.reused == 239);
    }

    TEST_CASE("cached vectors equal direct embeddings") {
        auto cache = fixtures::hash_cache();
        cache->build(raw_fixture());
        HashEmbeddingProvider p;
        const auto& doc = raw_fixture().at("g013");
        CHECK(cache->gui_text(doc) == p.embed(gui_full_text(doc)));
        CHECK(cache->description(doc, 1) == p.embed(doc.s2w_descriptions[1]));
        CHECK(cache->text("remember me") == p.embed("remember me"));
        CHECK_THROWS_AS(cache->description(doc, 3), ContractViolation);
    }

    TEST_CASE("persistence round trip and provider change") {
        fixtures::TempDir dir;
        const auto path = dir / "embeddings.json";
        {
            auto cache = fixtures::hash_cache();
            cache->build(raw_fixture());
            cache->save(path);
        }
        SUBCASE("same provider reuses everything") {
            auto cache = fixtures::hash_cache();
            cache->load(path);
            CHECK(cache->artifact_count() == 240);
            const auto stats = cache->build(raw_fixture());
            CHECK(stats.computed == 0);
            CHECK(stats.reused == 240);
            HashEmbeddingProvider p;
            CHECK(cache->gui_text(raw_fixture().at("g001")) == p.embed(gui_full_text(raw_fixture().at("g001"))));
        }
        SUBCASE("changed dim triggers a full recompute") {
            auto cache = fixtures::hash_cache(128);
            cache->load(path);
            CHECK(cache->artifact_count() == 0);
            const auto stats = cache->build(raw_fixture());
            CHECK(stats.computed == 240);
            CHECK(cache->gui_text(raw_fixture().at("g001")).dim() == 128);
        }
        SUBCASE("corrupt file behaves like a cold cache") {
            fixtures::write_file(path, "{broken");
            auto cache = fixtures::hash_cache();
            cache->load(path);
            CHECK(cache->artifact_count() == 0);
        }
        SUBCASE("missing file is ignored") {
            auto cache = fixtures::hash_cache();
            cache->load(dir / "absent.json");
            CHECK(cache->artifact_count() == 0);
        }
    }

    TEST_CASE("concurrent readers see consistent vectors") {
        auto cache = fixtures::hash_cache();
        cache->build(raw_fixture());
        HashEmbeddingProvider p;
        std::vector<std::thread> threads;
        std::atomic<int> mismatches{0};
        for (int t = 0; t < 4; ++t)
            threads.emplace_back([&, t] {
                for (int i = 0; i < 200; ++i) {
                    const std::string q = "query " + std::to_string((i * 7 + t) % 50);
                    if (!(cache->text(q) == p.embed(q))) ++mismatches;
                    const auto& doc = raw_fixture().at(fixtures::gui_id(1 + (i + t) % 60));
                    if (!(cache->gui_text(doc) == p.embed(gui_full_text(doc)))) ++mismatches;
                }
            });
        for (auto& th : threads) th.join();
        CHECK(mismatches.load() == 0);
    }
}
