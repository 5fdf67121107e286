#include <doctest.h>

#include <algorithm>
#include <random>

#include "elicit/corpus.hpp"
#include "elicit/errors.hpp"
#include "elicit/serialization.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace elicit;
using fixtures::container;
using fixtures::document;
using fixtures::leaf;

namespace {

void write_doc(const std::filesystem::path& dir, const GuiDocument& doc) {
    fixtures::write_file(dir / (doc.gui_id + ".json"), json(doc).dump(2));
}

}  // namespace

TEST_SUITE("corpus") {
    TEST_CASE("fixture directory of 60 valid records loads completely") {
        const auto index = load_corpus(fixtures::data_dir() / "fixture_corpus");
        CHECK(index.size() == 60);
        CHECK(index.count_total == 60);
        CHECK(index.count_filtered == 0);
        CHECK(index.errors.empty());
        CHECK(index.find("g001") != nullptr);
        CHECK(index.find("g999") == nullptr);
        CHECK_THROWS_AS(index.at("g999"), NotFoundError);
        for (const auto& [id, doc] : index.documents) {
            CHECK(component_count(doc.root) <= 20);
            CHECK(doc.s2w_descriptions.size() == 3);
        }
    }

    TEST_CASE("record missing gui_id is reported and skipped") {
        fixtures::TempDir dir;
        const auto source = load_corpus(fixtures::data_dir() / "fixture_corpus");
        for (const auto& [id, doc] : source.documents) write_doc(dir.path(), doc);
        auto broken = json(source.at("g005"));
        broken.erase("gui_id");
        fixtures::write_file(dir / "g005.json", broken.dump());

        const auto index = load_corpus(dir.path());
        CHECK(index.size() == 59);
        REQUIRE(index.errors.size() == 1);
        CHECK(index.errors[0].file == "g005.json");
        CHECK(index.errors[0].gui_id.empty());
        CHECK(index.errors[0].reason.find("gui_id") != std::string::npos);
    }

    TEST_CASE("per-record errors name gui_id and reason") {
        fixtures::TempDir dir;
        fixtures::write_file(dir / "bad.json", "{ not json");
        auto dup = document("g002", container("c1", {leaf("c2", "TEXT", "a"), leaf("c2", "TEXT", "b")}));
        write_doc(dir.path(), dup);
        auto unknown = document("g003", container("c1", {leaf("c2", "HOLOGRAM", "a")}));
        write_doc(dir.path(), unknown);
        auto renamed = document("g004", container("c1", {}));
        fixtures::write_file(dir / "other.json", json(renamed).dump());
        auto good = document("g001", container("c1", {leaf("c2", "BUTTON", "ok")}));
        write_doc(dir.path(), good);

        const auto index = load_corpus(dir.path());
        CHECK(index.size() == 1);
        REQUIRE(index.errors.size() == 4);
        const auto reason_for = [&](const std::string& file) {
            for (const auto& e : index.errors)
                if (e.file == file) return e.reason;
            return std::string("<none>");
        };
        CHECK(reason_for("bad.json").find("invalid JSON") != std::string::npos);
        CHECK(reason_for("g002.json").find("duplicate component_id") != std::string::npos);
        CHECK(reason_for("g003.json").find("HOLOGRAM") != std::string::npos);
        CHECK(reason_for("other.json").find("file name") != std::string::npos);
    }

    TEST_CASE("empty directory gives an empty index without errors") {
        fixtures::TempDir dir;
        const auto index = load_corpus(dir.path());
        CHECK(index.size() == 0);
        CHECK(index.errors.empty());
    }

    TEST_CASE("missing source is fatal") {
        CHECK_THROWS_AS(load_corpus("/nonexistent/elicit/corpus"), CorpusError);
        fixtures::TempDir dir;
        fixtures::write_file(dir / "file.txt", "x");
        CHECK_THROWS_AS(load_corpus(dir / "file.txt"), CorpusError);
    }

    TEST_CASE("unsupported manifest version is fatal") {
        fixtures::TempDir dir;
        fixtures::write_file(dir / "corpus.manifest.json", R"({"schema_version": 99})");
        CHECK_THROWS_AS(load_corpus(dir.path()), CorpusError);
    }

    TEST_CASE("save and load round trip") {
        fixtures::TempDir dir;
        const auto original = load_corpus(fixtures::data_dir() / "fixture_corpus");
        save_corpus(original, dir.path());
        const auto reloaded = load_corpus(dir.path());
        CHECK(reloaded == original);
        CHECK(corpus_fingerprint(reloaded) == corpus_fingerprint(original));
    }

    TEST_CASE("document JSON round trip keeps every field") {
        auto doc = document("g010",
                            container("c1", {leaf("c2", "BUTTON", "Sign in", "com.a:id/btn_sign_in", {"login button"})},
                                      "com.a:id/root"),
                            {"a login page"});
        doc.screenshot_ref = "shots/g010.png";
        doc.filter_flags = {"opened_menu"};
        doc.language_tag = "de";
        CHECK(json(doc).get<GuiDocument>() == doc);
    }

    TEST_CASE("screenshots next to the corpus are discovered") {
        fixtures::TempDir dir;
        write_doc(dir.path(), document("g001", container("c1", {})));
        fixtures::write_file(dir / "screenshots" / "g001.png", "png");
        const auto index = load_corpus(dir.path());
        REQUIRE(index.at("g001").screenshot_ref.has_value());
        CHECK(*index.at("g001").screenshot_ref == "screenshots/g001.png");
    }

    TEST_CASE("flag filter removes the 4 opened_menu GUIs") {
        const auto index = load_corpus(fixtures::data_dir() / "fixture_corpus");
        const auto rules = FilterRules::from_json_text(R"({"rules": [{"name": "exclude_flag", "value": "opened_menu"}]})");
        const auto [filtered, report] = filter_corpus(index, rules);
        CHECK(filtered.size() == 56);
        CHECK(report.removed.size() == 4);
        CHECK(report.removals_by_rule.at("exclude_flag:opened_menu") == 4);
        CHECK(filtered.count_total == 60);
        CHECK(filtered.count_filtered == 4);
        for (const auto& r : report.removed) CHECK(index.at(r.gui_id).filter_flags.count("opened_menu") == 1);
    }

    TEST_CASE("min_components drops small GUIs") {
        auto small = document("g001", container("c1", {leaf("c2", "TEXT", "a")}));
        auto large = document("g002", container("c1", {leaf("c2", "TEXT", "a"), leaf("c3", "TEXT", "b")}));
        const auto index = make_index({small, large});
        const auto rules = FilterRules::from_json_text(R"({"rules": [{"name": "min_components", "value": 3}]})");
        const auto [filtered, report] = filter_corpus(index, rules);
        CHECK(filtered.size() == 1);
        CHECK(filtered.find("g002") != nullptr);
        REQUIRE(report.removed.size() == 1);
        CHECK(report.removed[0].gui_id == "g001");
        CHECK(report.removed[0].reasons == std::vector<std::string>{"min_components:3"});
    }

    TEST_CASE("language filter") {
        auto de = document("g001", container("c1", {}));
        de.language_tag = "de";
        const auto index = make_index({de, document("g002", container("c1", {}))});
        const auto [filtered, report] =
            filter_corpus(index, FilterRules::from_json_text(R"({"rules": [{"name": "language_tag", "value": "en"}]})"));
        CHECK(filtered.size() == 1);
        CHECK(filtered.find("g002") != nullptr);
    }

    TEST_CASE("empty rules are the identity") {
        const auto index = load_corpus(fixtures::data_dir() / "fixture_corpus");
        const auto [filtered, report] = filter_corpus(index, FilterRules{});
        CHECK(filtered == index);
        CHECK(report.empty());
        CHECK(report.removals_by_rule.empty());
    }

    TEST_CASE("filtering is idempotent and conserves counts") {
        const auto& world = fixtures::fixture_world();
        const auto rules = FilterRules::from_file(fixtures::data_dir() / "filter_rules.json");
        const auto [again, report] = filter_corpus(world.corpus, rules);
        CHECK(again == world.corpus);
        CHECK(report.empty());
        CHECK(world.corpus.size() + world.corpus.count_filtered == world.corpus.count_total);
        CHECK(world.corpus.size() + world.report.removed.size() == world.raw.size());
    }

    TEST_CASE("filter rule validation") {
        CHECK_THROWS_AS(FilterRules::from_json_text(R"({"rules": [{"name": "max_width", "value": "3"}]})"), ConfigError);
        CHECK_THROWS_AS(FilterRules::from_json_text(R"({"rules": [{"name": "min_components", "value": "x"}]})"),
                        ConfigError);
        CHECK_THROWS_AS(FilterRules::from_json_text(R"({"rules": [{"name": "exclude_flag"}]})"), ConfigError);
        CHECK_THROWS_AS(FilterRules::from_json_text(R"([1, 2])"), ConfigError);
        CHECK_THROWS_AS(FilterRules::from_json_text("nope"), ConfigError);
        FilterRules unknown{{{"bogus", "1"}}};
        CHECK_THROWS_AS(filter_corpus(CorpusIndex{}, unknown), ConfigError);
    }

    TEST_CASE("make_index rejects duplicates and invalid documents") {
        auto a = document("g001", container("c1", {}));
        CHECK_THROWS_AS(make_index({a, a}), ConfigError);
        auto bad = document("g/1", container("c1", {}));
        CHECK_THROWS_AS(make_index({bad}), ConfigError);
        auto too_many = document("g002", container("c1", {}), {"1", "2", "3", "4", "5", "6"});
        CHECK_THROWS_AS(make_index({too_many}), ConfigError);
    }

    TEST_CASE("component_text_candidates examples") {
        CHECK(component_text_candidates(leaf("c", "BUTTON", "Sign in", "btn_sign_in", {"login button"})) ==
              std::vector<std::string>{"Sign in", "btn sign in", "login button"});
        CHECK(component_text_candidates(leaf("c", "BUTTON", "", "")).empty());
        CHECK(component_text_candidates(leaf("c", "TEXT_INPUT", "", "searchBarInput")) ==
              std::vector<std::string>{"search bar input"});
        CHECK(component_text_candidates(leaf("c", "TEXT", "   ", "", {"", " "})).empty());
    }

    TEST_CASE("split_resource_id") {
        CHECK(split_resource_id("com.app:id/btn_sign_in") == "btn sign in");
        CHECK(split_resource_id("searchBarInput") == "search bar input");
        CHECK(split_resource_id("nav-home") == "nav home");
        CHECK(split_resource_id("") == "");
        CHECK(split_resource_id("___") == "");
        for (const char* rid : {"com.x:id/aB_cD", "fooBarBaz", "a__b", "URLField", "x1Y2"})
            CHECK(split_resource_id(rid) == oracle::split_rid(rid));
    }

    TEST_CASE("gui_full_text examples") {
        CHECK(gui_full_text(document("g1", leaf("c1", "BUTTON", "Sign in", "btn_sign_in"))) == "Sign in btn sign in");
        CHECK(gui_full_text(document("g1", container("c1", {leaf("c2", "IMAGE", "")}))) == "");
        const auto& world = fixtures::fixture_world();
        for (const auto& [id, doc] : world.corpus.documents) CHECK(gui_full_text(doc) == oracle::full_text(doc));
    }

    TEST_CASE("flatten_hierarchy_for_prompt") {
        SUBCASE("leaf line format") {
            const auto doc = document("g1", container("c1", {leaf("c2", "BUTTON", "Sign in", "btn_sign_in")}));
            CHECK(flatten_hierarchy_for_prompt(doc).find("- \"Sign in\" (BUTTON) (btn_sign_in)") != std::string::npos);
        }
        SUBCASE("container with two leaves gives one header and two items") {
            const auto doc = document(
                "g1", container("c1", {container("c2", {leaf("c3", "BUTTON", "Sign in", "btn_sign_in"),
                                                        leaf("c4", "TEXT", "Forgot?", "forgot")},
                                                 "account_box")}));
            const std::string flat = flatten_hierarchy_for_prompt(doc);
            CHECK(flat == "- \"\" (CONTAINER) (account_box):\n"
                          "  - \"Sign in\" (BUTTON) (btn_sign_in)\n"
                          "  - \"Forgot?\" (TEXT) (forgot)\n");
        }
        SUBCASE("deterministic") {
            const auto& doc = fixtures::fixture_world().corpus.at("g001");
            CHECK(flatten_hierarchy_for_prompt(doc) == flatten_hierarchy_for_prompt(doc));
        }
    }

    TEST_CASE("fingerprint ignores file order and tracks content") {
        std::mt19937_64 rng(3);
        auto docs = fixtures::random_documents(rng, 12);
        const auto a = corpus_fingerprint(make_index(docs));
        std::shuffle(docs.begin(), docs.end(), rng);
        CHECK(corpus_fingerprint(make_index(docs)) == a);
        docs[0].root.displayed_text += " changed";
        CHECK(corpus_fingerprint(make_index(docs)) != a);
    }

    TEST_CASE("component vocabulary") {
        CHECK(is_known_component_type("BUTTON"));
        CHECK(is_known_component_type("CONTAINER"));
        CHECK_FALSE(is_known_component_type("button"));
        CHECK(std::is_sorted(component_type_vocabulary().begin(), component_type_vocabulary().end()));
    }

    TEST_CASE("find_component and component_count") {
        const auto doc = document("g1", container("c1", {container("c2", {leaf("c3", "TEXT", "x")}), leaf("c4", "TEXT", "y")}));
        CHECK(component_count(doc.root) == 4);
        REQUIRE(find_component(doc, "c3") != nullptr);
        CHECK(find_component(doc, "c3")->displayed_text == "x");
        CHECK(find_component(doc, "c9") == nullptr);
    }
}
