#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <spdlog/sinks/ringbuffer_sink.h>
#include <spdlog/spdlog.h>

#include "elicit/errors.hpp"
#include "elicit/feature_match.hpp"
#include "elicit/hash.hpp"
#include "elicit/recommend.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"
#include "stub_server.hpp"

using namespace elicit;
using fixtures::container;
using fixtures::document;
using fixtures::leaf;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::string section(const std::string& rendered, const std::string& heading) {
    const auto start = rendered.find(heading + "\n");
    if (start == std::string::npos) return {};
    const auto body = start + heading.size() + 1;
    const auto end = rendered.find("\n## ", body);
    return rendered.substr(body, end == std::string::npos ? std::string::npos : end - body);
}

ScriptedLlmProvider script(std::vector<std::pair<std::string, std::string>> entries) {
    std::vector<ScriptedLlmProvider::Entry> out;
    for (auto& [key, response] : entries)
        out.push_back({ScriptedLlmProvider::MatchKind::substring, {key}, response});
    return ScriptedLlmProvider(std::move(out));
}

// Captures warnings emitted while alive.
class LogCapture {
public:
    LogCapture() : sink_(std::make_shared<spdlog::sinks::ringbuffer_sink_mt>(64)), previous_(spdlog::default_logger()) {
        auto logger = std::make_shared<spdlog::logger>("capture", sink_);
        logger->set_level(spdlog::level::debug);
        spdlog::set_default_logger(logger);
    }
    ~LogCapture() { spdlog::set_default_logger(previous_); }

    std::vector<std::string> lines() const { return sink_->last_formatted(); }

private:
    std::shared_ptr<spdlog::sinks::ringbuffer_sink_mt> sink_;
    std::shared_ptr<spdlog::logger> previous_;
};

}  // namespace

TEST_SUITE("llm") {
    TEST_CASE("scripted provider matches substring keys in order") {
        auto p = ScriptedLlmProvider::from_json_text(R"({"version": 1, "entries": [
            {"match": "substring", "key": ["alpha", "beta"], "response": "both"},
            {"match": "substring", "key": "alpha", "response": "first"},
            {"match": "hash", "key": ")" + fingerprint("exact prompt") + R"(", "response": "hashed"}]})");
        CHECK(p.complete("alpha and beta", 10) == "both");
        CHECK(p.complete("only alpha", 10) == "first");
        CHECK(p.complete("exact prompt", 10) == "hashed");
        CHECK_THROWS_AS(p.complete("nothing", 10), ScriptMissError);
        CHECK_THROWS_AS(p.complete("nothing", 10), ProviderUnavailableError);
        CHECK(p.kind() == "scripted");
    }

    TEST_CASE("script validation") {
        CHECK_THROWS_AS(ScriptedLlmProvider::from_json_text("[]"), ParseError);
        CHECK_THROWS_AS(ScriptedLlmProvider::from_json_text(R"({"version": 2, "entries": []})"), ParseError);
        CHECK_THROWS_AS(ScriptedLlmProvider::from_json_text(R"({"version": 1, "entries": [{"key": ""," response": "x"}]})"),
                        ParseError);
        CHECK_THROWS_AS(
            ScriptedLlmProvider::from_json_text(R"({"version": 1, "entries": [{"match": "regex", "key": "a", "response": "x"}]})"),
            ParseError);
        CHECK_THROWS_AS(ScriptedLlmProvider::from_file("/nonexistent/script.json"), ConfigError);
        CHECK(ScriptedLlmProvider::from_file(fixtures::data_dir() / "llm_script.json").entries().size() == 8);
    }

    TEST_CASE("fingerprint follows script content") {
        CHECK(script({{"a", "x"}}).config_fingerprint() == script({{"a", "x"}}).config_fingerprint());
        CHECK(script({{"a", "x"}}).config_fingerprint() != script({{"a", "y"}}).config_fingerprint());
    }

    TEST_CASE("provider configuration") {
        LlmProviderConfig cfg;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
        cfg.script_path = (fixtures::data_dir() / "llm_script.json").string();
        CHECK_NOTHROW(cfg.validate());
        CHECK(make_llm_provider(cfg)->kind() == "scripted");
        cfg.max_tokens = 0;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
        CHECK(llm_provider_kind_from_string("remote_http") == LlmProviderKind::remote_http);
        CHECK_THROWS_AS(llm_provider_kind_from_string("gpt"), ConfigError);
    }

    TEST_CASE("remote provider round trip and errors") {
        fixtures::StubServer ok([](const httplib::Request& req) {
            const auto body = nlohmann::json::parse(req.body);
            return fixtures::StubServer::Reply{
                200, nlohmann::json{{"text", "echo " + std::to_string(body["max_tokens"].get<int>())}}.dump()};
        });
        LlmProviderConfig cfg;
        cfg.kind = LlmProviderKind::remote_http;
        cfg.endpoint = ok.url();
        RemoteLlmProvider p(cfg);
        CHECK(p.complete("hello", 77) == "echo 77");
        CHECK(nlohmann::json::parse(ok.last_body())["prompt"] == "hello");

        fixtures::StubServer wrong([](const httplib::Request&) {
            return fixtures::StubServer::Reply{200, R"({"choices": []})"};
        });
        cfg.endpoint = wrong.url();
        CHECK_THROWS_AS(RemoteLlmProvider(cfg).complete("x", 1), ProviderFormatError);

        fixtures::StubServer busy([](const httplib::Request&) { return fixtures::StubServer::Reply{429, "{}"}; });
        cfg.endpoint = busy.url();
        CHECK_THROWS_AS(RemoteLlmProvider(cfg).complete("x", 1), ProviderUnavailableError);

        cfg.endpoint = "http://127.0.0.1:" + std::to_string(fixtures::closed_port()) + "/v1";
        CHECK_THROWS_AS(RemoteLlmProvider(cfg).complete("x", 1), ProviderUnavailableError);
    }
}

TEST_SUITE("recommend") {
    TEST_CASE("prompt with zero specified features has every section") {
        const auto doc = document("g1", container("c1", {leaf("c2", "BUTTON", "Sign in", "btn_sign_in")}));
        const auto bundle = build_recommendation_prompt("a login page", {}, doc, FewShotExamples::builtin().recommendation);
        const auto& r = bundle.rendered;
        const auto a = r.find("## Task"), b = r.find("## Requirements for the GUI"), c = r.find("## Selected GUI"),
                   d = r.find("## Specified features"), e = r.find("## Examples");
        REQUIRE(a != std::string::npos);
        CHECK(a < b);
        CHECK(b < c);
        CHECK(c < d);
        CHECK(d < e);
        CHECK(section(r, "## Specified features") == "(none)\n");
        CHECK(section(r, "## Requirements for the GUI").find("a login page") == 0);
        CHECK(render_recommendation_prompt(bundle) == bundle.rendered);
        CHECK(bundle.task_instructions.find("top-30") != std::string::npos);
    }

    TEST_CASE("prompt is a pure function of its inputs") {
        const auto& world = fixtures::fixture_world();
        std::vector<FeatureQuery> f{{"f1", "remember me", FeatureOrigin::customer, FeatureStatus::open},
                                    {"f2", "dark mode", FeatureOrigin::customer, FeatureStatus::rejected}};
        const auto a = build_recommendation_prompt("login", f, world.corpus.at("g001"), world.examples.recommendation);
        const auto b = build_recommendation_prompt("login", f, world.corpus.at("g001"), world.examples.recommendation);
        CHECK(a.rendered == b.rendered);
        CHECK(a.specified_features == std::vector<std::string>{"remember me"});
    }

    TEST_CASE("selected GUI with 5 leaves renders 5 item lines") {
        std::vector<GuiComponent> leaves;
        for (int i = 0; i < 5; ++i)
            leaves.push_back(leaf("c" + std::to_string(i + 3), "TEXT", "item " + std::to_string(i)));
        const auto doc = document("g1", container("c1", {container("c2", std::move(leaves), "list")}));
        const auto bundle = build_recommendation_prompt("x", {}, doc, FewShotExamples::builtin().recommendation);
        const auto gui = section(bundle.rendered, "## Selected GUI");
        int items = 0;
        for (const auto& line : lines_of(gui)) items += line.rfind("  - ", 0) == 0;
        CHECK(items == 5);
    }

    TEST_CASE("explanation prompt holds feature and requirements") {
        FeatureQuery f{"f1", "search bar", FeatureOrigin::recommended, FeatureStatus::open};
        const auto bundle = build_explanation_prompt(f, "a shop front page", FewShotExamples::builtin().explanation);
        CHECK(bundle.rendered.find("search bar") != std::string::npos);
        CHECK(bundle.rendered.find("a shop front page") != std::string::npos);
        CHECK(section(bundle.rendered, "## Feature to explain") == "search bar\n");
    }

    TEST_CASE("parse_feature_list") {
        SUBCASE("plain array") {
            const auto f = parse_feature_list(R"(["search bar","filter button"])", 30);
            REQUIRE(f.size() == 2);
            CHECK(f[0].text == "search bar");
            CHECK(f[1].text == "filter button");
            CHECK(f[0].feature_id == "rec-1");
            CHECK(f[0].origin == FeatureOrigin::recommended);
            CHECK(f[0].status == FeatureStatus::open);
        }
        SUBCASE("case-insensitive dedup") {
            const auto f = parse_feature_list(R"(["a","A","b"])", 30);
            REQUIRE(f.size() == 2);
            CHECK(f[0].text == "a");
            CHECK(f[1].text == "b");
        }
        SUBCASE("not json keeps the raw text") {
            try {
                parse_feature_list("not json", 30);
                FAIL("expected ProviderFormatError");
            } catch (const ProviderFormatError& e) {
                CHECK(e.raw() == "not json");
            }
        }
        SUBCASE("non-array and non-string items") {
            CHECK_THROWS_AS(parse_feature_list(R"({"a": 1})", 30), ProviderFormatError);
            CHECK_THROWS_AS(parse_feature_list(R"(["a", 3])", 30), ProviderFormatError);
        }
        SUBCASE("fenced output, blanks and the bound") {
            const auto f = parse_feature_list("Sure:\n```json\n[\"x\", \"  \", \"y\", \"z\"]\n```", 2, "p");
            REQUIRE(f.size() == 2);
            CHECK(f[1].text == "y");
            CHECK(f[1].feature_id == "p2");
        }
    }

    TEST_CASE("S_pf arithmetic and oracle agreement") {
        auto cache = fixtures::hash_cache();
        std::mt19937_64 rng(12);
        const auto index = make_index(fixtures::random_documents(rng, 20));
        std::vector<RankedGui> ranked;
        std::vector<const GuiDocument*> docs;
        for (const auto& [id, doc] : index.documents) {
            ranked.push_back({id, 0, std::nullopt, 0, std::nullopt, ranked.size() + 1});
            docs.push_back(&doc);
        }
        for (int i = 0; i < 10; ++i) {
            const auto feature = fixtures::random_phrase(rng);
            CHECK(std::abs(score_predicted_feature(feature, ranked, index, *cache) - oracle::s_pf(feature, docs)) < 1e-12);
        }
        const std::vector<RankedGui> single{ranked.front()};
        CHECK(score_predicted_feature("save photo", single, index, *cache) ==
              score_feature_gui("save photo", index.at(ranked.front().gui_id), *cache).score);
        CHECK_THROWS_AS(score_predicted_feature("x", std::vector<RankedGui>{}, index, *cache), ContractViolation);
    }

    TEST_CASE("S_pf of a feature absent everywhere is near zero") {
        const auto planted = fixtures::planted_retrieval();
        auto cache = fixtures::hash_cache();
        std::vector<RankedGui> ranked;
        std::vector<const GuiDocument*> docs;
        for (const auto& [id, doc] : planted.index.documents) {
            ranked.push_back({id, 0, std::nullopt, 0, std::nullopt, ranked.size() + 1});
            docs.push_back(&doc);
        }
        const double s = score_predicted_feature("zzqx yyqx", ranked, planted.index, *cache);
        CHECK(std::abs(s - oracle::s_pf("zzqx yyqx", docs)) < 1e-12);
        CHECK(s < 0.05);
    }

    TEST_CASE("planted predictions: feature in every GUI outranks feature in none") {
        auto cache = fixtures::hash_cache();
        std::vector<GuiDocument> docs;
        for (std::size_t g = 1; g <= 8; ++g)
            docs.push_back(fixtures::flat_document(fixtures::gui_id(g), {fixtures::token(g, 1), "share button"}));
        const auto index = make_index(docs);
        const auto ranked = rank_guis("share", index, RankingConfig{0.5, 0.5, 8}, *cache);
        const std::vector<PredictedFeature> predicted{
            {{"f1", "qqwx zzwy", FeatureOrigin::recommended, FeatureStatus::open}, ""},
            {{"f2", "share button", FeatureOrigin::recommended, FeatureStatus::open}, ""}};
        const auto recs = score_recommendations(predicted, ranked, 15, index, *cache);
        REQUIRE(recs.size() == 2);
        CHECK(recs[0].feature.text == "share button");
        CHECK(recs[0].coverage_score > recs[1].coverage_score);
        CHECK(std::abs(recs[0].coverage_score - 1.0) < 1e-9);
        CHECK(recs[0].aspect_ranking.size() == 8);
    }

    TEST_CASE("thirty scripted features are sorted and bounded") {
        const auto& world = fixtures::fixture_world();
        nlohmann::json list = nlohmann::json::array();
        for (int i = 0; i < 35; ++i) list.push_back("feature " + std::to_string(i) + (i % 2 ? " password" : " map"));
        auto provider = script({{"## Selected GUI", list.dump()}, {"## Feature to explain", "because"}});
        RecommendationContext ctx;
        ctx.nlr_gui = "login";
        ctx.selected = &world.corpus.at("g001");
        ctx.ranked = rank_guis("login", world.corpus, RankingConfig{}, *world.embeddings);
        const auto recs = recommend_features(ctx, provider, world.examples, RecommendationSettings{}, world.corpus,
                                             *world.embeddings);
        CHECK(recs.size() == 30);
        for (std::size_t i = 1; i < recs.size(); ++i) CHECK(recs[i - 1].coverage_score >= recs[i].coverage_score);
        for (const auto& r : recs) {
            CHECK(r.explanation == "because");
            CHECK(r.aspect_ranking.size() <= 15);
        }
    }

    TEST_CASE("predictions duplicating specified or confirmed features are dropped") {
        const auto& world = fixtures::fixture_world();
        auto provider = fixtures::fixture_llm();
        RecommendationContext ctx;
        ctx.nlr_gui = "login screen with username and password";
        ctx.selected = &world.corpus.at("g001");
        ctx.features = {{"f1", "Remember me checkbox", FeatureOrigin::customer, FeatureStatus::confirmed_with_aspect}};
        const auto predicted = predict_features(ctx, *provider, world.examples, RecommendationSettings{});
        std::vector<std::string> texts;
        for (const auto& p : predicted) texts.push_back(p.feature.text);
        CHECK(texts == std::vector<std::string>{"forgot password link", "create account button", "show password toggle"});
        CHECK(predicted[0].explanation.find("recover access") != std::string::npos);
    }

    TEST_CASE("missing scripted explanation degrades to empty text with a warning") {
        const auto& world = fixtures::fixture_world();
        auto provider = fixtures::fixture_llm();
        RecommendationContext ctx;
        ctx.nlr_gui = "settings page with notification and dark mode switches";
        ctx.selected = &world.corpus.at("g005");
        LogCapture capture;
        const auto predicted = predict_features(ctx, *provider, world.examples, RecommendationSettings{});
        REQUIRE(predicted.size() == 4);
        const auto privacy = std::find_if(predicted.begin(), predicted.end(),
                                          [](const auto& p) { return p.feature.text == "privacy settings"; });
        REQUIRE(privacy != predicted.end());
        CHECK(privacy->explanation.empty());
        bool warned = false;
        for (const auto& line : capture.lines()) warned |= line.find("privacy settings") != std::string::npos;
        CHECK(warned);
    }

    TEST_CASE("provider failures surface") {
        const auto& world = fixtures::fixture_world();
        RecommendationContext ctx;
        ctx.nlr_gui = "x";
        ctx.selected = &world.corpus.at("g001");
        auto silent = script({});
        CHECK_THROWS_AS(predict_features(ctx, silent, world.examples, RecommendationSettings{}), ProviderUnavailableError);
        auto garbage = script({{"## Selected GUI", "I think a search bar"}});
        CHECK_THROWS_AS(predict_features(ctx, garbage, world.examples, RecommendationSettings{}), ProviderFormatError);
        ctx.selected = nullptr;
        CHECK_THROWS_AS(predict_features(ctx, garbage, world.examples, RecommendationSettings{}), ContractViolation);
    }

    TEST_CASE("few-shot files") {
        const auto ex = FewShotExamples::from_file(fixtures::data_dir() / "few_shot.json");
        CHECK(ex.recommendation.size() == 2);
        CHECK(ex.explanation.size() == 2);
        CHECK_THROWS_AS(FewShotExamples::from_file("/nonexistent.json"), ConfigError);
        fixtures::TempDir dir;
        fixtures::write_file(dir / "bad.json", R"({"recommendation": [{"context": 1}]})");
        CHECK_THROWS_AS(FewShotExamples::from_file(dir / "bad.json"), ParseError);
    }
}
