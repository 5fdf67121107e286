// Command-line front end: corpus ingest, ranking, aspect matching,
// recommendations on stored sessions, evaluation, export and the HTTP server.

#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "elicit/corpus.hpp"
#include "elicit/embedding.hpp"
#include "elicit/embedding_cache.hpp"
#include "elicit/errors.hpp"
#include "elicit/eval.hpp"
#include "elicit/feature_match.hpp"
#include "elicit/llm.hpp"
#include "elicit/ranking.hpp"
#include "elicit/recommend.hpp"
#include "elicit/serialization.hpp"
#include "elicit/service.hpp"
#include "elicit/session.hpp"

namespace {

using namespace elicit;

constexpr int kUsageExit = 2;

struct Options {
    std::string corpus;
    std::string filter_rules;
    std::string embedding_provider;
    std::size_t embedding_dim = 0;
    std::string embedding_endpoint;
    std::string embedding_cache;
    std::string llm_provider;
    std::string llm_script;
    std::string llm_endpoint;
    std::string few_shot;
    std::string session_dir;
    bool json_output = false;
    std::string log_level = "warn";

    // verb arguments
    std::string query;
    std::string feature;
    std::string session_id;
    std::optional<std::size_t> slot;
    std::string annotations;
    std::string out_dir;
    std::optional<std::size_t> top_k;
    std::optional<double> alpha;
    std::optional<std::size_t> k_aspect;
    std::string host;
    std::optional<int> port;
    std::string ui_dir;
};

void add_corpus_options(CLI::App& cmd, Options& o) {
    cmd.add_option("--corpus", o.corpus, "Corpus directory (ELICIT_CORPUS)");
    cmd.add_option("--filter-rules", o.filter_rules, "Filter rules JSON (ELICIT_FILTER_RULES)");
    cmd.add_option("--embedding-provider", o.embedding_provider, "deterministic_hash or remote_http");
    cmd.add_option("--embedding-dim", o.embedding_dim, "Hash embedding dimension");
    cmd.add_option("--embedding-endpoint", o.embedding_endpoint, "Remote embedding endpoint");
    cmd.add_option("--embedding-cache", o.embedding_cache, "Embedding cache file");
}

void add_llm_options(CLI::App& cmd, Options& o) {
    cmd.add_option("--llm-provider", o.llm_provider, "scripted or remote_http");
    cmd.add_option("--llm-script", o.llm_script, "Scripted LLM responses");
    cmd.add_option("--llm-endpoint", o.llm_endpoint, "Remote LLM endpoint");
    cmd.add_option("--few-shot", o.few_shot, "Few-shot examples JSON");
}

ServiceConfig resolve(const Options& o) {
    ServiceConfig c = ServiceConfig::from_environment();
    if (!o.corpus.empty()) c.corpus_path = o.corpus;
    if (!o.filter_rules.empty()) c.filter_rules_path = o.filter_rules;
    if (!o.embedding_provider.empty()) c.embedding.kind = embedding_provider_kind_from_string(o.embedding_provider);
    if (o.embedding_dim) c.embedding.dim = o.embedding_dim;
    if (!o.embedding_endpoint.empty()) c.embedding.endpoint = o.embedding_endpoint;
    if (!o.embedding_cache.empty()) c.embedding.cache_path = o.embedding_cache;
    if (!o.llm_provider.empty()) c.llm.kind = llm_provider_kind_from_string(o.llm_provider);
    if (!o.llm_script.empty()) c.llm.script_path = o.llm_script;
    if (!o.llm_endpoint.empty()) c.llm.endpoint = o.llm_endpoint;
    if (!o.few_shot.empty()) c.few_shot_path = o.few_shot;
    if (!o.session_dir.empty()) c.session_dir = o.session_dir;
    if (!o.host.empty()) c.host = o.host;
    if (o.port) c.port = *o.port;
    if (!o.ui_dir.empty()) c.ui_dir = o.ui_dir;
    if (o.top_k) c.session_defaults.ranking.top_k = *o.top_k;
    if (o.alpha) c.session_defaults.ranking.alpha = *o.alpha;
    if (o.k_aspect) c.session_defaults.k_aspect = *o.k_aspect;
    if (c.corpus_path.empty()) throw ConfigError("no corpus given (--corpus or ELICIT_CORPUS)");
    return c;
}

struct Loaded {
    CorpusIndex corpus;
    FilterReport report;
    std::shared_ptr<EmbeddingCache> embeddings;
    CacheBuildStats stats;
};

Loaded load(const ServiceConfig& c) {
    Loaded l;
    l.corpus = load_corpus(c.corpus_path);
    if (c.filter_rules_path) {
        auto [filtered, report] = filter_corpus(l.corpus, FilterRules::from_file(*c.filter_rules_path));
        l.corpus = std::move(filtered);
        l.report = std::move(report);
    }
    l.embeddings = std::make_shared<EmbeddingCache>(make_embedding_provider(c.embedding));
    if (c.embedding.cache_path) l.embeddings->load(*c.embedding.cache_path);
    l.stats = l.embeddings->build(l.corpus);
    if (c.embedding.cache_path && l.stats.computed > 0) l.embeddings->save(*c.embedding.cache_path);
    return l;
}

std::string optional_score(const std::optional<double>& v) { return v ? fmt::format("{:.6f}", *v) : "-"; }

int run_ingest(const Options& o) {
    const auto c = resolve(o);
    const auto l = load(c);
    if (o.json_output) {
        std::cout << json{{"documents", l.corpus.size()},
                          {"count_total", l.corpus.count_total},
                          {"count_filtered", l.corpus.count_filtered},
                          {"load_errors", l.corpus.errors.size()},
                          {"filter_report", l.report},
                          {"embeddings_computed", l.stats.computed},
                          {"embeddings_reused", l.stats.reused},
                          {"fingerprint", corpus_fingerprint(l.corpus)}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << fmt::format("loaded {} GUIs ({} load errors), kept {}, filtered {}\n", l.corpus.count_total,
                                 l.corpus.errors.size(), l.corpus.size(), l.corpus.count_filtered);
        for (const auto& [rule, count] : l.report.removals_by_rule)
            std::cout << fmt::format("  {:<32} {}\n", rule, count);
        for (const auto& e : l.corpus.errors) std::cout << fmt::format("  error {}: {}\n", e.file, e.reason);
        std::cout << fmt::format("embeddings: {} computed, {} reused\n", l.stats.computed, l.stats.reused);
        std::cout << "fingerprint " << corpus_fingerprint(l.corpus) << "\n";
    }
    if (!o.out_dir.empty()) save_corpus(l.corpus, o.out_dir);
    return 0;
}

int run_rank(const Options& o) {
    const auto c = resolve(o);
    const auto l = load(c);
    const auto ranked = rank_guis(o.query, l.corpus, c.session_defaults.ranking, *l.embeddings);
    if (o.json_output) {
        std::cout << json(ranked).dump(2) << "\n";
        return 0;
    }
    std::cout << fmt::format("{:>4}  {:<24} {:>9} {:>9} {:>9}\n", "rank", "gui_id", "s1", "s2", "ensemble");
    for (const auto& r : ranked)
        std::cout << fmt::format("{:>4}  {:<24} {:>9.6f} {:>9} {:>9.6f}\n", r.rank, r.gui_id, r.s1,
                                 optional_score(r.s2), r.ensemble);
    return 0;
}

int run_match(const Options& o) {
    const auto c = resolve(o);
    const auto l = load(c);
    std::vector<RankedGui> context;
    if (!o.query.empty()) {
        context = rank_guis(o.query, l.corpus, c.session_defaults.ranking, *l.embeddings);
    } else {
        for (const auto& [id, doc] : l.corpus.documents) context.push_back({id, 0.0, std::nullopt, 0.0, {}, 0});
    }
    const auto aspects = rank_aspect_guis(o.feature, context, c.session_defaults.k_aspect, l.corpus, *l.embeddings);
    if (o.json_output) {
        std::cout << json(aspects).dump(2) << "\n";
        return 0;
    }
    std::cout << fmt::format("{:>4}  {:<24} {:<20} {:>9}\n", "rank", "gui_id", "component_id", "score");
    for (std::size_t i = 0; i < aspects.size(); ++i)
        std::cout << fmt::format("{:>4}  {:<24} {:<20} {:>9.6f}\n", i + 1, aspects[i].gui_id, aspects[i].component_id,
                                 aspects[i].score);
    return 0;
}

int run_recommend(const Options& o) {
    const auto c = resolve(o);
    const auto l = load(c);
    auto llm = make_llm_provider(c.llm);
    const auto examples = c.few_shot_path ? FewShotExamples::from_file(*c.few_shot_path) : FewShotExamples::builtin();
    SessionEngine engine(l.corpus, *l.embeddings, llm, examples);
    SessionStore store(c.session_dir);
    SessionState state = store.load(o.session_id);
    if (!o.slot && !state.active_slot_index) throw StateError("session has no active slot");
    const std::size_t slot = o.slot.value_or(state.active_slot_index.value_or(0));
    const auto recs = engine.request_recommendations(state, slot);
    store.save(state);
    if (o.json_output) {
        std::cout << json(recs).dump(2) << "\n";
        return 0;
    }
    for (const auto& r : recs) {
        std::cout << fmt::format("{:<6} {:>9.6f}  {}\n", r.feature.feature_id, r.coverage_score, r.feature.text);
        if (!r.explanation.empty()) std::cout << "       " << r.explanation << "\n";
        for (std::size_t i = 0; i < r.aspect_ranking.size() && i < 3; ++i)
            std::cout << fmt::format("       {}. {} / {} ({:.6f})\n", i + 1, r.aspect_ranking[i].gui_id,
                                     r.aspect_ranking[i].component_id, r.aspect_ranking[i].score);
    }
    return 0;
}

int run_eval(const Options& o) {
    const auto report = evaluate_run(o.annotations);
    std::cout << (o.json_output ? render_metrics_json(report) : render_metrics_table(report));
    return 0;
}

int run_export(const Options& o) {
    const auto c = resolve(o);
    const auto l = load(c);
    // Export never calls the LLM; a placeholder provider keeps the engine whole.
    auto llm = std::make_shared<ScriptedLlmProvider>(std::vector<ScriptedLlmProvider::Entry>{});
    SessionEngine engine(l.corpus, *l.embeddings, llm);
    const SessionState state = SessionStore(c.session_dir).load(o.session_id);
    const auto artifact = engine.export_artifact(state);
    const std::filesystem::path out = o.out_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(o.out_dir);
    std::filesystem::create_directories(out);
    std::ofstream(out / "artifact.json", std::ios::binary) << render_artifact_json(artifact);
    std::ofstream(out / "summary.md", std::ios::binary) << render_artifact_summary(artifact, l.corpus);
    std::cout << "wrote " << (out / "artifact.json").string() << " and " << (out / "summary.md").string() << "\n";
    return 0;
}

HttpServer* g_server = nullptr;

int run_serve(const Options& o) {
    const auto c = resolve(o);
    auto service = Service::start(c);
    HttpServer server(*service);
    const int port = server.bind(c.host, c.port);
    g_server = &server;
    std::signal(SIGINT, [](int) {
        if (g_server) g_server->stop();
    });
    std::signal(SIGTERM, [](int) {
        if (g_server) g_server->stop();
    });
    spdlog::info("listening on http://{}:{}", c.host, port);
    std::cout << "listening on http://" << c.host << ":" << port << std::endl;
    server.listen_after_bind();
    g_server = nullptr;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Interactive GUI requirements elicitation backed by a GUI corpus."};
    app.require_subcommand(1);
    app.add_flag("--json", o.json_output, "Machine-readable output");
    app.add_option("--log-level", o.log_level, "trace, debug, info, warn, error")
        ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));
    app.add_option("--session-dir", o.session_dir, "Session store directory (ELICIT_SESSION_DIR)");

    auto* ingest = app.add_subcommand("ingest", "Load, filter and embed a corpus; print the filter report");
    add_corpus_options(*ingest, o);
    ingest->add_option("--out", o.out_dir, "Write the filtered corpus to this directory");

    auto* rank = app.add_subcommand("rank", "Rank GUIs for a natural-language query");
    add_corpus_options(*rank, o);
    rank->add_option("--query", o.query, "GUI requirements")->required();
    rank->add_option("--top-k", o.top_k, "Number of GUIs to return");
    rank->add_option("--alpha", o.alpha, "Weight of the GUI-text score");

    auto* match = app.add_subcommand("match", "Rank aspect-GUIs for a feature");
    add_corpus_options(*match, o);
    match->add_option("--feature", o.feature, "Feature requirement")->required();
    match->add_option("--query", o.query, "Restrict to the ranking for these GUI requirements");
    match->add_option("--top-k", o.top_k, "GUI ranking size when --query is given");
    match->add_option("--k-aspect", o.k_aspect, "Number of aspect-GUIs");

    auto* recommend = app.add_subcommand("recommend", "Request feature recommendations for a stored session");
    add_corpus_options(*recommend, o);
    add_llm_options(*recommend, o);
    recommend->add_option("--session", o.session_id, "Session id")->required();
    recommend->add_option("--slot", o.slot, "Slot index (default: active slot)");

    auto* eval = app.add_subcommand("eval", "Compute ranking metrics from annotations");
    eval->add_option("--annotations", o.annotations, "JSON-lines annotation file")->required();

    auto* exp = app.add_subcommand("export", "Export the prototype artifact of a stored session");
    add_corpus_options(*exp, o);
    exp->add_option("--session", o.session_id, "Session id")->required();
    exp->add_option("--out", o.out_dir, "Output directory (default: .)");

    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    add_corpus_options(*serve, o);
    add_llm_options(*serve, o);
    serve->add_option("--host", o.host, "Bind address (ELICIT_HOST)");
    serve->add_option("--port", o.port, "Port, 0 for any (ELICIT_PORT)");
    serve->add_option("--ui-dir", o.ui_dir, "Static UI bundle (ELICIT_UI_DIR)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kUsageExit;
    }
    // stdout carries command output.
    spdlog::set_default_logger(spdlog::stderr_color_mt("elicit"));
    spdlog::set_level(spdlog::level::from_str(o.log_level));

    try {
        if (*ingest) return run_ingest(o);
        if (*rank) return run_rank(o);
        if (*match) return run_match(o);
        if (*recommend) return run_recommend(o);
        if (*eval) return run_eval(o);
        if (*exp) return run_export(o);
        if (*serve) return run_serve(o);
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error [internal]: " << e.what() << "\n";
        return 1;
    }
    return kUsageExit;
}
