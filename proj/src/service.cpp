#include "elicit/service.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "elicit/serialization.hpp"

namespace elicit {

namespace {

std::optional<std::string> env(const char* name) {
    const char* value = std::getenv(name);
    if (!value || !*value) return std::nullopt;
    return std::string(value);
}

template <typename Int>
Int parse_int(const std::string& text, const char* what) {
    Int value{};
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) throw ConfigError(std::string(what) + " must be an integer, got '" + text + "'");
    return value;
}

// Request bodies are validated by hand so that every malformed field yields a
// bad_request with the field name.
const json* optional_field(const json& request, const char* key) {
    if (!request.is_object()) throw ParseError("request body must be a JSON object");
    auto it = request.find(key);
    return it == request.end() || it->is_null() ? nullptr : &*it;
}

std::string string_field(const json& request, const char* key) {
    const json* v = optional_field(request, key);
    if (!v) throw ParseError(std::string("missing field '") + key + "'");
    if (!v->is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
    return v->get<std::string>();
}

bool bool_field(const json& request, const char* key) {
    const json* v = optional_field(request, key);
    if (!v) return false;
    if (!v->is_boolean()) throw ParseError(std::string("field '") + key + "' must be a boolean");
    return v->get<bool>();
}

std::optional<AspectRef> aspect_field(const json& request) {
    const json* v = optional_field(request, "aspect");
    if (!v) return std::nullopt;
    if (!v->is_object()) throw ParseError("field 'aspect' must be {\"gui_id\", \"component_id\"}");
    return AspectRef{string_field(*v, "gui_id"), string_field(*v, "component_id")};
}

SessionConfig session_config_from(const json& overrides, SessionConfig config) {
    if (!overrides.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : overrides.items()) {
        try {
            if (key == "alpha")
                config.ranking.alpha = value.get<double>();
            else if (key == "beta")
                config.ranking.beta = value.get<double>();
            else if (key == "top_k")
                config.ranking.top_k = value.get<std::size_t>();
            else if (key == "k_aspect")
                config.k_aspect = value.get<std::size_t>();
            else if (key == "max_features")
                config.max_features = value.get<std::size_t>();
            else
                throw ConfigError("unknown config key '" + key + "'");
        } catch (const json::exception&) {
            throw ConfigError("config key '" + key + "' has the wrong type");
        }
    }
    return config;
}

json slot_body(const SessionState& state, std::size_t slot) {
    return json{{"session_id", state.session_id}, {"slot_index", slot}, {"slot", state.slots.at(slot)}};
}

}  // namespace

ServiceConfig ServiceConfig::from_environment() { return from_environment(ServiceConfig{}); }

ServiceConfig ServiceConfig::from_environment(ServiceConfig base) {
    if (auto v = env("ELICIT_CORPUS")) base.corpus_path = *v;
    if (auto v = env("ELICIT_FILTER_RULES")) base.filter_rules_path = *v;
    if (auto v = env("ELICIT_SESSION_DIR")) base.session_dir = *v;
    if (auto v = env("ELICIT_UI_DIR")) base.ui_dir = *v;
    if (auto v = env("ELICIT_FEW_SHOT")) base.few_shot_path = *v;
    if (auto v = env("ELICIT_EMBEDDING_PROVIDER")) base.embedding.kind = embedding_provider_kind_from_string(*v);
    if (auto v = env("ELICIT_EMBEDDING_DIM")) base.embedding.dim = parse_int<std::size_t>(*v, "ELICIT_EMBEDDING_DIM");
    if (auto v = env("ELICIT_EMBEDDING_ENDPOINT")) base.embedding.endpoint = *v;
    if (auto v = env("ELICIT_EMBEDDING_API_KEY")) base.embedding.api_key = *v;
    if (auto v = env("ELICIT_EMBEDDING_CACHE")) base.embedding.cache_path = *v;
    if (auto v = env("ELICIT_LLM_PROVIDER")) base.llm.kind = llm_provider_kind_from_string(*v);
    if (auto v = env("ELICIT_LLM_SCRIPT")) base.llm.script_path = *v;
    if (auto v = env("ELICIT_LLM_ENDPOINT")) base.llm.endpoint = *v;
    if (auto v = env("ELICIT_LLM_API_KEY")) base.llm.api_key = *v;
    if (auto v = env("ELICIT_HOST")) base.host = *v;
    if (auto v = env("ELICIT_PORT")) base.port = parse_int<int>(*v, "ELICIT_PORT");
    return base;
}

int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::bad_request: return 400;
        case ErrorCode::not_found: return 404;
        case ErrorCode::state_conflict: return 409;
        case ErrorCode::provider_unavailable: return 503;
        case ErrorCode::provider_format: return 502;
        case ErrorCode::internal: return 500;
    }
    return 500;
}

ApiResponse error_response(const Error& error) {
    json body{{"code", to_string(error.code())}, {"message", error.what()}};
    if (const auto* format = dynamic_cast<const ProviderFormatError*>(&error)) body["raw"] = format->raw();
    return {http_status(error.code()), json{{"error", std::move(body)}}};
}

// --- Service --------------------------------------------------------------------

std::unique_ptr<Service> Service::start(const ServiceConfig& config) {
    Components c;
    c.corpus = load_corpus(config.corpus_path);
    for (const auto& e : c.corpus.errors) spdlog::warn("skipped corpus record {}: {}", e.file, e.reason);
    if (config.filter_rules_path) {
        auto [filtered, report] = filter_corpus(c.corpus, FilterRules::from_file(*config.filter_rules_path));
        c.corpus = std::move(filtered);
        c.filter_report = std::move(report);
    }

    c.embeddings = std::make_shared<EmbeddingCache>(make_embedding_provider(config.embedding));
    if (config.embedding.cache_path) c.embeddings->load(*config.embedding.cache_path);
    const auto stats = c.embeddings->build(c.corpus);
    spdlog::info("corpus ready: {} GUIs, {} embeddings computed, {} reused", c.corpus.size(), stats.computed,
                 stats.reused);
    if (config.embedding.cache_path && stats.computed > 0) c.embeddings->save(*config.embedding.cache_path);

    c.llm = make_llm_provider(config.llm);
    if (config.few_shot_path) c.examples = FewShotExamples::from_file(*config.few_shot_path);
    return std::make_unique<Service>(std::move(c), config);
}

Service::Service(Components components, ServiceConfig config, Clock clock, IdGenerator ids)
    : components_(std::move(components)),
      config_(std::move(config)),
      engine_(components_.corpus, *components_.embeddings, components_.llm, components_.examples, std::move(clock),
              std::move(ids)),
      store_(config_.session_dir) {
    config_.session_defaults.validate();
}

json Service::health() const {
    std::size_t open_sessions = 0;
    {
        std::lock_guard lock(sessions_mutex_);
        open_sessions = sessions_.size();
    }
    return json{{"status", "ok"},
                {"corpus",
                 {{"documents", components_.corpus.size()},
                  {"count_total", components_.corpus.count_total},
                  {"count_filtered", components_.corpus.count_filtered},
                  {"load_errors", components_.corpus.errors.size()},
                  {"fingerprint", corpus_fingerprint(components_.corpus)}}},
                {"filter_report", components_.filter_report},
                {"embedding_provider", components_.embeddings->provider().kind()},
                {"llm_provider", components_.llm->kind()},
                {"open_sessions", open_sessions}};
}

std::shared_ptr<Service::SessionEntry> Service::entry(std::string_view session_id) const {
    std::lock_guard lock(sessions_mutex_);
    if (auto it = sessions_.find(session_id); it != sessions_.end()) return it->second;
    auto loaded = std::make_shared<SessionEntry>();
    loaded->publish(store_.load(session_id));
    sessions_.emplace(std::string(session_id), loaded);
    return loaded;
}

template <typename Fn>
json Service::mutate(std::string_view session_id, Fn&& fn) {
    auto e = entry(session_id);
    std::lock_guard writer(e->write_mutex);
    SessionState next = *e->read();
    json body = fn(next);
    store_.save(next);
    e->publish(std::move(next));
    return body;
}

json Service::create_session(const json& request) {
    const std::string app_name = string_field(request, "app_name");
    SessionConfig cfg = config_.session_defaults;
    if (const json* overrides = optional_field(request, "config")) cfg = session_config_from(*overrides, cfg);

    SessionState state = engine_.create_session(app_name, cfg);
    store_.save(state);
    json body = session_summary_json(state);
    const std::string id = state.session_id;
    auto e = std::make_shared<SessionEntry>();
    e->publish(std::move(state));
    std::lock_guard lock(sessions_mutex_);
    sessions_.emplace(id, std::move(e));
    return body;
}

json Service::get_session(std::string_view session_id) const {
    return session_summary_json(*entry(session_id)->read());
}

json Service::submit_gui_query(std::string_view session_id, std::size_t slot, const json& request) {
    const std::string query = string_field(request, "nlr_gui");
    return mutate(session_id, [&](SessionState& s) {
        engine_.submit_gui_query(s, slot, query);
        return slot_body(s, slot);
    });
}

json Service::select_gui(std::string_view session_id, std::size_t slot, const json& request) {
    const std::string gui_id = string_field(request, "gui_id");
    return mutate(session_id, [&](SessionState& s) {
        engine_.select_gui(s, slot, gui_id);
        return slot_body(s, slot);
    });
}

json Service::submit_feature(std::string_view session_id, std::size_t slot, const json& request) {
    const std::string text = string_field(request, "text");
    return mutate(session_id, [&](SessionState& s) {
        auto submission = engine_.submit_feature_query(s, slot, text);
        json body = slot_body(s, slot);
        body["feature"] = submission.feature;
        body["aspect_ranking"] = submission.aspect_ranking;
        return body;
    });
}

json Service::decide_feature(std::string_view session_id, std::size_t slot, std::string_view feature_id,
                             const json& request) {
    const auto aspect = aspect_field(request);
    const bool keep_text_only = bool_field(request, "keep_text_only");
    return mutate(session_id, [&](SessionState& s) {
        engine_.select_aspect_gui(s, slot, feature_id, aspect, keep_text_only);
        return slot_body(s, slot);
    });
}

json Service::request_recommendations(std::string_view session_id, std::size_t slot) {
    return mutate(session_id, [&](SessionState& s) {
        const auto& recs = engine_.request_recommendations(s, slot);
        json body = slot_body(s, slot);
        body["recommendations"] = recs;
        return body;
    });
}

json Service::decide_recommendation(std::string_view session_id, std::size_t slot, std::string_view feature_id,
                                    const json& request) {
    const FeatureDecision decision = feature_decision_from_string(string_field(request, "decision"));
    const auto aspect = aspect_field(request);
    return mutate(session_id, [&](SessionState& s) {
        engine_.respond_to_recommendation(s, slot, feature_id, decision, aspect);
        return slot_body(s, slot);
    });
}

json Service::complete_slot(std::string_view session_id, std::size_t slot) {
    return mutate(session_id, [&](SessionState& s) {
        if (slot >= s.slots.size()) throw NotFoundError("slot " + std::to_string(slot) + " does not exist");
        if (s.active_slot_index != slot)
            throw StateError("slot " + std::to_string(slot) + " is not the active slot");
        engine_.complete_slot(s);
        return session_summary_json(s);
    });
}

json Service::artifact(std::string_view session_id) const {
    return engine_.export_artifact(*entry(session_id)->read());
}

std::string Service::artifact_summary(std::string_view session_id) const {
    return render_artifact_summary(engine_.export_artifact(*entry(session_id)->read()), components_.corpus);
}

json Service::gui(std::string_view gui_id) const {
    json body = components_.corpus.at(gui_id);
    body["screenshot_available"] = screenshot_path(gui_id).has_value();
    return body;
}

std::optional<std::filesystem::path> Service::screenshot_path(std::string_view gui_id) const {
    const GuiDocument& doc = components_.corpus.at(gui_id);
    if (!doc.screenshot_ref) return std::nullopt;
    std::filesystem::path p(*doc.screenshot_ref);
    if (p.is_relative()) p = config_.corpus_path / p;
    if (!std::filesystem::is_regular_file(p)) return std::nullopt;
    return p;
}

// --- HTTP ------------------------------------------------------------------------

namespace {

constexpr const char* kJson = "application/json";

void send(httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), kJson);
}

json request_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
        return json::parse(req.body);
    } catch (const json::exception& e) {
        throw ParseError(std::string("request body is not valid JSON: ") + e.what());
    }
}

std::size_t slot_param(const std::string& text) {
    try {
        return static_cast<std::size_t>(std::stoull(text));
    } catch (const std::exception&) {
        throw NotFoundError("slot " + text + " does not exist");
    }
}

template <typename Fn>
httplib::Server::Handler handler(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
        try {
            send(res, {200, fn(req)});
        } catch (const Error& e) {
            send(res, error_response(e));
        } catch (const std::exception& e) {
            spdlog::error("{} {} failed: {}", req.method, req.path, e.what());
            send(res, error_response(Error(ErrorCode::internal, e.what())));
        }
    };
}

}  // namespace

HttpServer::HttpServer(Service& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
    install_routes();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::install_routes() {
    auto& s = *server_;
    Service& svc = service_;
    const std::string session = R"(/api/v1/sessions/([A-Za-z0-9_-]+))";
    const std::string slot = session + R"(/slots/([0-9]+))";
    const std::string fid = R"(([A-Za-z0-9_.-]+))";

    s.Get("/api/v1/healthz", handler([&svc](const httplib::Request&) { return svc.health(); }));
    s.Post("/api/v1/sessions",
           handler([&svc](const httplib::Request& req) { return svc.create_session(request_body(req)); }));
    s.Get(session, handler([&svc](const httplib::Request& req) { return svc.get_session(req.matches[1].str()); }));
    s.Post(slot + "/query", handler([&svc](const httplib::Request& req) {
               return svc.submit_gui_query(req.matches[1].str(), slot_param(req.matches[2]), request_body(req));
           }));
    s.Post(slot + "/select-gui", handler([&svc](const httplib::Request& req) {
               return svc.select_gui(req.matches[1].str(), slot_param(req.matches[2]), request_body(req));
           }));
    s.Post(slot + "/features", handler([&svc](const httplib::Request& req) {
               return svc.submit_feature(req.matches[1].str(), slot_param(req.matches[2]), request_body(req));
           }));
    s.Post(slot + "/features/" + fid + "/decision", handler([&svc](const httplib::Request& req) {
               return svc.decide_feature(req.matches[1].str(), slot_param(req.matches[2]), req.matches[3].str(),
                                         request_body(req));
           }));
    s.Post(slot + "/recommendations", handler([&svc](const httplib::Request& req) {
               return svc.request_recommendations(req.matches[1].str(), slot_param(req.matches[2]));
           }));
    s.Post(slot + "/recommendations/" + fid + "/decision", handler([&svc](const httplib::Request& req) {
               return svc.decide_recommendation(req.matches[1].str(), slot_param(req.matches[2]),
                                                req.matches[3].str(), request_body(req));
           }));
    s.Post(slot + "/complete", handler([&svc](const httplib::Request& req) {
               return svc.complete_slot(req.matches[1].str(), slot_param(req.matches[2]));
           }));
    s.Get(session + "/artifact", [&svc](const httplib::Request& req, httplib::Response& res) {
        try {
            if (req.has_param("format") && req.get_param_value("format") == "summary") {
                res.set_content(svc.artifact_summary(req.matches[1].str()), "text/markdown; charset=utf-8");
                return;
            }
            res.set_content(render_artifact_json(svc.artifact(req.matches[1].str())), kJson);
            res.set_header("Content-Disposition", "attachment; filename=\"artifact.json\"");
        } catch (const Error& e) {
            send(res, error_response(e));
        }
    });
    s.Get(R"(/api/v1/guis/([A-Za-z0-9._-]+))",
          handler([&svc](const httplib::Request& req) { return svc.gui(req.matches[1].str()); }));
    s.Get(R"(/api/v1/guis/([A-Za-z0-9._-]+)/screenshot)", [&svc](const httplib::Request& req,
                                                                 httplib::Response& res) {
        try {
            const auto path = svc.screenshot_path(req.matches[1].str());
            if (!path) throw NotFoundError("no screenshot for GUI " + req.matches[1].str());
            std::ifstream in(*path, std::ios::binary);
            std::ostringstream buffer;
            buffer << in.rdbuf();
            res.set_content(buffer.str(), "image/png");
        } catch (const Error& e) {
            send(res, error_response(e));
        }
    });

    if (const auto& ui = svc.config().ui_dir) {
        if (!s.set_mount_point("/", ui->string()))
            spdlog::warn("UI directory {} does not exist; static files disabled", ui->string());
    }
}

int HttpServer::bind(const std::string& host, int port) {
    const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw ConfigError("cannot bind " + host + ":" + std::to_string(port));
    return bound;
}

void HttpServer::listen_after_bind() { server_->listen_after_bind(); }

void HttpServer::stop() {
    if (server_) server_->stop();
}

bool HttpServer::is_running() const { return server_->is_running(); }

}  // namespace elicit
