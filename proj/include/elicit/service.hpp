#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "elicit/corpus.hpp"
#include "elicit/embedding.hpp"
#include "elicit/embedding_cache.hpp"
#include "elicit/errors.hpp"
#include "elicit/llm.hpp"
#include "elicit/recommend.hpp"
#include "elicit/session.hpp"

namespace httplib {
class Server;
}

namespace elicit {

struct ServiceConfig {
    std::filesystem::path corpus_path;
    std::optional<std::filesystem::path> filter_rules_path;
    std::filesystem::path session_dir = "sessions";
    std::optional<std::filesystem::path> ui_dir;
    std::optional<std::filesystem::path> few_shot_path;
    EmbeddingProviderConfig embedding;
    LlmProviderConfig llm;
    SessionConfig session_defaults;
    std::string host = "127.0.0.1";
    int port = 8080;

    // ELICIT_CORPUS, ELICIT_FILTER_RULES, ELICIT_SESSION_DIR, ELICIT_UI_DIR,
    // ELICIT_FEW_SHOT, ELICIT_EMBEDDING_PROVIDER, ELICIT_EMBEDDING_DIM,
    // ELICIT_EMBEDDING_ENDPOINT, ELICIT_EMBEDDING_API_KEY, ELICIT_EMBEDDING_CACHE,
    // ELICIT_LLM_PROVIDER, ELICIT_LLM_SCRIPT, ELICIT_LLM_ENDPOINT,
    // ELICIT_LLM_API_KEY, ELICIT_HOST, ELICIT_PORT. Unset variables keep the
    // values already in `base`.
    static ServiceConfig from_environment(ServiceConfig base);
    static ServiceConfig from_environment();
};

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

// Error payload: {"error": {"code", "message", "raw"?}}.
ApiResponse error_response(const Error& error);
int http_status(ErrorCode code);

// Transport-independent application core. Every public method corresponds to
// one /api/v1 endpoint and returns the JSON body it serves. Mutations of one
// session are serialized; distinct sessions proceed concurrently.
class Service {
public:
    struct Components {
        CorpusIndex corpus;
        FilterReport filter_report;
        std::shared_ptr<EmbeddingCache> embeddings;
        std::shared_ptr<LlmProvider> llm;
        FewShotExamples examples = FewShotExamples::builtin();
    };

    // Loads, filters and embeds the corpus. Throws on startup failures.
    static std::unique_ptr<Service> start(const ServiceConfig& config);

    Service(Components components, ServiceConfig config, Clock clock = system_now,
            IdGenerator ids = random_session_id);

    nlohmann::json health() const;
    nlohmann::json create_session(const nlohmann::json& request);
    nlohmann::json get_session(std::string_view session_id) const;
    nlohmann::json submit_gui_query(std::string_view session_id, std::size_t slot, const nlohmann::json& request);
    nlohmann::json select_gui(std::string_view session_id, std::size_t slot, const nlohmann::json& request);
    nlohmann::json submit_feature(std::string_view session_id, std::size_t slot, const nlohmann::json& request);
    nlohmann::json decide_feature(std::string_view session_id, std::size_t slot, std::string_view feature_id,
                                  const nlohmann::json& request);
    nlohmann::json request_recommendations(std::string_view session_id, std::size_t slot);
    nlohmann::json decide_recommendation(std::string_view session_id, std::size_t slot,
                                         std::string_view feature_id, const nlohmann::json& request);
    nlohmann::json complete_slot(std::string_view session_id, std::size_t slot);
    nlohmann::json artifact(std::string_view session_id) const;
    std::string artifact_summary(std::string_view session_id) const;
    nlohmann::json gui(std::string_view gui_id) const;
    std::optional<std::filesystem::path> screenshot_path(std::string_view gui_id) const;

    const CorpusIndex& corpus() const { return components_.corpus; }
    const EmbeddingCache& embeddings() const { return *components_.embeddings; }
    const SessionEngine& engine() const { return engine_; }
    const ServiceConfig& config() const { return config_; }

private:
    // Writers serialize on write_mutex; readers take the published snapshot
    // without locking.
    struct SessionEntry {
        std::mutex write_mutex;
        std::shared_ptr<const SessionState> snapshot;

        std::shared_ptr<const SessionState> read() const { return std::atomic_load(&snapshot); }
        void publish(SessionState state) {
            std::atomic_store(&snapshot, std::shared_ptr<const SessionState>(
                                             std::make_shared<SessionState>(std::move(state))));
        }
    };

    std::shared_ptr<SessionEntry> entry(std::string_view session_id) const;

    // Runs `mutate` on a copy of the session under its writer lock, persists,
    // then publishes the copy.
    template <typename Fn>
    nlohmann::json mutate(std::string_view session_id, Fn&& mutate);

    Components components_;
    ServiceConfig config_;
    SessionEngine engine_;
    SessionStore store_;
    mutable std::mutex sessions_mutex_;
    mutable std::map<std::string, std::shared_ptr<SessionEntry>, std::less<>> sessions_;
};

// Wires Service onto cpp-httplib routes under /api/v1.
class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // Binds; returns the bound port (useful with port 0). Throws Error when
    // the port is unavailable.
    int bind(const std::string& host, int port);
    void listen_after_bind();  // blocks until stop()
    void stop();
    bool is_running() const;

private:
    void install_routes();

    Service& service_;
    std::unique_ptr<httplib::Server> server_;
};

}  // namespace elicit
