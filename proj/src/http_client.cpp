#include "http_client.hpp"

#include <httplib.h>

#include "elicit/errors.hpp"

namespace elicit::detail {

Endpoint parse_endpoint(std::string_view url) {
    constexpr std::string_view scheme = "http://";
    if (url.substr(0, scheme.size()) != scheme)
        throw ConfigError("endpoint must start with http:// (got '" + std::string(url) + "')");
    const auto slash = url.find('/', scheme.size());
    if (slash == std::string_view::npos) return {std::string(url), "/"};
    return {std::string(url.substr(0, slash)), std::string(url.substr(slash))};
}

nlohmann::json post_json(std::string_view url, const nlohmann::json& body, std::string_view api_key,
                         int timeout_seconds) {
    const Endpoint endpoint = parse_endpoint(url);
    httplib::Client client(endpoint.scheme_host_port);
    client.set_connection_timeout(timeout_seconds, 0);
    client.set_read_timeout(timeout_seconds, 0);
    httplib::Headers headers;
    if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + std::string(api_key));

    auto result = client.Post(endpoint.path, headers, body.dump(), "application/json");
    if (!result)
        throw ProviderUnavailableError("request to " + std::string(url) + " failed: " +
                                       httplib::to_string(result.error()));
    const int status = result->status;
    if (status == 429 || status >= 500)
        throw ProviderUnavailableError("provider answered HTTP " + std::to_string(status));
    if (status < 200 || status >= 300)
        throw ProviderFormatError("provider answered HTTP " + std::to_string(status), result->body);
    try {
        return nlohmann::json::parse(result->body);
    } catch (const nlohmann::json::exception&) {
        throw ProviderFormatError("provider answer is not JSON", result->body);
    }
}

}  // namespace elicit::detail
