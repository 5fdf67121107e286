#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

namespace elicit::detail {

struct Endpoint {
    std::string scheme_host_port;  // http://host:port
    std::string path;              // /v1/embed
};

// Splits "http://host:port/path". Throws ConfigError for other schemes.
Endpoint parse_endpoint(std::string_view url);

// POSTs a JSON body and parses the JSON answer. Connection failures and
// 5xx/429 answers raise ProviderUnavailableError; other non-2xx answers and
// non-JSON bodies raise ProviderFormatError.
nlohmann::json post_json(std::string_view url, const nlohmann::json& body, std::string_view api_key,
                         int timeout_seconds = 60);

}  // namespace elicit::detail
