#pragma once

#include <chrono>
#include <string>

#include "gradekit/gateway.hpp"

namespace gradekit {

/// Chat-completions provider adapter. Works against any endpoint speaking
/// the OpenAI wire format; the key is read from the named environment
/// variable, never stored in config files.
struct HttpBackendConfig {
    std::string base_url;                       // e.g. "https://api.openai.com"
    std::string completions_path = "/v1/chat/completions";
    std::string api_key_env = "GRADEKIT_API_KEY";
    std::chrono::milliseconds timeout{60000};
    int rate_limit_backoff_attempts = 4;        // 429 budget before RateLimitedError
    std::chrono::milliseconds backoff_initial{500};
};

class HttpBackend : public Backend {
public:
    explicit HttpBackend(HttpBackendConfig config);

    BackendResponse complete(const BackendRequest& request) override;

    /// Exposed for tests: the JSON body sent for a request.
    static std::string request_body(const BackendRequest& request);
    /// Exposed for tests: content + usage from a provider reply.
    static BackendResponse parse_reply(const std::string& body);

private:
    HttpBackendConfig config_;
};

}  // namespace gradekit
