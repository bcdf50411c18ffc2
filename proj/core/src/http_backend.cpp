#include "gradekit/http_backend.hpp"

#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace gradekit {

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
    if (config_.base_url.empty()) throw UsageError("http backend needs a base_url");
}

std::string HttpBackend::request_body(const BackendRequest& request) {
    nlohmann::json body;
    body["model"] = request.model_id;
    nlohmann::json messages = nlohmann::json::array();
    if (!request.system_message.empty())
        messages.push_back({{"role", "system"}, {"content", request.system_message}});
    messages.push_back({{"role", "user"}, {"content", request.user_message}});
    body["messages"] = std::move(messages);
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_output;
    return body.dump();
}

BackendResponse HttpBackend::parse_reply(const std::string& body) {
    nlohmann::json doc = nlohmann::json::parse(body, nullptr, false);
    if (doc.is_discarded()) throw TransportError("provider returned invalid JSON");
    BackendResponse response;
    try {
        response.raw_text =
            doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception&) {
        throw TransportError("provider reply missing choices[0].message.content");
    }
    if (doc.contains("usage")) {
        response.usage.input_tokens = doc["usage"].value("prompt_tokens", 0);
        response.usage.output_tokens = doc["usage"].value("completion_tokens", 0);
    }
    return response;
}

BackendResponse HttpBackend::complete(const BackendRequest& request) {
    httplib::Client client(config_.base_url);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(config_.timeout));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(config_.timeout));

    httplib::Headers headers;
    if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key)
        headers.emplace("Authorization", std::string("Bearer ") + key);

    const std::string body = request_body(request);
    auto backoff = config_.backoff_initial;

    for (int attempt = 0; attempt <= config_.rate_limit_backoff_attempts; ++attempt) {
        const auto started = std::chrono::steady_clock::now();
        httplib::Result result =
            client.Post(config_.completions_path, headers, body, "application/json");
        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - started);

        if (!result)
            throw TransportError("request to " + config_.base_url +
                                 " failed: " + httplib::to_string(result.error()));
        if (result->status == 429) {
            if (attempt == config_.rate_limit_backoff_attempts)
                throw RateLimitedError("still rate limited after " +
                                       std::to_string(attempt + 1) + " attempts");
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
            continue;
        }
        if (result->status < 200 || result->status >= 300)
            throw TransportError("provider returned HTTP " + std::to_string(result->status) +
                                 ": " + result->body.substr(0, 512));

        BackendResponse response = parse_reply(result->body);
        response.latency_ms = elapsed.count();
        return response;
    }
    throw RateLimitedError("rate limit backoff budget exhausted");
}

}  // namespace gradekit
