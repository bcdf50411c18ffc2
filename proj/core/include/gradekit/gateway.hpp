#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gradekit/errors.hpp"
#include "gradekit/prompts.hpp"

namespace gradekit {

struct TokenUsage {
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;

    TokenUsage& operator+=(const TokenUsage& o) {
        input_tokens += o.input_tokens;
        output_tokens += o.output_tokens;
        return *this;
    }
};

struct BackendRequest {
    std::string system_message;
    std::string user_message;
    std::string model_id;
    double temperature = 0.0;
    int max_output = 4096;
    int attempt = 1;
};

struct BackendResponse {
    std::string raw_text;
    std::optional<nlohmann::json> parsed;
    TokenUsage usage;
    std::int64_t latency_ms = 0;
    bool cached = false;
};

struct GatewayConfig {
    int max_retries = 3;            // total attempt budget per logical call
    int concurrency_limit = 4;      // in-flight backend requests
    std::chrono::milliseconds request_timeout{60000};
    int rate_per_minute = 600;
    std::optional<std::filesystem::path> cache_dir;

    void validate() const {
        if (max_retries < 1 || concurrency_limit < 1 || rate_per_minute < 1 ||
            request_timeout.count() < 1)
            throw UsageError("gateway config values must all be positive");
    }
};

/// Transport: turns one request into one raw completion. Implementations:
/// HttpBackend, MockBackend, GroundTruthBackend, or any test double.
class Backend {
public:
    virtual ~Backend() = default;
    virtual BackendResponse complete(const BackendRequest& request) = 0;
};

/// Token-bucket limiter. The clock is injectable so tests can drive time.
class RateLimiter {
public:
    using Clock = std::function<std::chrono::steady_clock::time_point()>;
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    explicit RateLimiter(int per_minute, Clock clock = nullptr, Sleeper sleeper = nullptr);

    /// Blocks until a token is available, then consumes it.
    void acquire();

private:
    double capacity_;
    double tokens_;
    std::chrono::steady_clock::time_point last_refill_;
    Clock clock_;
    Sleeper sleeper_;
    std::mutex mutex_;
};

/// Validated outcome of one logical call: parse + schema checks passed.
/// `attempts_raw` retains every attempt's raw text, in order, for the trace;
/// `usage` sums token accounting across retries.
struct GatewayResult {
    nlohmann::json parsed;
    std::string raw_text;
    std::vector<std::string> attempts_raw;
    std::vector<bool> attempts_cached;
    int attempts = 1;
    TokenUsage usage;
};

/// Returns an error description when the parsed value is unacceptable.
using Validator = std::function<std::optional<std::string>(const nlohmann::json&)>;

/// Shared front door for every grader: rate limiting, bounded concurrency,
/// optional response cache, and the validate-or-repair retry loop.
class Gateway {
public:
    Gateway(std::shared_ptr<Backend> backend, GatewayConfig config);

    /// Runs the request, extracts the first JSON object from the reply and
    /// validates it. On failure the request is retried with the validator
    /// error appended to the user message, up to config.max_retries attempts
    /// total, then ExhaustedRetriesError carrying all raw attempts.
    GatewayResult call_with_repair(const BackendRequest& request, const Validator& validate);

    const GatewayConfig& config() const { return config_; }

    /// Peak number of simultaneously in-flight backend calls, for tests.
    int peak_in_flight() const { return peak_in_flight_; }

private:
    class ConcurrencyGuard;

    BackendResponse invoke(BackendRequest request);
    std::optional<BackendResponse> cache_lookup(const BackendRequest& request) const;
    void cache_store(const BackendRequest& request, const BackendResponse& response) const;
    std::string cache_key(const BackendRequest& request) const;

    std::shared_ptr<Backend> backend_;
    GatewayConfig config_;
    RateLimiter limiter_;
    std::mutex slot_mutex_;
    std::condition_variable slot_cv_;
    int in_flight_ = 0;
    int peak_in_flight_ = 0;
};

/// "Appended validator error" block; the original messages are never edited.
std::string repair_suffix(const std::string& validator_error);

}  // namespace gradekit
