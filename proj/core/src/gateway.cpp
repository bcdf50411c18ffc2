#include "gradekit/gateway.hpp"

#include <fstream>
#include <thread>

#include "gradekit/fingerprint.hpp"
#include "gradekit/json_extract.hpp"

namespace gradekit {

RateLimiter::RateLimiter(int per_minute, Clock clock, Sleeper sleeper)
    : capacity_(static_cast<double>(per_minute)),
      tokens_(static_cast<double>(per_minute)),
      clock_(clock ? std::move(clock) : [] { return std::chrono::steady_clock::now(); }),
      sleeper_(sleeper ? std::move(sleeper)
                       : [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {
    if (per_minute < 1) throw UsageError("rate_per_minute must be positive");
    last_refill_ = clock_();
}

void RateLimiter::acquire() {
    while (true) {
        {
            std::lock_guard lock(mutex_);
            const auto now = clock_();
            const double elapsed_s =
                std::chrono::duration<double>(now - last_refill_).count();
            last_refill_ = now;
            tokens_ = std::min(capacity_, tokens_ + elapsed_s * capacity_ / 60.0);
            if (tokens_ >= 1.0) {
                tokens_ -= 1.0;
                return;
            }
        }
        sleeper_(std::chrono::milliseconds(25));
    }
}

class Gateway::ConcurrencyGuard {
public:
    explicit ConcurrencyGuard(Gateway& g) : gateway_(g) {
        std::unique_lock lock(gateway_.slot_mutex_);
        gateway_.slot_cv_.wait(lock, [&] {
            return gateway_.in_flight_ < gateway_.config_.concurrency_limit;
        });
        ++gateway_.in_flight_;
        gateway_.peak_in_flight_ = std::max(gateway_.peak_in_flight_, gateway_.in_flight_);
    }
    ~ConcurrencyGuard() {
        {
            std::lock_guard lock(gateway_.slot_mutex_);
            --gateway_.in_flight_;
        }
        gateway_.slot_cv_.notify_one();
    }

private:
    Gateway& gateway_;
};

Gateway::Gateway(std::shared_ptr<Backend> backend, GatewayConfig config)
    : backend_(std::move(backend)), config_(config), limiter_(config.rate_per_minute) {
    config_.validate();
    if (!backend_) throw UsageError("gateway needs a backend");
}

std::string Gateway::cache_key(const BackendRequest& request) const {
    std::string material = request.model_id;
    material += '\x1f';
    material += request.system_message;
    material += '\x1f';
    material += request.user_message;
    material += '\x1f';
    material += std::to_string(request.temperature);
    return fingerprint_hex(material);
}

std::optional<BackendResponse> Gateway::cache_lookup(const BackendRequest& request) const {
    if (!config_.cache_dir) return std::nullopt;
    const auto path = *config_.cache_dir / (cache_key(request) + ".json");
    std::ifstream in(path);
    if (!in) return std::nullopt;
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded()) return std::nullopt;
    BackendResponse response;
    response.raw_text = doc.value("raw_text", "");
    response.usage.input_tokens = doc.value("input_tokens", 0);
    response.usage.output_tokens = doc.value("output_tokens", 0);
    response.cached = true;
    return response;
}

void Gateway::cache_store(const BackendRequest& request, const BackendResponse& response) const {
    if (!config_.cache_dir) return;
    std::filesystem::create_directories(*config_.cache_dir);
    nlohmann::json doc;
    doc["raw_text"] = response.raw_text;
    doc["input_tokens"] = response.usage.input_tokens;
    doc["output_tokens"] = response.usage.output_tokens;
    doc["model_id"] = request.model_id;
    std::ofstream out(*config_.cache_dir / (cache_key(request) + ".json"));
    out << doc.dump(2) << '\n';
}

BackendResponse Gateway::invoke(BackendRequest request) {
    if (auto cached = cache_lookup(request)) return *cached;
    limiter_.acquire();
    ConcurrencyGuard guard(*this);
    BackendResponse response = backend_->complete(request);
    cache_store(request, response);
    return response;
}

std::string repair_suffix(const std::string& validator_error) {
    return "\n\nYour previous output failed validation: " + validator_error +
           ". Return only corrected JSON.";
}

GatewayResult Gateway::call_with_repair(const BackendRequest& request, const Validator& validate) {
    GatewayResult result;
    BackendRequest attempt_request = request;

    for (int attempt = 1; attempt <= config_.max_retries; ++attempt) {
        attempt_request.attempt = attempt;
        const BackendResponse response = invoke(attempt_request);
        result.attempts_raw.push_back(response.raw_text);
        result.attempts_cached.push_back(response.cached);
        result.usage += response.usage;
        result.attempts = attempt;

        std::string failure;
        try {
            nlohmann::json parsed = extract_json(response.raw_text);
            if (auto error = validate(parsed)) {
                failure = *error;
            } else {
                result.parsed = std::move(parsed);
                result.raw_text = response.raw_text;
                return result;
            }
        } catch (const NoJsonFoundError& e) {
            failure = e.what();
        } catch (const UnbalancedBracesError& e) {
            failure = e.what();
        }

        // Retries append the structured error block; the original messages
        // are otherwise untouched.
        attempt_request.user_message = request.user_message + repair_suffix(failure);
    }

    throw ExhaustedRetriesError(
        "no valid response after " + std::to_string(config_.max_retries) + " attempts",
        std::move(result.attempts_raw));
}

}  // namespace gradekit
