#include "adept/http_backend.hpp"

#include <random>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "adept/text.hpp"

namespace adept {

using nlohmann::json;

namespace {

constexpr int kBackoffBaseMs = 1000;

double random_uniform() {
    thread_local std::mt19937_64 rng{std::random_device{}()};
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

/// Splits "http(s)://host[:port]/path" into client base and request path.
std::pair<std::string, std::string> split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw BackendError(BackendErrorKind::transport, "endpoint_url has no scheme: " + url);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

bool looks_like_context_overflow(const std::string& body) {
    const std::string lowered = to_lower(body);
    return contains(lowered, "context_length_exceeded") ||
           contains(lowered, "context length") || contains(lowered, "maximum context");
}

BackendError http_status_error(int status, const std::string& body) {
    if (status == 401 || status == 403) {
        return {BackendErrorKind::auth, "HTTP " + std::to_string(status)};
    }
    if (status == 429) {
        return {BackendErrorKind::rate_limited, "HTTP 429"};
    }
    if (status >= 500) {
        return {BackendErrorKind::transport, "HTTP " + std::to_string(status)};
    }
    if (looks_like_context_overflow(body)) {
        return {BackendErrorKind::context_overflow, "HTTP " + std::to_string(status) + ": " + body};
    }
    return {BackendErrorKind::malformed_response,
            "unexpected HTTP " + std::to_string(status) + ": " + body};
}

} // namespace

HttpBackend::HttpBackend(Options options) : options_(std::move(options)) {
    if (!options_.sleep) {
        options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    }
    if (!options_.uniform_draw) {
        options_.uniform_draw = random_uniform;
    }
    std::tie(base_url_, path_) = split_url(options_.endpoint_url);
}

CompletionResult HttpBackend::attempt_once(const CompletionRequest& request) {
    json body;
    body["model"] = request.model_id;
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_output_tokens;
    json messages = json::array();
    for (const auto& message : request.messages) {
        messages.push_back({{"role", to_string(message.role)}, {"content", message.content}});
    }
    body["messages"] = std::move(messages);

    httplib::Client client(base_url_);
    client.set_connection_timeout(options_.request_timeout_s, 0);
    client.set_read_timeout(options_.request_timeout_s, 0);
    client.set_write_timeout(options_.request_timeout_s, 0);

    httplib::Headers headers;
    if (!options_.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + options_.api_key);
    }

    auto result = client.Post(path_, headers, body.dump(), "application/json");
    if (!result) {
        const auto err = result.error();
        if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
            err == httplib::Error::Write) {
            throw BackendError(BackendErrorKind::timeout, httplib::to_string(err));
        }
        throw BackendError(BackendErrorKind::transport, httplib::to_string(err));
    }
    if (result->status < 200 || result->status >= 300) {
        throw http_status_error(result->status, result->body);
    }

    json parsed;
    try {
        parsed = json::parse(result->body);
    } catch (const json::parse_error& e) {
        throw BackendError(BackendErrorKind::malformed_response,
                           std::string("response body is not JSON: ") + e.what());
    }

    CompletionResult completion;
    try {
        const auto& choice = parsed.at("choices").at(0);
        completion.text = choice.at("message").at("content").get<std::string>();
        completion.finish_reason =
            finish_reason_from_string(choice.value("finish_reason", "other"));
    } catch (const json::exception& e) {
        throw BackendError(BackendErrorKind::malformed_response,
                           std::string("response lacks choices[0].message.content: ") + e.what());
    }
    if (parsed.contains("usage") && parsed["usage"].is_object()) {
        TokenUsage usage;
        usage.prompt = parsed["usage"].value("prompt_tokens", 0);
        usage.completion = parsed["usage"].value("completion_tokens", 0);
        completion.token_usage = usage;
    }
    if (completion.finish_reason == FinishReason::stop && completion.text.empty()) {
        throw BackendError(BackendErrorKind::malformed_response,
                           "empty completion text with finish_reason=stop");
    }
    return completion;
}

CompletionResult HttpBackend::complete(const CompletionRequest& request) {
    const int max_attempts = 1 + options_.max_retries;
    for (int attempt = 0;; ++attempt) {
        try {
            return attempt_once(request);
        } catch (const BackendError& error) {
            if (!error.retryable() || attempt + 1 >= max_attempts) {
                throw;
            }
            // Full jitter: uniform draw over a window that doubles per attempt.
            const double window_ms = kBackoffBaseMs * static_cast<double>(1u << attempt);
            const auto delay =
                std::chrono::milliseconds(static_cast<long>(options_.uniform_draw() * window_ms));
            options_.sleep(delay);
        }
    }
}

} // namespace adept
