#pragma once

#include <chrono>
#include <functional>
#include <string>

#include "adept/backend.hpp"

namespace adept {

/// Live HTTP client speaking the vendor-neutral chat-completions schema:
/// POST {endpoint_url} with {model, messages, temperature, max_tokens};
/// the response carries choices[0].message.content and finish_reason.
///
/// Retryable failures are retried up to max_retries times with exponential
/// backoff: full jitter over a window of 1s doubling per attempt. The backoff
/// parameters are fixed; only the retry count comes from configuration.
class HttpBackend : public Backend {
public:
    struct Options {
        std::string endpoint_url;
        std::string api_key; // sent as a bearer token when non-empty
        int request_timeout_s = 120;
        int max_retries = 3;
        // Test seams; production uses real sleep and a random uniform draw.
        std::function<void(std::chrono::milliseconds)> sleep;
        std::function<double()> uniform_draw; // in [0, 1)
    };

    explicit HttpBackend(Options options);

    CompletionResult complete(const CompletionRequest& request) override;

private:
    CompletionResult attempt_once(const CompletionRequest& request);

    Options options_;
    std::string base_url_;
    std::string path_;
};

} // namespace adept
