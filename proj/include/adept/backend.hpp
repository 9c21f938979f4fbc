#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adept/domain.hpp"
#include "adept/errors.hpp"
#include "adept/prompt.hpp"
#include "adept/trace.hpp"

namespace adept {

enum class FinishReason { stop, length, other };

std::string to_string(FinishReason reason);
FinishReason finish_reason_from_string(const std::string& text);

struct CompletionRequest {
    std::vector<ChatMessage> messages; // non-empty, first role = system
    std::string model_id;
    double temperature = 0.7;
    int max_output_tokens = 1;
    // Routing metadata for the scripted backend; never sent on the wire.
    std::string persona_name;
    Phase phase = Phase::opening;

    bool operator==(const CompletionRequest&) const = default;
};

struct CompletionResult {
    std::string text;
    FinishReason finish_reason = FinishReason::stop;
    std::optional<TokenUsage> token_usage;

    bool operator==(const CompletionResult&) const = default;
};

enum class BackendErrorKind {
    transport,
    timeout,
    auth,
    rate_limited,
    malformed_response,
    context_overflow,
    script_exhausted,
    script_mismatch,
};

std::string to_string(BackendErrorKind kind);

/// Retryable iff the failure is transient: transport, timeout, rate_limited.
bool is_retryable(BackendErrorKind kind);

class BackendError : public Error {
public:
    BackendError(BackendErrorKind kind, const std::string& detail)
        : Error("backend error (" + to_string(kind) + "): " + detail),
          kind_(kind),
          detail_(detail) {}

    BackendErrorKind kind() const { return kind_; }
    const std::string& detail() const { return detail_; }
    bool retryable() const { return is_retryable(kind_); }

private:
    BackendErrorKind kind_;
    std::string detail_;
};

/// The single chat-completion contract. Implementations must be safe for
/// concurrent complete() calls; the engine is agnostic to which one it gets.
class Backend {
public:
    virtual ~Backend() = default;

    virtual CompletionResult complete(const CompletionRequest& request) = 0;
};

CompletionRequest make_request(const PromptBundle& bundle, const ModelConfig& config);

/// Hex digest of a prompt's messages, used for strict-mode script pinning.
std::string prompt_hash(const std::vector<ChatMessage>& messages);

} // namespace adept
