#include "adept/backend.hpp"

#include <json.hpp>

#include "adept/sha256.hpp"

namespace adept {

std::string to_string(FinishReason reason) {
    switch (reason) {
        case FinishReason::stop: return "stop";
        case FinishReason::length: return "length";
        case FinishReason::other: return "other";
    }
    return "other";
}

FinishReason finish_reason_from_string(const std::string& text) {
    if (text == "stop") return FinishReason::stop;
    if (text == "length") return FinishReason::length;
    return FinishReason::other;
}

std::string to_string(BackendErrorKind kind) {
    switch (kind) {
        case BackendErrorKind::transport: return "transport";
        case BackendErrorKind::timeout: return "timeout";
        case BackendErrorKind::auth: return "auth";
        case BackendErrorKind::rate_limited: return "rate_limited";
        case BackendErrorKind::malformed_response: return "malformed_response";
        case BackendErrorKind::context_overflow: return "context_overflow";
        case BackendErrorKind::script_exhausted: return "script_exhausted";
        case BackendErrorKind::script_mismatch: return "script_mismatch";
    }
    return "transport";
}

bool is_retryable(BackendErrorKind kind) {
    return kind == BackendErrorKind::transport || kind == BackendErrorKind::timeout ||
           kind == BackendErrorKind::rate_limited;
}

CompletionRequest make_request(const PromptBundle& bundle, const ModelConfig& config) {
    CompletionRequest request;
    request.messages = bundle.messages;
    request.model_id = config.model_id;
    request.temperature = config.temperature;
    request.max_output_tokens = config.max_output_tokens;
    request.persona_name = bundle.persona_name;
    request.phase = bundle.phase;
    return request;
}

std::string prompt_hash(const std::vector<ChatMessage>& messages) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& message : messages) {
        list.push_back({{"content", message.content}, {"role", to_string(message.role)}});
    }
    return sha256_hex(list.dump());
}

} // namespace adept
