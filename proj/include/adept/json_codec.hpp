#pragma once

#include <json.hpp>

#include "adept/domain.hpp"
#include "adept/prompt.hpp"
#include "adept/trace.hpp"

namespace adept::codec {

/// JSON shapes for every trace constituent. Objects serialize through
/// nlohmann's default (key-sorted) representation, which is what makes the
/// canonical dump stable under field-insertion order.

nlohmann::json to_json(const PolicyOption& option);
nlohmann::json to_json(const ScenarioSpec& scenario);
nlohmann::json to_json(const PersonaSpec& persona);
nlohmann::json to_json(const ModelConfig& config);
nlohmann::json to_json(const ChatMessage& message);
nlohmann::json to_json(const PromptBundle& bundle);
nlohmann::json to_json(const TokenUsage& usage);
nlohmann::json to_json(const Utterance& utterance);
nlohmann::json to_json(const BallotAttempt& attempt);
nlohmann::json to_json(const Ballot& ballot);
nlohmann::json to_json(const Tally& tally);
nlohmann::json to_json(const DebateTrace& trace); // body without canonical_hash

PolicyOption option_from_json(const nlohmann::json& node);
ScenarioSpec scenario_from_json(const nlohmann::json& node);
PersonaSpec persona_from_json(const nlohmann::json& node);
ModelConfig model_config_from_json(const nlohmann::json& node);
ChatMessage chat_message_from_json(const nlohmann::json& node);
PromptBundle prompt_bundle_from_json(const nlohmann::json& node);
TokenUsage token_usage_from_json(const nlohmann::json& node);
Utterance utterance_from_json(const nlohmann::json& node);
BallotAttempt ballot_attempt_from_json(const nlohmann::json& node);
Ballot ballot_from_json(const nlohmann::json& node);
Tally tally_from_json(const nlohmann::json& node);
DebateTrace trace_from_json(const nlohmann::json& node);

/// Replaces every timestamp with the epoch sentinel and every token_usage
/// with null, recursively. Hashing runs over the scrubbed document.
void scrub_volatile(nlohmann::json& node);

} // namespace adept::codec
