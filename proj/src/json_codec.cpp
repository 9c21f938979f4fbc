#include "adept/json_codec.hpp"

#include <algorithm>
#include <set>

#include "adept/errors.hpp"

namespace adept::codec {

using nlohmann::json;

namespace {

constexpr const char* kTimestampSentinel = "1970-01-01T00:00:00.000Z";

json optional_list(const std::optional<std::vector<std::string>>& value) {
    if (!value) return nullptr;
    return *value;
}

std::optional<std::vector<std::string>> list_or_null(const json& node) {
    if (node.is_null()) return std::nullopt;
    return node.get<std::vector<std::string>>();
}

[[noreturn]] void fail(const std::string& detail) {
    throw ParseError("<trace>", 0, detail);
}

const json& field(const json& node, const char* key) {
    const auto it = node.find(key);
    if (it == node.end()) fail(std::string("missing key '") + key + "'");
    return *it;
}

void require_keys(const json& node, std::initializer_list<const char*> allowed) {
    if (!node.is_object()) fail("expected a JSON object");
    for (const auto& [key, value] : node.items()) {
        (void)value;
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* k) { return key == k; });
        if (!known) fail("unknown key '" + key + "' (strict mode)");
    }
}

} // namespace

json to_json(const PolicyOption& option) {
    return {{"id", option.id}, {"label", option.label}, {"description", option.description}};
}

json to_json(const ScenarioSpec& scenario) {
    json options = json::array();
    for (const auto& option : scenario.options) options.push_back(to_json(option));
    return {{"title", scenario.title},
            {"narrative", scenario.narrative},
            {"options", std::move(options)}};
}

json to_json(const PersonaSpec& persona) {
    return {{"name", persona.name},
            {"principle", persona.principle},
            {"approach", persona.approach},
            {"core_questions", persona.core_questions},
            {"decision_criteria", persona.decision_criteria},
            {"deliberation_style",
             persona.deliberation_style ? json(*persona.deliberation_style) : json(nullptr)},
            {"forbidden_moves", persona.forbidden_moves},
            {"strengths", optional_list(persona.strengths)},
            {"challenges", optional_list(persona.challenges)},
            {"citations", optional_list(persona.citations)}};
}

json to_json(const ModelConfig& config) {
    return {{"backend_kind", to_string(config.backend_kind)},
            {"model_id", config.model_id},
            {"temperature", config.temperature},
            {"max_output_tokens", config.max_output_tokens},
            {"endpoint_url", config.endpoint_url},
            {"request_timeout", config.request_timeout_s},
            {"max_retries", config.max_retries},
            {"parallel_independent_calls", config.parallel_independent_calls}};
}

json to_json(const ChatMessage& message) {
    return {{"role", to_string(message.role)}, {"content", message.content}};
}

json to_json(const PromptBundle& bundle) {
    json messages = json::array();
    for (const auto& message : bundle.messages) messages.push_back(to_json(message));
    return {{"persona_name", bundle.persona_name},
            {"phase", to_string(bundle.phase)},
            {"messages", std::move(messages)},
            {"template_version", bundle.template_version}};
}

json to_json(const TokenUsage& usage) {
    return {{"prompt", usage.prompt}, {"completion", usage.completion}};
}

json to_json(const Utterance& utterance) {
    return {{"seq", utterance.seq},
            {"phase", to_string(utterance.phase)},
            {"persona_name", utterance.persona_name},
            {"prompt", to_json(utterance.prompt)},
            {"response", utterance.response},
            {"started_at", utterance.started_at},
            {"ended_at", utterance.ended_at},
            {"token_usage",
             utterance.token_usage ? to_json(*utterance.token_usage) : json(nullptr)}};
}

json to_json(const BallotAttempt& attempt) {
    return {{"prompt", to_json(attempt.prompt)},
            {"response", attempt.response},
            {"started_at", attempt.started_at},
            {"ended_at", attempt.ended_at},
            {"token_usage", attempt.token_usage ? to_json(*attempt.token_usage) : json(nullptr)}};
}

json to_json(const Ballot& ballot) {
    json attempts = json::array();
    for (const auto& attempt : ballot.attempt_log) attempts.push_back(to_json(attempt));
    return {{"persona_name", ballot.persona_name},
            {"attempt_log", std::move(attempts)},
            {"parsed_option", ballot.parsed_option ? json(*ballot.parsed_option) : json(nullptr)},
            {"justification", ballot.justification},
            {"status", to_string(ballot.status)}};
}

json to_json(const Tally& tally) {
    json counts = json::object();
    for (const auto& [option_id, votes] : tally.counts) {
        counts[std::to_string(option_id)] = votes;
    }
    return {{"counts", std::move(counts)},
            {"valid_count", tally.valid_count},
            {"abstentions", tally.abstentions},
            {"majority_option",
             tally.majority_option ? json(*tally.majority_option) : json(nullptr)},
            {"plurality_options", tally.plurality_options}};
}

json to_json(const DebateTrace& trace) {
    json utterances = json::array();
    for (const auto& utterance : trace.utterances) utterances.push_back(to_json(utterance));
    json ballots = json::array();
    for (const auto& ballot : trace.ballots) ballots.push_back(to_json(ballot));
    json personas = json::array();
    for (const auto& persona : trace.personas) personas.push_back(to_json(persona));

    return {{"format_version", trace.format_version},
            {"status", to_string(trace.status)},
            {"abort_reason", trace.abort_reason},
            {"scenario", to_json(trace.scenario)},
            {"personas", std::move(personas)},
            {"model_config", to_json(trace.model_config)},
            {"template_version", trace.template_version},
            {"utterances", std::move(utterances)},
            {"ballots", std::move(ballots)},
            {"tally", trace.tally ? to_json(*trace.tally) : json(nullptr)},
            {"summary_prompt", trace.summary_prompt ? to_json(*trace.summary_prompt) : json(nullptr)},
            {"summary_text", trace.summary_text ? json(*trace.summary_text) : json(nullptr)},
            {"warnings", trace.warnings},
            {"created_at", trace.created_at}};
}

PolicyOption option_from_json(const json& node) {
    require_keys(node, {"id", "label", "description"});

    PolicyOption option;
    option.id = field(node, "id").get<int>();
    option.label = field(node, "label").get<std::string>();
    option.description = field(node, "description").get<std::string>();
    return option;
}

ScenarioSpec scenario_from_json(const json& node) {
    require_keys(node, {"title", "narrative", "options"});

    ScenarioSpec scenario;
    scenario.title = field(node, "title").get<std::string>();
    scenario.narrative = field(node, "narrative").get<std::string>();
    for (const auto& item : field(node, "options")) {
        scenario.options.push_back(option_from_json(item));
    }
    return scenario;
}

PersonaSpec persona_from_json(const json& node) {
    require_keys(node, {"name", "principle", "approach", "core_questions",
                        "decision_criteria", "deliberation_style", "forbidden_moves",
                        "strengths", "challenges", "citations"});

    PersonaSpec persona;
    persona.name = field(node, "name").get<std::string>();
    persona.principle = field(node, "principle").get<std::string>();
    persona.approach = field(node, "approach").get<std::vector<std::string>>();
    persona.core_questions = field(node, "core_questions").get<std::vector<std::string>>();
    persona.decision_criteria = field(node, "decision_criteria").get<std::vector<std::string>>();
    if (!field(node, "deliberation_style").is_null()) {
        persona.deliberation_style = node["deliberation_style"].get<std::string>();
    }
    persona.forbidden_moves = field(node, "forbidden_moves").get<std::vector<std::string>>();
    persona.strengths = list_or_null(field(node, "strengths"));
    persona.challenges = list_or_null(field(node, "challenges"));
    persona.citations = list_or_null(field(node, "citations"));
    return persona;
}

ModelConfig model_config_from_json(const json& node) {
    require_keys(node, {"backend_kind", "model_id", "temperature", "max_output_tokens",
                        "endpoint_url", "request_timeout", "max_retries",
                        "parallel_independent_calls"});

    ModelConfig config;
    const auto kind = field(node, "backend_kind").get<std::string>();
    if (kind == "live") {
        config.backend_kind = BackendKind::live;
    } else if (kind == "scripted") {
        config.backend_kind = BackendKind::scripted;
    } else {
        fail("unknown backend_kind '" + kind + "'");
    }
    config.model_id = field(node, "model_id").get<std::string>();
    config.temperature = field(node, "temperature").get<double>();
    config.max_output_tokens = field(node, "max_output_tokens").get<int>();
    config.endpoint_url = field(node, "endpoint_url").get<std::string>();
    config.request_timeout_s = field(node, "request_timeout").get<int>();
    config.max_retries = field(node, "max_retries").get<int>();
    config.parallel_independent_calls = field(node, "parallel_independent_calls").get<bool>();
    return config;
}

ChatMessage chat_message_from_json(const json& node) {
    require_keys(node, {"role", "content"});

    ChatMessage message;
    message.role = role_from_string(field(node, "role").get<std::string>());
    message.content = field(node, "content").get<std::string>();
    return message;
}

PromptBundle prompt_bundle_from_json(const json& node) {
    require_keys(node, {"persona_name", "phase", "messages", "template_version"});

    PromptBundle bundle;
    bundle.persona_name = field(node, "persona_name").get<std::string>();
    bundle.phase = phase_from_string(field(node, "phase").get<std::string>());
    for (const auto& item : field(node, "messages")) {
        bundle.messages.push_back(chat_message_from_json(item));
    }
    bundle.template_version = field(node, "template_version").get<std::string>();
    return bundle;
}

TokenUsage token_usage_from_json(const json& node) {
    require_keys(node, {"prompt", "completion"});

    TokenUsage usage;
    usage.prompt = field(node, "prompt").get<int>();
    usage.completion = field(node, "completion").get<int>();
    return usage;
}

Utterance utterance_from_json(const json& node) {
    require_keys(node, {"seq", "phase", "persona_name", "prompt", "response",
                        "started_at", "ended_at", "token_usage"});

    Utterance utterance;
    utterance.seq = field(node, "seq").get<int>();
    utterance.phase = phase_from_string(field(node, "phase").get<std::string>());
    utterance.persona_name = field(node, "persona_name").get<std::string>();
    utterance.prompt = prompt_bundle_from_json(field(node, "prompt"));
    utterance.response = field(node, "response").get<std::string>();
    utterance.started_at = field(node, "started_at").get<std::string>();
    utterance.ended_at = field(node, "ended_at").get<std::string>();
    if (!field(node, "token_usage").is_null()) {
        utterance.token_usage = token_usage_from_json(node["token_usage"]);
    }
    return utterance;
}

BallotAttempt ballot_attempt_from_json(const json& node) {
    require_keys(node, {"prompt", "response", "started_at", "ended_at", "token_usage"});

    BallotAttempt attempt;
    attempt.prompt = prompt_bundle_from_json(field(node, "prompt"));
    attempt.response = field(node, "response").get<std::string>();
    attempt.started_at = field(node, "started_at").get<std::string>();
    attempt.ended_at = field(node, "ended_at").get<std::string>();
    if (!field(node, "token_usage").is_null()) {
        attempt.token_usage = token_usage_from_json(node["token_usage"]);
    }
    return attempt;
}

Ballot ballot_from_json(const json& node) {
    require_keys(node, {"persona_name", "attempt_log", "parsed_option", "justification",
                        "status"});

    Ballot ballot;
    ballot.persona_name = field(node, "persona_name").get<std::string>();
    for (const auto& item : field(node, "attempt_log")) {
        ballot.attempt_log.push_back(ballot_attempt_from_json(item));
    }
    if (ballot.attempt_log.empty()) fail("ballot has an empty attempt_log");
    if (!field(node, "parsed_option").is_null()) {
        ballot.parsed_option = node["parsed_option"].get<int>();
    }
    ballot.justification = field(node, "justification").get<std::string>();
    ballot.status = ballot_status_from_string(field(node, "status").get<std::string>());
    if ((ballot.status == BallotStatus::valid) != ballot.parsed_option.has_value()) {
        fail("ballot status and parsed_option disagree for " + ballot.persona_name);
    }
    return ballot;
}

Tally tally_from_json(const json& node) {
    require_keys(node, {"counts", "valid_count", "abstentions", "majority_option",
                        "plurality_options"});

    Tally tally;
    for (const auto& [key, value] : field(node, "counts").items()) {
        try {
            tally.counts[std::stoi(key)] = value.get<int>();
        } catch (const std::exception&) {
            fail("tally counts key '" + key + "' is not an option id");
        }
    }
    tally.valid_count = field(node, "valid_count").get<int>();
    tally.abstentions = field(node, "abstentions").get<int>();
    if (!field(node, "majority_option").is_null()) {
        tally.majority_option = node["majority_option"].get<int>();
    }
    for (const auto& item : field(node, "plurality_options")) {
        tally.plurality_options.insert(item.get<int>());
    }
    return tally;
}

DebateTrace trace_from_json(const json& node) {
    static const std::set<std::string> kKnown = {
        "format_version", "status",     "abort_reason",   "scenario",
        "personas",       "model_config", "template_version", "utterances",
        "ballots",        "tally",      "summary_prompt", "summary_text",
        "warnings",       "created_at", "canonical_hash"};
    for (const auto& [key, value] : node.items()) {
        (void)value;
        if (!kKnown.count(key)) fail("unknown key '" + key + "' (strict mode)");
    }

    DebateTrace trace;
    trace.format_version = field(node, "format_version").get<std::string>();
    trace.status = trace_status_from_string(field(node, "status").get<std::string>());
    trace.abort_reason = field(node, "abort_reason").get<std::string>();
    trace.scenario = scenario_from_json(field(node, "scenario"));
    for (const auto& item : field(node, "personas")) {
        trace.personas.push_back(persona_from_json(item));
    }
    trace.model_config = model_config_from_json(field(node, "model_config"));
    trace.template_version = field(node, "template_version").get<std::string>();
    for (const auto& item : field(node, "utterances")) {
        trace.utterances.push_back(utterance_from_json(item));
    }
    for (const auto& item : field(node, "ballots")) {
        trace.ballots.push_back(ballot_from_json(item));
    }
    if (!field(node, "tally").is_null()) trace.tally = tally_from_json(node["tally"]);
    if (!field(node, "summary_prompt").is_null()) {
        trace.summary_prompt = prompt_bundle_from_json(node["summary_prompt"]);
    }
    if (!field(node, "summary_text").is_null()) {
        trace.summary_text = node["summary_text"].get<std::string>();
    }
    trace.warnings = field(node, "warnings").get<std::vector<std::string>>();
    trace.created_at = field(node, "created_at").get<std::string>();
    return trace;
}

void scrub_volatile(json& node) {
    if (node.is_object()) {
        for (auto& [key, value] : node.items()) {
            if (key == "started_at" || key == "ended_at" || key == "created_at") {
                value = kTimestampSentinel;
            } else if (key == "token_usage") {
                value = nullptr;
            } else {
                scrub_volatile(value);
            }
        }
    } else if (node.is_array()) {
        for (auto& item : node) scrub_volatile(item);
    }
}

} // namespace adept::codec
