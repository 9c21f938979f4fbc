#include "adept/scripted_backend.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "adept/trace.hpp"

namespace adept {

using nlohmann::json;

ScriptedBackend::ScriptedBackend(Script script, bool strict_prompt_hashes)
    : strict_prompt_hashes_(strict_prompt_hashes) {
    for (auto& entry : script.entries) {
        queues_[{entry.persona_name, entry.phase}].entries.push_back(std::move(entry));
    }
}

CompletionResult ScriptedBackend::complete(const CompletionRequest& request) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_pair(request.persona_name, request.phase);
    auto it = queues_.find(key);
    if (it == queues_.end() || it->second.next >= it->second.entries.size()) {
        throw BackendError(BackendErrorKind::script_exhausted,
                           "no scripted response remaining for (" + request.persona_name + ", " +
                               to_string(request.phase) + ")");
    }
    const ScriptEntry& entry = it->second.entries[it->second.next];
    if (strict_prompt_hashes_ && entry.prompt_sha256) {
        const std::string actual = prompt_hash(request.messages);
        if (actual != *entry.prompt_sha256) {
            throw BackendError(BackendErrorKind::script_mismatch,
                               "prompt hash for (" + request.persona_name + ", " +
                                   to_string(request.phase) + ") is " + actual +
                                   ", recorded " + *entry.prompt_sha256);
        }
    }
    ++it->second.next;

    CompletionResult result;
    result.text = entry.text;
    result.finish_reason = FinishReason::stop;
    return result;
}

std::size_t ScriptedBackend::remaining() const {
    std::lock_guard<std::mutex> lock(mutex_);
    std::size_t count = 0;
    for (const auto& [key, queue] : queues_) {
        count += queue.entries.size() - queue.next;
    }
    return count;
}

namespace {

Script parse_script(const json& root, const std::string& source) {
    if (!root.is_object()) throw ParseError(source, 0, "script must be a JSON object");
    const auto version = root.value("format_version", "");
    if (version != kScriptFormatVersion) {
        throw ParseError(source, 0, "expected format_version '" +
                                        std::string(kScriptFormatVersion) + "', found '" +
                                        version + "'");
    }
    Script script;
    if (!root.contains("personas") || !root["personas"].is_array()) {
        throw ParseError(source, 0, "missing 'personas' array");
    }
    for (const auto& name : root["personas"]) {
        script.personas.push_back(name.get<std::string>());
    }
    if (!root.contains("entries") || !root["entries"].is_array()) {
        throw ParseError(source, 0, "missing 'entries' array");
    }
    for (const auto& item : root["entries"]) {
        ScriptEntry entry;
        entry.persona_name = item.at("persona").get<std::string>();
        entry.phase = phase_from_string(item.at("phase").get<std::string>());
        entry.text = item.at("text").get<std::string>();
        if (item.contains("prompt_sha256")) {
            entry.prompt_sha256 = item["prompt_sha256"].get<std::string>();
        }
        script.entries.push_back(std::move(entry));
    }

    // Completeness: each listed persona must be able to speak in every
    // dialogue phase and cast a ballot.
    for (const auto& persona : script.personas) {
        for (Phase phase : {Phase::opening, Phase::rebuttal, Phase::ballot}) {
            const bool found = std::any_of(
                script.entries.begin(), script.entries.end(), [&](const ScriptEntry& e) {
                    return e.persona_name == persona && e.phase == phase;
                });
            if (!found) {
                throw MissingKey("(" + persona + ", " + to_string(phase) + ")");
            }
        }
    }
    return script;
}

} // namespace

Script script_from_json(const std::string& json_text, const std::string& source_label) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(source_label, 0, e.what());
    }
    return parse_script(root, source_label);
}

Script load_script(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw FileMissing(path.string());
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot be read");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return script_from_json(buffer.str(), path.string());
}

std::string script_to_json(const Script& script) {
    json root;
    root["format_version"] = kScriptFormatVersion;
    root["personas"] = script.personas;
    json entries = json::array();
    for (const auto& entry : script.entries) {
        json item;
        item["persona"] = entry.persona_name;
        item["phase"] = to_string(entry.phase);
        item["text"] = entry.text;
        if (entry.prompt_sha256) item["prompt_sha256"] = *entry.prompt_sha256;
        entries.push_back(std::move(item));
    }
    root["entries"] = std::move(entries);
    return root.dump(2);
}

Script script_from_trace(const DebateTrace& trace) {
    Script script;
    for (const auto& persona : trace.personas) script.personas.push_back(persona.name);

    for (const auto& utterance : trace.utterances) {
        ScriptEntry entry;
        entry.persona_name = utterance.persona_name;
        entry.phase = utterance.phase;
        entry.text = utterance.response;
        entry.prompt_sha256 = prompt_hash(utterance.prompt.messages);
        script.entries.push_back(std::move(entry));
    }
    for (const auto& ballot : trace.ballots) {
        for (const auto& attempt : ballot.attempt_log) {
            ScriptEntry entry;
            entry.persona_name = ballot.persona_name;
            entry.phase = Phase::ballot;
            entry.text = attempt.response;
            entry.prompt_sha256 = prompt_hash(attempt.prompt.messages);
            script.entries.push_back(std::move(entry));
        }
    }
    if (trace.summary_prompt && trace.summary_text) {
        ScriptEntry entry;
        entry.persona_name = kSummariserName;
        entry.phase = Phase::summary;
        entry.text = *trace.summary_text;
        entry.prompt_sha256 = prompt_hash(trace.summary_prompt->messages);
        script.entries.push_back(std::move(entry));
    }
    return script;
}

} // namespace adept
