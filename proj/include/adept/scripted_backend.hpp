#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "adept/backend.hpp"

namespace adept {

/// Script format identifier for fixture files.
inline constexpr const char* kScriptFormatVersion = "adept-script/1";

struct ScriptEntry {
    std::string persona_name;
    Phase phase = Phase::opening;
    std::string text;
    std::optional<std::string> prompt_sha256; // set when derived from a trace

    bool operator==(const ScriptEntry&) const = default;
};

struct Script {
    std::vector<std::string> personas; // panel the script claims to cover
    std::vector<ScriptEntry> entries;

    bool operator==(const Script&) const = default;
};

/// Deterministic completion source. Serves recorded responses per
/// (persona, phase) key in recorded order; fully thread-safe.
class ScriptedBackend : public Backend {
public:
    explicit ScriptedBackend(Script script, bool strict_prompt_hashes = false);

    CompletionResult complete(const CompletionRequest& request) override;

    /// Responses not yet served, across all keys.
    std::size_t remaining() const;

private:
    struct Queue {
        std::vector<ScriptEntry> entries;
        std::size_t next = 0;
    };

    mutable std::mutex mutex_;
    std::map<std::pair<std::string, Phase>, Queue> queues_;
    bool strict_prompt_hashes_;
};

/// Parses an adept-script/1 fixture and checks completeness: every listed
/// persona needs at least one response for each of opening, rebuttal and
/// ballot. Throws ParseError / MissingKey.
Script load_script(const std::filesystem::path& path);
Script script_from_json(const std::string& json_text, const std::string& source_label);
std::string script_to_json(const Script& script);

struct DebateTrace;

/// Derives a replay script from a prior trace: every recorded response in
/// recorded order, prompt hashes included.
Script script_from_trace(const DebateTrace& trace);

} // namespace adept
