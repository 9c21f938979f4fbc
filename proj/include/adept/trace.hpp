#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adept/domain.hpp"
#include "adept/prompt.hpp"

namespace adept {

/// Trace format identifier written to and required from every trace file.
inline constexpr const char* kTraceFormatVersion = "adept-trace/1";

/// Timestamps are carried as RFC 3339 UTC strings ("2025-05-27T12:00:00.000Z")
/// so round trips are byte-exact; hashing replaces them with a sentinel.
using Timestamp = std::string;

Timestamp now_utc_iso8601();

struct TokenUsage {
    int prompt = 0;
    int completion = 0;

    bool operator==(const TokenUsage&) const = default;
};

struct Utterance {
    int seq = 0;
    Phase phase = Phase::opening;
    std::string persona_name;
    PromptBundle prompt;
    std::string response;
    Timestamp started_at;
    Timestamp ended_at;
    std::optional<TokenUsage> token_usage;

    bool operator==(const Utterance&) const = default;
};

enum class BallotStatus { valid, abstained_no_tag, abstained_invalid_option };

std::string to_string(BallotStatus status);
BallotStatus ballot_status_from_string(const std::string& text);

/// One backend exchange of the ballot phase. A ballot carries one attempt,
/// or two when the first response had no usable vote tag.
struct BallotAttempt {
    PromptBundle prompt;
    std::string response;
    Timestamp started_at;
    Timestamp ended_at;
    std::optional<TokenUsage> token_usage;

    bool operator==(const BallotAttempt&) const = default;
};

struct Ballot {
    std::string persona_name;
    std::vector<BallotAttempt> attempt_log; // never empty
    std::optional<int> parsed_option;
    std::string justification; // final response with the vote tag excised
    BallotStatus status = BallotStatus::abstained_no_tag;

    int attempts() const { return static_cast<int>(attempt_log.size()); }
    const PromptBundle& prompt() const { return attempt_log.back().prompt; }
    const std::string& raw_response() const { return attempt_log.back().response; }

    bool operator==(const Ballot&) const = default;
};

/// Per-option vote counts over one panel's ballots. Majority is defined over
/// valid ballots: strictly more than half of them.
struct Tally {
    std::map<int, int> counts; // option id -> votes, every option present
    int valid_count = 0;
    int abstentions = 0;
    std::optional<int> majority_option;
    std::set<int> plurality_options;

    bool operator==(const Tally&) const = default;
};

enum class TraceStatus { complete, aborted };

std::string to_string(TraceStatus status);
TraceStatus trace_status_from_string(const std::string& text);

/// The complete auditable record of one debate: every prompt, response,
/// ballot attempt, the tally and the executive summary.
struct DebateTrace {
    std::string format_version = kTraceFormatVersion;
    TraceStatus status = TraceStatus::complete;
    std::string abort_reason; // empty unless aborted
    ScenarioSpec scenario;
    std::vector<PersonaSpec> personas;
    ModelConfig model_config; // credential-free by construction
    std::string template_version;
    std::vector<Utterance> utterances;
    std::vector<Ballot> ballots;
    std::optional<Tally> tally;
    std::optional<PromptBundle> summary_prompt;
    std::optional<std::string> summary_text;
    std::vector<std::string> warnings;
    Timestamp created_at;

    bool operator==(const DebateTrace&) const = default;

    bool is_complete() const { return status == TraceStatus::complete; }
};

/// Throws IncompleteTrace if any structural invariant of a completed trace is
/// violated (cardinalities, one utterance per persona per phase, tally and
/// summary present).
void validate_complete_trace(const DebateTrace& trace);

} // namespace adept
