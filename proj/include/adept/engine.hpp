#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adept/backend.hpp"
#include "adept/trace.hpp"

namespace adept {

/// Result of scanning a ballot response for a vote tag. Grammar:
/// case-insensitive "<vote>", optional ASCII whitespace, decimal integer,
/// optional ASCII whitespace, case-insensitive "</vote>". The first
/// well-formed tag wins; parse failures map to abstention statuses and
/// never throw.
struct VoteParse {
    enum class Status { valid, no_vote_found, invalid_option };

    Status status = Status::no_vote_found;
    std::optional<int> option;
    bool duplicate_tags = false;     // a second well-formed tag exists
    std::size_t tag_begin = 0;       // byte span of the first well-formed tag
    std::size_t tag_end = 0;

    bool operator==(const VoteParse&) const = default;
};

VoteParse parse_vote(const std::string& text, const std::vector<PolicyOption>& options);

/// The response with the matched vote tag excised and the whitespace around
/// the excision collapsed, trimmed. Without a tag, the trimmed raw text.
std::string extract_justification(const std::string& raw_response, const VoteParse& parse);

/// Runs one dialogue phase. Utterances come back in canonical panel order
/// regardless of completion order; calls run concurrently only when the
/// config allows it. Throws IncompletePhase before any backend call if the
/// prior phase is incomplete. On a backend failure, exchanges that did
/// complete are appended to `salvage_sink` (when given) before the error
/// propagates, so aborted runs keep their evidence.
std::vector<Utterance> run_dialogue_phase(Phase phase, const ScenarioSpec& scenario,
                                          const std::vector<PersonaSpec>& panel,
                                          const std::vector<Utterance>& prior, Backend& backend,
                                          const ModelConfig& config, int seq_base = 0,
                                          std::vector<std::string>* warnings = nullptr,
                                          std::vector<Utterance>* salvage_sink = nullptr);

struct CollectedBallots {
    std::vector<Ballot> ballots;
    std::vector<std::string> warnings;
};

/// Secret ballot: one ballot per persona, one corrective re-prompt after an
/// unparseable vote, abstention after that. No prompt ever contains another
/// persona's ballot content.
CollectedBallots collect_ballots(const ScenarioSpec& scenario,
                                 const std::vector<PersonaSpec>& panel,
                                 const std::vector<Utterance>& dialogue, Backend& backend,
                                 const ModelConfig& config,
                                 std::vector<Ballot>* salvage_sink = nullptr);

/// Raised when a backend failure aborts a run. Carries the partial trace
/// (status=aborted) so callers can persist the evidence.
class DebateAborted : public Error {
public:
    DebateAborted(BackendErrorKind kind, const std::string& detail, DebateTrace partial)
        : Error("debate aborted: " + detail), kind_(kind), partial_(std::move(partial)) {}

    BackendErrorKind kind() const { return kind_; }
    const DebateTrace& partial_trace() const { return partial_; }

private:
    BackendErrorKind kind_;
    DebateTrace partial_;
};

/// Executes the full protocol: opening statements, rebuttals, secret ballot,
/// tally, executive summary. Phases run strictly in order.
DebateTrace run_debate(const ScenarioSpec& scenario, const std::vector<PersonaSpec>& panel,
                       const ModelConfig& config, Backend& backend);

} // namespace adept
