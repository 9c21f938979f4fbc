#pragma once

#include <string>
#include <vector>

#include "adept/domain.hpp"

namespace adept {

enum class Phase { opening, rebuttal, ballot, summary };

std::string to_string(Phase phase);
Phase phase_from_string(const std::string& text);

enum class Role { system, user };

std::string to_string(Role role);
Role role_from_string(const std::string& text);

struct ChatMessage {
    Role role = Role::user;
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

/// The exact message sequence sent to the backend for one persona and phase.
/// Logged verbatim into the trace so audits never depend on code inspection.
struct PromptBundle {
    std::string persona_name;
    Phase phase = Phase::opening;
    std::vector<ChatMessage> messages;
    std::string template_version;

    bool operator==(const PromptBundle&) const = default;
};

struct Utterance;
struct DebateTrace;

/// Version stamp recorded in every trace; bumped whenever template text
/// changes. A unit test pins the fingerprint for this version.
extern const std::string kTemplateVersion;

/// Reserved name of the built-in neutral summariser agent. It is not a panel
/// member and never votes.
extern const std::string kSummariserName;

/// Digest over all template text, used to detect unbumped template edits.
std::string template_fingerprint();

std::string build_system_message(const PersonaSpec& persona);

/// Throws IncompletePhase unless `utterances` holds exactly one utterance of
/// `phase` per panel member and nothing else.
void require_phase_complete(const std::vector<PersonaSpec>& panel,
                            const std::vector<Utterance>& utterances, Phase phase);

PromptBundle compose_opening(const ScenarioSpec& scenario, const PersonaSpec& persona);

/// Throws IncompletePhase unless `openings` holds exactly one opening
/// utterance per panel member.
PromptBundle compose_rebuttal(const ScenarioSpec& scenario,
                              const std::vector<PersonaSpec>& panel,
                              const PersonaSpec& persona,
                              const std::vector<Utterance>& openings);

PromptBundle compose_ballot(const ScenarioSpec& scenario,
                            const std::vector<PersonaSpec>& panel,
                            const PersonaSpec& persona,
                            const std::vector<Utterance>& openings,
                            const std::vector<Utterance>& rebuttals);

/// Ballot prompt with the corrective instruction appended, used for the single
/// re-prompt after an unparseable vote.
PromptBundle compose_ballot_corrective(const ScenarioSpec& scenario,
                                       const std::vector<PersonaSpec>& panel,
                                       const PersonaSpec& persona,
                                       const std::vector<Utterance>& openings,
                                       const std::vector<Utterance>& rebuttals);

/// Throws IncompleteTrace unless the trace carries all utterances, all
/// ballots and a computed tally.
PromptBundle compose_summary(const DebateTrace& trace);

} // namespace adept
