#include "adept/prompt.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "adept/analysis.hpp"
#include "adept/errors.hpp"
#include "adept/sha256.hpp"
#include "adept/text.hpp"
#include "adept/trace.hpp"

namespace adept {

const std::string kTemplateVersion = "adept-templates/1.0.0";
const std::string kSummariserName = "Summariser";

namespace {

// Template fragments. Any edit here requires bumping kTemplateVersion; the
// fingerprint test enforces that.

const char* const kSystemPreamble =
    "You are {name}, one voice on a multi-perspective ethics panel convened to deliberate a policy "
    "question. Argue strictly from the principle and approach defined below; never step outside "
    "this moral lens.";

const char* const kForbiddenMovesInstruction =
    "You must avoid every move listed under Forbidden Moves.";

const char* const kFixedOptionsNotice =
    "These options are fixed. You must choose among them; do not propose new options or "
    "amendments.";

const char* const kOpeningTask =
    "# Task: Opening Statement\n\n"
    "Deliver your opening statement. Analyse the options through your moral lens, state which "
    "single option you currently favour, and explain why.";

const char* const kRebuttalTask =
    "# Task: Rebuttal\n\n"
    "You have read every opening statement. Respond to the other panellists: challenge reasoning "
    "you reject, acknowledge points that move you, and restate which option you favour through "
    "your own moral lens.";

const char* const kBallotTask =
    "# Task: Secret Ballot\n\n"
    "The debate is closed. Cast your ballot in private; no other panellist will see your "
    "response. State your final justification, then end your response with exactly one vote tag "
    "of the form <VOTE>N</VOTE>, where N is one of: {ids}.";

const char* const kBallotCorrective =
    "IMPORTANT: your previous ballot response did not contain a valid vote tag. Restate your "
    "justification, then end your response with exactly one tag of the form <VOTE>N</VOTE>, "
    "where N is one of: {ids}. Any other format counts as an abstention.";

const char* const kSummariserPreamble =
    "You are the panel summariser, a neutral agent. You hold no moral lens, you do not advocate "
    "for any option, and you never vote. Write a one-page executive summary of the debate below "
    "for an institutional audience: the scenario, each panellist's position and key arguments, "
    "how positions moved between phases, the final ballot outcome, and the points of consensus "
    "and disagreement. Remain strictly neutral.";

const char* const kSummaryTask =
    "# Task: Executive Summary\n\nWrite the one-page executive summary now.";

// Header line attributing an embedded utterance to its speaker.
const char* const kAttributionHeader = "\u2014 {name} ({phase}):";

std::string replace_all(std::string text, std::string_view from, std::string_view to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
    return text;
}

void append_heading(std::string& out, std::string_view title) {
    out += "\n\n## ";
    out += title;
    out += "\n";
}

void append_list(std::string& out, const std::vector<std::string>& items) {
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += "\n";
        out += "- " + items[i];
    }
}

std::string option_id_list(const ScenarioSpec& scenario) {
    std::vector<std::string> ids;
    ids.reserve(scenario.options.size());
    for (const auto& option : scenario.options) ids.push_back(std::to_string(option.id));
    return join(ids, ", ");
}

std::string scenario_block(const ScenarioSpec& scenario) {
    std::string out = "# Scenario: " + scenario.title + "\n\n" + scenario.narrative +
                      "\n\n# Policy Options\n";
    for (const auto& option : scenario.options) {
        out += "\nOption " + std::to_string(option.id) + " - " + option.label + "\n" +
               option.description + "\n";
    }
    out += "\n";
    out += kFixedOptionsNotice;
    return out;
}

std::string attributed(const std::string& persona_name, Phase phase, const std::string& text) {
    return replace_all(replace_all(kAttributionHeader, "{name}", persona_name), "{phase}",
                       to_string(phase)) +
           "\n" + text;
}

std::string attributed(const Utterance& utterance) {
    return attributed(utterance.persona_name, utterance.phase, utterance.response);
}

std::string dialogue_block(std::string_view title, const std::vector<Utterance>& utterances) {
    std::string out = "# ";
    out += title;
    out += "\n";
    for (const auto& utterance : utterances) {
        out += "\n" + attributed(utterance) + "\n";
    }
    return out;
}

PromptBundle make_bundle(std::string persona_name, Phase phase, std::string system_text,
                         std::string user_text) {
    PromptBundle bundle;
    bundle.persona_name = std::move(persona_name);
    bundle.phase = phase;
    bundle.messages = {{Role::system, std::move(system_text)}, {Role::user, std::move(user_text)}};
    bundle.template_version = kTemplateVersion;
    return bundle;
}

} // namespace

void require_phase_complete(const std::vector<PersonaSpec>& panel,
                            const std::vector<Utterance>& utterances, Phase phase) {
    std::set<std::string> seen;
    for (const auto& utterance : utterances) {
        if (utterance.phase != phase) {
            throw IncompletePhase("utterance by " + utterance.persona_name + " has phase " +
                                  to_string(utterance.phase) + ", expected " + to_string(phase));
        }
        seen.insert(utterance.persona_name);
    }
    for (const auto& persona : panel) {
        if (!seen.count(persona.name)) {
            throw IncompletePhase("missing " + to_string(phase) + " utterance for " +
                                  persona.name);
        }
    }
    if (utterances.size() != panel.size()) {
        throw IncompletePhase("expected " + std::to_string(panel.size()) + " " + to_string(phase) +
                              " utterances, got " + std::to_string(utterances.size()));
    }
}

namespace {

std::string ballot_user_message(const ScenarioSpec& scenario,
                                const std::vector<PersonaSpec>& panel,
                                const std::vector<Utterance>& openings,
                                const std::vector<Utterance>& rebuttals) {
    require_phase_complete(panel, openings, Phase::opening);
    require_phase_complete(panel, rebuttals, Phase::rebuttal);
    std::vector<Utterance> dialogue = openings;
    dialogue.insert(dialogue.end(), rebuttals.begin(), rebuttals.end());
    return scenario_block(scenario) + "\n\n" + dialogue_block("Debate Transcript", dialogue) +
           "\n" + replace_all(kBallotTask, "{ids}", option_id_list(scenario));
}

} // namespace

std::string to_string(Phase phase) {
    switch (phase) {
        case Phase::opening: return "opening";
        case Phase::rebuttal: return "rebuttal";
        case Phase::ballot: return "ballot";
        case Phase::summary: return "summary";
    }
    return "unknown";
}

Phase phase_from_string(const std::string& text) {
    if (text == "opening") return Phase::opening;
    if (text == "rebuttal") return Phase::rebuttal;
    if (text == "ballot") return Phase::ballot;
    if (text == "summary") return Phase::summary;
    throw Error("unknown phase: " + text);
}

std::string to_string(Role role) {
    return role == Role::system ? "system" : "user";
}

Role role_from_string(const std::string& text) {
    if (text == "system") return Role::system;
    if (text == "user") return Role::user;
    throw Error("unknown message role: " + text);
}

std::string template_fingerprint() {
    Sha256 h;
    for (const char* fragment :
         {kSystemPreamble, kForbiddenMovesInstruction, kFixedOptionsNotice, kOpeningTask,
          kRebuttalTask, kBallotTask, kBallotCorrective, kSummariserPreamble, kSummaryTask,
          kAttributionHeader}) {
        h.update(fragment);
        h.update("\x1f");
    }
    return h.finish_hex();
}

std::string build_system_message(const PersonaSpec& persona) {
    std::string out = replace_all(kSystemPreamble, "{name}", persona.name);

    append_heading(out, "Role");
    out += persona.name;
    append_heading(out, "Principle");
    out += persona.principle;
    append_heading(out, "Approach");
    append_list(out, persona.approach);
    append_heading(out, "Core Questions");
    append_list(out, persona.core_questions);
    append_heading(out, "Decision Criteria");
    append_list(out, persona.decision_criteria);
    if (persona.deliberation_style) {
        append_heading(out, "Deliberation Style");
        out += *persona.deliberation_style;
    }
    if (!persona.forbidden_moves.empty()) {
        append_heading(out, "Forbidden Moves");
        append_list(out, persona.forbidden_moves);
    }
    if (persona.strengths) {
        append_heading(out, "Strengths");
        append_list(out, *persona.strengths);
    }
    if (persona.challenges) {
        append_heading(out, "Challenges");
        append_list(out, *persona.challenges);
    }
    if (persona.citations) {
        append_heading(out, "Key Citations");
        append_list(out, *persona.citations);
    }
    if (!persona.forbidden_moves.empty()) {
        out += "\n\n";
        out += kForbiddenMovesInstruction;
    }
    return out;
}

PromptBundle compose_opening(const ScenarioSpec& scenario, const PersonaSpec& persona) {
    return make_bundle(persona.name, Phase::opening, build_system_message(persona),
                       scenario_block(scenario) + "\n\n" + kOpeningTask);
}

PromptBundle compose_rebuttal(const ScenarioSpec& scenario, const std::vector<PersonaSpec>& panel,
                              const PersonaSpec& persona,
                              const std::vector<Utterance>& openings) {
    require_phase_complete(panel, openings, Phase::opening);
    const std::string user = scenario_block(scenario) + "\n\n" +
                             dialogue_block("Opening Statements", openings) + "\n" + kRebuttalTask;
    return make_bundle(persona.name, Phase::rebuttal, build_system_message(persona), user);
}

PromptBundle compose_ballot(const ScenarioSpec& scenario, const std::vector<PersonaSpec>& panel,
                            const PersonaSpec& persona, const std::vector<Utterance>& openings,
                            const std::vector<Utterance>& rebuttals) {
    return make_bundle(persona.name, Phase::ballot, build_system_message(persona),
                       ballot_user_message(scenario, panel, openings, rebuttals));
}

PromptBundle compose_ballot_corrective(const ScenarioSpec& scenario,
                                       const std::vector<PersonaSpec>& panel,
                                       const PersonaSpec& persona,
                                       const std::vector<Utterance>& openings,
                                       const std::vector<Utterance>& rebuttals) {
    const std::string user = ballot_user_message(scenario, panel, openings, rebuttals) + "\n\n" +
                             replace_all(kBallotCorrective, "{ids}", option_id_list(scenario));
    return make_bundle(persona.name, Phase::ballot, build_system_message(persona), user);
}

PromptBundle compose_summary(const DebateTrace& trace) {
    if (trace.utterances.size() != 2 * trace.personas.size()) {
        throw IncompleteTrace("summary requires all dialogue utterances");
    }
    if (trace.ballots.size() != trace.personas.size()) {
        throw IncompleteTrace("summary requires one ballot per persona");
    }
    if (!trace.tally) {
        throw IncompleteTrace("summary requires a computed tally");
    }

    std::string user = scenario_block(trace.scenario) + "\n\n" +
                       dialogue_block("Debate Transcript", trace.utterances) + "\n# Ballots\n";
    for (const auto& ballot : trace.ballots) {
        user += "\n" + attributed(ballot.persona_name, Phase::ballot, ballot.justification) + "\n";
        switch (ballot.status) {
            case BallotStatus::valid:
                user += "Vote: Option " + std::to_string(*ballot.parsed_option) + "\n";
                break;
            case BallotStatus::abstained_no_tag:
                user += "Vote: ABSTAINED (no valid vote tag)\n";
                break;
            case BallotStatus::abstained_invalid_option:
                user += "Vote: ABSTAINED (invalid option)\n";
                break;
        }
    }
    user += "\n# Vote Tally\n\n" + render_tally(*trace.tally, trace.scenario.options) + "\n\n" +
            kSummaryTask;

    return make_bundle(kSummariserName, Phase::summary, kSummariserPreamble, user);
}

} // namespace adept
