#include "adept/engine.hpp"

#include <algorithm>
#include <cctype>
#include <future>

#include "adept/analysis.hpp"
#include "adept/text.hpp"

namespace adept {

namespace {

bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool matches_ci(const std::string& text, std::size_t pos, std::string_view literal) {
    if (pos + literal.size() > text.size()) return false;
    for (std::size_t i = 0; i < literal.size(); ++i) {
        const char a = static_cast<char>(std::tolower(static_cast<unsigned char>(text[pos + i])));
        if (a != literal[i]) return false;
    }
    return true;
}

struct TagMatch {
    std::size_t begin = 0;
    std::size_t end = 0;
    long long value = 0;
};

/// Attempts the tag grammar at `pos` (which must start with "<vote>").
std::optional<TagMatch> match_tag_at(const std::string& text, std::size_t pos) {
    std::size_t i = pos + 6; // past "<vote>"
    while (i < text.size() && is_ascii_space(text[i])) ++i;
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
    long long value = 0;
    bool overflowed = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        if (value > 100000000) {
            overflowed = true; // keep consuming digits, value is already out of range
        } else {
            value = value * 10 + (text[i] - '0');
        }
        ++i;
    }
    if (overflowed) value = 100000001;
    while (i < text.size() && is_ascii_space(text[i])) ++i;
    if (!matches_ci(text, i, "</vote>")) return std::nullopt;
    return TagMatch{pos, i + 7, value};
}

std::optional<TagMatch> find_tag(const std::string& text, std::size_t from) {
    for (std::size_t pos = from; pos + 13 <= text.size(); ++pos) {
        if (!matches_ci(text, pos, "<vote>")) continue;
        if (auto match = match_tag_at(text, pos)) return match;
    }
    return std::nullopt;
}

} // namespace

VoteParse parse_vote(const std::string& text, const std::vector<PolicyOption>& options) {
    VoteParse parse;
    const auto first = find_tag(text, 0);
    if (!first) {
        parse.status = VoteParse::Status::no_vote_found;
        return parse;
    }
    parse.tag_begin = first->begin;
    parse.tag_end = first->end;
    parse.duplicate_tags = find_tag(text, first->end).has_value();

    const bool in_range = std::any_of(options.begin(), options.end(), [&](const PolicyOption& o) {
        return static_cast<long long>(o.id) == first->value;
    });
    if (!in_range) {
        parse.status = VoteParse::Status::invalid_option;
        return parse;
    }
    parse.status = VoteParse::Status::valid;
    parse.option = static_cast<int>(first->value);
    return parse;
}

std::string extract_justification(const std::string& raw_response, const VoteParse& parse) {
    if (parse.status == VoteParse::Status::no_vote_found) {
        return trim(raw_response);
    }
    std::string before = raw_response.substr(0, parse.tag_begin);
    std::string after = raw_response.substr(parse.tag_end);
    while (!before.empty() && is_ascii_space(before.back())) before.pop_back();
    std::size_t skip = 0;
    while (skip < after.size() && is_ascii_space(after[skip])) ++skip;
    after.erase(0, skip);
    if (before.empty()) return trim(after);
    if (after.empty()) return trim(before);
    return trim(before + " " + after);
}

namespace {

struct Exchange {
    PromptBundle prompt;
    CompletionResult result;
    Timestamp started_at;
    Timestamp ended_at;
};

Exchange perform(Backend& backend, const ModelConfig& config, PromptBundle bundle) {
    Exchange exchange;
    exchange.prompt = std::move(bundle);
    exchange.started_at = now_utc_iso8601();
    exchange.result = backend.complete(make_request(exchange.prompt, config));
    exchange.ended_at = now_utc_iso8601();
    return exchange;
}

/// Runs `task` for every panel index, sequentially or concurrently, always
/// assembling results in panel order. On failure the first exception is
/// rethrown after every started task has finished, and the results that did
/// complete are handed to `salvage` so an aborted run still persists them.
template <typename T, typename Task, typename Salvage>
std::vector<T> for_each_persona(const std::vector<PersonaSpec>& panel, bool parallel, Task task,
                                Salvage salvage) {
    std::vector<std::optional<T>> slots(panel.size());
    std::exception_ptr first_error;

    if (!parallel) {
        for (std::size_t i = 0; i < panel.size() && !first_error; ++i) {
            try {
                slots[i] = task(i);
            } catch (...) {
                first_error = std::current_exception();
            }
        }
    } else {
        std::vector<std::future<T>> futures;
        futures.reserve(panel.size());
        for (std::size_t i = 0; i < panel.size(); ++i) {
            futures.push_back(std::async(std::launch::async, [&task, i] { return task(i); }));
        }
        for (std::size_t i = 0; i < panel.size(); ++i) {
            try {
                slots[i] = futures[i].get();
            } catch (...) {
                if (!first_error) first_error = std::current_exception();
            }
        }
    }

    if (first_error) {
        std::vector<T> completed;
        for (auto& slot : slots) {
            if (slot) completed.push_back(std::move(*slot));
        }
        salvage(std::move(completed));
        std::rethrow_exception(first_error);
    }

    std::vector<T> results;
    results.reserve(panel.size());
    for (auto& slot : slots) results.push_back(std::move(*slot));
    return results;
}

std::optional<std::string> truncation_warning(const Exchange& exchange) {
    if (exchange.result.finish_reason != FinishReason::length) return std::nullopt;
    return "response for (" + exchange.prompt.persona_name + ", " +
           to_string(exchange.prompt.phase) + ") was truncated (finish_reason=length)";
}

struct BallotOutcome {
    Ballot ballot;
    std::vector<std::string> warnings;
};

BallotOutcome cast_ballot(const ScenarioSpec& scenario, const std::vector<PersonaSpec>& panel,
                          const PersonaSpec& persona, const std::vector<Utterance>& openings,
                          const std::vector<Utterance>& rebuttals, Backend& backend,
                          const ModelConfig& config) {
    BallotOutcome outcome;
    Ballot& ballot = outcome.ballot;
    ballot.persona_name = persona.name;

    auto record_attempt = [&](PromptBundle bundle) -> VoteParse {
        Exchange exchange = perform(backend, config, std::move(bundle));
        if (auto warning = truncation_warning(exchange)) outcome.warnings.push_back(*warning);
        BallotAttempt attempt;
        attempt.prompt = std::move(exchange.prompt);
        attempt.response = std::move(exchange.result.text);
        attempt.started_at = std::move(exchange.started_at);
        attempt.ended_at = std::move(exchange.ended_at);
        attempt.token_usage = exchange.result.token_usage;
        const VoteParse parse = parse_vote(attempt.response, scenario.options);
        ballot.attempt_log.push_back(std::move(attempt));
        return parse;
    };

    VoteParse parse = record_attempt(compose_ballot(scenario, panel, persona, openings, rebuttals));
    if (parse.status != VoteParse::Status::valid) {
        parse = record_attempt(
            compose_ballot_corrective(scenario, panel, persona, openings, rebuttals));
    }
    if (parse.duplicate_tags) {
        outcome.warnings.push_back("ballot of " + persona.name +
                                   " contains multiple vote tags; first well-formed tag used");
    }

    ballot.justification = extract_justification(ballot.raw_response(), parse);
    switch (parse.status) {
        case VoteParse::Status::valid:
            ballot.status = BallotStatus::valid;
            ballot.parsed_option = parse.option;
            break;
        case VoteParse::Status::no_vote_found:
            ballot.status = BallotStatus::abstained_no_tag;
            break;
        case VoteParse::Status::invalid_option:
            ballot.status = BallotStatus::abstained_invalid_option;
            break;
    }
    return outcome;
}

} // namespace

std::vector<Utterance> run_dialogue_phase(Phase phase, const ScenarioSpec& scenario,
                                          const std::vector<PersonaSpec>& panel,
                                          const std::vector<Utterance>& prior, Backend& backend,
                                          const ModelConfig& config, int seq_base,
                                          std::vector<std::string>* warnings,
                                          std::vector<Utterance>* salvage_sink) {
    if (phase != Phase::opening && phase != Phase::rebuttal) {
        throw IncompletePhase("not a dialogue phase: " + to_string(phase));
    }
    if (phase == Phase::rebuttal) {
        require_phase_complete(panel, prior, Phase::opening);
    }

    struct SpokenTurn {
        Utterance utterance;
        std::optional<std::string> warning;
    };

    auto turns = for_each_persona<SpokenTurn>(
        panel, config.parallel_independent_calls,
        [&](std::size_t index) {
            const PersonaSpec& persona = panel[index];
            PromptBundle bundle = phase == Phase::opening
                                      ? compose_opening(scenario, persona)
                                      : compose_rebuttal(scenario, panel, persona, prior);
            Exchange exchange = perform(backend, config, std::move(bundle));
            SpokenTurn turn;
            turn.warning = truncation_warning(exchange);
            Utterance& utterance = turn.utterance;
            utterance.seq = seq_base + static_cast<int>(index);
            utterance.phase = phase;
            utterance.persona_name = persona.name;
            utterance.prompt = std::move(exchange.prompt);
            utterance.response = std::move(exchange.result.text);
            utterance.started_at = std::move(exchange.started_at);
            utterance.ended_at = std::move(exchange.ended_at);
            utterance.token_usage = exchange.result.token_usage;
            return turn;
        },
        [&](std::vector<SpokenTurn> completed) {
            if (!salvage_sink) return;
            for (auto& turn : completed) salvage_sink->push_back(std::move(turn.utterance));
        });

    std::vector<Utterance> utterances;
    utterances.reserve(turns.size());
    for (auto& turn : turns) {
        if (warnings && turn.warning) warnings->push_back(std::move(*turn.warning));
        utterances.push_back(std::move(turn.utterance));
    }
    return utterances;
}

CollectedBallots collect_ballots(const ScenarioSpec& scenario,
                                 const std::vector<PersonaSpec>& panel,
                                 const std::vector<Utterance>& dialogue, Backend& backend,
                                 const ModelConfig& config, std::vector<Ballot>* salvage_sink) {
    std::vector<Utterance> openings;
    std::vector<Utterance> rebuttals;
    for (const auto& utterance : dialogue) {
        (utterance.phase == Phase::opening ? openings : rebuttals).push_back(utterance);
    }
    require_phase_complete(panel, openings, Phase::opening);
    require_phase_complete(panel, rebuttals, Phase::rebuttal);

    auto outcomes = for_each_persona<BallotOutcome>(
        panel, config.parallel_independent_calls,
        [&](std::size_t index) {
            return cast_ballot(scenario, panel, panel[index], openings, rebuttals, backend,
                               config);
        },
        [&](std::vector<BallotOutcome> completed) {
            if (!salvage_sink) return;
            for (auto& outcome : completed) salvage_sink->push_back(std::move(outcome.ballot));
        });

    CollectedBallots collected;
    for (auto& outcome : outcomes) {
        collected.ballots.push_back(std::move(outcome.ballot));
        for (auto& warning : outcome.warnings) collected.warnings.push_back(std::move(warning));
    }
    return collected;
}

DebateTrace run_debate(const ScenarioSpec& scenario, const std::vector<PersonaSpec>& panel,
                       const ModelConfig& config, Backend& backend) {
    if (panel.size() < 2) {
        throw ValidationError("panel", "personas", "a debate needs at least 2 personas");
    }

    DebateTrace trace;
    trace.scenario = scenario;
    trace.personas = panel;
    trace.model_config = config;
    trace.template_version = kTemplateVersion;
    trace.created_at = now_utc_iso8601();

    try {
        auto openings = run_dialogue_phase(Phase::opening, scenario, panel, {}, backend, config,
                                           0, &trace.warnings, &trace.utterances);
        trace.utterances = openings;

        auto rebuttals = run_dialogue_phase(Phase::rebuttal, scenario, panel, openings, backend,
                                            config, static_cast<int>(panel.size()),
                                            &trace.warnings, &trace.utterances);
        trace.utterances.insert(trace.utterances.end(), rebuttals.begin(), rebuttals.end());

        CollectedBallots collected =
            collect_ballots(scenario, panel, trace.utterances, backend, config, &trace.ballots);
        trace.ballots = std::move(collected.ballots);
        for (auto& warning : collected.warnings) trace.warnings.push_back(std::move(warning));

        trace.tally = compute_tally(trace.ballots, scenario.options);

        Exchange summary = perform(backend, config, compose_summary(trace));
        if (auto warning = truncation_warning(summary)) trace.warnings.push_back(*warning);
        trace.summary_prompt = std::move(summary.prompt);
        trace.summary_text = std::move(summary.result.text);
        trace.status = TraceStatus::complete;
    } catch (const BackendError& error) {
        trace.status = TraceStatus::aborted;
        trace.abort_reason = error.what();
        throw DebateAborted(error.kind(), error.detail(), std::move(trace));
    }
    return trace;
}

} // namespace adept
