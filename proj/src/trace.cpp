#include "adept/trace.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <set>

#include "adept/errors.hpp"

namespace adept {

Timestamp now_utc_iso8601() {
    using namespace std::chrono;
    const auto now = system_clock::now();
    const auto since_epoch = now.time_since_epoch();
    const auto secs = duration_cast<seconds>(since_epoch);
    const auto millis = duration_cast<milliseconds>(since_epoch - secs).count();

    const std::time_t tt = secs.count();
    std::tm tm_utc{};
    gmtime_r(&tt, &tm_utc);

    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm_utc.tm_year + 1900,
                  tm_utc.tm_mon + 1, tm_utc.tm_mday, tm_utc.tm_hour, tm_utc.tm_min, tm_utc.tm_sec,
                  static_cast<int>(millis));
    return buf;
}

std::string to_string(BallotStatus status) {
    switch (status) {
        case BallotStatus::valid: return "valid";
        case BallotStatus::abstained_no_tag: return "abstained_no_tag";
        case BallotStatus::abstained_invalid_option: return "abstained_invalid_option";
    }
    return "unknown";
}

BallotStatus ballot_status_from_string(const std::string& text) {
    if (text == "valid") return BallotStatus::valid;
    if (text == "abstained_no_tag") return BallotStatus::abstained_no_tag;
    if (text == "abstained_invalid_option") return BallotStatus::abstained_invalid_option;
    throw Error("unknown ballot status: " + text);
}

std::string to_string(TraceStatus status) {
    return status == TraceStatus::complete ? "complete" : "aborted";
}

TraceStatus trace_status_from_string(const std::string& text) {
    if (text == "complete") return TraceStatus::complete;
    if (text == "aborted") return TraceStatus::aborted;
    throw Error("unknown trace status: " + text);
}

void validate_complete_trace(const DebateTrace& trace) {
    if (trace.status != TraceStatus::complete) {
        throw IncompleteTrace("trace status is " + to_string(trace.status));
    }
    const std::size_t n = trace.personas.size();
    if (trace.utterances.size() != 2 * n) {
        throw IncompleteTrace("expected " + std::to_string(2 * n) + " utterances, found " +
                              std::to_string(trace.utterances.size()));
    }
    if (trace.ballots.size() != n) {
        throw IncompleteTrace("expected " + std::to_string(n) + " ballots, found " +
                              std::to_string(trace.ballots.size()));
    }
    for (Phase phase : {Phase::opening, Phase::rebuttal}) {
        std::set<std::string> seen;
        for (const auto& utterance : trace.utterances) {
            if (utterance.phase != phase) continue;
            if (!seen.insert(utterance.persona_name).second) {
                throw IncompleteTrace("duplicate " + to_string(phase) + " utterance for " +
                                      utterance.persona_name);
            }
        }
        for (const auto& persona : trace.personas) {
            if (!seen.count(persona.name)) {
                throw IncompleteTrace("missing " + to_string(phase) + " utterance for " +
                                      persona.name);
            }
        }
    }
    std::set<std::string> balloted;
    for (const auto& ballot : trace.ballots) {
        if (ballot.attempt_log.empty()) {
            throw IncompleteTrace("ballot of " + ballot.persona_name + " has no attempts");
        }
        if (!balloted.insert(ballot.persona_name).second) {
            throw IncompleteTrace("duplicate ballot for " + ballot.persona_name);
        }
        if (ballot.parsed_option && !trace.scenario.has_option(*ballot.parsed_option)) {
            throw IncompleteTrace("ballot of " + ballot.persona_name +
                                  " references an option outside the scenario");
        }
    }
    int last_seq = -1;
    Phase last_phase = Phase::opening;
    for (const auto& utterance : trace.utterances) {
        if (utterance.seq <= last_seq) {
            throw IncompleteTrace("utterance seq not strictly increasing at " +
                                  std::to_string(utterance.seq));
        }
        if (utterance.phase == Phase::opening && last_phase == Phase::rebuttal) {
            throw IncompleteTrace("opening utterance after rebuttal phase");
        }
        last_seq = utterance.seq;
        last_phase = utterance.phase;
    }
    if (!trace.tally) throw IncompleteTrace("missing tally");
    if (!trace.summary_prompt || !trace.summary_text) {
        throw IncompleteTrace("missing executive summary");
    }
}

} // namespace adept
