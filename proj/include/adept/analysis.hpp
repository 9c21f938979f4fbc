#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adept/trace.hpp"

namespace adept {

/// Comparison format identifier for the JSON emission.
inline constexpr const char* kCompareFormatVersion = "adept-compare/1";

Tally compute_tally(const std::vector<Ballot>& ballots, const std::vector<PolicyOption>& options);

/// A retained persona whose parsed outcome differs between two debates.
/// Absent option means the persona abstained in that debate.
struct VoteShift {
    std::string persona_name;
    std::optional<int> from_option;
    std::optional<int> to_option;

    bool operator==(const VoteShift&) const = default;
};

struct StablePosition {
    std::string persona_name;
    std::optional<int> option;

    bool operator==(const StablePosition&) const = default;
};

struct ComparisonReport {
    std::string scenario_title;
    std::vector<PolicyOption> options; // canonical option set shared by both traces
    std::vector<std::string> retained_personas;
    std::vector<std::string> added_personas;   // only in B
    std::vector<std::string> removed_personas; // only in A
    std::vector<VoteShift> shifts;
    std::vector<StablePosition> stable;
    Tally tally_a;
    Tally tally_b;
    std::map<int, std::vector<std::string>> coalition_a; // option id -> sorted names
    std::map<int, std::vector<std::string>> coalition_b;

    bool operator==(const ComparisonReport&) const = default;
};

/// Throws ScenarioMismatch when the traces do not share one canonical option
/// set. Persona identity is matched by exact name.
ComparisonReport compare(const DebateTrace& trace_a, const DebateTrace& trace_b);

std::string render_comparison(const ComparisonReport& report);

/// Canonical JSON emission, schema "adept-compare/1".
std::string comparison_to_json(const ComparisonReport& report);

/// Fixed tally lines: "Option 2: 4 (majority)" per option, an abstention row
/// when abstentions exist, and a majority/plurality verdict line.
std::string render_tally(const Tally& tally, const std::vector<PolicyOption>& options,
                         bool with_labels = false);

} // namespace adept
