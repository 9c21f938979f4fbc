#include "adept/analysis.hpp"

#include <algorithm>
#include <sstream>

#include "adept/errors.hpp"
#include "adept/json_codec.hpp"
#include "adept/text.hpp"

namespace adept {

Tally compute_tally(const std::vector<Ballot>& ballots, const std::vector<PolicyOption>& options) {
    Tally tally;
    for (const auto& option : options) tally.counts[option.id] = 0;

    for (const auto& ballot : ballots) {
        if (ballot.status != BallotStatus::valid) {
            ++tally.abstentions;
            continue;
        }
        const auto it = tally.counts.find(ballot.parsed_option.value_or(-1));
        if (it == tally.counts.end()) {
            throw Error("ballot of " + ballot.persona_name +
                        " carries an option id outside the scenario");
        }
        ++it->second;
        ++tally.valid_count;
    }

    int top = 0;
    for (const auto& [option_id, votes] : tally.counts) top = std::max(top, votes);
    if (top > 0) {
        for (const auto& [option_id, votes] : tally.counts) {
            if (votes == top) tally.plurality_options.insert(option_id);
            if (2 * votes > tally.valid_count) tally.majority_option = option_id;
        }
    }
    return tally;
}

namespace {

std::optional<int> ballot_outcome(const DebateTrace& trace, const std::string& persona_name) {
    for (const auto& ballot : trace.ballots) {
        if (ballot.persona_name == persona_name) return ballot.parsed_option;
    }
    throw IncompleteTrace("no ballot for retained persona " + persona_name);
}

std::string option_or_abstain(const std::optional<int>& option) {
    return option ? "Option " + std::to_string(*option) : "ABSTAIN";
}

std::string count_cell(const Tally& tally, int option_id) {
    const int votes = tally.counts.at(option_id);
    std::string cell = std::to_string(votes);
    if (tally.majority_option && *tally.majority_option == option_id) cell += " (majority)";
    return cell;
}

std::map<int, std::vector<std::string>> coalitions(const DebateTrace& trace) {
    std::map<int, std::vector<std::string>> out;
    for (const auto& option : trace.scenario.options) out[option.id] = {};
    for (const auto& ballot : trace.ballots) {
        if (ballot.status == BallotStatus::valid) {
            out[*ballot.parsed_option].push_back(ballot.persona_name);
        }
    }
    for (auto& [option_id, names] : out) std::sort(names.begin(), names.end());
    return out;
}

} // namespace

ComparisonReport compare(const DebateTrace& trace_a, const DebateTrace& trace_b) {
    if (trace_a.scenario.options != trace_b.scenario.options) {
        throw ScenarioMismatch("the option sets differ");
    }

    ComparisonReport report;
    report.scenario_title = trace_a.scenario.title;
    report.options = trace_a.scenario.options;

    const auto in_panel = [](const DebateTrace& trace, const std::string& name) {
        return std::any_of(trace.personas.begin(), trace.personas.end(),
                           [&](const PersonaSpec& p) { return p.name == name; });
    };

    for (const auto& persona : trace_a.personas) {
        if (in_panel(trace_b, persona.name)) {
            report.retained_personas.push_back(persona.name);
        } else {
            report.removed_personas.push_back(persona.name);
        }
    }
    for (const auto& persona : trace_b.personas) {
        if (!in_panel(trace_a, persona.name)) {
            report.added_personas.push_back(persona.name);
        }
    }

    for (const auto& name : report.retained_personas) {
        const auto from = ballot_outcome(trace_a, name);
        const auto to = ballot_outcome(trace_b, name);
        if (from == to) {
            report.stable.push_back({name, from});
        } else {
            report.shifts.push_back({name, from, to});
        }
    }

    report.tally_a = compute_tally(trace_a.ballots, report.options);
    report.tally_b = compute_tally(trace_b.ballots, report.options);
    report.coalition_a = coalitions(trace_a);
    report.coalition_b = coalitions(trace_b);
    return report;
}

std::string render_tally(const Tally& tally, const std::vector<PolicyOption>& options,
                         bool with_labels) {
    std::ostringstream out;
    for (const auto& option : options) {
        out << "Option " << option.id << ": " << count_cell(tally, option.id);
        if (with_labels) out << "  [" << option.label << "]";
        out << "\n";
    }
    if (tally.abstentions > 0) out << "Abstentions: " << tally.abstentions << "\n";
    if (tally.majority_option) {
        out << "Majority: Option " << *tally.majority_option << " (" <<
            tally.counts.at(*tally.majority_option) << " of " << tally.valid_count
            << " valid ballots)";
    } else if (!tally.plurality_options.empty()) {
        std::vector<std::string> leaders;
        for (int option_id : tally.plurality_options) {
            leaders.push_back("Option " + std::to_string(option_id));
        }
        out << "No majority; plurality: " << join(leaders, ", ");
    } else {
        out << "No majority; no valid ballots";
    }
    return out.str();
}

std::string render_comparison(const ComparisonReport& report) {
    std::ostringstream out;
    out << "COMPARISON: " << report.scenario_title << "\n";
    out << std::string(70, '=') << "\n\n";

    out << "TALLY (A | B)\n";
    for (const auto& option : report.options) {
        out << "Option " << option.id << " | " << count_cell(report.tally_a, option.id) << " | "
            << count_cell(report.tally_b, option.id) << "\n";
    }
    if (report.tally_a.abstentions > 0 || report.tally_b.abstentions > 0) {
        out << "Abstentions | " << report.tally_a.abstentions << " | "
            << report.tally_b.abstentions << "\n";
    }

    out << "\nPANEL MEMBERSHIP\n";
    out << "Retained: " << (report.retained_personas.empty()
                                ? "(none)"
                                : join(report.retained_personas, ", "))
        << "\n";
    out << "Removed (only in A): "
        << (report.removed_personas.empty() ? "(none)" : join(report.removed_personas, ", "))
        << "\n";
    out << "Added (only in B): "
        << (report.added_personas.empty() ? "(none)" : join(report.added_personas, ", ")) << "\n";

    out << "\nVOTE SHIFTS\n";
    if (report.shifts.empty()) {
        out << "No vote shifts among retained personas.\n";
    } else {
        for (const auto& shift : report.shifts) {
            out << shift.persona_name << ": " << option_or_abstain(shift.from_option) << " -> "
                << option_or_abstain(shift.to_option) << "\n";
        }
    }

    out << "\nSTABLE POSITIONS\n";
    if (report.stable.empty()) {
        out << "(none)\n";
    } else {
        for (const auto& position : report.stable) {
            out << position.persona_name << ": " << option_or_abstain(position.option) << "\n";
        }
    }

    for (const auto* side : {"A", "B"}) {
        const auto& coalition = std::string(side) == "A" ? report.coalition_a : report.coalition_b;
        out << "\nCOALITIONS (" << side << ")\n";
        for (const auto& option : report.options) {
            const auto& names = coalition.at(option.id);
            out << "Option " << option.id << ": " << (names.empty() ? "(none)" : join(names, ", "))
                << "\n";
        }
    }
    return out.str();
}

std::string comparison_to_json(const ComparisonReport& report) {
    using nlohmann::json;

    auto outcome_json = [](const std::optional<int>& option) {
        return option ? json(*option) : json(nullptr);
    };
    auto coalition_json = [](const std::map<int, std::vector<std::string>>& coalition) {
        json out = json::object();
        for (const auto& [option_id, names] : coalition) out[std::to_string(option_id)] = names;
        return out;
    };

    json shifts = json::array();
    for (const auto& shift : report.shifts) {
        shifts.push_back({{"persona", shift.persona_name},
                          {"from_option", outcome_json(shift.from_option)},
                          {"to_option", outcome_json(shift.to_option)}});
    }
    json stable = json::array();
    for (const auto& position : report.stable) {
        stable.push_back(
            {{"persona", position.persona_name}, {"option", outcome_json(position.option)}});
    }
    json options = json::array();
    for (const auto& option : report.options) options.push_back(codec::to_json(option));

    const json root = {{"format_version", kCompareFormatVersion},
                       {"scenario_title", report.scenario_title},
                       {"options", options},
                       {"retained_personas", report.retained_personas},
                       {"added_personas", report.added_personas},
                       {"removed_personas", report.removed_personas},
                       {"shifts", shifts},
                       {"stable", stable},
                       {"tally_a", codec::to_json(report.tally_a)},
                       {"tally_b", codec::to_json(report.tally_b)},
                       {"coalition_a", coalition_json(report.coalition_a)},
                       {"coalition_b", coalition_json(report.coalition_b)}};
    return root.dump(2);
}

} // namespace adept
