#pragma once

#include <optional>
#include <string>
#include <vector>

namespace adept {

/// One fixed allocation rule the panel may vote for. Ids are 1-based and
/// contiguous within a scenario.
struct PolicyOption {
    int id = 0;
    std::string label;
    std::string description;

    bool operator==(const PolicyOption&) const = default;
};

struct ScenarioSpec {
    std::string title;
    std::string narrative;
    std::vector<PolicyOption> options;

    bool operator==(const ScenarioSpec&) const = default;

    bool has_option(int id) const {
        return id >= 1 && id <= static_cast<int>(options.size());
    }
};

/// A structured moral lens. The engine renders this into a system message so
/// the model argues from one normative standpoint.
///
/// name, principle, approach, core_questions and decision_criteria are
/// required; the rest may be absent.
struct PersonaSpec {
    std::string name;
    std::string principle;
    std::vector<std::string> approach;
    std::vector<std::string> core_questions;
    std::vector<std::string> decision_criteria;
    std::optional<std::string> deliberation_style;
    std::vector<std::string> forbidden_moves;
    std::optional<std::vector<std::string>> strengths;
    std::optional<std::vector<std::string>> challenges;
    std::optional<std::vector<std::string>> citations;

    bool operator==(const PersonaSpec&) const = default;
};

enum class BackendKind { live, scripted };

std::string to_string(BackendKind kind);

struct ModelConfig {
    BackendKind backend_kind = BackendKind::scripted;
    std::string model_id;
    double temperature = 0.7;
    int max_output_tokens = 4096;
    std::string endpoint_url;     // live only
    int request_timeout_s = 120;
    int max_retries = 3;
    bool parallel_independent_calls = false;

    bool operator==(const ModelConfig&) const = default;
};

} // namespace adept
