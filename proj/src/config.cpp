#include "adept/config.hpp"

#include <algorithm>
#include <set>

#include <yaml-cpp/yaml.h>

#include "adept/errors.hpp"
#include "adept/text.hpp"

namespace adept {

namespace {

namespace fs = std::filesystem;

int mark_line(const YAML::Mark& mark) {
    return mark.line >= 0 ? mark.line + 1 : 0;
}

YAML::Node parse_document(const std::string& text, const std::string& source) {
    try {
        return YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ParseError(source, mark_line(e.mark), e.msg);
    } catch (const YAML::Exception& e) {
        throw ParseError(source, mark_line(e.mark), e.msg);
    }
}

YAML::Node parse_file(const fs::path& path) {
    if (!fs::exists(path)) throw FileMissing(path.string());
    if (fs::is_directory(path)) throw IoError(path.string(), "is a directory");
    try {
        return YAML::LoadFile(path.string());
    } catch (const YAML::BadFile&) {
        throw IoError(path.string(), "cannot be read");
    } catch (const YAML::ParserException& e) {
        throw ParseError(path.string(), mark_line(e.mark), e.msg);
    } catch (const YAML::Exception& e) {
        throw ParseError(path.string(), mark_line(e.mark), e.msg);
    }
}

void require_map(const YAML::Node& node, const std::string& source) {
    if (!node.IsMap()) {
        throw ParseError(source, mark_line(node.Mark()), "document must be a key/value mapping");
    }
}

void reject_unknown_keys(const YAML::Node& node, const std::set<std::string>& known,
                         const std::string& source) {
    for (const auto& entry : node) {
        const auto key = entry.first.as<std::string>();
        if (!known.count(key)) {
            throw ValidationError(source, key, "unknown key (strict mode)");
        }
    }
}

std::string get_string(const YAML::Node& node, const std::string& key, const std::string& source) {
    const auto child = node[key];
    if (!child || child.IsNull()) {
        throw ValidationError(source, key, "required field is missing");
    }
    if (!child.IsScalar()) {
        throw ValidationError(source, key, "must be a text value");
    }
    const auto value = child.as<std::string>();
    if (trim(value).empty()) {
        throw ValidationError(source, key, "must be non-empty");
    }
    return value;
}

std::vector<std::string> get_string_list(const YAML::Node& node, const std::string& key,
                                         const std::string& source) {
    const auto child = node[key];
    if (!child || child.IsNull()) return {};
    if (!child.IsSequence()) {
        throw ValidationError(source, key, "must be a list of text values");
    }
    std::vector<std::string> out;
    for (const auto& item : child) {
        if (!item.IsScalar()) {
            throw ValidationError(source, key, "list entries must be text values");
        }
        out.push_back(item.as<std::string>());
    }
    return out;
}

int get_int(const YAML::Node& child, const std::string& key, const std::string& source) {
    if (!child.IsScalar()) throw ValidationError(source, key, "must be an integer");
    try {
        return child.as<int>();
    } catch (const YAML::Exception&) {
        throw ValidationError(source, key, "must be an integer");
    }
}

ScenarioSpec parse_scenario(const YAML::Node& root, const std::string& source) {
    require_map(root, source);
    reject_unknown_keys(root, {"title", "narrative", "options"}, source);

    ScenarioSpec scenario;
    scenario.title = get_string(root, "title", source);
    scenario.narrative = get_string(root, "narrative", source);

    const auto options_node = root["options"];
    if (!options_node || !options_node.IsSequence()) {
        throw ValidationError(source, "options", "must be a list of options");
    }
    std::set<int> seen_ids;
    for (const auto& item : options_node) {
        if (!item.IsMap()) {
            throw ValidationError(source, "options", "each option must be a mapping");
        }
        reject_unknown_keys(item, {"id", "label", "description"}, source);
        PolicyOption option;
        if (!item["id"]) throw ValidationError(source, "options.id", "required field is missing");
        option.id = get_int(item["id"], "options.id", source);
        option.label = get_string(item, "label", source);
        option.description = get_string(item, "description", source);
        if (option.id < 1) {
            throw ValidationError(source, "options.id", "must be a positive integer");
        }
        if (!seen_ids.insert(option.id).second) {
            throw ValidationError(source, "options.id",
                                  "duplicate id " + std::to_string(option.id));
        }
        scenario.options.push_back(std::move(option));
    }

    if (scenario.options.size() < 2) {
        throw ValidationError(source, "options", "a scenario needs at least 2 options");
    }
    for (std::size_t i = 0; i < scenario.options.size(); ++i) {
        if (scenario.options[i].id != static_cast<int>(i) + 1) {
            throw ValidationError(source, "options.id",
                                  "ids must form the contiguous sequence 1.." +
                                      std::to_string(scenario.options.size()) + " in order");
        }
    }
    return scenario;
}

PersonaSpec parse_persona(const YAML::Node& root, const std::string& source) {
    require_map(root, source);
    reject_unknown_keys(root,
                        {"name", "principle", "approach", "core_questions", "decision_criteria",
                         "deliberation_style", "forbidden_moves", "strengths", "challenges",
                         "citations"},
                        source);

    PersonaSpec persona;
    persona.name = get_string(root, "name", source);
    persona.principle = get_string(root, "principle", source);

    for (const auto* required : {"approach", "core_questions", "decision_criteria"}) {
        if (!root[required] || root[required].IsNull()) {
            throw ValidationError(source, required, "required field is missing");
        }
    }
    persona.approach = get_string_list(root, "approach", source);
    persona.core_questions = get_string_list(root, "core_questions", source);
    persona.decision_criteria = get_string_list(root, "decision_criteria", source);
    for (const auto& [field, list] :
         std::initializer_list<std::pair<const char*, const std::vector<std::string>*>>{
             {"approach", &persona.approach},
             {"core_questions", &persona.core_questions},
             {"decision_criteria", &persona.decision_criteria}}) {
        if (list->empty()) {
            throw ValidationError(source, field, "must have at least one entry");
        }
    }

    if (root["deliberation_style"] && !root["deliberation_style"].IsNull()) {
        persona.deliberation_style = get_string(root, "deliberation_style", source);
    }
    persona.forbidden_moves = get_string_list(root, "forbidden_moves", source);
    if (root["strengths"] && !root["strengths"].IsNull()) {
        persona.strengths = get_string_list(root, "strengths", source);
    }
    if (root["challenges"] && !root["challenges"].IsNull()) {
        persona.challenges = get_string_list(root, "challenges", source);
    }
    if (root["citations"] && !root["citations"].IsNull()) {
        persona.citations = get_string_list(root, "citations", source);
    }
    return persona;
}

ModelConfig parse_model_config(const YAML::Node& root, const std::string& source) {
    require_map(root, source);
    reject_unknown_keys(root,
                        {"backend_kind", "model_id", "temperature", "max_output_tokens",
                         "endpoint_url", "request_timeout", "max_retries",
                         "parallel_independent_calls"},
                        source);

    ModelConfig config;
    const auto kind = get_string(root, "backend_kind", source);
    if (kind == "live") {
        config.backend_kind = BackendKind::live;
    } else if (kind == "scripted") {
        config.backend_kind = BackendKind::scripted;
    } else {
        throw ValidationError(source, "backend_kind", "must be 'live' or 'scripted'");
    }
    config.model_id = get_string(root, "model_id", source);

    if (root["temperature"]) {
        try {
            config.temperature = root["temperature"].as<double>();
        } catch (const YAML::Exception&) {
            throw ValidationError(source, "temperature", "must be a number");
        }
    }
    if (config.temperature < 0.0 || config.temperature > 2.0) {
        throw ValidationError(source, "temperature", "must be within [0, 2]");
    }

    if (root["max_output_tokens"]) {
        config.max_output_tokens = get_int(root["max_output_tokens"], "max_output_tokens", source);
    }
    if (config.max_output_tokens <= 0) {
        throw ValidationError(source, "max_output_tokens", "must be a positive integer");
    }

    if (root["endpoint_url"] && !root["endpoint_url"].IsNull()) {
        config.endpoint_url = get_string(root, "endpoint_url", source);
    }
    if (config.backend_kind == BackendKind::live && config.endpoint_url.empty()) {
        throw ValidationError(source, "endpoint_url", "required when backend_kind is 'live'");
    }

    if (root["request_timeout"]) {
        config.request_timeout_s = get_int(root["request_timeout"], "request_timeout", source);
    }
    if (config.request_timeout_s <= 0) {
        throw ValidationError(source, "request_timeout", "must be a positive number of seconds");
    }

    if (root["max_retries"]) {
        config.max_retries = get_int(root["max_retries"], "max_retries", source);
    }
    if (config.max_retries < 0 || config.max_retries > 10) {
        throw ValidationError(source, "max_retries", "must be within [0, 10]");
    }

    if (root["parallel_independent_calls"]) {
        try {
            config.parallel_independent_calls = root["parallel_independent_calls"].as<bool>();
        } catch (const YAML::Exception&) {
            throw ValidationError(source, "parallel_independent_calls", "must be a boolean");
        }
    }
    return config;
}

} // namespace

std::string to_string(BackendKind kind) {
    return kind == BackendKind::live ? "live" : "scripted";
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
    return parse_scenario(parse_file(path), path.string());
}

ScenarioSpec load_scenario_from_string(std::string_view yaml_text,
                                       const std::string& source_label) {
    return parse_scenario(parse_document(std::string(yaml_text), source_label), source_label);
}

PersonaSpec load_persona_file(const std::filesystem::path& path) {
    return parse_persona(parse_file(path), path.string());
}

PersonaSpec load_persona_from_string(std::string_view yaml_text, const std::string& source_label) {
    return parse_persona(parse_document(std::string(yaml_text), source_label), source_label);
}

std::vector<PersonaSpec> load_personas(const std::filesystem::path& dir) {
    if (!fs::exists(dir)) throw FileMissing(dir.string());
    if (!fs::is_directory(dir)) throw IoError(dir.string(), "is not a directory");

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension().string();
        if (ext == ".yaml" || ext == ".yml") files.push_back(entry.path());
    }
    // Byte-wise file-name sort fixes the canonical speaking order,
    // independent of directory listing order.
    std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
        return a.filename().string() < b.filename().string();
    });

    if (files.empty()) throw EmptyPanel(dir.string());

    std::vector<PersonaSpec> panel;
    std::set<std::string> names;
    for (const auto& file : files) {
        PersonaSpec persona = load_persona_file(file);
        if (!names.insert(persona.name).second) {
            throw ValidationError(file.string(), "name",
                                  "duplicate persona name '" + persona.name + "' in panel");
        }
        panel.push_back(std::move(persona));
    }
    return panel;
}

ModelConfig load_model_config(const std::filesystem::path& path) {
    return parse_model_config(parse_file(path), path.string());
}

ModelConfig load_model_config_from_string(std::string_view yaml_text,
                                          const std::string& source_label) {
    return parse_model_config(parse_document(std::string(yaml_text), source_label), source_label);
}

} // namespace adept
