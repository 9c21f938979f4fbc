#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "adept/domain.hpp"

namespace adept {

/// Loaders for the three input artefacts. All of them are pure given the file
/// bytes: same bytes in, structurally equal values out. Unknown keys are
/// rejected so typos surface immediately. docs/file-formats.md pins the
/// accepted syntax.

ScenarioSpec load_scenario(const std::filesystem::path& path);
ScenarioSpec load_scenario_from_string(std::string_view yaml_text,
                                       const std::string& source_label = "<string>");

/// One PersonaSpec per .yaml/.yml file, ordered by file name ascending
/// (byte-wise). That order is the canonical speaking order.
std::vector<PersonaSpec> load_personas(const std::filesystem::path& dir);

PersonaSpec load_persona_file(const std::filesystem::path& path);
PersonaSpec load_persona_from_string(std::string_view yaml_text,
                                     const std::string& source_label = "<string>");

ModelConfig load_model_config(const std::filesystem::path& path);
ModelConfig load_model_config_from_string(std::string_view yaml_text,
                                          const std::string& source_label = "<string>");

} // namespace adept
