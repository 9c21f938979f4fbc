#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <yaml-cpp/yaml.h>

#include "adept/analysis.hpp"
#include "adept/config.hpp"
#include "adept/engine.hpp"
#include "adept/errors.hpp"
#include "adept/http_backend.hpp"
#include "adept/persistence.hpp"
#include "adept/replay.hpp"
#include "adept/scripted_backend.hpp"
#include "adept/text.hpp"

namespace {

using namespace adept;

// Exit-code taxonomy: 0 success, 1 validation/config error, 2 backend
// failure (partial trace persisted), 3 i/o error, 4 internal invariant
// violation.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitBackend = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

int map_ingest_error(const std::exception& error) {
    if (dynamic_cast<const IoError*>(&error)) return kExitIo;
    if (dynamic_cast<const Error*>(&error)) return kExitValidation;
    return kExitInternal;
}

/// Trace files are opaque inputs: unreadable or corrupt maps to i/o.
int map_trace_error(const std::exception& error) {
    if (dynamic_cast<const HashMismatch*>(&error)) return kExitInternal;
    if (dynamic_cast<const FileMissing*>(&error) || dynamic_cast<const IoError*>(&error) ||
        dynamic_cast<const ParseError*>(&error)) {
        return kExitIo;
    }
    if (dynamic_cast<const Error*>(&error)) return kExitValidation;
    return kExitInternal;
}

struct RunArgs {
    std::string scenario_path;
    std::string personas_dir;
    std::string model_config_path;
    std::string out_dir = "debate_outputs";
    std::string backend_override; // "", "live", "scripted"
    std::string script_path;
    bool parallel = false;
};

std::unique_ptr<Backend> build_backend(const ModelConfig& config, const std::string& script_path) {
    if (config.backend_kind == BackendKind::scripted) {
        if (script_path.empty()) {
            throw ValidationError("<cli>", "--script",
                                  "scripted backend needs a script fixture or trace path");
        }
        // A prior trace is as good a script source as a fixture.
        if (contains(script_path, ".trace.json")) {
            return std::make_unique<ScriptedBackend>(script_from_trace(load_trace(script_path)));
        }
        return std::make_unique<ScriptedBackend>(load_script(script_path));
    }

    const char* key = std::getenv("ADEPT_API_KEY");
    if (key == nullptr || std::string(key).empty()) {
        throw ValidationError("<cli>", "ADEPT_API_KEY",
                              "live backend needs the ADEPT_API_KEY environment variable");
    }
    if (config.endpoint_url.empty()) {
        throw ValidationError("<cli>", "endpoint_url", "live backend needs an endpoint_url");
    }
    HttpBackend::Options options;
    options.endpoint_url = config.endpoint_url;
    options.api_key = key;
    options.request_timeout_s = config.request_timeout_s;
    options.max_retries = config.max_retries;
    return std::make_unique<HttpBackend>(std::move(options));
}

void write_report_beside(const DebateTrace& trace, const std::filesystem::path& trace_path) {
    const auto path = report_path_for(trace_path);
    std::ofstream out(path);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out << render_report(trace);
    if (!out.flush()) throw IoError(path.string(), "write failed");
    std::cerr << "wrote " << path.string() << "\n";
}

int cmd_run(const RunArgs& args) {
    ScenarioSpec scenario;
    std::vector<PersonaSpec> panel;
    ModelConfig config;
    std::unique_ptr<Backend> backend;
    try {
        scenario = load_scenario(args.scenario_path);
        panel = load_personas(args.personas_dir);
        config = load_model_config(args.model_config_path);
        if (args.backend_override == "live") config.backend_kind = BackendKind::live;
        if (args.backend_override == "scripted") config.backend_kind = BackendKind::scripted;
        if (args.parallel) config.parallel_independent_calls = true;
        backend = build_backend(config, args.script_path);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return map_ingest_error(error);
    }

    DebateTrace trace;
    try {
        trace = run_debate(scenario, panel, config, *backend);
    } catch (const DebateAborted& aborted) {
        std::cerr << "error: " << aborted.what() << "\n";
        try {
            const auto path = persist_trace(aborted.partial_trace(), args.out_dir);
            std::cerr << "partial trace persisted to " << path.string() << "\n";
        } catch (const std::exception& io) {
            std::cerr << "error: could not persist partial trace: " << io.what() << "\n";
        }
        return kExitBackend;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return map_ingest_error(error);
    }

    try {
        const auto trace_path = persist_trace(trace, args.out_dir);
        std::cerr << "wrote " << trace_path.string() << "\n";
        write_report_beside(trace, trace_path);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitIo;
    }

    std::cout << render_tally(*trace.tally, trace.scenario.options, /*with_labels=*/true) << "\n";
    return kExitOk;
}

int cmd_replay(const std::string& trace_path, const std::string& out_dir) {
    DebateTrace original;
    try {
        original = load_trace(trace_path);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return map_trace_error(error);
    }

    try {
        const ReplayResult result = replay_trace(original);
        std::cout << "original: " << result.original_hash << "\n";
        std::cout << "replayed: " << result.replayed_hash << "\n";
        if (!result.match()) {
            std::cerr << "error: replay diverged from the recorded trace\n";
            return kExitInternal;
        }
        const auto path = persist_trace(result.replayed, out_dir);
        std::cerr << "wrote " << path.string() << "\n";
        write_report_beside(result.replayed, path);
        return kExitOk;
    } catch (const DebateAborted& aborted) {
        std::cerr << "error: " << aborted.what() << "\n";
        return kExitBackend;
    } catch (const IncompleteTrace& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitValidation;
    } catch (const IoError& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitIo;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitInternal;
    }
}

int cmd_tally(const std::string& trace_path) {
    try {
        const DebateTrace trace = load_trace(trace_path);
        const Tally tally =
            trace.tally ? *trace.tally : compute_tally(trace.ballots, trace.scenario.options);
        std::cout << render_tally(tally, trace.scenario.options, /*with_labels=*/true) << "\n";
        return kExitOk;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return map_trace_error(error);
    }
}

int cmd_compare(const std::string& path_a, const std::string& path_b,
                const std::string& out_base) {
    DebateTrace trace_a;
    DebateTrace trace_b;
    try {
        trace_a = load_trace(path_a);
        trace_b = load_trace(path_b);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return map_trace_error(error);
    }

    try {
        const ComparisonReport report = compare(trace_a, trace_b);

        const std::filesystem::path text_path = out_base + ".txt";
        const std::filesystem::path json_path = out_base + ".json";
        if (!text_path.parent_path().empty()) {
            std::filesystem::create_directories(text_path.parent_path());
        }
        std::ofstream text_out(text_path);
        text_out << render_comparison(report);
        std::ofstream json_out(json_path);
        json_out << comparison_to_json(report) << "\n";
        if (!text_out.flush() || !json_out.flush()) {
            throw IoError(out_base, "write failed");
        }
        std::cerr << "wrote " << text_path.string() << "\n";
        std::cerr << "wrote " << json_path.string() << "\n";

        std::cout << report.shifts.size() << " vote shifts among "
                  << report.retained_personas.size() << " retained personas\n";
        return kExitOk;
    } catch (const ScenarioMismatch& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitValidation;
    } catch (const IoError& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitIo;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitInternal;
    }
}

enum class DocumentKind { scenario, persona, model_config };

DocumentKind sniff_kind(const std::filesystem::path& path) {
    try {
        const YAML::Node root = YAML::LoadFile(path.string());
        if (root["options"]) return DocumentKind::scenario;
        if (root["backend_kind"]) return DocumentKind::model_config;
    } catch (const std::exception&) {
        // fall through; the real loader reports the error
    }
    return DocumentKind::persona;
}

int cmd_validate(const std::string& target) {
    namespace fs = std::filesystem;
    const fs::path path(target);
    if (!fs::exists(path)) {
        std::cerr << "error: " << FileMissing(path.string()).what() << "\n";
        return kExitValidation;
    }

    int failures = 0;
    auto verdict = [&failures](const fs::path& file, const char* what,
                               const std::function<void()>& check) {
        try {
            check();
            std::cout << file.string() << ": OK (" << what << ")\n";
        } catch (const std::exception& error) {
            std::cout << file.string() << ": ERROR: " << error.what() << "\n";
            ++failures;
        }
    };

    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path)) {
            if (!entry.is_regular_file()) continue;
            const auto ext = entry.path().extension().string();
            if (ext == ".yaml" || ext == ".yml") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) {
            std::cerr << "error: " << EmptyPanel(path.string()).what() << "\n";
            return kExitValidation;
        }
        std::set<std::string> names;
        for (const auto& file : files) {
            verdict(file, "persona", [&] {
                const PersonaSpec persona = load_persona_file(file);
                if (!names.insert(persona.name).second) {
                    throw ValidationError(file.string(), "name",
                                          "duplicate persona name '" + persona.name +
                                              "' in panel");
                }
            });
        }
    } else {
        switch (sniff_kind(path)) {
            case DocumentKind::scenario:
                verdict(path, "scenario", [&] { load_scenario(path); });
                break;
            case DocumentKind::model_config:
                verdict(path, "model config", [&] { load_model_config(path); });
                break;
            case DocumentKind::persona:
                verdict(path, "persona", [&] { load_persona_file(path); });
                break;
        }
    }

    if (failures > 0) {
        std::cerr << failures << " invalid document(s)\n";
        return kExitValidation;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ADEPT: structured multi-persona debate orchestration"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run a full debate and persist trace + report");
    run->add_option("--scenario", run_args.scenario_path, "Scenario file (options.yaml)")
        ->required();
    run->add_option("--personas", run_args.personas_dir, "Directory of persona files")
        ->required();
    run->add_option("--model-config", run_args.model_config_path, "Model configuration file")
        ->required();
    run->add_option("--out", run_args.out_dir, "Output directory (default: debate_outputs)");
    run->add_option("--backend", run_args.backend_override,
                    "Override the configured backend kind")
        ->check(CLI::IsMember({"live", "scripted"}));
    run->add_option("--script", run_args.script_path,
                    "Response source for the scripted backend: an adept-script/1 fixture, "
                    "or a prior .trace.json to rerun");
    run->add_flag("--parallel", run_args.parallel,
                  "Allow concurrent backend calls within independent phases");

    std::string replay_trace_path;
    std::string replay_out = "debate_outputs";
    auto* replay =
        app.add_subcommand("replay", "Re-run a persisted trace and verify its canonical hash");
    replay->add_option("trace", replay_trace_path, "Trace file to replay")->required();
    replay->add_option("--out", replay_out, "Output directory (default: debate_outputs)");

    std::string tally_trace_path;
    auto* tally = app.add_subcommand("tally", "Print the vote tally of a persisted trace");
    tally->add_option("trace", tally_trace_path, "Trace file")->required();

    std::string compare_a;
    std::string compare_b;
    std::string compare_out = "comparison";
    auto* comp = app.add_subcommand("compare", "Compare two traces of the same scenario");
    comp->add_option("trace-a", compare_a, "First trace file")->required();
    comp->add_option("trace-b", compare_b, "Second trace file")->required();
    comp->add_option("--out", compare_out,
                     "Output base path; writes <base>.txt and <base>.json (default: comparison)");

    std::string validate_target;
    auto* validate =
        app.add_subcommand("validate", "Validate a persona directory or a single config file");
    validate->add_option("path", validate_target, "Persona directory, scenario or config file")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (run->parsed()) return cmd_run(run_args);
        if (replay->parsed()) return cmd_replay(replay_trace_path, replay_out);
        if (tally->parsed()) return cmd_tally(tally_trace_path);
        if (comp->parsed()) return cmd_compare(compare_a, compare_b, compare_out);
        if (validate->parsed()) return cmd_validate(validate_target);
    } catch (const std::exception& error) {
        std::cerr << "internal error: " << error.what() << "\n";
        return kExitInternal;
    }
    return kExitValidation;
}
