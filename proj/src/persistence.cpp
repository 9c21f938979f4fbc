#include "adept/persistence.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "adept/analysis.hpp"
#include "adept/errors.hpp"
#include "adept/json_codec.hpp"
#include "adept/sha256.hpp"
#include "adept/text.hpp"

namespace adept {

using nlohmann::json;

namespace {

constexpr std::size_t kReportWidth = 100;

std::string compact_timestamp(const Timestamp& iso) {
    std::string out;
    for (char c : iso) {
        if (std::isdigit(static_cast<unsigned char>(c)) || c == 'T') out.push_back(c);
        if (c == '.') break; // drop milliseconds
    }
    return out + "Z";
}

std::string section_rule(char fill) {
    return std::string(kReportWidth, fill);
}

void append_section_heading(std::string& out, const std::string& title) {
    out += "\n" + title + "\n" + section_rule('-') + "\n";
}

} // namespace

std::string canonical_hash(const DebateTrace& trace) {
    json body = codec::to_json(trace);
    codec::scrub_volatile(body);
    return sha256_hex(body.dump());
}

std::string trace_to_json_text(const DebateTrace& trace) {
    json body = codec::to_json(trace);
    body["canonical_hash"] = canonical_hash(trace);
    return body.dump(2) + "\n";
}

DebateTrace trace_from_json_text(const std::string& json_text, const std::string& source_label) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(source_label, 0, e.what());
    }
    if (!root.is_object()) throw ParseError(source_label, 0, "trace must be a JSON object");

    const std::string version = root.value("format_version", "");
    if (version != kTraceFormatVersion) throw UnsupportedVersion(version);

    if (!root.contains("canonical_hash") || !root["canonical_hash"].is_string()) {
        throw ParseError(source_label, 0, "missing canonical_hash");
    }
    const std::string stored_hash = root["canonical_hash"].get<std::string>();

    DebateTrace trace;
    try {
        trace = codec::trace_from_json(root);
    } catch (const ParseError& e) {
        throw ParseError(source_label, 0, e.what());
    } catch (const json::exception& e) {
        throw ParseError(source_label, 0, e.what());
    }

    const std::string actual_hash = canonical_hash(trace);
    if (actual_hash != stored_hash) throw HashMismatch(stored_hash, actual_hash);

    if (trace.status == TraceStatus::complete) validate_complete_trace(trace);
    return trace;
}

std::filesystem::path persist_trace(const DebateTrace& trace,
                                    const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    try {
        fs::create_directories(out_dir);
    } catch (const fs::filesystem_error& e) {
        throw IoError(out_dir.string(), e.what());
    }

    const std::string stem =
        slugify(trace.scenario.title) + "_" + compact_timestamp(trace.created_at);
    fs::path path = out_dir / (stem + ".trace.json");
    for (int suffix = 2; fs::exists(path); ++suffix) {
        path = out_dir / (stem + "-" + std::to_string(suffix) + ".trace.json");
    }

    std::ofstream out(path);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out << trace_to_json_text(trace);
    out.flush();
    if (!out) throw IoError(path.string(), "write failed");
    return path;
}

DebateTrace load_trace(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw FileMissing(path.string());
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot be read");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return trace_from_json_text(buffer.str(), path.string());
}

std::filesystem::path report_path_for(const std::filesystem::path& trace_path) {
    std::string name = trace_path.filename().string();
    const std::string trace_suffix = ".trace.json";
    if (name.size() > trace_suffix.size() &&
        name.compare(name.size() - trace_suffix.size(), trace_suffix.size(), trace_suffix) == 0) {
        name.erase(name.size() - trace_suffix.size());
    } else {
        name = trace_path.stem().string();
    }
    return trace_path.parent_path() / (name + ".report.txt");
}

std::string render_report(const DebateTrace& trace) {
    validate_complete_trace(trace);

    std::vector<std::string> roster;
    for (const auto& persona : trace.personas) roster.push_back(persona.name);

    std::string out;
    out += section_rule('=') + "\n";
    out += "ADEPT DEBATE REPORT\n";
    out += wrap_text("Scenario: " + trace.scenario.title, kReportWidth) + "\n";
    out += wrap_text("Panel: " + join(roster, ", "), kReportWidth) + "\n";
    out += wrap_text("Model: " + trace.model_config.model_id, kReportWidth) + "\n";
    out += "Template: " + trace.template_version + "\n";
    out += section_rule('=') + "\n";

    append_section_heading(out, "OPENING STATEMENTS");
    for (const auto& utterance : trace.utterances) {
        if (utterance.phase != Phase::opening) continue;
        out += "\n[" + utterance.persona_name + "]\n";
        out += wrap_text(utterance.response, kReportWidth) + "\n";
    }

    append_section_heading(out, "REBUTTALS");
    for (const auto& utterance : trace.utterances) {
        if (utterance.phase != Phase::rebuttal) continue;
        out += "\n[" + utterance.persona_name + "]\n";
        out += wrap_text(utterance.response, kReportWidth) + "\n";
    }

    append_section_heading(out, "BALLOTS");
    for (const auto& ballot : trace.ballots) {
        out += "\n[" + ballot.persona_name + "]\n";
        out += wrap_text(ballot.justification, kReportWidth) + "\n";
        switch (ballot.status) {
            case BallotStatus::valid:
                out += "Vote: Option " + std::to_string(*ballot.parsed_option) + "\n";
                break;
            case BallotStatus::abstained_no_tag:
                out += "Vote: ABSTAINED (no valid vote tag)\n";
                break;
            case BallotStatus::abstained_invalid_option:
                out += "Vote: ABSTAINED (invalid option)\n";
                break;
        }
        if (ballot.attempts() > 1) {
            out += "Attempts: " + std::to_string(ballot.attempts()) + "\n";
        }
    }

    append_section_heading(out, "TALLY");
    out += render_tally(*trace.tally, trace.scenario.options, /*with_labels=*/true) + "\n";

    append_section_heading(out, "EXECUTIVE SUMMARY");
    out += wrap_text(*trace.summary_text, kReportWidth) + "\n";
    return out;
}

} // namespace adept
