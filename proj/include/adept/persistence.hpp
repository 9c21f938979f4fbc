#pragma once

#include <filesystem>
#include <string>

#include "adept/trace.hpp"

namespace adept {

/// Digest over the canonical serialization with volatile fields (timestamps,
/// token usage) replaced by fixed sentinels. Stable across runs, platforms
/// and field-insertion order; sensitive to any substantive content change.
std::string canonical_hash(const DebateTrace& trace);

/// Canonical JSON document for the trace file: the body plus its
/// canonical_hash. Sorted keys, UTF-8, fixed two-space indentation.
std::string trace_to_json_text(const DebateTrace& trace);

/// Parses and validates a trace document; verifies the embedded hash.
/// Throws ParseError, UnsupportedVersion, HashMismatch, IncompleteTrace.
DebateTrace trace_from_json_text(const std::string& json_text, const std::string& source_label);

/// Writes <out_dir>/<scenario-slug>_<timestamp>.trace.json, creating the
/// directory when needed and never overwriting an existing file (a numeric
/// suffix disambiguates). Returns the path written.
std::filesystem::path persist_trace(const DebateTrace& trace,
                                    const std::filesystem::path& out_dir);

DebateTrace load_trace(const std::filesystem::path& path);

/// Companion report path: same basename with .report.txt.
std::filesystem::path report_path_for(const std::filesystem::path& trace_path);

/// Deterministic plain-text report: header, OPENING STATEMENTS, REBUTTALS,
/// BALLOTS, TALLY, EXECUTIVE SUMMARY. Excludes timestamps, wraps at 100
/// columns. Throws IncompleteTrace for partial traces.
std::string render_report(const DebateTrace& trace);

} // namespace adept
