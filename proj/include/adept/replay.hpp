#pragma once

#include <string>

#include "adept/trace.hpp"

namespace adept {

struct ReplayResult {
    DebateTrace replayed;
    std::string original_hash;
    std::string replayed_hash;

    bool match() const { return original_hash == replayed_hash; }
};

/// Re-runs a debate against a script derived from the trace itself. A
/// deterministic pipeline reproduces the identical canonical hash. Throws
/// IncompleteTrace for aborted traces.
ReplayResult replay_trace(const DebateTrace& original);

} // namespace adept
