#include "adept/replay.hpp"

#include "adept/engine.hpp"
#include "adept/persistence.hpp"
#include "adept/scripted_backend.hpp"

namespace adept {

ReplayResult replay_trace(const DebateTrace& original) {
    if (original.status != TraceStatus::complete) {
        throw IncompleteTrace("cannot replay an aborted trace");
    }
    ScriptedBackend backend(script_from_trace(original));
    ReplayResult result;
    result.original_hash = canonical_hash(original);
    result.replayed = run_debate(original.scenario, original.personas, original.model_config,
                                 backend);
    result.replayed_hash = canonical_hash(result.replayed);
    return result;
}

} // namespace adept
