#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpx/config.hpp"
#include "mpx/invariants.hpp"
#include "mpx/protocol.hpp"
#include "mpx/trace.hpp"

// Explicit-state breadth-first checker, seeded random-walk simulator, and
// trace replayer. The BFS is level-synchronous: successor generation may be
// split across workers, results are merged in deterministic frontier order,
// so every reported number and the chosen counterexample are independent of
// worker count.

namespace mpx {

// Per-edge safety properties checked over the explored transition relation:
// the message set only grows, acceptor max ballots never decrease, chosen
// values stay chosen, established safe_at facts persist, and every preempt
// edge strictly raises the acting proposer's ballot.
struct EdgeAudit {
    uint64_t edges_audited = 0;
    uint64_t preempt_edges = 0;
    uint64_t msgs_growth_failures = 0;
    uint64_t acc_max_bal_monotonicity_failures = 0;
    uint64_t chosen_stability_failures = 0;
    uint64_t safe_at_stability_failures = 0;
    uint64_t preempt_increase_failures = 0;

    bool clean() const {
        return msgs_growth_failures == 0 && acc_max_bal_monotonicity_failures == 0 &&
               chosen_stability_failures == 0 && safe_at_stability_failures == 0 &&
               preempt_increase_failures == 0;
    }
};

struct ExplorationReport {
    uint64_t states_explored = 0;
    uint64_t edges = 0;
    uint32_t diameter = 0;
    uint64_t deadlock_states = 0;
    bool complete = false;
    bool bound_hit = false;  // stopped by the max_states bound
    std::optional<ViolationReport> violation;
    // init..violation records when a violation was found (bfs_check), or the
    // full walk (random_walk).
    std::vector<TraceRecord> trace;
    std::optional<EdgeAudit> audit;
    double wall_time_ms = 0.0;
};

struct BfsOptions {
    std::optional<uint64_t> max_states_override;
    uint32_t workers = 1;
    bool audit_edges = false;
};

ExplorationReport bfs_check(const ModelConfig& cfg, const BfsOptions& opts = {});

// Seeded uniform walk of max_steps steps (or to deadlock/violation),
// checking invariants at every state. Deterministic for a fixed seed.
ExplorationReport random_walk(const ModelConfig& cfg, uint64_t seed, uint64_t max_steps);

struct ReplayOutcome {
    bool ok = false;            // the trace parsed and replayed faithfully
    std::string error;          // set when !ok
    size_t error_step = 0;      // record index the error refers to
    uint64_t steps_replayed = 0;
    std::optional<ViolationReport> violation;  // set when a replayed state violates
};

// Re-executes the labeled actions from init(cfg), asserting each is enabled
// and each state fingerprint matches the recorded one, re-running the
// invariant checkers at every state.
ReplayOutcome replay(const std::vector<TraceRecord>& trace, const ModelConfig& cfg);

}  // namespace mpx
