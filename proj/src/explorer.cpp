#include "mpx/explorer.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace mpx {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Node {
    GlobalState state;
    Fingerprint fp;
    uint32_t parent = UINT32_MAX;  // UINT32_MAX marks the root
    ActionLabel via;
    uint32_t depth = 0;
};

std::vector<ActionLabel> labels_from_root(const std::vector<Node>& nodes, uint32_t id) {
    std::vector<ActionLabel> labels;
    for (uint32_t cur = id; nodes[cur].parent != UINT32_MAX; cur = nodes[cur].parent) {
        labels.push_back(nodes[cur].via);
    }
    std::reverse(labels.begin(), labels.end());
    return labels;
}

std::vector<TraceRecord> trace_from_root(const std::vector<Node>& nodes, uint32_t id,
                                         const ViolationReport& violation) {
    std::vector<uint32_t> path;
    for (uint32_t cur = id;; cur = nodes[cur].parent) {
        path.push_back(cur);
        if (nodes[cur].parent == UINT32_MAX) break;
    }
    std::reverse(path.begin(), path.end());
    std::vector<TraceRecord> trace;
    trace.push_back(make_init_record(nodes[path.front()].fp));
    for (size_t i = 1; i < path.size(); ++i) {
        trace.push_back(make_action_record(nodes[path[i]].via, nodes[path[i]].fp));
    }
    trace.push_back(
        make_violation_record(violation.invariant_name, violation.witness, nodes[id].fp));
    return trace;
}

void audit_edge(const GlobalState& from, const GlobalState& to, const ActionLabel& label,
                const ModelConfig& cfg, const QuorumSystem& qs, EdgeAudit& audit) {
    ++audit.edges_audited;
    for (const Message& m : from.msgs) {
        if (!to.msgs.count(m)) {
            ++audit.msgs_growth_failures;
            break;
        }
    }
    for (uint32_t a = 0; a < cfg.num_acceptors; ++a) {
        if (to.acc_max_bal[a] < from.acc_max_bal[a]) {
            ++audit.acc_max_bal_monotonicity_failures;
            break;
        }
    }
    for (uint32_t sl = 0; sl < cfg.max_slots && audit.chosen_stability_failures == 0; ++sl) {
        for (uint32_t v = 0; v < cfg.num_values; ++v) {
            if (chosen(from, Value{v}, Slot{sl}, qs, cfg) &&
                !chosen(to, Value{v}, Slot{sl}, qs, cfg)) {
                ++audit.chosen_stability_failures;
                break;
            }
        }
    }
    for (uint32_t b = 0; b < cfg.max_ballot && audit.safe_at_stability_failures == 0; ++b) {
        for (uint32_t sl = 0; sl < cfg.max_slots && audit.safe_at_stability_failures == 0;
             ++sl) {
            for (uint32_t v = 0; v < cfg.num_values; ++v) {
                if (safe_at(from, Value{v}, Ballot{b}, Slot{sl}, qs, cfg) &&
                    !safe_at(to, Value{v}, Ballot{b}, Slot{sl}, qs, cfg)) {
                    ++audit.safe_at_stability_failures;
                    break;
                }
            }
        }
    }
    if (label.kind == ActionKind::kPreempt) {
        ++audit.preempt_edges;
        if (!(to.pro_ballot[label.actor] > from.pro_ballot[label.actor])) {
            ++audit.preempt_increase_failures;
        }
    }
}

}  // namespace

ExplorationReport bfs_check(const ModelConfig& cfg, const BfsOptions& opts) {
    const auto start = Clock::now();
    validate_config(cfg);
    QuorumSystem qs(cfg.num_acceptors, cfg.quorum_spec);
    const uint64_t max_states = opts.max_states_override.value_or(cfg.max_states);
    const uint32_t workers = std::max(1u, opts.workers);

    ExplorationReport report;
    if (opts.audit_edges) report.audit = EdgeAudit{};

    std::vector<Node> nodes;
    std::unordered_map<Fingerprint, uint32_t, FingerprintHash> visited;

    Node root;
    root.state = init(cfg);
    root.fp = fingerprint_state(root.state);
    nodes.push_back(std::move(root));
    visited.emplace(nodes[0].fp, 0);

    // (node id, violation) candidates found while merging one level.
    std::vector<std::pair<uint32_t, ViolationReport>> candidates;
    {
        auto violations = check_all(nodes[0].state, cfg, qs);
        if (!violations.empty()) candidates.emplace_back(0, violations.front());
    }

    std::vector<uint32_t> frontier{0};
    uint32_t depth = 0;
    report.states_explored = 1;

    while (!candidates.empty() || !frontier.empty()) {
        if (!candidates.empty()) {
            // Deterministic pick: minimal depth is given (all candidates sit
            // in the level just merged); tie-break on the label sequence.
            uint32_t best = candidates[0].first;
            const ViolationReport* best_report = &candidates[0].second;
            std::vector<ActionLabel> best_labels = labels_from_root(nodes, best);
            for (size_t i = 1; i < candidates.size(); ++i) {
                std::vector<ActionLabel> labels = labels_from_root(nodes, candidates[i].first);
                if (labels < best_labels) {
                    best = candidates[i].first;
                    best_report = &candidates[i].second;
                    best_labels = std::move(labels);
                }
            }
            report.violation = *best_report;
            report.trace = trace_from_root(nodes, best, *best_report);
            report.diameter = nodes[best].depth;
            report.complete = false;
            report.wall_time_ms = elapsed_ms(start);
            return report;
        }
        if (report.states_explored >= max_states) {
            report.bound_hit = true;
            report.complete = false;
            report.diameter = depth;
            report.wall_time_ms = elapsed_ms(start);
            return report;
        }

        // Expand the whole level; generation is pure and parallelizable,
        // merging stays sequential in frontier order.
        std::vector<SuccessorList> generated(frontier.size());
        if (workers <= 1 || frontier.size() < 2) {
            for (size_t i = 0; i < frontier.size(); ++i) {
                generated[i] = next_successors(nodes[frontier[i]].state, cfg, qs);
            }
        } else {
            std::vector<std::thread> pool;
            size_t chunk = (frontier.size() + workers - 1) / workers;
            for (uint32_t w = 0; w < workers; ++w) {
                size_t lo = w * chunk;
                size_t hi = std::min(frontier.size(), lo + chunk);
                if (lo >= hi) break;
                pool.emplace_back([&, lo, hi] {
                    for (size_t i = lo; i < hi; ++i) {
                        generated[i] = next_successors(nodes[frontier[i]].state, cfg, qs);
                    }
                });
            }
            for (std::thread& t : pool) t.join();
        }

        std::vector<uint32_t> next_frontier;
        for (size_t i = 0; i < frontier.size(); ++i) {
            uint32_t parent_id = frontier[i];
            if (generated[i].empty()) ++report.deadlock_states;
            for (Successor& succ : generated[i]) {
                ++report.edges;
                Fingerprint fp = fingerprint_state(succ.second);
                if (report.audit) {
                    audit_edge(nodes[parent_id].state, succ.second, succ.first, cfg, qs,
                               *report.audit);
                }
                auto [it, inserted] = visited.emplace(fp, 0);
                if (!inserted) {
                    if (!(nodes[it->second].state == succ.second)) {
                        throw std::runtime_error("state fingerprint collision detected");
                    }
                    continue;
                }
                Node node;
                node.state = std::move(succ.second);
                node.fp = fp;
                node.parent = parent_id;
                node.via = std::move(succ.first);
                node.depth = depth + 1;
                uint32_t id = static_cast<uint32_t>(nodes.size());
                it->second = id;
                nodes.push_back(std::move(node));
                next_frontier.push_back(id);
                ++report.states_explored;
                auto violations = check_all(nodes[id].state, cfg, qs);
                if (!violations.empty()) candidates.emplace_back(id, violations.front());
            }
        }
        if (!next_frontier.empty()) depth = depth + 1;
        frontier = std::move(next_frontier);
    }

    report.complete = true;
    report.diameter = depth;
    report.wall_time_ms = elapsed_ms(start);
    return report;
}

ExplorationReport random_walk(const ModelConfig& cfg, uint64_t seed, uint64_t max_steps) {
    const auto start = Clock::now();
    validate_config(cfg);
    QuorumSystem qs(cfg.num_acceptors, cfg.quorum_spec);
    std::mt19937_64 rng(seed);

    ExplorationReport report;
    GlobalState state = init(cfg);
    report.states_explored = 1;
    report.trace.push_back(make_init_record(fingerprint_state(state)));

    auto record_violation = [&](const ViolationReport& v) {
        report.violation = v;
        report.trace.push_back(
            make_violation_record(v.invariant_name, v.witness, v.state_fingerprint));
    };

    {
        auto violations = check_all(state, cfg, qs);
        if (!violations.empty()) {
            record_violation(violations.front());
            report.wall_time_ms = elapsed_ms(start);
            return report;
        }
    }

    for (uint64_t step = 0; step < max_steps; ++step) {
        SuccessorList successors = next_successors(state, cfg, qs);
        if (successors.empty()) {
            report.deadlock_states = 1;
            break;
        }
        size_t pick = static_cast<size_t>(rng() % successors.size());
        state = std::move(successors[pick].second);
        ++report.edges;
        ++report.states_explored;
        report.diameter = static_cast<uint32_t>(step + 1);
        report.trace.push_back(
            make_action_record(successors[pick].first, fingerprint_state(state)));
        auto violations = check_all(state, cfg, qs);
        if (!violations.empty()) {
            record_violation(violations.front());
            report.wall_time_ms = elapsed_ms(start);
            return report;
        }
    }
    report.complete = true;
    report.wall_time_ms = elapsed_ms(start);
    return report;
}

ReplayOutcome replay(const std::vector<TraceRecord>& trace, const ModelConfig& cfg) {
    ReplayOutcome outcome;
    try {
        validate_config(cfg);
    } catch (const ConfigError& e) {
        outcome.error = e.what();
        return outcome;
    }
    QuorumSystem qs(cfg.num_acceptors, cfg.quorum_spec);

    if (trace.empty()) {
        outcome.ok = true;
        return outcome;
    }
    if (trace.front().kind != TraceRecord::Kind::kInit) {
        outcome.error = "trace does not start with an init record";
        return outcome;
    }

    GlobalState state = init(cfg);
    if (fingerprint_state(state) != trace.front().state_fp) {
        outcome.error = "init state fingerprint mismatch";
        return outcome;
    }
    {
        auto violations = check_all(state, cfg, qs);
        if (!violations.empty()) {
            outcome.ok = true;
            outcome.violation = violations.front();
            return outcome;
        }
    }

    for (size_t i = 1; i < trace.size(); ++i) {
        const TraceRecord& rec = trace[i];
        outcome.error_step = i;
        if (rec.kind == TraceRecord::Kind::kInit) {
            outcome.error = "unexpected second init record";
            return outcome;
        }
        if (rec.kind == TraceRecord::Kind::kViolation) {
            auto violations = check_all(state, cfg, qs);
            if (violations.empty()) {
                outcome.error = "trace claims a violation but the state satisfies all checked invariants";
                return outcome;
            }
            if (violations.front().invariant_name != rec.invariant) {
                outcome.error = "trace claims a " + rec.invariant +
                                " violation but replay finds " + violations.front().invariant_name;
                return outcome;
            }
            if (fingerprint_state(state) != rec.state_fp) {
                outcome.error = "violation record fingerprint mismatch";
                return outcome;
            }
            outcome.ok = true;
            outcome.violation = violations.front();
            return outcome;
        }

        SuccessorList successors = next_successors(state, cfg, qs);
        const Successor* match = nullptr;
        for (const Successor& succ : successors) {
            if (succ.first.kind != rec.label || succ.first.actor != rec.actor) continue;
            std::optional<Fingerprint> wfp;
            if (!succ.first.witness.empty()) wfp = fingerprint_bytes(succ.first.witness);
            if (wfp == rec.witness_fp) {
                match = &succ;
                break;
            }
        }
        if (!match) {
            outcome.error = std::string("labeled action ") + action_kind_name(rec.label) +
                            " is not enabled at step " + std::to_string(i);
            return outcome;
        }
        if (fingerprint_state(match->second) != rec.state_fp) {
            outcome.error = "state fingerprint mismatch after step " + std::to_string(i);
            return outcome;
        }
        state = match->second;
        ++outcome.steps_replayed;

        auto violations = check_all(state, cfg, qs);
        if (!violations.empty()) {
            bool final_step = i + 1 >= trace.size() ||
                              trace[i + 1].kind == TraceRecord::Kind::kViolation;
            if (!final_step) {
                outcome.error = "intermediate state violates " +
                                violations.front().invariant_name + " at step " +
                                std::to_string(i);
                return outcome;
            }
            if (i + 1 >= trace.size()) {
                outcome.ok = true;
                outcome.violation = violations.front();
                return outcome;
            }
        }
    }
    outcome.ok = true;
    return outcome;
}

}  // namespace mpx
