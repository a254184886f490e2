#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mpx/config.hpp"
#include "mpx/fingerprint.hpp"
#include "mpx/quorum.hpp"
#include "mpx/types.hpp"

// The Multi-Paxos transition system: four global variables and the guarded
// actions over them, each implemented as a pure function from a state to the
// full set of labeled successor states. Nondeterminism (which message is
// read, which quorum backs a proposal, which decrees are proposed) is
// materialized as one successor per witness, so the explorer sees every
// branch and a simulator can sample one.

namespace mpx {

struct GlobalState {
    MessageSet msgs;
    std::vector<VoteSet> acc_voted;        // indexed by acceptor
    std::vector<BallotOrNone> acc_max_bal; // indexed by acceptor
    std::vector<Ballot> pro_ballot;        // indexed by proposer

    bool operator==(const GlobalState&) const = default;
};

enum class ActionKind : uint8_t {
    kPhase1a = 0,
    kPhase1b = 1,
    kPhase2a = 2,
    kPhase2b = 3,
    kPreempt = 4,
};

const char* action_kind_name(ActionKind k);
bool parse_action_kind(const std::string& name, ActionKind& out);
bool action_actor_is_proposer(ActionKind k);

// Identifies one transition: the action, the acting process, and the
// canonical encoding of the action's existential choices (empty for Phase1a,
// whose sent message is determined by the state). Labels order
// lexicographically by (kind, actor, witness); the explorer uses this order
// to break ties deterministically.
struct ActionLabel {
    ActionKind kind = ActionKind::kPhase1a;
    uint32_t actor = 0;  // proposer index for 1a/2a/preempt, acceptor index for 1b/2b
    Bytes witness;

    auto operator<=>(const ActionLabel&) const = default;
};

std::string describe(const ActionLabel& label);

using Successor = std::pair<ActionLabel, GlobalState>;
using SuccessorList = std::vector<Successor>;

// Deterministic injective encoding of the four variables; input to the state
// fingerprint.
Bytes encode_state(const GlobalState& s);
Fingerprint fingerprint_state(const GlobalState& s);

GlobalState init(const ModelConfig& cfg);

SuccessorList phase1a_successors(const GlobalState& s, ProposerId p, const ModelConfig& cfg);
SuccessorList phase1b_successors(const GlobalState& s, AcceptorId a, const ModelConfig& cfg);
SuccessorList phase2a_successors(const GlobalState& s, ProposerId p, const ModelConfig& cfg,
                                 const QuorumSystem& qs);
SuccessorList phase2b_successors(const GlobalState& s, AcceptorId a, const ModelConfig& cfg);
SuccessorList preempt_successors(const GlobalState& s, ProposerId p, const ModelConfig& cfg);

// All successors of all processes, sorted by label, deduplicated by successor
// fingerprint (the canonically least label is kept for each state).
SuccessorList next_successors(const GlobalState& s, const ModelConfig& cfg,
                              const QuorumSystem& qs);

// Decree selection for Phase2a.

// Highest-ballot vote per slot, as a decree set. The literal comprehension:
// a triple survives if no triple on the same slot has a higher ballot, so
// tied inputs (unreachable in honest runs) can yield several decrees for one
// slot.
DecreeSet bmax(const VoteSet& T);

// Slots in [0, max_slots) not mentioned by any triple.
std::vector<Slot> free_slots(const VoteSet& T, const ModelConfig& cfg);

// Candidate sets of fresh decrees over the free slots, at most one decree
// per slot. Enumerate mode returns every nonempty candidate with size up to
// max_new_decrees_per_2a; policy mode returns the single lowest-slot,
// lowest-value choice. When there is no free slot, both return {empty set}
// so Phase2a can still fire on bmax alone.
std::vector<DecreeSet> new_proposals(const VoteSet& T, const ModelConfig& cfg, RunMode mode);

// { bmax(T) union D : D in new_proposals(T) }.
std::vector<DecreeSet> propose_decrees(const VoteSet& T, const ModelConfig& cfg, RunMode mode);

// Smallest ballot above bb that no 1a message has used yet; nullopt when the
// ballot universe is exhausted.
BallotOrNone new_ballot(const GlobalState& s, Ballot bb, const ModelConfig& cfg);

}  // namespace mpx
