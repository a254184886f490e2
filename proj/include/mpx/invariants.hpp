#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mpx/config.hpp"
#include "mpx/protocol.hpp"
#include "mpx/quorum.hpp"

// Executable safety predicates over a global state: the vote/choice
// predicates, the four inductive invariants (TypeOK, AccInv, MsgInv1b/2a/2b)
// and the consistency property. Each checker returns the first failing
// witness in canonical quantifier order, so violation reports are
// deterministic.

namespace mpx {

struct ViolationReport {
    std::string invariant_name;  // type_ok, acc_inv, msg_inv_1b, msg_inv_2a,
                                 // msg_inv_2b, consistency
    std::string witness;         // textual binding of the violated quantifier instance
    Fingerprint state_fingerprint;

    bool operator==(const ViolationReport&) const = default;
};

bool voted_for_in(const GlobalState& s, AcceptorId a, Value v, Ballot b, Slot sl);
bool chosen_in(const GlobalState& s, Value v, Ballot b, Slot sl, const QuorumSystem& qs,
               const ModelConfig& cfg);
bool chosen(const GlobalState& s, Value v, Slot sl, const QuorumSystem& qs,
            const ModelConfig& cfg);
bool wont_vote_in(const GlobalState& s, AcceptorId a, Ballot b, Slot sl,
                  const ModelConfig& cfg);
bool safe_at(const GlobalState& s, Value v, Ballot b, Slot sl, const QuorumSystem& qs,
             const ModelConfig& cfg);

// Greatest element; B must be nonempty.
Ballot maximum(const std::vector<Ballot>& B);

// Highest ballot among triples on the slot; NoBallot when no triple mentions
// the slot.
BallotOrNone max_voted_ballot_in_slot(const VoteSet& D, Slot sl);

std::optional<ViolationReport> type_ok(const GlobalState& s, const ModelConfig& cfg);
std::optional<ViolationReport> acc_inv(const GlobalState& s, const ModelConfig& cfg);
std::optional<ViolationReport> msg_inv_1b(const GlobalState& s, const ModelConfig& cfg);
std::optional<ViolationReport> msg_inv_2a(const GlobalState& s, const ModelConfig& cfg,
                                          const QuorumSystem& qs);
std::optional<ViolationReport> msg_inv_2b(const GlobalState& s, const ModelConfig& cfg);
std::optional<ViolationReport> consistency(const GlobalState& s, const QuorumSystem& qs,
                                           const ModelConfig& cfg);

// Runs the checkers enabled by cfg.invariants, in the fixed order type_ok,
// acc_inv, msg_inv_1b, msg_inv_2a, msg_inv_2b, consistency.
std::vector<ViolationReport> check_all(const GlobalState& s, const ModelConfig& cfg,
                                       const QuorumSystem& qs);

}  // namespace mpx
