#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mpx/types.hpp"

// Quorum systems over a fixed acceptor universe {0..n-1}. A quorum system
// must cover the universe and any two quorums must intersect; both
// properties are checked at construction time so the rest of the code can
// rely on them.

namespace mpx {

enum class QuorumKind {
    kMajority,  // all subsets of size > n/2
    kExplicit,  // caller-supplied list of subsets
};

struct QuorumSpec {
    QuorumKind kind = QuorumKind::kMajority;
    std::vector<AcceptorSet> explicit_quorums;  // kExplicit only
};

class QuorumSystem {
public:
    // Throws std::invalid_argument when the spec is malformed (member out
    // of range, duplicate quorum, empty system) or violates the quorum
    // axioms (non-intersecting pair).
    QuorumSystem(uint32_t num_acceptors, const QuorumSpec& spec);

    uint32_t num_acceptors() const { return num_acceptors_; }

    // All quorums, sorted; when minimal_only is set, quorums that strictly
    // contain another quorum are dropped.
    const std::vector<AcceptorSet>& quorums(bool minimal_only) const {
        return minimal_only ? minimal_ : all_;
    }

    // True when `acceptors` is a superset of some quorum.
    bool contains_quorum(const AcceptorSet& acceptors) const;

    // Axiom checks, exposed for tests; both hold for any constructed
    // system.
    bool covers_universe() const;
    bool pairwise_intersecting() const;

private:
    uint32_t num_acceptors_;
    std::vector<AcceptorSet> all_;
    std::vector<AcceptorSet> minimal_;
};

// All subsets of {0..n-1} with more than n/2 members, sorted.
std::vector<AcceptorSet> majority_quorums(uint32_t num_acceptors);

std::string describe(const AcceptorSet& acceptors);

}  // namespace mpx
