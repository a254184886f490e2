#include "mpx/quorum.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace mpx {

namespace {

bool intersects(const AcceptorSet& x, const AcceptorSet& y) {
    for (const AcceptorId& a : x) {
        if (y.count(a)) return true;
    }
    return false;
}

std::vector<AcceptorSet> drop_non_minimal(const std::vector<AcceptorSet>& all) {
    std::vector<AcceptorSet> minimal;
    for (const AcceptorSet& q : all) {
        bool has_proper_subset = false;
        for (const AcceptorSet& other : all) {
            if (other.size() < q.size() &&
                std::includes(q.begin(), q.end(), other.begin(), other.end())) {
                has_proper_subset = true;
                break;
            }
        }
        if (!has_proper_subset) minimal.push_back(q);
    }
    return minimal;
}

}  // namespace

std::vector<AcceptorSet> majority_quorums(uint32_t num_acceptors) {
    std::vector<AcceptorSet> quorums;
    if (num_acceptors == 0 || num_acceptors > 31) {
        throw std::invalid_argument("majority quorums need 1..31 acceptors");
    }
    for (uint32_t mask = 1; mask < (1u << num_acceptors); ++mask) {
        uint32_t size = static_cast<uint32_t>(__builtin_popcount(mask));
        if (2 * size <= num_acceptors) continue;
        AcceptorSet q;
        for (uint32_t i = 0; i < num_acceptors; ++i) {
            if (mask & (1u << i)) q.insert(AcceptorId{i});
        }
        quorums.push_back(std::move(q));
    }
    std::sort(quorums.begin(), quorums.end());
    return quorums;
}

QuorumSystem::QuorumSystem(uint32_t num_acceptors, const QuorumSpec& spec)
    : num_acceptors_(num_acceptors) {
    if (num_acceptors == 0) {
        throw std::invalid_argument("acceptor set is empty");
    }
    if (spec.kind == QuorumKind::kMajority) {
        all_ = majority_quorums(num_acceptors);
    } else {
        all_ = spec.explicit_quorums;
        std::sort(all_.begin(), all_.end());
        for (size_t i = 0; i + 1 < all_.size(); ++i) {
            if (all_[i] == all_[i + 1]) {
                throw std::invalid_argument("duplicate quorum " + describe(all_[i]));
            }
        }
        for (const AcceptorSet& q : all_) {
            if (q.empty()) {
                throw std::invalid_argument("quorum must be nonempty");
            }
            for (const AcceptorId& a : q) {
                if (a.index >= num_acceptors) {
                    throw std::invalid_argument("quorum member a" + std::to_string(a.index) +
                                                " is out of range");
                }
            }
        }
    }
    if (all_.empty()) {
        throw std::invalid_argument("quorum system is empty");
    }
    if (!covers_universe()) {
        throw std::invalid_argument("quorums do not cover the acceptor set");
    }
    if (!pairwise_intersecting()) {
        throw std::invalid_argument("two quorums are disjoint");
    }
    minimal_ = drop_non_minimal(all_);
}

bool QuorumSystem::covers_universe() const {
    std::vector<bool> seen(num_acceptors_, false);
    for (const AcceptorSet& q : all_) {
        for (const AcceptorId& a : q) seen[a.index] = true;
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

bool QuorumSystem::pairwise_intersecting() const {
    for (size_t i = 0; i < all_.size(); ++i) {
        for (size_t j = i + 1; j < all_.size(); ++j) {
            if (!intersects(all_[i], all_[j])) return false;
        }
    }
    return true;
}

bool QuorumSystem::contains_quorum(const AcceptorSet& acceptors) const {
    for (const AcceptorSet& q : all_) {
        if (std::includes(acceptors.begin(), acceptors.end(), q.begin(), q.end())) {
            return true;
        }
    }
    return false;
}

std::string describe(const AcceptorSet& acceptors) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const AcceptorId& a : acceptors) {
        if (!first) os << ", ";
        first = false;
        os << "a" << a.index;
    }
    os << "}";
    return os.str();
}

}  // namespace mpx
