#include "mpx/invariants.hpp"

#include <cassert>
#include <sstream>

namespace mpx {

namespace {

std::string ballot_or_none_str(const BallotOrNone& b) {
    return b ? std::to_string(b->value) : std::string("none");
}

ViolationReport report(const GlobalState& s, const char* name, const std::string& witness) {
    return ViolationReport{name, witness, fingerprint_state(s)};
}

}  // namespace

bool voted_for_in(const GlobalState& s, AcceptorId a, Value v, Ballot b, Slot sl) {
    for (const Message& msg : s.msgs) {
        const TwoB* m = std::get_if<TwoB>(&msg);
        if (!m || m->bal != b || m->from != a) continue;
        for (const Decree& d : m->decrees) {
            if (d.slot == sl && d.val == v) return true;
        }
    }
    return false;
}

bool chosen_in(const GlobalState& s, Value v, Ballot b, Slot sl, const QuorumSystem& qs,
               const ModelConfig& cfg) {
    for (const AcceptorSet& quorum : qs.quorums(cfg.minimal_quorums_only)) {
        bool unanimous = true;
        for (const AcceptorId& a : quorum) {
            if (!voted_for_in(s, a, v, b, sl)) {
                unanimous = false;
                break;
            }
        }
        if (unanimous) return true;
    }
    return false;
}

bool chosen(const GlobalState& s, Value v, Slot sl, const QuorumSystem& qs,
            const ModelConfig& cfg) {
    for (uint32_t b = 0; b < cfg.max_ballot; ++b) {
        if (chosen_in(s, v, Ballot{b}, sl, qs, cfg)) return true;
    }
    return false;
}

bool wont_vote_in(const GlobalState& s, AcceptorId a, Ballot b, Slot sl,
                  const ModelConfig& cfg) {
    for (uint32_t v = 0; v < cfg.num_values; ++v) {
        if (voted_for_in(s, a, Value{v}, b, sl)) return false;
    }
    return s.acc_max_bal[a.index] > BallotOrNone{b};
}

bool safe_at(const GlobalState& s, Value v, Ballot b, Slot sl, const QuorumSystem& qs,
             const ModelConfig& cfg) {
    for (uint32_t c = 0; c < b.value; ++c) {
        bool some_quorum = false;
        for (const AcceptorSet& quorum : qs.quorums(cfg.minimal_quorums_only)) {
            bool all_ok = true;
            for (const AcceptorId& a : quorum) {
                if (!voted_for_in(s, a, v, Ballot{c}, sl) &&
                    !wont_vote_in(s, a, Ballot{c}, sl, cfg)) {
                    all_ok = false;
                    break;
                }
            }
            if (all_ok) {
                some_quorum = true;
                break;
            }
        }
        if (!some_quorum) return false;
    }
    return true;
}

Ballot maximum(const std::vector<Ballot>& B) {
    assert(!B.empty());
    Ballot best = B.front();
    for (const Ballot& b : B) {
        if (b > best) best = b;
    }
    return best;
}

BallotOrNone max_voted_ballot_in_slot(const VoteSet& D, Slot sl) {
    std::vector<Ballot> ballots;
    for (const VoteTriple& t : D) {
        if (t.slot == sl) ballots.push_back(t.bal);
    }
    if (ballots.empty()) return kNoBallot;
    return maximum(ballots);
}

std::optional<ViolationReport> type_ok(const GlobalState& s, const ModelConfig& cfg) {
    for (const Message& m : s.msgs) {
        if (!message_well_formed(m, cfg)) {
            return report(s, "type_ok", "malformed message " + describe(m));
        }
    }
    for (uint32_t a = 0; a < cfg.num_acceptors; ++a) {
        for (const VoteTriple& t : s.acc_voted[a]) {
            if (t.bal.value >= cfg.max_ballot || t.slot.value >= cfg.max_slots ||
                t.val.id >= cfg.num_values) {
                return report(s, "type_ok",
                              "acc_voted[a" + std::to_string(a) + "] has out-of-universe vote " +
                                  describe(t));
            }
        }
        const BallotOrNone& mb = s.acc_max_bal[a];
        if (mb && mb->value >= cfg.max_ballot) {
            return report(s, "type_ok", "acc_max_bal[a" + std::to_string(a) +
                                            "] = " + std::to_string(mb->value) +
                                            " is out of the ballot universe");
        }
    }
    for (uint32_t p = 0; p < cfg.num_proposers; ++p) {
        if (s.pro_ballot[p].value >= cfg.max_ballot) {
            return report(s, "type_ok", "pro_ballot[p" + std::to_string(p) +
                                            "] = " + std::to_string(s.pro_ballot[p].value) +
                                            " is out of the ballot universe");
        }
    }
    for (uint32_t a = 0; a < cfg.num_acceptors; ++a) {
        for (const VoteTriple& t : s.acc_voted[a]) {
            if (!(s.acc_max_bal[a] >= BallotOrNone{t.bal})) {
                return report(s, "type_ok",
                              "acc_max_bal[a" + std::to_string(a) + "] = " +
                                  ballot_or_none_str(s.acc_max_bal[a]) +
                                  " is below recorded vote " + describe(t));
            }
        }
    }
    return std::nullopt;
}

std::optional<ViolationReport> acc_inv(const GlobalState& s, const ModelConfig& cfg) {
    for (uint32_t ai = 0; ai < cfg.num_acceptors; ++ai) {
        AcceptorId a{ai};
        const VoteSet& voted = s.acc_voted[ai];
        if (s.acc_max_bal[ai] == kNoBallot && !voted.empty()) {
            return report(s, "acc_inv", "a" + std::to_string(ai) +
                                            " has votes recorded but acc_max_bal is none");
        }
        for (const VoteTriple& t : voted) {
            if (!voted_for_in(s, a, t.val, t.bal, t.slot)) {
                return report(s, "acc_inv", "a" + std::to_string(ai) + " records vote " +
                                                describe(t) + " it never cast");
            }
        }
        for (uint32_t b = 0; b < cfg.max_ballot; ++b) {
            for (uint32_t sl = 0; sl < cfg.max_slots; ++sl) {
                for (uint32_t v = 0; v < cfg.num_values; ++v) {
                    if (!voted_for_in(s, a, Value{v}, Ballot{b}, Slot{sl})) continue;
                    bool dominated = false;
                    for (const VoteTriple& t : voted) {
                        if (t.slot.value == sl && t.bal.value >= b) {
                            dominated = true;
                            break;
                        }
                    }
                    if (!dominated) {
                        return report(s, "acc_inv",
                                      "a" + std::to_string(ai) + " voted (bal " +
                                          std::to_string(b) + ", slot " + std::to_string(sl) +
                                          ", val " + std::to_string(v) +
                                          ") but records no vote for the slot at that ballot or higher");
                    }
                }
            }
        }
        for (uint32_t b2 = 0; b2 < cfg.max_ballot; ++b2) {
            for (uint32_t sl = 0; sl < cfg.max_slots; ++sl) {
                BallotOrNone mvb = max_voted_ballot_in_slot(voted, Slot{sl});
                if (!(BallotOrNone{Ballot{b2}} > mvb)) continue;
                for (uint32_t v = 0; v < cfg.num_values; ++v) {
                    if (voted_for_in(s, a, Value{v}, Ballot{b2}, Slot{sl})) {
                        return report(s, "acc_inv",
                                      "a" + std::to_string(ai) + " voted (bal " +
                                          std::to_string(b2) + ", slot " + std::to_string(sl) +
                                          ", val " + std::to_string(v) +
                                          ") above its highest recorded ballot " +
                                          ballot_or_none_str(mvb) + " for the slot");
                    }
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<ViolationReport> msg_inv_1b(const GlobalState& s, const ModelConfig& cfg) {
    for (const Message& msg : s.msgs) {
        const OneB* m = std::get_if<OneB>(&msg);
        if (!m) continue;
        if (!(BallotOrNone{m->bal} <= s.acc_max_bal[m->from.index])) {
            return report(s, "msg_inv_1b",
                          describe(msg) + " has bal above acc_max_bal[a" +
                              std::to_string(m->from.index) + "] = " +
                              ballot_or_none_str(s.acc_max_bal[m->from.index]));
        }
        for (const VoteTriple& t : m->voted) {
            if (!voted_for_in(s, m->from, t.val, t.bal, t.slot)) {
                return report(s, "msg_inv_1b", describe(msg) + " carries vote " + describe(t) +
                                                   " its sender never cast");
            }
        }
        // No vote by the sender in the open interval between its reported
        // per-slot maximum and the message ballot.
        for (uint32_t b2 = 0; b2 < cfg.max_ballot; ++b2) {
            for (uint32_t sl = 0; sl < cfg.max_slots; ++sl) {
                BallotOrNone lo = max_voted_ballot_in_slot(m->voted, Slot{sl});
                bool in_gap = BallotOrNone{Ballot{b2}} > lo && b2 < m->bal.value;
                if (!in_gap) continue;
                for (uint32_t v = 0; v < cfg.num_values; ++v) {
                    if (voted_for_in(s, m->from, Value{v}, Ballot{b2}, Slot{sl})) {
                        return report(s, "msg_inv_1b",
                                      describe(msg) + " hides sender vote (bal " +
                                          std::to_string(b2) + ", slot " + std::to_string(sl) +
                                          ", val " + std::to_string(v) + ") in its gap");
                    }
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<ViolationReport> msg_inv_2a(const GlobalState& s, const ModelConfig& cfg,
                                          const QuorumSystem& qs) {
    for (const Message& msg : s.msgs) {
        const TwoA* m = std::get_if<TwoA>(&msg);
        if (!m) continue;
        for (const Decree& d : m->decrees) {
            if (!safe_at(s, d.val, m->bal, d.slot, qs, cfg)) {
                return report(s, "msg_inv_2a",
                              describe(msg) + " proposes unsafe decree " + describe(d));
            }
        }
        for (const Decree& d1 : m->decrees) {
            for (const Decree& d2 : m->decrees) {
                if (d1.slot == d2.slot && !(d1 == d2)) {
                    return report(s, "msg_inv_2a", describe(msg) + " has two decrees " +
                                                       describe(d1) + " and " + describe(d2) +
                                                       " for one slot");
                }
            }
        }
        for (const Message& other : s.msgs) {
            const TwoA* m2 = std::get_if<TwoA>(&other);
            if (m2 && m2->bal == m->bal && !(other == msg)) {
                return report(s, "msg_inv_2a", "two 2a messages at ballot " +
                                                   std::to_string(m->bal.value) + ": " +
                                                   describe(msg) + " and " + describe(other));
            }
        }
    }
    return std::nullopt;
}

std::optional<ViolationReport> msg_inv_2b(const GlobalState& s, const ModelConfig& cfg) {
    (void)cfg;
    for (const Message& msg : s.msgs) {
        const TwoB* m = std::get_if<TwoB>(&msg);
        if (!m) continue;
        bool matched = false;
        for (const Message& other : s.msgs) {
            const TwoA* m2 = std::get_if<TwoA>(&other);
            if (m2 && m2->bal == m->bal && m2->decrees == m->decrees) {
                matched = true;
                break;
            }
        }
        if (!matched) {
            return report(s, "msg_inv_2b", describe(msg) + " has no matching 2a message");
        }
        if (!(BallotOrNone{m->bal} <= s.acc_max_bal[m->from.index])) {
            return report(s, "msg_inv_2b",
                          describe(msg) + " has bal above acc_max_bal[a" +
                              std::to_string(m->from.index) + "] = " +
                              ballot_or_none_str(s.acc_max_bal[m->from.index]));
        }
    }
    return std::nullopt;
}

std::optional<ViolationReport> consistency(const GlobalState& s, const QuorumSystem& qs,
                                           const ModelConfig& cfg) {
    for (uint32_t sl = 0; sl < cfg.max_slots; ++sl) {
        std::vector<uint32_t> chosen_values;
        for (uint32_t v = 0; v < cfg.num_values; ++v) {
            if (chosen(s, Value{v}, Slot{sl}, qs, cfg)) chosen_values.push_back(v);
        }
        if (chosen_values.size() >= 2) {
            return report(s, "consistency",
                          "slot " + std::to_string(sl) + " has both value " +
                              std::to_string(chosen_values[0]) + " and value " +
                              std::to_string(chosen_values[1]) + " chosen");
        }
    }
    return std::nullopt;
}

std::vector<ViolationReport> check_all(const GlobalState& s, const ModelConfig& cfg,
                                       const QuorumSystem& qs) {
    std::vector<ViolationReport> out;
    const InvariantMask& mask = cfg.invariants;
    if (mask.type_ok) {
        if (auto r = type_ok(s, cfg)) out.push_back(*r);
    }
    if (mask.acc_inv) {
        if (auto r = acc_inv(s, cfg)) out.push_back(*r);
    }
    if (mask.msg_inv_1b) {
        if (auto r = msg_inv_1b(s, cfg)) out.push_back(*r);
    }
    if (mask.msg_inv_2a) {
        if (auto r = msg_inv_2a(s, cfg, qs)) out.push_back(*r);
    }
    if (mask.msg_inv_2b) {
        if (auto r = msg_inv_2b(s, cfg)) out.push_back(*r);
    }
    if (mask.consistency) {
        if (auto r = consistency(s, qs, cfg)) out.push_back(*r);
    }
    return out;
}

}  // namespace mpx
