#include "mpx/protocol.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

namespace mpx {

namespace {

// Branch discriminator appended to 1b/2b witnesses. Normally the ballot
// guard selects the branch, but the guard-drop mutations can enable both
// branches for one message, and labels must stay unique per successor.
constexpr uint8_t kBranchAccept = 0;
constexpr uint8_t kBranchPreemptReply = 1;

Bytes message_witness(const Message& m, uint8_t branch) {
    Encoder enc;
    encode_message(enc, m);
    enc.put_u8(branch);
    return enc.take();
}

Bytes quorum_decrees_witness(const AcceptorSet& quorum, const DecreeSet& decrees) {
    Encoder enc;
    enc.put_u32(static_cast<uint32_t>(quorum.size()));
    for (const AcceptorId& a : quorum) enc.put_u32(a.index);
    encode_decrees(enc, decrees);
    return enc.take();
}

void sort_and_dedupe(SuccessorList& successors) {
    std::sort(successors.begin(), successors.end(),
              [](const Successor& x, const Successor& y) { return x.first < y.first; });
    std::vector<std::pair<Fingerprint, size_t>> seen;
    SuccessorList out;
    out.reserve(successors.size());
    for (Successor& succ : successors) {
        Fingerprint fp = fingerprint_state(succ.second);
        bool duplicate = false;
        for (const auto& [known_fp, idx] : seen) {
            if (known_fp == fp) {
                assert(out[idx].second == succ.second);
                duplicate = true;
                break;
            }
        }
        if (!duplicate) {
            seen.emplace_back(fp, out.size());
            out.push_back(std::move(succ));
        }
    }
    successors = std::move(out);
}

// One choice of 1b message per quorum member; without mutations each member
// has at most one candidate per ballot.
void enumerate_onebs(const std::vector<std::vector<const OneB*>>& per_member, size_t idx,
                     std::vector<const OneB*>& picked,
                     const std::function<void(const std::vector<const OneB*>&)>& emit) {
    if (idx == per_member.size()) {
        emit(picked);
        return;
    }
    for (const OneB* m : per_member[idx]) {
        picked.push_back(m);
        enumerate_onebs(per_member, idx + 1, picked, emit);
        picked.pop_back();
    }
}

}  // namespace

const char* action_kind_name(ActionKind k) {
    switch (k) {
        case ActionKind::kPhase1a: return "phase1a";
        case ActionKind::kPhase1b: return "phase1b";
        case ActionKind::kPhase2a: return "phase2a";
        case ActionKind::kPhase2b: return "phase2b";
        case ActionKind::kPreempt: return "preempt";
    }
    return "phase1a";
}

bool parse_action_kind(const std::string& name, ActionKind& out) {
    if (name == "phase1a") out = ActionKind::kPhase1a;
    else if (name == "phase1b") out = ActionKind::kPhase1b;
    else if (name == "phase2a") out = ActionKind::kPhase2a;
    else if (name == "phase2b") out = ActionKind::kPhase2b;
    else if (name == "preempt") out = ActionKind::kPreempt;
    else return false;
    return true;
}

bool action_actor_is_proposer(ActionKind k) {
    return k == ActionKind::kPhase1a || k == ActionKind::kPhase2a || k == ActionKind::kPreempt;
}

std::string describe(const ActionLabel& label) {
    std::ostringstream os;
    os << action_kind_name(label.kind) << "("
       << (action_actor_is_proposer(label.kind) ? "p" : "a") << label.actor << ")";
    return os.str();
}

Bytes encode_state(const GlobalState& s) {
    Encoder enc;
    enc.put_u32(static_cast<uint32_t>(s.msgs.size()));
    for (const Message& m : s.msgs) encode_message(enc, m);
    enc.put_u32(static_cast<uint32_t>(s.acc_voted.size()));
    for (const VoteSet& votes : s.acc_voted) encode_votes(enc, votes);
    for (const BallotOrNone& b : s.acc_max_bal) enc.put_ballot_or_none(b);
    enc.put_u32(static_cast<uint32_t>(s.pro_ballot.size()));
    for (const Ballot& b : s.pro_ballot) enc.put_ballot(b);
    return enc.take();
}

Fingerprint fingerprint_state(const GlobalState& s) {
    return fingerprint_bytes(encode_state(s));
}

GlobalState init(const ModelConfig& cfg) {
    validate_config(cfg);
    GlobalState s;
    s.acc_voted.resize(cfg.num_acceptors);
    s.acc_max_bal.assign(cfg.num_acceptors, kNoBallot);
    s.pro_ballot.assign(cfg.num_proposers, Ballot{0});
    return s;
}

SuccessorList phase1a_successors(const GlobalState& s, ProposerId p, const ModelConfig& cfg) {
    (void)cfg;
    Ballot bal = s.pro_ballot[p.index];
    for (const Message& m : s.msgs) {
        if (const OneA* one_a = std::get_if<OneA>(&m); one_a && one_a->bal == bal) {
            return {};
        }
    }
    GlobalState next = s;
    next.msgs.insert(OneA{bal, p});
    return {{ActionLabel{ActionKind::kPhase1a, p.index, {}}, std::move(next)}};
}

SuccessorList phase1b_successors(const GlobalState& s, AcceptorId a, const ModelConfig& cfg) {
    SuccessorList out;
    const BallotOrNone& max_bal = s.acc_max_bal[a.index];
    for (const Message& msg : s.msgs) {
        const OneA* m = std::get_if<OneA>(&msg);
        if (!m) continue;
        bool fresh = BallotOrNone{m->bal} > max_bal;
        bool accept = fresh || cfg.mutation == Mutation::kDrop1bBallotGuard;
        if (accept) {
            GlobalState next = s;
            next.msgs.insert(OneB{m->bal, s.acc_voted[a.index], a});
            if (cfg.mutation != Mutation::kSkipMaxBalUpdate1b) {
                next.acc_max_bal[a.index] = m->bal;
            }
            out.push_back({ActionLabel{ActionKind::kPhase1b, a.index,
                                       message_witness(msg, kBranchAccept)},
                           std::move(next)});
        }
        if (!fresh && cfg.preemption) {
            GlobalState next = s;
            next.msgs.insert(Preempt{m->from, *max_bal});
            out.push_back({ActionLabel{ActionKind::kPhase1b, a.index,
                                       message_witness(msg, kBranchPreemptReply)},
                           std::move(next)});
        }
    }
    sort_and_dedupe(out);
    return out;
}

SuccessorList phase2b_successors(const GlobalState& s, AcceptorId a, const ModelConfig& cfg) {
    SuccessorList out;
    const BallotOrNone& max_bal = s.acc_max_bal[a.index];
    for (const Message& msg : s.msgs) {
        const TwoA* m = std::get_if<TwoA>(&msg);
        if (!m) continue;
        bool fresh = BallotOrNone{m->bal} >= max_bal;
        bool accept = fresh || cfg.mutation == Mutation::kDrop2bBallotGuard;
        if (accept) {
            GlobalState next = s;
            next.msgs.insert(TwoB{m->bal, m->decrees, a});
            next.acc_max_bal[a.index] = m->bal;
            VoteSet votes;
            for (const Decree& d : m->decrees) {
                votes.insert(VoteTriple{m->bal, d.slot, d.val});
            }
            for (const VoteTriple& e : s.acc_voted[a.index]) {
                bool mentioned = false;
                for (const Decree& r : m->decrees) mentioned = mentioned || e.slot == r.slot;
                if (!mentioned) votes.insert(e);
            }
            next.acc_voted[a.index] = std::move(votes);
            out.push_back({ActionLabel{ActionKind::kPhase2b, a.index,
                                       message_witness(msg, kBranchAccept)},
                           std::move(next)});
        }
        if (!fresh && cfg.preemption) {
            GlobalState next = s;
            next.msgs.insert(Preempt{m->from, *max_bal});
            out.push_back({ActionLabel{ActionKind::kPhase2b, a.index,
                                       message_witness(msg, kBranchPreemptReply)},
                           std::move(next)});
        }
    }
    sort_and_dedupe(out);
    return out;
}

DecreeSet bmax(const VoteSet& T) {
    DecreeSet out;
    for (const VoteTriple& t : T) {
        bool dominant = true;
        for (const VoteTriple& t2 : T) {
            if (t2.slot == t.slot && !(t2.bal <= t.bal)) {
                dominant = false;
                break;
            }
        }
        if (dominant) out.insert(Decree{t.slot, t.val});
    }
    return out;
}

std::vector<Slot> free_slots(const VoteSet& T, const ModelConfig& cfg) {
    std::vector<Slot> out;
    for (uint32_t s = 0; s < cfg.max_slots; ++s) {
        bool mentioned = false;
        for (const VoteTriple& t : T) mentioned = mentioned || t.slot.value == s;
        if (!mentioned) out.push_back(Slot{s});
    }
    return out;
}

std::vector<DecreeSet> new_proposals(const VoteSet& T, const ModelConfig& cfg, RunMode mode) {
    std::vector<Slot> fs = free_slots(T, cfg);
    if (fs.empty()) {
        return {DecreeSet{}};
    }
    if (mode == RunMode::kPolicy) {
        return {DecreeSet{Decree{fs.front(), Value{0}}}};
    }
    std::vector<DecreeSet> out;
    uint32_t cap = std::min<uint32_t>(cfg.max_new_decrees_per_2a,
                                      static_cast<uint32_t>(fs.size()));
    DecreeSet current;
    // One decree per chosen slot, sets of size 1..cap.
    auto recurse = [&](auto&& self, size_t slot_idx) -> void {
        if (!current.empty()) out.push_back(current);
        if (current.size() == cap || slot_idx == fs.size()) return;
        for (size_t i = slot_idx; i < fs.size(); ++i) {
            for (uint32_t v = 0; v < cfg.num_values; ++v) {
                current.insert(Decree{fs[i], Value{v}});
                self(self, i + 1);
                current.erase(Decree{fs[i], Value{v}});
            }
        }
    };
    recurse(recurse, 0);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<DecreeSet> propose_decrees(const VoteSet& T, const ModelConfig& cfg, RunMode mode) {
    DecreeSet base = bmax(T);
    std::vector<DecreeSet> out;
    for (const DecreeSet& D : new_proposals(T, cfg, mode)) {
        DecreeSet combined = base;
        combined.insert(D.begin(), D.end());
        out.push_back(std::move(combined));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SuccessorList phase2a_successors(const GlobalState& s, ProposerId p, const ModelConfig& cfg,
                                 const QuorumSystem& qs) {
    Ballot bal = s.pro_ballot[p.index];
    for (const Message& m : s.msgs) {
        if (const TwoA* two_a = std::get_if<TwoA>(&m); two_a && two_a->bal == bal) {
            return {};
        }
    }
    SuccessorList out;
    for (const AcceptorSet& quorum : qs.quorums(cfg.minimal_quorums_only)) {
        std::vector<std::vector<const OneB*>> per_member;
        bool covered = true;
        for (const AcceptorId& a : quorum) {
            std::vector<const OneB*> candidates;
            for (const Message& msg : s.msgs) {
                const OneB* m = std::get_if<OneB>(&msg);
                if (m && m->bal == bal && m->from == a) candidates.push_back(m);
            }
            if (candidates.empty()) {
                covered = false;
                break;
            }
            per_member.push_back(std::move(candidates));
        }
        if (!covered) continue;
        std::vector<const OneB*> picked;
        const VoteSet no_votes;
        enumerate_onebs(per_member, 0, picked, [&](const std::vector<const OneB*>& chosen) {
            VoteSet T;
            for (const OneB* m : chosen) T.insert(m->voted.begin(), m->voted.end());
            const VoteSet& effective =
                cfg.mutation == Mutation::kIgnoreBmax ? no_votes : T;
            for (const DecreeSet& decrees : propose_decrees(effective, cfg, cfg.mode)) {
                GlobalState next = s;
                next.msgs.insert(TwoA{bal, decrees, p});
                out.push_back({ActionLabel{ActionKind::kPhase2a, p.index,
                                           quorum_decrees_witness(quorum, decrees)},
                               std::move(next)});
            }
        });
    }
    sort_and_dedupe(out);
    return out;
}

BallotOrNone new_ballot(const GlobalState& s, Ballot bb, const ModelConfig& cfg) {
    for (uint32_t b = bb.value + 1; b < cfg.max_ballot; ++b) {
        bool taken = false;
        for (const Message& m : s.msgs) {
            if (const OneA* one_a = std::get_if<OneA>(&m); one_a && one_a->bal.value == b) {
                taken = true;
                break;
            }
        }
        if (!taken) return Ballot{b};
    }
    return kNoBallot;
}

SuccessorList preempt_successors(const GlobalState& s, ProposerId p, const ModelConfig& cfg) {
    if (!cfg.preemption) return {};
    SuccessorList out;
    for (const Message& msg : s.msgs) {
        const Preempt* m = std::get_if<Preempt>(&msg);
        if (!m || m->to != p) continue;
        // A preempt at the proposer's own ballot also counts as stale: with
        // every proposer starting at ballot 0, requiring strictly greater
        // hints would leave the whole preemption mechanism unreachable.
        if (m->bal < s.pro_ballot[p.index]) continue;
        BallotOrNone nb = new_ballot(s, m->bal, cfg);
        if (!nb) continue;
        GlobalState next = s;
        next.pro_ballot[p.index] = *nb;
        out.push_back({ActionLabel{ActionKind::kPreempt, p.index, message_witness(msg, 0)},
                       std::move(next)});
    }
    sort_and_dedupe(out);
    return out;
}

SuccessorList next_successors(const GlobalState& s, const ModelConfig& cfg,
                              const QuorumSystem& qs) {
    SuccessorList out;
    auto append = [&out](SuccessorList&& list) {
        for (Successor& succ : list) out.push_back(std::move(succ));
    };
    for (uint32_t p = 0; p < cfg.num_proposers; ++p) {
        append(phase1a_successors(s, ProposerId{p}, cfg));
        append(phase2a_successors(s, ProposerId{p}, cfg, qs));
        append(preempt_successors(s, ProposerId{p}, cfg));
    }
    for (uint32_t a = 0; a < cfg.num_acceptors; ++a) {
        append(phase1b_successors(s, AcceptorId{a}, cfg));
        append(phase2b_successors(s, AcceptorId{a}, cfg));
    }
    sort_and_dedupe(out);
    return out;
}

}  // namespace mpx
