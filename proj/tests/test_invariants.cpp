#include <doctest.h>

#include <random>
#include <string>

#include <mpx/invariants.hpp>

#include "oracle_model.hpp"

using namespace mpx;

namespace {

ModelConfig cfg_base(uint32_t proposers, uint32_t acceptors, uint32_t ballots,
                     uint32_t slots, uint32_t values) {
    ModelConfig cfg;
    cfg.num_proposers = proposers;
    cfg.num_acceptors = acceptors;
    cfg.max_ballot = ballots;
    cfg.max_slots = slots;
    cfg.num_values = values;
    return cfg;
}

bool mentions(const std::optional<ViolationReport>& r, const char* needle) {
    return r && r->witness.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("the initial state satisfies every invariant") {
    for (auto [p, a] : {std::pair{1u, 1u}, {2u, 3u}, {3u, 5u}}) {
        ModelConfig cfg = cfg_base(p, a, 2, 2, 2);
        QuorumSystem qs(cfg.num_acceptors, cfg.quorum_spec);
        GlobalState s = init(cfg);
        CHECK(check_all(s, cfg, qs).empty());
    }
}

TEST_CASE("voted_for_in matches the accept messages") {
    ModelConfig cfg = cfg_base(1, 3, 3, 2, 2);
    GlobalState s = init(cfg);
    CHECK_FALSE(voted_for_in(s, AcceptorId{0}, Value{0}, Ballot{0}, Slot{0}));

    s.msgs.insert(TwoB{Ballot{2}, make_decrees({{0, 0}, {1, 1}}), AcceptorId{0}});
    CHECK(voted_for_in(s, AcceptorId{0}, Value{0}, Ballot{2}, Slot{0}));
    CHECK(voted_for_in(s, AcceptorId{0}, Value{1}, Ballot{2}, Slot{1}));
    CHECK_FALSE(voted_for_in(s, AcceptorId{0}, Value{1}, Ballot{2}, Slot{0}));
    CHECK_FALSE(voted_for_in(s, AcceptorId{0}, Value{0}, Ballot{1}, Slot{0}));
    CHECK_FALSE(voted_for_in(s, AcceptorId{1}, Value{0}, Ballot{2}, Slot{0}));
}

TEST_CASE("a value is chosen when a full quorum votes for it in one ballot") {
    ModelConfig cfg = cfg_base(1, 3, 2, 1, 2);
    QuorumSystem qs(cfg.num_acceptors, cfg.quorum_spec);
    GlobalState s = init(cfg);

    s.msgs.insert(TwoB{Ballot{0}, make_decrees({{0, 0}}), AcceptorId{0}});
    CHECK_FALSE(chosen_in(s, Value{0}, Ballot{0}, Slot{0}, qs, cfg));
    CHECK_FALSE(chosen(s, Value{0}, Slot{0}, qs, cfg));

    s.msgs.insert(TwoB{Ballot{0}, make_decrees({{0, 0}}), AcceptorId{1}});
    CHECK(chosen_in(s, Value{0}, Ballot{0}, Slot{0}, qs, cfg));
    CHECK(chosen(s, Value{0}, Slot{0}, qs, cfg));
    CHECK_FALSE(chosen(s, Value{1}, Slot{0}, qs, cfg));

    // Votes split across ballots do not count as one choice.
    GlobalState split = init(cfg);
    split.msgs.insert(TwoB{Ballot{0}, make_decrees({{0, 0}}), AcceptorId{0}});
    split.msgs.insert(TwoB{Ballot{1}, make_decrees({{0, 0}}), AcceptorId{1}});
    CHECK_FALSE(chosen(split, Value{0}, Slot{0}, qs, cfg));
}

TEST_CASE("wont_vote_in needs a passed ballot and no vote") {
    ModelConfig cfg = cfg_base(1, 1, 4, 1, 2);
    GlobalState s = init(cfg);
    CHECK_FALSE(wont_vote_in(s, AcceptorId{0}, Ballot{1}, Slot{0}, cfg));

    s.acc_max_bal[0] = Ballot{3};
    CHECK(wont_vote_in(s, AcceptorId{0}, Ballot{1}, Slot{0}, cfg));
    CHECK_FALSE(wont_vote_in(s, AcceptorId{0}, Ballot{3}, Slot{0}, cfg));

    s.msgs.insert(TwoB{Ballot{1}, make_decrees({{0, 0}}), AcceptorId{0}});
    CHECK_FALSE(wont_vote_in(s, AcceptorId{0}, Ballot{1}, Slot{0}, cfg));
}

TEST_CASE("safe_at is vacuous at ballot zero and needs quorum support above") {
    ModelConfig cfg = cfg_base(1, 3, 3, 1, 2);
    QuorumSystem qs(cfg.num_acceptors, cfg.quorum_spec);
    GlobalState s = init(cfg);

    CHECK(safe_at(s, Value{0}, Ballot{0}, Slot{0}, qs, cfg));
    CHECK_FALSE(safe_at(s, Value{0}, Ballot{2}, Slot{0}, qs, cfg));

    // Two acceptors past ballot 1 without votes form a quorum for both
    // lower ballots.
    s.acc_max_bal[0] = Ballot{2};
    s.acc_max_bal[1] = Ballot{2};
    CHECK(safe_at(s, Value{0}, Ballot{2}, Slot{0}, qs, cfg));
    CHECK(safe_at(s, Value{1}, Ballot{2}, Slot{0}, qs, cfg));

    // A conflicting choice at a lower ballot makes other values unsafe.
    GlobalState t = init(cfg);
    t.msgs.insert(TwoB{Ballot{0}, make_decrees({{0, 1}}), AcceptorId{0}});
    t.msgs.insert(TwoB{Ballot{0}, make_decrees({{0, 1}}), AcceptorId{1}});
    t.acc_max_bal[0] = Ballot{1};
    t.acc_max_bal[1] = Ballot{1};
    t.acc_voted[0] = make_votes({{0, 0, 1}});
    t.acc_voted[1] = make_votes({{0, 0, 1}});
    CHECK(safe_at(t, Value{1}, Ballot{1}, Slot{0}, qs, cfg));
    CHECK_FALSE(safe_at(t, Value{0}, Ballot{1}, Slot{0}, qs, cfg));
}

TEST_CASE("maximum and the per-slot vote maximum") {
    CHECK(maximum({Ballot{0}}) == Ballot{0});
    CHECK(maximum({Ballot{2}, Ballot{0}, Ballot{5}}) == Ballot{5});

    CHECK(max_voted_ballot_in_slot(VoteSet{}, Slot{0}) == kNoBallot);
    VoteSet votes = make_votes({{2, 0, 0}, {5, 0, 1}, {3, 1, 0}});
    CHECK(max_voted_ballot_in_slot(votes, Slot{0}) == BallotOrNone{Ballot{5}});
    CHECK(max_voted_ballot_in_slot(votes, Slot{1}) == BallotOrNone{Ballot{3}});
    CHECK(max_voted_ballot_in_slot(votes, Slot{2}) == kNoBallot);
}

TEST_CASE("type_ok rejects out-of-universe data") {
    ModelConfig cfg = cfg_base(1, 1, 2, 1, 1);
    GlobalState s = init(cfg);
    CHECK_FALSE(type_ok(s, cfg));

    GlobalState bad_msg = s;
    bad_msg.msgs.insert(OneA{Ballot{9}, ProposerId{0}});
    CHECK(mentions(type_ok(bad_msg, cfg), "malformed message"));

    GlobalState bad_vote = s;
    bad_vote.acc_voted[0] = make_votes({{0, 0, 7}});
    bad_vote.acc_max_bal[0] = Ballot{0};
    CHECK(mentions(type_ok(bad_vote, cfg), "out-of-universe vote"));

    GlobalState bad_pro = s;
    bad_pro.pro_ballot[0] = Ballot{2};
    CHECK(mentions(type_ok(bad_pro, cfg), "pro_ballot"));

    GlobalState low_mark = s;
    low_mark.acc_voted[0] = make_votes({{1, 0, 0}});
    low_mark.acc_max_bal[0] = Ballot{0};
    CHECK(mentions(type_ok(low_mark, cfg), "below recorded vote"));

    GlobalState none_mark = s;
    none_mark.acc_voted[0] = make_votes({{0, 0, 0}});
    CHECK(mentions(type_ok(none_mark, cfg), "below recorded vote"));
}

TEST_CASE("acc_inv ties the vote record to sent accept messages") {
    ModelConfig cfg = cfg_base(1, 1, 2, 1, 1);
    GlobalState s = init(cfg);
    CHECK_FALSE(acc_inv(s, cfg));

    // Votes recorded without any ballot watermark.
    GlobalState no_mark = s;
    no_mark.acc_voted[0] = make_votes({{0, 0, 0}});
    CHECK(mentions(acc_inv(no_mark, cfg), "acc_max_bal is none"));

    // A recorded vote that was never sent.
    GlobalState ghost = s;
    ghost.acc_voted[0] = make_votes({{0, 0, 0}});
    ghost.acc_max_bal[0] = Ballot{0};
    CHECK(mentions(acc_inv(ghost, cfg), "never cast"));

    // A sent vote the record no longer dominates: both ballots were cast,
    // but the record only covers ballot 0.
    GlobalState behind = s;
    behind.msgs.insert(TwoB{Ballot{0}, make_decrees({{0, 0}}), AcceptorId{0}});
    behind.msgs.insert(TwoB{Ballot{1}, make_decrees({{0, 0}}), AcceptorId{0}});
    behind.acc_voted[0] = make_votes({{0, 0, 0}});
    behind.acc_max_bal[0] = Ballot{1};
    CHECK(mentions(acc_inv(behind, cfg), "records no vote"));

    // The honest shape passes: record matches the sent vote.
    GlobalState good = s;
    good.msgs.insert(TwoA{Ballot{1}, make_decrees({{0, 0}}), ProposerId{0}});
    good.msgs.insert(TwoB{Ballot{1}, make_decrees({{0, 0}}), AcceptorId{0}});
    good.acc_voted[0] = make_votes({{1, 0, 0}});
    good.acc_max_bal[0] = Ballot{1};
    CHECK_FALSE(acc_inv(good, cfg));
}

TEST_CASE("msg_inv_1b checks the watermark, the carried votes and the gap") {
    ModelConfig cfg = cfg_base(1, 1, 3, 1, 1);

    GlobalState above = init(cfg);
    above.msgs.insert(OneB{Ballot{1}, VoteSet{}, AcceptorId{0}});
    above.acc_max_bal[0] = Ballot{0};
    CHECK(mentions(msg_inv_1b(above, cfg), "has bal above"));

    GlobalState ghost = init(cfg);
    ghost.msgs.insert(OneB{Ballot{1}, make_votes({{0, 0, 0}}), AcceptorId{0}});
    ghost.acc_max_bal[0] = Ballot{1};
    CHECK(mentions(msg_inv_1b(ghost, cfg), "never cast"));

    // A 1b that omits a vote the sender cast below the message ballot.
    GlobalState gap = init(cfg);
    gap.msgs.insert(OneB{Ballot{2}, VoteSet{}, AcceptorId{0}});
    gap.msgs.insert(TwoA{Ballot{1}, make_decrees({{0, 0}}), ProposerId{0}});
    gap.msgs.insert(TwoB{Ballot{1}, make_decrees({{0, 0}}), AcceptorId{0}});
    gap.acc_voted[0] = make_votes({{1, 0, 0}});
    gap.acc_max_bal[0] = Ballot{2};
    CHECK(mentions(msg_inv_1b(gap, cfg), "in its gap"));

    // The same 1b is fine when it reports the vote.
    GlobalState honest = gap;
    honest.msgs.erase(Message{OneB{Ballot{2}, VoteSet{}, AcceptorId{0}}});
    honest.msgs.insert(OneB{Ballot{2}, make_votes({{1, 0, 0}}), AcceptorId{0}});
    CHECK_FALSE(msg_inv_1b(honest, cfg));
}

TEST_CASE("msg_inv_2a enforces safety, slot functionality and ballot uniqueness") {
    ModelConfig cfg = cfg_base(1, 3, 2, 1, 2);
    QuorumSystem qs(cfg.num_acceptors, cfg.quorum_spec);

    GlobalState unsafe = init(cfg);
    unsafe.msgs.insert(TwoA{Ballot{1}, make_decrees({{0, 0}}), ProposerId{0}});
    CHECK(mentions(msg_inv_2a(unsafe, cfg, qs), "unsafe decree"));

    GlobalState two_per_slot = init(cfg);
    two_per_slot.msgs.insert(TwoA{Ballot{0}, make_decrees({{0, 0}, {0, 1}}), ProposerId{0}});
    CHECK(mentions(msg_inv_2a(two_per_slot, cfg, qs), "for one slot"));

    GlobalState twice = init(cfg);
    twice.msgs.insert(TwoA{Ballot{0}, make_decrees({{0, 0}}), ProposerId{0}});
    twice.msgs.insert(TwoA{Ballot{0}, make_decrees({{0, 1}}), ProposerId{0}});
    CHECK(mentions(msg_inv_2a(twice, cfg, qs), "two 2a messages at ballot 0"));

    GlobalState fine = init(cfg);
    fine.msgs.insert(TwoA{Ballot{0}, make_decrees({{0, 0}}), ProposerId{0}});
    CHECK_FALSE(msg_inv_2a(fine, cfg, qs));
}

TEST_CASE("msg_inv_2b requires a matching proposal and a raised watermark") {
    ModelConfig cfg = cfg_base(1, 1, 2, 1, 1);

    GlobalState unmatched = init(cfg);
    unmatched.msgs.insert(TwoB{Ballot{0}, make_decrees({{0, 0}}), AcceptorId{0}});
    unmatched.acc_max_bal[0] = Ballot{0};
    CHECK(mentions(msg_inv_2b(unmatched, cfg), "no matching 2a"));

    GlobalState low = init(cfg);
    low.msgs.insert(TwoA{Ballot{0}, make_decrees({{0, 0}}), ProposerId{0}});
    low.msgs.insert(TwoB{Ballot{0}, make_decrees({{0, 0}}), AcceptorId{0}});
    CHECK(mentions(msg_inv_2b(low, cfg), "has bal above"));

    GlobalState fine = low;
    fine.acc_max_bal[0] = Ballot{0};
    fine.acc_voted[0] = make_votes({{0, 0, 0}});
    CHECK_FALSE(msg_inv_2b(fine, cfg));
}

TEST_CASE("consistency flags two chosen values in one slot") {
    ModelConfig cfg = cfg_base(1, 3, 2, 1, 2);
    QuorumSystem qs(cfg.num_acceptors, cfg.quorum_spec);

    GlobalState s = init(cfg);
    s.msgs.insert(TwoB{Ballot{0}, make_decrees({{0, 0}}), AcceptorId{0}});
    s.msgs.insert(TwoB{Ballot{0}, make_decrees({{0, 0}}), AcceptorId{1}});
    CHECK_FALSE(consistency(s, qs, cfg));

    s.msgs.insert(TwoB{Ballot{1}, make_decrees({{0, 1}}), AcceptorId{1}});
    s.msgs.insert(TwoB{Ballot{1}, make_decrees({{0, 1}}), AcceptorId{2}});
    auto r = consistency(s, qs, cfg);
    REQUIRE(r);
    CHECK(r->invariant_name == "consistency");
    CHECK(r->witness.find("slot 0") != std::string::npos);
    CHECK(r->witness.find("value 0") != std::string::npos);
    CHECK(r->witness.find("value 1") != std::string::npos);
}

TEST_CASE("check_all respects the invariant mask and the fixed order") {
    ModelConfig cfg = cfg_base(1, 1, 2, 1, 1);
    QuorumSystem qs(cfg.num_acceptors, cfg.quorum_spec);

    // Violates type_ok (watermark below vote), acc_inv (vote never cast)
    // and msg_inv_1b is untouched.
    GlobalState s = init(cfg);
    s.acc_voted[0] = make_votes({{1, 0, 0}});
    s.acc_max_bal[0] = Ballot{0};

    std::vector<ViolationReport> all = check_all(s, cfg, qs);
    REQUIRE(all.size() >= 2);
    CHECK(all[0].invariant_name == "type_ok");
    CHECK(all[1].invariant_name == "acc_inv");
    for (const ViolationReport& r : all) {
        CHECK(r.state_fingerprint == fingerprint_state(s));
    }

    ModelConfig narrowed = cfg;
    narrowed.invariants = InvariantMask{};
    narrowed.invariants.type_ok = false;
    narrowed.invariants.acc_inv = false;
    narrowed.invariants.msg_inv_1b = false;
    narrowed.invariants.msg_inv_2b = false;
    std::vector<ViolationReport> scoped = check_all(s, narrowed, qs);
    CHECK(scoped.empty());
}

TEST_CASE("predicates agree with the reference model on random states") {
    ModelConfig cfg = cfg_base(2, 3, 3, 2, 2);
    QuorumSystem qs(cfg.num_acceptors, cfg.quorum_spec);
    std::mt19937_64 rng(4242);

    for (int trial = 0; trial < 300; ++trial) {
        GlobalState s = oracle::random_state(rng, cfg);
        for (uint32_t a = 0; a < cfg.num_acceptors; ++a) {
            for (uint32_t v = 0; v < cfg.num_values; ++v) {
                for (uint32_t b = 0; b < cfg.max_ballot; ++b) {
                    for (uint32_t sl = 0; sl < cfg.max_slots; ++sl) {
                        CHECK(voted_for_in(s, AcceptorId{a}, Value{v}, Ballot{b}, Slot{sl}) ==
                              oracle::voted_for_in_oracle(s, AcceptorId{a}, Value{v},
                                                          Ballot{b}, Slot{sl}));
                        CHECK(wont_vote_in(s, AcceptorId{a}, Ballot{b}, Slot{sl}, cfg) ==
                              oracle::wont_vote_in_oracle(s, cfg, AcceptorId{a}, Ballot{b},
                                                          Slot{sl}));
                    }
                }
            }
        }
        for (uint32_t v = 0; v < cfg.num_values; ++v) {
            for (uint32_t sl = 0; sl < cfg.max_slots; ++sl) {
                CHECK(chosen(s, Value{v}, Slot{sl}, qs, cfg) ==
                      oracle::chosen_oracle_majority(s, cfg, Value{v}, Slot{sl}));
                for (uint32_t b = 0; b < cfg.max_ballot; ++b) {
                    CHECK(safe_at(s, Value{v}, Ballot{b}, Slot{sl}, qs, cfg) ==
                          oracle::safe_at_oracle(s, cfg, qs, Value{v}, Ballot{b}, Slot{sl}));
                }
            }
        }
    }
}

TEST_CASE("per-slot vote maximum agrees with the reference model") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        VoteSet votes = oracle::random_votes(rng, 8, 4, 4, 4);
        for (uint32_t sl = 0; sl < 4; ++sl) {
            CHECK(max_voted_ballot_in_slot(votes, Slot{sl}) ==
                  oracle::max_voted_ballot_in_slot_oracle(votes, Slot{sl}));
        }
    }
}
