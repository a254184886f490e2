#include <doctest.h>

#include <map>
#include <random>

#include <mpx/config.hpp>
#include <mpx/types.hpp>

#include "oracle_model.hpp"

using namespace mpx;

namespace {

ModelConfig small_cfg() {
    ModelConfig cfg;
    cfg.num_proposers = 2;
    cfg.num_acceptors = 3;
    cfg.max_ballot = 4;
    cfg.max_slots = 3;
    cfg.num_values = 3;
    return cfg;
}

}  // namespace

TEST_CASE("ballot ordering treats absent as lowest") {
    CHECK(kNoBallot < BallotOrNone{Ballot{0}});
    CHECK(BallotOrNone{Ballot{0}} < BallotOrNone{Ballot{1}});
    CHECK_FALSE(kNoBallot < kNoBallot);
    CHECK(next_ballot(kNoBallot) == Ballot{0});
    CHECK(next_ballot(BallotOrNone{Ballot{3}}) == Ballot{4});
}

TEST_CASE("message encoding is deterministic and set-order insensitive") {
    OneB a{Ballot{1}, make_votes({{2, 0, 1}, {0, 1, 2}}), AcceptorId{0}};
    OneB b{Ballot{1}, make_votes({{0, 1, 2}, {2, 0, 1}}), AcceptorId{0}};
    CHECK(canonical_encode(Message{a}) == canonical_encode(Message{b}));
    CHECK(canonical_encode(Message{a}) == canonical_encode(Message{a}));

    TwoA c{Ballot{0}, make_decrees({{0, 1}, {1, 0}}), ProposerId{1}};
    TwoA d{Ballot{0}, make_decrees({{1, 0}, {0, 1}}), ProposerId{1}};
    CHECK(canonical_encode(Message{c}) == canonical_encode(Message{d}));
}

TEST_CASE("distinct messages never share an encoding") {
    std::mt19937_64 rng(2024);
    ModelConfig cfg = small_cfg();
    std::map<Bytes, Message> seen;
    for (int i = 0; i < 3000; ++i) {
        Message m = oracle::random_message(rng, cfg);
        Bytes enc = canonical_encode(m);
        auto [it, inserted] = seen.emplace(enc, m);
        if (!inserted) {
            CHECK(it->second == m);
        }
    }
    CHECK(seen.size() > 100);
}

TEST_CASE("encodings of nearby messages differ") {
    Message base{OneA{Ballot{0}, ProposerId{0}}};
    CHECK(canonical_encode(base) !=
          canonical_encode(Message{OneA{Ballot{1}, ProposerId{0}}}));
    CHECK(canonical_encode(base) !=
          canonical_encode(Message{OneA{Ballot{0}, ProposerId{1}}}));
    CHECK(canonical_encode(base) !=
          canonical_encode(Message{Preempt{ProposerId{0}, Ballot{0}}}));
    CHECK(canonical_encode(Message{TwoA{Ballot{0}, DecreeSet{}, ProposerId{0}}}) !=
          canonical_encode(Message{TwoB{Ballot{0}, DecreeSet{}, AcceptorId{0}}}));
}

TEST_CASE("well-formedness respects the configured universes") {
    ModelConfig cfg = small_cfg();
    CHECK(message_well_formed(Message{OneA{Ballot{0}, ProposerId{0}}}, cfg));
    CHECK(message_well_formed(Message{OneA{Ballot{3}, ProposerId{1}}}, cfg));
    CHECK_FALSE(message_well_formed(Message{OneA{Ballot{4}, ProposerId{0}}}, cfg));
    CHECK_FALSE(message_well_formed(Message{OneA{Ballot{0}, ProposerId{2}}}, cfg));

    OneB ok{Ballot{2}, make_votes({{1, 2, 2}}), AcceptorId{2}};
    CHECK(message_well_formed(Message{ok}, cfg));
    OneB bad_slot{Ballot{2}, make_votes({{1, 3, 0}}), AcceptorId{2}};
    CHECK_FALSE(message_well_formed(Message{bad_slot}, cfg));
    OneB bad_from{Ballot{2}, VoteSet{}, AcceptorId{3}};
    CHECK_FALSE(message_well_formed(Message{bad_from}, cfg));

    TwoA edge{Ballot{0}, make_decrees({{2, 2}}), ProposerId{0}};
    CHECK(message_well_formed(Message{edge}, cfg));
    TwoA bad_val{Ballot{0}, make_decrees({{0, 3}}), ProposerId{0}};
    CHECK_FALSE(message_well_formed(Message{bad_val}, cfg));
    TwoB bad_bal{Ballot{4}, DecreeSet{}, AcceptorId{0}};
    CHECK_FALSE(message_well_formed(Message{bad_bal}, cfg));
    CHECK(message_well_formed(Message{Preempt{ProposerId{1}, Ballot{3}}}, cfg));
    CHECK_FALSE(message_well_formed(Message{Preempt{ProposerId{2}, Ballot{0}}}, cfg));
}

TEST_CASE("hex round trip") {
    Bytes data{0x00, 0x01, 0xab, 0xff, 0x10};
    CHECK(to_hex(data) == "0001abff10");
    REQUIRE(from_hex(to_hex(data)).has_value());
    CHECK(*from_hex(to_hex(data)) == data);
    REQUIRE(from_hex("").has_value());
    CHECK(from_hex("")->empty());
    CHECK_FALSE(from_hex("abc").has_value());
    CHECK_FALSE(from_hex("zz").has_value());
}

TEST_CASE("describe renders each message shape") {
    CHECK(describe(Message{OneA{Ballot{0}, ProposerId{0}}}) == "1a{bal 0, from p0}");
    CHECK(describe(Message{OneB{Ballot{1}, make_votes({{0, 0, 1}}), AcceptorId{2}}}) ==
          "1b{bal 1, from a2, voted {(bal 0, slot 0, val 1)}}");
    CHECK(describe(Message{TwoA{Ballot{1}, make_decrees({{0, 1}}), ProposerId{1}}}) ==
          "2a{bal 1, from p1, decrees {(slot 0, val 1)}}");
    CHECK(describe(Message{TwoB{Ballot{0}, make_decrees({{0, 0}}), AcceptorId{0}}}) ==
          "2b{bal 0, from a0, decrees {(slot 0, val 0)}}");
    CHECK(describe(Message{Preempt{ProposerId{0}, Ballot{5}}}) == "preempt{to p0, bal 5}");
}

TEST_CASE("set-valued fields render in sorted order") {
    OneB m{Ballot{2}, make_votes({{1, 1, 0}, {0, 0, 0}}), AcceptorId{1}};
    CHECK(describe(Message{m}) ==
          "1b{bal 2, from a1, voted {(bal 0, slot 0, val 0), (bal 1, slot 1, val 0)}}");
    TwoA t{Ballot{0}, make_decrees({{1, 0}, {0, 1}}), ProposerId{0}};
    CHECK(describe(Message{t}) ==
          "2a{bal 0, from p0, decrees {(slot 0, val 1), (slot 1, val 0)}}");
}
