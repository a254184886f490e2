#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <boost/container/flat_set.hpp>

// Domain vocabulary for the Multi-Paxos transition system. Everything in
// this header is an immutable value with structural equality; the global
// message pool and the per-acceptor vote records are mathematical sets,
// represented as canonically sorted flat sets so that equal sets compare
// and encode identically.

namespace mpx {

struct ModelConfig;  // config.hpp

struct Ballot {
    uint32_t value = 0;
    auto operator<=>(const Ballot&) const = default;
};

// The "no ballot yet" sentinel. std::optional's ordering (empty sorts
// below every engaged value) is exactly the ordering we need.
using BallotOrNone = std::optional<Ballot>;
inline const BallotOrNone kNoBallot{};

// Smallest ballot strictly above `b`; NoBallot maps to ballot 0.
inline Ballot next_ballot(const BallotOrNone& b) {
    return b ? Ballot{b->value + 1} : Ballot{0};
}

struct Slot {
    uint32_t value = 0;
    auto operator<=>(const Slot&) const = default;
};

struct Value {
    uint32_t id = 0;
    auto operator<=>(const Value&) const = default;
};

struct AcceptorId {
    uint32_t index = 0;
    auto operator<=>(const AcceptorId&) const = default;
};

struct ProposerId {
    uint32_t index = 0;
    auto operator<=>(const ProposerId&) const = default;
};

// (ballot, slot, value) vote record, as stored in accVoted and carried by
// 1b messages.
struct VoteTriple {
    Ballot bal;
    Slot slot;
    Value val;
    auto operator<=>(const VoteTriple&) const = default;
};

// (slot, value) proposal, as carried by 2a/2b messages.
struct Decree {
    Slot slot;
    Value val;
    auto operator<=>(const Decree&) const = default;
};

using VoteSet = boost::container::flat_set<VoteTriple>;
using DecreeSet = boost::container::flat_set<Decree>;
using AcceptorSet = boost::container::flat_set<AcceptorId>;

// The five wire message kinds.

struct OneA {
    Ballot bal;
    ProposerId from;
    auto operator<=>(const OneA&) const = default;
};

struct OneB {
    Ballot bal;
    VoteSet voted;
    AcceptorId from;

    friend bool operator==(const OneB& a, const OneB& b) {
        return a.bal == b.bal && a.from == b.from && a.voted == b.voted;
    }
    friend bool operator<(const OneB& a, const OneB& b) {
        if (a.bal != b.bal) return a.bal < b.bal;
        if (a.from != b.from) return a.from < b.from;
        return a.voted < b.voted;
    }
};

struct TwoA {
    Ballot bal;
    DecreeSet decrees;
    ProposerId from;

    friend bool operator==(const TwoA& a, const TwoA& b) {
        return a.bal == b.bal && a.from == b.from && a.decrees == b.decrees;
    }
    friend bool operator<(const TwoA& a, const TwoA& b) {
        if (a.bal != b.bal) return a.bal < b.bal;
        if (a.from != b.from) return a.from < b.from;
        return a.decrees < b.decrees;
    }
};

struct TwoB {
    Ballot bal;
    DecreeSet decrees;
    AcceptorId from;

    friend bool operator==(const TwoB& a, const TwoB& b) {
        return a.bal == b.bal && a.from == b.from && a.decrees == b.decrees;
    }
    friend bool operator<(const TwoB& a, const TwoB& b) {
        if (a.bal != b.bal) return a.bal < b.bal;
        if (a.from != b.from) return a.from < b.from;
        return a.decrees < b.decrees;
    }
};

// Hint to a proposer that its ballot is stale; `bal` carries the
// acceptor's highest seen ballot.
struct Preempt {
    ProposerId to;
    Ballot bal;
    auto operator<=>(const Preempt&) const = default;
};

// Variant order fixes the canonical order of message kinds.
using Message = std::variant<OneA, OneB, TwoA, TwoB, Preempt>;
using MessageSet = boost::container::flat_set<Message>;

using Bytes = std::vector<uint8_t>;

// Little-endian fixed-width byte encoder. All canonical encodings in the
// project go through this so that injectivity arguments stay local.
class Encoder {
public:
    void put_u8(uint8_t v) { buf_.push_back(v); }
    void put_u32(uint32_t v) {
        buf_.push_back(static_cast<uint8_t>(v));
        buf_.push_back(static_cast<uint8_t>(v >> 8));
        buf_.push_back(static_cast<uint8_t>(v >> 16));
        buf_.push_back(static_cast<uint8_t>(v >> 24));
    }
    void put_ballot(const Ballot& b) { put_u32(b.value); }
    void put_ballot_or_none(const BallotOrNone& b) {
        if (b) {
            put_u8(1);
            put_u32(b->value);
        } else {
            put_u8(0);
        }
    }
    const Bytes& bytes() const { return buf_; }
    Bytes take() { return std::move(buf_); }

private:
    Bytes buf_;
};

void encode_votes(Encoder& enc, const VoteSet& votes);
void encode_decrees(Encoder& enc, const DecreeSet& decrees);
void encode_message(Encoder& enc, const Message& m);

// Deterministic, injective byte encoding of a message. Set-valued fields
// are emitted in sorted order, so structurally equal messages encode
// identically regardless of construction order.
Bytes canonical_encode(const Message& m);

// The per-message conjunct of TypeOK: every field lies in the universes
// configured for ballots, slots, values, acceptors and proposers.
bool message_well_formed(const Message& m, const ModelConfig& cfg);

// Short human-readable forms, used in violation witnesses and traces.
std::string describe(const Message& m);
std::string describe(const VoteTriple& t);
std::string describe(const Decree& d);

std::string to_hex(const Bytes& bytes);
std::optional<Bytes> from_hex(const std::string& hex);

// Convenience constructors for sets built from unsorted lists.
VoteSet make_votes(std::initializer_list<VoteTriple> ts);
DecreeSet make_decrees(std::initializer_list<Decree> ds);

}  // namespace mpx
