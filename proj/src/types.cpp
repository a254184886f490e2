#include "mpx/types.hpp"

#include <sstream>
#include <stdexcept>

#include "mpx/config.hpp"

namespace mpx {

namespace {

// Tag bytes keep encodings of different message kinds disjoint.
constexpr uint8_t kTagOneA = 1;
constexpr uint8_t kTagOneB = 2;
constexpr uint8_t kTagTwoA = 3;
constexpr uint8_t kTagTwoB = 4;
constexpr uint8_t kTagPreempt = 5;

bool in_ballots(const Ballot& b, const ModelConfig& cfg) {
    return b.value < cfg.max_ballot;
}
bool in_slots(const Slot& s, const ModelConfig& cfg) {
    return s.value < cfg.max_slots;
}
bool in_values(const Value& v, const ModelConfig& cfg) {
    return v.id < cfg.num_values;
}
bool in_acceptors(const AcceptorId& a, const ModelConfig& cfg) {
    return a.index < cfg.num_acceptors;
}
bool in_proposers(const ProposerId& p, const ModelConfig& cfg) {
    return p.index < cfg.num_proposers;
}

}  // namespace

void encode_votes(Encoder& enc, const VoteSet& votes) {
    enc.put_u32(static_cast<uint32_t>(votes.size()));
    for (const VoteTriple& t : votes) {
        enc.put_ballot(t.bal);
        enc.put_u32(t.slot.value);
        enc.put_u32(t.val.id);
    }
}

void encode_decrees(Encoder& enc, const DecreeSet& decrees) {
    enc.put_u32(static_cast<uint32_t>(decrees.size()));
    for (const Decree& d : decrees) {
        enc.put_u32(d.slot.value);
        enc.put_u32(d.val.id);
    }
}

void encode_message(Encoder& enc, const Message& m) {
    std::visit(
        [&enc](const auto& msg) {
            using T = std::decay_t<decltype(msg)>;
            if constexpr (std::is_same_v<T, OneA>) {
                enc.put_u8(kTagOneA);
                enc.put_ballot(msg.bal);
                enc.put_u32(msg.from.index);
            } else if constexpr (std::is_same_v<T, OneB>) {
                enc.put_u8(kTagOneB);
                enc.put_ballot(msg.bal);
                enc.put_u32(msg.from.index);
                encode_votes(enc, msg.voted);
            } else if constexpr (std::is_same_v<T, TwoA>) {
                enc.put_u8(kTagTwoA);
                enc.put_ballot(msg.bal);
                enc.put_u32(msg.from.index);
                encode_decrees(enc, msg.decrees);
            } else if constexpr (std::is_same_v<T, TwoB>) {
                enc.put_u8(kTagTwoB);
                enc.put_ballot(msg.bal);
                enc.put_u32(msg.from.index);
                encode_decrees(enc, msg.decrees);
            } else {
                static_assert(std::is_same_v<T, Preempt>);
                enc.put_u8(kTagPreempt);
                enc.put_u32(msg.to.index);
                enc.put_ballot(msg.bal);
            }
        },
        m);
}

Bytes canonical_encode(const Message& m) {
    Encoder enc;
    encode_message(enc, m);
    return enc.take();
}

bool message_well_formed(const Message& m, const ModelConfig& cfg) {
    return std::visit(
        [&cfg](const auto& msg) {
            using T = std::decay_t<decltype(msg)>;
            if constexpr (std::is_same_v<T, OneA>) {
                return in_ballots(msg.bal, cfg) && in_proposers(msg.from, cfg);
            } else if constexpr (std::is_same_v<T, OneB>) {
                if (!in_ballots(msg.bal, cfg) || !in_acceptors(msg.from, cfg)) return false;
                for (const VoteTriple& t : msg.voted) {
                    if (!in_ballots(t.bal, cfg) || !in_slots(t.slot, cfg) ||
                        !in_values(t.val, cfg)) {
                        return false;
                    }
                }
                return true;
            } else if constexpr (std::is_same_v<T, TwoA>) {
                if (!in_ballots(msg.bal, cfg) || !in_proposers(msg.from, cfg)) return false;
                for (const Decree& d : msg.decrees) {
                    if (!in_slots(d.slot, cfg) || !in_values(d.val, cfg)) return false;
                }
                return true;
            } else if constexpr (std::is_same_v<T, TwoB>) {
                if (!in_ballots(msg.bal, cfg) || !in_acceptors(msg.from, cfg)) return false;
                for (const Decree& d : msg.decrees) {
                    if (!in_slots(d.slot, cfg) || !in_values(d.val, cfg)) return false;
                }
                return true;
            } else {
                static_assert(std::is_same_v<T, Preempt>);
                return in_ballots(msg.bal, cfg) && in_proposers(msg.to, cfg);
            }
        },
        m);
}

std::string describe(const VoteTriple& t) {
    std::ostringstream os;
    os << "(bal " << t.bal.value << ", slot " << t.slot.value << ", val " << t.val.id << ")";
    return os.str();
}

std::string describe(const Decree& d) {
    std::ostringstream os;
    os << "(slot " << d.slot.value << ", val " << d.val.id << ")";
    return os.str();
}

std::string describe(const Message& m) {
    std::ostringstream os;
    std::visit(
        [&os](const auto& msg) {
            using T = std::decay_t<decltype(msg)>;
            if constexpr (std::is_same_v<T, OneA>) {
                os << "1a{bal " << msg.bal.value << ", from p" << msg.from.index << "}";
            } else if constexpr (std::is_same_v<T, OneB>) {
                os << "1b{bal " << msg.bal.value << ", from a" << msg.from.index << ", voted {";
                bool first = true;
                for (const VoteTriple& t : msg.voted) {
                    if (!first) os << ", ";
                    first = false;
                    os << describe(t);
                }
                os << "}}";
            } else if constexpr (std::is_same_v<T, TwoA>) {
                os << "2a{bal " << msg.bal.value << ", from p" << msg.from.index << ", decrees {";
                bool first = true;
                for (const Decree& d : msg.decrees) {
                    if (!first) os << ", ";
                    first = false;
                    os << describe(d);
                }
                os << "}}";
            } else if constexpr (std::is_same_v<T, TwoB>) {
                os << "2b{bal " << msg.bal.value << ", from a" << msg.from.index << ", decrees {";
                bool first = true;
                for (const Decree& d : msg.decrees) {
                    if (!first) os << ", ";
                    first = false;
                    os << describe(d);
                }
                os << "}}";
            } else {
                static_assert(std::is_same_v<T, Preempt>);
                os << "preempt{to p" << msg.to.index << ", bal " << msg.bal.value << "}";
            }
        },
        m);
    return os.str();
}

std::string to_hex(const Bytes& bytes) {
    static const char* kDigits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (uint8_t b : bytes) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0xf]);
    }
    return out;
}

std::optional<Bytes> from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) return std::nullopt;
    Bytes out;
    out.reserve(hex.size() / 2);
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = nibble(hex[i]);
        int lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out.push_back(static_cast<uint8_t>((hi << 4) | lo));
    }
    return out;
}

VoteSet make_votes(std::initializer_list<VoteTriple> ts) {
    return VoteSet(ts.begin(), ts.end());
}

DecreeSet make_decrees(std::initializer_list<Decree> ds) {
    return DecreeSet(ds.begin(), ds.end());
}

}  // namespace mpx
