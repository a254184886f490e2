#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "mpx/quorum.hpp"

// Finite model bounds and run settings, loaded from a single JSON document.
// Unknown fields are rejected so typos in experiment configs fail loudly.

namespace mpx {

enum class Mutation {
    kNone,
    kDrop1bBallotGuard,    // acceptors also accept stale 1a messages
    kDrop2bBallotGuard,    // acceptors also accept stale 2a messages
    kIgnoreBmax,           // proposers propose fresh values over all slots
    kSkipMaxBalUpdate1b,   // 1b reply sent without raising acc_max_bal
};

enum class RunMode {
    kEnumerate,  // all successors (model checking)
    kPolicy,     // deterministic proposal policy (simulation)
};

// Which invariants check_all evaluates; default all. Narrowing the set lets
// a run search past shallow violations for a specific deeper one.
struct InvariantMask {
    bool type_ok = true;
    bool acc_inv = true;
    bool msg_inv_1b = true;
    bool msg_inv_2a = true;
    bool msg_inv_2b = true;
    bool consistency = true;

    bool operator==(const InvariantMask&) const = default;
    bool all() const {
        return type_ok && acc_inv && msg_inv_1b && msg_inv_2a && msg_inv_2b && consistency;
    }
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ModelConfig {
    uint32_t num_proposers = 0;
    uint32_t num_acceptors = 0;
    uint32_t max_ballot = 0;  // ballot universe is [0, max_ballot)
    uint32_t max_slots = 0;   // slot universe is [0, max_slots)
    uint32_t num_values = 0;  // value universe is [0, num_values)
    QuorumSpec quorum_spec;
    bool preemption = false;
    bool minimal_quorums_only = false;
    uint32_t max_new_decrees_per_2a = 1;
    Mutation mutation = Mutation::kNone;
    RunMode mode = RunMode::kEnumerate;
    uint64_t seed = 0;
    uint64_t max_steps = 100;
    uint64_t max_states = 10'000'000;
    InvariantMask invariants;
};

// Parses and validates; throws ConfigError naming the offending field.
ModelConfig parse_config(const std::string& json_text);
ModelConfig load_config_file(const std::string& path);

// Throws ConfigError if any bound is out of range or the quorum spec fails
// the quorum axioms. parse_config calls this; exposed for tests.
void validate_config(const ModelConfig& cfg);

// Fully-resolved echo; parse_config(config_to_json(cfg).dump()) == cfg.
nlohmann::ordered_json config_to_json(const ModelConfig& cfg);

const char* mutation_name(Mutation m);
const char* mode_name(RunMode m);

}  // namespace mpx
