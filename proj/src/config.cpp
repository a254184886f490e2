#include "mpx/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace mpx {

namespace {

using nlohmann::ordered_json;

const char* kKnownFields[] = {
    "num_proposers", "num_acceptors", "max_ballot",  "max_slots",
    "num_values",    "quorum_spec",   "preemption",  "minimal_quorums_only",
    "max_new_decrees_per_2a", "mutation", "mode",    "seed",
    "max_steps",     "max_states",    "invariants",
};

uint32_t get_u32(const ordered_json& j, const std::string& field) {
    const auto& v = j.at(field);
    if (!v.is_number_unsigned()) {
        throw ConfigError("field '" + field + "' must be a non-negative integer");
    }
    uint64_t raw = v.get<uint64_t>();
    if (raw > UINT32_MAX) {
        throw ConfigError("field '" + field + "' is out of range");
    }
    return static_cast<uint32_t>(raw);
}

uint64_t get_u64(const ordered_json& j, const std::string& field) {
    const auto& v = j.at(field);
    if (!v.is_number_unsigned()) {
        throw ConfigError("field '" + field + "' must be a non-negative integer");
    }
    return v.get<uint64_t>();
}

bool get_bool(const ordered_json& j, const std::string& field) {
    const auto& v = j.at(field);
    if (!v.is_boolean()) {
        throw ConfigError("field '" + field + "' must be a boolean");
    }
    return v.get<bool>();
}

QuorumSpec parse_quorum_spec(const ordered_json& v) {
    QuorumSpec spec;
    if (v.is_string()) {
        if (v.get<std::string>() != "majority") {
            throw ConfigError("field 'quorum_spec' must be \"majority\" or a list of quorums");
        }
        spec.kind = QuorumKind::kMajority;
        return spec;
    }
    if (!v.is_array()) {
        throw ConfigError("field 'quorum_spec' must be \"majority\" or a list of quorums");
    }
    spec.kind = QuorumKind::kExplicit;
    for (const auto& q : v) {
        if (!q.is_array()) {
            throw ConfigError("field 'quorum_spec': each quorum must be an array of acceptor indices");
        }
        AcceptorSet members;
        for (const auto& m : q) {
            if (!m.is_number_unsigned()) {
                throw ConfigError("field 'quorum_spec': acceptor indices must be non-negative integers");
            }
            members.insert(AcceptorId{m.get<uint32_t>()});
        }
        spec.explicit_quorums.push_back(std::move(members));
    }
    return spec;
}

InvariantMask parse_invariants(const ordered_json& v) {
    if (!v.is_array() || v.empty()) {
        throw ConfigError("field 'invariants' must be a nonempty array of invariant names");
    }
    InvariantMask mask;
    mask.type_ok = mask.acc_inv = mask.msg_inv_1b = false;
    mask.msg_inv_2a = mask.msg_inv_2b = mask.consistency = false;
    std::set<std::string> seen;
    for (const auto& e : v) {
        if (!e.is_string()) {
            throw ConfigError("field 'invariants' must contain strings");
        }
        std::string name = e.get<std::string>();
        if (!seen.insert(name).second) {
            throw ConfigError("field 'invariants' lists '" + name + "' twice");
        }
        if (name == "type_ok") mask.type_ok = true;
        else if (name == "acc_inv") mask.acc_inv = true;
        else if (name == "msg_inv_1b") mask.msg_inv_1b = true;
        else if (name == "msg_inv_2a") mask.msg_inv_2a = true;
        else if (name == "msg_inv_2b") mask.msg_inv_2b = true;
        else if (name == "consistency") mask.consistency = true;
        else throw ConfigError("field 'invariants' has unknown invariant '" + name + "'");
    }
    return mask;
}

}  // namespace

const char* mutation_name(Mutation m) {
    switch (m) {
        case Mutation::kNone: return "none";
        case Mutation::kDrop1bBallotGuard: return "drop_1b_ballot_guard";
        case Mutation::kDrop2bBallotGuard: return "drop_2b_ballot_guard";
        case Mutation::kIgnoreBmax: return "ignore_bmax";
        case Mutation::kSkipMaxBalUpdate1b: return "skip_maxbal_update_1b";
    }
    return "none";
}

const char* mode_name(RunMode m) {
    return m == RunMode::kEnumerate ? "enumerate" : "policy";
}

ModelConfig parse_config(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* f : kKnownFields) known = known || key == f;
        if (!known) {
            throw ConfigError("unknown config field '" + key + "'");
        }
    }
    for (const char* f : {"num_proposers", "num_acceptors", "max_ballot", "max_slots",
                          "num_values"}) {
        if (!j.contains(f)) {
            throw ConfigError(std::string("missing required config field '") + f + "'");
        }
    }

    ModelConfig cfg;
    cfg.num_proposers = get_u32(j, "num_proposers");
    cfg.num_acceptors = get_u32(j, "num_acceptors");
    cfg.max_ballot = get_u32(j, "max_ballot");
    cfg.max_slots = get_u32(j, "max_slots");
    cfg.num_values = get_u32(j, "num_values");
    if (j.contains("quorum_spec")) cfg.quorum_spec = parse_quorum_spec(j.at("quorum_spec"));
    if (j.contains("preemption")) cfg.preemption = get_bool(j, "preemption");
    if (j.contains("minimal_quorums_only")) {
        cfg.minimal_quorums_only = get_bool(j, "minimal_quorums_only");
    }
    if (j.contains("max_new_decrees_per_2a")) {
        cfg.max_new_decrees_per_2a = get_u32(j, "max_new_decrees_per_2a");
    }
    if (j.contains("mutation")) {
        const auto& v = j.at("mutation");
        if (!v.is_string()) throw ConfigError("field 'mutation' must be a string");
        std::string name = v.get<std::string>();
        if (name == "none") cfg.mutation = Mutation::kNone;
        else if (name == "drop_1b_ballot_guard") cfg.mutation = Mutation::kDrop1bBallotGuard;
        else if (name == "drop_2b_ballot_guard") cfg.mutation = Mutation::kDrop2bBallotGuard;
        else if (name == "ignore_bmax") cfg.mutation = Mutation::kIgnoreBmax;
        else if (name == "skip_maxbal_update_1b") cfg.mutation = Mutation::kSkipMaxBalUpdate1b;
        else throw ConfigError("field 'mutation' has unknown value '" + name + "'");
    }
    if (j.contains("mode")) {
        const auto& v = j.at("mode");
        if (!v.is_string()) throw ConfigError("field 'mode' must be a string");
        std::string name = v.get<std::string>();
        if (name == "enumerate") cfg.mode = RunMode::kEnumerate;
        else if (name == "policy") cfg.mode = RunMode::kPolicy;
        else throw ConfigError("field 'mode' must be \"enumerate\" or \"policy\"");
    }
    if (j.contains("seed")) cfg.seed = get_u64(j, "seed");
    if (j.contains("max_steps")) cfg.max_steps = get_u64(j, "max_steps");
    if (j.contains("max_states")) cfg.max_states = get_u64(j, "max_states");
    if (j.contains("invariants")) cfg.invariants = parse_invariants(j.at("invariants"));

    validate_config(cfg);
    return cfg;
}

ModelConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void validate_config(const ModelConfig& cfg) {
    auto require_positive = [](uint32_t v, const char* field) {
        if (v == 0) {
            throw ConfigError(std::string("field '") + field + "' must be at least 1");
        }
    };
    require_positive(cfg.num_proposers, "num_proposers");
    require_positive(cfg.num_acceptors, "num_acceptors");
    require_positive(cfg.max_ballot, "max_ballot");
    require_positive(cfg.max_slots, "max_slots");
    require_positive(cfg.num_values, "num_values");
    require_positive(cfg.max_new_decrees_per_2a, "max_new_decrees_per_2a");
    try {
        QuorumSystem qs(cfg.num_acceptors, cfg.quorum_spec);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("field 'quorum_spec': ") + e.what());
    }
}

nlohmann::ordered_json config_to_json(const ModelConfig& cfg) {
    ordered_json j;
    j["num_proposers"] = cfg.num_proposers;
    j["num_acceptors"] = cfg.num_acceptors;
    j["max_ballot"] = cfg.max_ballot;
    j["max_slots"] = cfg.max_slots;
    j["num_values"] = cfg.num_values;
    if (cfg.quorum_spec.kind == QuorumKind::kMajority) {
        j["quorum_spec"] = "majority";
    } else {
        ordered_json qs = ordered_json::array();
        for (const AcceptorSet& q : cfg.quorum_spec.explicit_quorums) {
            ordered_json members = ordered_json::array();
            for (const AcceptorId& a : q) members.push_back(a.index);
            qs.push_back(members);
        }
        j["quorum_spec"] = qs;
    }
    j["preemption"] = cfg.preemption;
    j["minimal_quorums_only"] = cfg.minimal_quorums_only;
    j["max_new_decrees_per_2a"] = cfg.max_new_decrees_per_2a;
    j["mutation"] = mutation_name(cfg.mutation);
    j["mode"] = mode_name(cfg.mode);
    j["seed"] = cfg.seed;
    j["max_steps"] = cfg.max_steps;
    j["max_states"] = cfg.max_states;
    ordered_json inv = ordered_json::array();
    const InvariantMask& m = cfg.invariants;
    if (m.type_ok) inv.push_back("type_ok");
    if (m.acc_inv) inv.push_back("acc_inv");
    if (m.msg_inv_1b) inv.push_back("msg_inv_1b");
    if (m.msg_inv_2a) inv.push_back("msg_inv_2a");
    if (m.msg_inv_2b) inv.push_back("msg_inv_2b");
    if (m.consistency) inv.push_back("consistency");
    j["invariants"] = inv;
    return j;
}

}  // namespace mpx
