#include "mpx/trace.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mpx {

namespace {

using nlohmann::ordered_json;

Fingerprint require_fp(const ordered_json& j, const char* field) {
    if (!j.contains(field) || !j.at(field).is_string()) {
        throw TraceError(std::string("trace record is missing '") + field + "'");
    }
    Fingerprint fp;
    if (!parse_fingerprint(j.at(field).get<std::string>(), fp)) {
        throw TraceError(std::string("trace record has malformed '") + field + "'");
    }
    return fp;
}

}  // namespace

TraceRecord make_init_record(const Fingerprint& state_fp) {
    TraceRecord r;
    r.kind = TraceRecord::Kind::kInit;
    r.state_fp = state_fp;
    return r;
}

TraceRecord make_action_record(const ActionLabel& label, const Fingerprint& state_fp) {
    TraceRecord r;
    r.kind = TraceRecord::Kind::kAction;
    r.label = label.kind;
    r.actor = label.actor;
    if (!label.witness.empty()) {
        r.witness_fp = fingerprint_bytes(label.witness);
    }
    r.state_fp = state_fp;
    return r;
}

TraceRecord make_violation_record(const std::string& invariant, const std::string& witness,
                                  const Fingerprint& state_fp) {
    TraceRecord r;
    r.kind = TraceRecord::Kind::kViolation;
    r.invariant = invariant;
    r.witness = witness;
    r.state_fp = state_fp;
    return r;
}

std::string trace_record_to_line(const TraceRecord& r) {
    ordered_json j;
    switch (r.kind) {
        case TraceRecord::Kind::kInit:
            j["kind"] = "init";
            break;
        case TraceRecord::Kind::kAction:
            j["kind"] = "action";
            j["label"] = action_kind_name(r.label);
            j["actor"] = r.actor;
            if (r.witness_fp) {
                j["witness_fp"] = to_hex(*r.witness_fp);
            } else {
                j["witness_fp"] = nullptr;
            }
            break;
        case TraceRecord::Kind::kViolation:
            j["kind"] = "violation";
            j["invariant"] = r.invariant;
            j["witness"] = r.witness;
            break;
    }
    j["state_fp"] = to_hex(r.state_fp);
    return j.dump();
}

TraceRecord parse_trace_line(const std::string& line) {
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw TraceError(std::string("trace line is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
        throw TraceError("trace record has no 'kind'");
    }
    std::string kind = j.at("kind").get<std::string>();
    TraceRecord r;
    r.state_fp = require_fp(j, "state_fp");
    if (kind == "init") {
        r.kind = TraceRecord::Kind::kInit;
    } else if (kind == "action") {
        r.kind = TraceRecord::Kind::kAction;
        if (!j.contains("label") || !j.at("label").is_string() ||
            !parse_action_kind(j.at("label").get<std::string>(), r.label)) {
            throw TraceError("action record has unknown 'label'");
        }
        if (!j.contains("actor") || !j.at("actor").is_number_unsigned()) {
            throw TraceError("action record is missing 'actor'");
        }
        r.actor = j.at("actor").get<uint32_t>();
        if (j.contains("witness_fp") && !j.at("witness_fp").is_null()) {
            r.witness_fp = require_fp(j, "witness_fp");
        }
    } else if (kind == "violation") {
        r.kind = TraceRecord::Kind::kViolation;
        if (!j.contains("invariant") || !j.at("invariant").is_string()) {
            throw TraceError("violation record is missing 'invariant'");
        }
        r.invariant = j.at("invariant").get<std::string>();
        if (j.contains("witness") && j.at("witness").is_string()) {
            r.witness = j.at("witness").get<std::string>();
        }
    } else {
        throw TraceError("trace record has unknown kind '" + kind + "'");
    }
    return r;
}

std::string trace_to_string(const std::vector<TraceRecord>& trace) {
    std::ostringstream os;
    for (const TraceRecord& r : trace) {
        os << trace_record_to_line(r) << "\n";
    }
    return os.str();
}

void write_trace_file(const std::string& path, const std::vector<TraceRecord>& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw TraceError("cannot open trace file '" + path + "' for writing");
    }
    out << trace_to_string(trace);
    if (!out) {
        throw TraceError("failed writing trace file '" + path + "'");
    }
}

std::vector<TraceRecord> read_trace_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw TraceError("cannot read trace file '" + path + "'");
    }
    std::vector<TraceRecord> trace;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            trace.push_back(parse_trace_line(line));
        } catch (const TraceError& e) {
            throw TraceError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return trace;
}

}  // namespace mpx
