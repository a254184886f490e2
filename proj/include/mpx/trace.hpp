#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpx/fingerprint.hpp"
#include "mpx/protocol.hpp"

// JSON Lines trace format. Three record kinds; every record carries the
// post-state fingerprint in hex:
//   {"kind":"init","state_fp":"..."}
//   {"kind":"action","label":"phase2b","actor":1,"witness_fp":"..."|null,"state_fp":"..."}
//   {"kind":"violation","invariant":"...","witness":"...","state_fp":"..."}
// witness_fp is the fingerprint of the action label's witness bytes (null
// for phase1a, which has no existential choice).

namespace mpx {

struct TraceError : std::runtime_error {
    explicit TraceError(const std::string& what) : std::runtime_error(what) {}
};

struct TraceRecord {
    enum class Kind { kInit, kAction, kViolation };

    Kind kind = Kind::kInit;
    Fingerprint state_fp;

    // kAction only.
    ActionKind label = ActionKind::kPhase1a;
    uint32_t actor = 0;
    std::optional<Fingerprint> witness_fp;

    // kViolation only.
    std::string invariant;
    std::string witness;

    bool operator==(const TraceRecord&) const = default;
};

TraceRecord make_init_record(const Fingerprint& state_fp);
TraceRecord make_action_record(const ActionLabel& label, const Fingerprint& state_fp);
TraceRecord make_violation_record(const std::string& invariant, const std::string& witness,
                                  const Fingerprint& state_fp);

std::string trace_record_to_line(const TraceRecord& r);
// Throws TraceError on malformed input.
TraceRecord parse_trace_line(const std::string& line);

std::string trace_to_string(const std::vector<TraceRecord>& trace);
void write_trace_file(const std::string& path, const std::vector<TraceRecord>& trace);
std::vector<TraceRecord> read_trace_file(const std::string& path);

}  // namespace mpx
