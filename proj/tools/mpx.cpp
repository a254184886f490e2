#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mpx/config.hpp"
#include "mpx/explorer.hpp"
#include "mpx/trace.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitVerified = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitBoundHit = 3;

ordered_json violation_to_json(const mpx::ViolationReport& v, uint64_t depth) {
    ordered_json j;
    j["invariant"] = v.invariant_name;
    j["witness"] = v.witness;
    j["state_fp"] = mpx::to_hex(v.state_fingerprint);
    j["depth"] = depth;
    return j;
}

ordered_json report_to_json(const mpx::ExplorationReport& r) {
    ordered_json j;
    j["states_explored"] = r.states_explored;
    j["edges"] = r.edges;
    j["diameter"] = r.diameter;
    j["deadlock_states"] = r.deadlock_states;
    j["complete"] = r.complete;
    j["bound_hit"] = r.bound_hit;
    if (r.violation) {
        uint64_t depth = r.trace.size() >= 2 ? r.trace.size() - 2 : 0;
        j["violation"] = violation_to_json(*r.violation, depth);
    } else {
        j["violation"] = nullptr;
    }
    j["wall_time_ms"] = r.wall_time_ms;
    return j;
}

int cmd_check(const std::string& config_path, std::optional<uint64_t> max_states,
              uint32_t workers, const std::string& trace_out) {
    mpx::ModelConfig cfg = mpx::load_config_file(config_path);
    if (max_states) cfg.max_states = *max_states;
    mpx::BfsOptions opts;
    opts.workers = workers;
    mpx::ExplorationReport report = mpx::bfs_check(cfg, opts);

    ordered_json doc;
    doc["command"] = "check";
    doc["config"] = mpx::config_to_json(cfg);
    doc["report"] = report_to_json(report);
    if (report.violation) {
        mpx::write_trace_file(trace_out, report.trace);
        doc["trace_file"] = trace_out;
    } else {
        doc["trace_file"] = nullptr;
    }
    std::cout << doc.dump(2) << "\n";
    if (report.violation) return kExitViolation;
    if (report.bound_hit) return kExitBoundHit;
    return kExitVerified;
}

int cmd_simulate(const std::string& config_path, std::optional<uint64_t> seed,
                 std::optional<uint64_t> steps, const std::string& trace_out) {
    mpx::ModelConfig cfg = mpx::load_config_file(config_path);
    if (seed) cfg.seed = *seed;
    if (steps) cfg.max_steps = *steps;
    mpx::ExplorationReport report = mpx::random_walk(cfg, cfg.seed, cfg.max_steps);

    if (trace_out.empty()) {
        std::cout << mpx::trace_to_string(report.trace);
    } else {
        mpx::write_trace_file(trace_out, report.trace);
        ordered_json doc;
        doc["command"] = "simulate";
        doc["config"] = mpx::config_to_json(cfg);
        doc["report"] = report_to_json(report);
        doc["trace_file"] = trace_out;
        std::cout << doc.dump(2) << "\n";
    }
    return report.violation ? kExitViolation : kExitVerified;
}

int cmd_replay(const std::string& trace_path, const std::string& config_path) {
    mpx::ModelConfig cfg = mpx::load_config_file(config_path);
    std::vector<mpx::TraceRecord> trace = mpx::read_trace_file(trace_path);
    mpx::ReplayOutcome outcome = mpx::replay(trace, cfg);

    ordered_json doc;
    doc["command"] = "replay";
    doc["config"] = mpx::config_to_json(cfg);
    ordered_json rep;
    rep["steps_replayed"] = outcome.steps_replayed;
    rep["faithful"] = outcome.ok;
    if (!outcome.ok) {
        rep["error"] = outcome.error;
        rep["error_step"] = outcome.error_step;
    }
    if (outcome.violation) {
        rep["violation"] = violation_to_json(*outcome.violation, outcome.steps_replayed);
    } else {
        rep["violation"] = nullptr;
    }
    doc["report"] = rep;
    std::cout << doc.dump(2) << "\n";
    if (!outcome.ok) return kExitConfigError;
    return outcome.violation ? kExitViolation : kExitVerified;
}

int cmd_validate_config(const std::string& config_path) {
    mpx::ModelConfig cfg = mpx::load_config_file(config_path);
    ordered_json doc;
    doc["command"] = "validate-config";
    doc["config"] = mpx::config_to_json(cfg);
    std::cout << doc.dump(2) << "\n";
    return kExitVerified;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounded safety checker and simulator for a multi-decree consensus protocol"};
    app.require_subcommand(1);

    std::string config_path;
    std::string check_trace_out;
    std::string sim_trace_out;
    std::string trace_path;
    std::optional<uint64_t> seed;
    std::optional<uint64_t> steps;
    std::optional<uint64_t> max_states;
    uint32_t workers = 1;

    CLI::App* check = app.add_subcommand("check", "Exhaustive breadth-first safety check");
    check->add_option("--config", config_path, "Model config JSON file")->required();
    check->add_option("--max-states", max_states, "Stop after this many states (incomplete)");
    check->add_option("--workers", workers, "Worker threads for successor generation");
    check->add_option("--trace-out", check_trace_out, "Counterexample trace path")
        ->default_val("counterexample.jsonl");

    CLI::App* simulate = app.add_subcommand("simulate", "Seeded random walk");
    simulate->add_option("--config", config_path, "Model config JSON file")->required();
    simulate->add_option("--seed", seed, "Random walk seed (overrides config)");
    simulate->add_option("--steps", steps, "Walk length (overrides config max_steps)");
    simulate->add_option("--trace-out", sim_trace_out,
                         "Write the trace here instead of standard output");

    CLI::App* replay = app.add_subcommand("replay", "Re-execute a recorded trace");
    replay->add_option("trace", trace_path, "Trace JSONL file")->required();
    replay->add_option("--config", config_path, "Model config JSON file")->required();

    CLI::App* validate = app.add_subcommand("validate-config", "Parse and echo a config");
    validate->add_option("--config", config_path, "Model config JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    try {
        if (app.got_subcommand(check)) {
            return cmd_check(config_path, max_states, workers, check_trace_out);
        }
        if (app.got_subcommand(simulate)) {
            return cmd_simulate(config_path, seed, steps, sim_trace_out);
        }
        if (app.got_subcommand(replay)) {
            return cmd_replay(trace_path, config_path);
        }
        return cmd_validate_config(config_path);
    } catch (const mpx::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const mpx::TraceError& e) {
        std::cerr << "trace error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
}
