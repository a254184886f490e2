#pragma once

#include <array>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include <sys/wait.h>

// Minimal shell-out helper for driving the CLI binary from tests. The binary
// path and the sample-config directory come from the environment (set by the
// CTest registration).

namespace testutil {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

inline RunResult run_command(const std::string& cmd) {
    RunResult result;
    std::string wrapped = cmd + " 2>/dev/null";
    FILE* pipe = popen(wrapped.c_str(), "r");
    if (!pipe) {
        throw std::runtime_error("popen failed for: " + cmd);
    }
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        result.out.append(buf.data(), n);
    }
    int status = pclose(pipe);
    if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    }
    return result;
}

inline std::string env_or_die(const char* name) {
    const char* value = std::getenv(name);
    if (!value || !*value) {
        throw std::runtime_error(std::string("environment variable ") + name +
                                 " is not set; run through ctest or set it manually");
    }
    return value;
}

inline std::string mpx_bin() { return env_or_die("MPX_BIN"); }
inline std::string config_dir() { return env_or_die("MPX_CONFIG_DIR"); }

inline std::string make_temp_dir() {
    std::string tmpl = "/tmp/mpx_test_XXXXXX";
    char* dir = mkdtemp(tmpl.data());
    if (!dir) {
        throw std::runtime_error("mkdtemp failed");
    }
    return dir;
}

}  // namespace testutil
