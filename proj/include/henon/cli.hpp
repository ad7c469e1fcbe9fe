#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace henon::cli {

/// Effective configuration of one invocation. Every field is reachable as a
/// `--name` flag and as a key of the JSON config file; flags win.
struct RunConfig {
    std::string command;

    int N = 3;
    std::string alpha = "0";           ///< a value, or lo:hi:step for morse-table
    std::string alpha_range = "0.2:5.8";
    std::string F = "pow:p=3";
    std::size_t samples = 29;

    double tol = 1e-14;
    double rtol = 1e-10;
    double t0 = 1e-4;
    double a_cap = 1e6;

    std::size_t nodes = 4000;
    double T = 0.0;
    double H = 1.0;
    std::size_t n_eigs = 4;
    std::string weight = "KM2";
    double lambda_tol = 1e-4;

    int n_alpha = 0;

    double nu = 0.5;
    std::string s = "1";               ///< a value, or lo:hi:n (log-spaced)
    double s_switch = 0.0;

    std::string h = "s2";
    double m = 1.0;
    double t_max = 30.0;
    double dt = 0.5;
    double b_o = 0.0;

    std::string scan = "0.001:1000:2001";

    std::string format = "json";
    std::string out;
    std::string config;
    std::string cache_dir;
    bool no_cache = false;
    std::uint64_t seed = 0;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitNumeric = 3;

/// Parses flags and the optional config file into `cfg`. Returns kExitOk, or
/// kExitUsage after printing the problem to `err`. A help request prints to
/// `out`, returns kExitOk and leaves cfg.command empty.
int parse(const std::vector<std::string>& args, RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Canonical JSON of the settings the command depends on (the cache key input).
std::string canonical_config(const RunConfig& cfg);

/// Executes the command. The artifact goes to `out` unless cfg.out names a
/// file; a one-line summary goes to `err` (or `out` when writing a file).
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse + run.
int main_with_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace henon::cli
