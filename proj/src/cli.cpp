#include "henon/cli.hpp"

#include "henon/errors.hpp"
#include "henon/format.hpp"
#include "henon/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <variant>

namespace henon::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Ref = std::variant<int RunConfig::*, double RunConfig::*, std::string RunConfig::*, std::size_t RunConfig::*,
                         bool RunConfig::*>;
static_assert(std::is_same_v<std::uint64_t, std::size_t>, "seed shares the size_t option path");

struct Opt {
    const char* name;
    const char* help;
    Ref ref;
    std::vector<std::string> commands;  ///< empty: every command
    bool keyed = true;                  ///< part of the cache key
};

const std::vector<std::pair<std::string, std::string>> kCommands = {
    {"solve", "shoot the radial ground state"},
    {"spectrum", "eigenvalues of the radial linearization (weight K or KM2)"},
    {"morse-table", "closed-form Morse indices over alpha"},
    {"sweep", "continuation in alpha with numeric Morse indices and identity checks"},
    {"bessel", "modified Bessel functions I_nu, K_nu"},
    {"verify-decay", "decay of the tail problem in the reciprocal variable"},
    {"census", "bifurcating branches at an even integer alpha"},
    {"check-F", "check the structural assumptions on a nonlinearity"},
};

const std::vector<Opt>& options() {
    static const std::vector<Opt> table = {
        {"N", "space dimension", &RunConfig::N,
         {"solve", "spectrum", "morse-table", "sweep", "verify-decay", "census", "check-F"}},
        {"alpha", "weight exponent (morse-table also takes lo:hi:step)", &RunConfig::alpha,
         {"solve", "spectrum", "morse-table", "verify-decay", "census", "check-F"}},
        {"alpha-range", "sweep interval lo:hi", &RunConfig::alpha_range, {"sweep"}},
        {"F", "nonlinearity, e.g. pow:p=3", &RunConfig::F, {"solve", "spectrum", "sweep", "check-F"}},
        {"samples", "number of sweep samples", &RunConfig::samples, {"sweep"}},
        {"tol", "relative bisection tolerance on a*", &RunConfig::tol, {"solve", "spectrum", "sweep"}},
        {"rtol", "integrator tolerance", &RunConfig::rtol, {"solve", "spectrum", "sweep"}},
        {"t0", "Frobenius start and mesh origin", &RunConfig::t0, {"solve", "spectrum", "sweep"}},
        {"a-cap", "largest shooting parameter tried", &RunConfig::a_cap, {"solve", "spectrum", "sweep"}},
        {"nodes", "coarse mesh nodes", &RunConfig::nodes, {"spectrum", "sweep"}},
        {"T", "mesh end (0: hand-off + 10/sqrt(m))", &RunConfig::T, {"spectrum", "sweep"}},
        {"H", "mesh grading length", &RunConfig::H, {"spectrum", "sweep"}},
        {"n-eigs", "eigenvalues to compute", &RunConfig::n_eigs, {"spectrum"}},
        {"weight", "K or KM2", &RunConfig::weight, {"spectrum"}},
        {"lambda-tol", "relative tolerance of the lambda_1 = -k check", &RunConfig::lambda_tol, {"sweep"}},
        {"n-alpha", "radial kernel dimension (0, 1 or 2)", &RunConfig::n_alpha, {"morse-table"}},
        {"nu", "Bessel order", &RunConfig::nu, {"bessel"}},
        {"s", "argument, or lo:hi:n log-spaced", &RunConfig::s, {"bessel"}},
        {"s-switch", "series/asymptotic switch (0: 18 + 2 nu)", &RunConfig::s_switch, {"bessel"}},
        {"source", "tail source: zero, s2, slog, s3/2", &RunConfig::h, {"verify-decay"}},
        {"m", "mass", &RunConfig::m, {"verify-decay"}},
        {"t-max", "last grid point", &RunConfig::t_max, {"verify-decay"}},
        {"dt", "grid spacing", &RunConfig::dt, {"verify-decay"}},
        {"b-o", "coefficient of the decaying homogeneous solution", &RunConfig::b_o, {"verify-decay"}},
        {"scan", "scan grid lo:hi:n (log-spaced)", &RunConfig::scan, {"check-F"}},
        {"format", "json or csv", &RunConfig::format, {}},
        {"seed", "accepted for interface stability; all algorithms are deterministic", &RunConfig::seed, {}},
        {"out", "write the artifact to this file", &RunConfig::out, {}, false},
        {"cache-dir", "cache directory (default $HENON_CACHE_DIR or ~/.cache/henon)", &RunConfig::cache_dir, {},
         false},
        {"no-cache", "bypass the result cache", &RunConfig::no_cache, {}, false},
    };
    return table;
}

bool applies(const Opt& o, const std::string& command) {
    if (o.commands.empty()) return true;
    for (const std::string& c : o.commands)
        if (c == command) return true;
    return false;
}

const Opt* find_option(const std::string& name, const std::string& command) {
    for (const Opt& o : options())
        if (name == o.name && applies(o, command)) return &o;
    return nullptr;
}

void assign_from_json(RunConfig& cfg, const Opt& o, const json& v) {
    const std::string key = o.name;
    std::visit(
        [&](auto member) {
            using T = std::remove_reference_t<decltype(cfg.*member)>;
            if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) throw UsageError("config key '" + key + "' must be a boolean");
                cfg.*member = v.get<bool>();
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (v.is_string())
                    cfg.*member = v.get<std::string>();
                else if (v.is_number())
                    cfg.*member = format_double(v.get<double>());
                else
                    throw UsageError("config key '" + key + "' must be a string");
            } else if constexpr (std::is_same_v<T, double>) {
                if (!v.is_number()) throw UsageError("config key '" + key + "' must be a number");
                cfg.*member = v.get<double>();
            } else if constexpr (std::is_same_v<T, int>) {
                if (!v.is_number_integer()) throw UsageError("config key '" + key + "' must be an integer");
                cfg.*member = v.get<int>();
            } else {
                if (!v.is_number_unsigned()) throw UsageError("config key '" + key + "' must be a non-negative integer");
                cfg.*member = v.get<T>();
            }
        },
        o.ref);
}

json value_json(const RunConfig& cfg, const Opt& o) {
    return std::visit(
        [&](auto member) -> json {
            using T = std::remove_reference_t<decltype(cfg.*member)>;
            if constexpr (std::is_same_v<T, double>)
                return format_double(cfg.*member);  // text keeps the key independent of the JSON float printer
            else
                return cfg.*member;
        },
        o.ref);
}

double to_double(const std::string& text, const std::string& what) {
    double x = 0.0;
    if (!parse_double(text, x)) throw UsageError("cannot parse " + what + " '" + text + "'");
    return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::vector<double> parse_alpha_list(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() == 1) return {to_double(parts[0], "alpha")};
    if (parts.size() != 3) throw UsageError("alpha must be a value or lo:hi:step");
    const double lo = to_double(parts[0], "alpha"), hi = to_double(parts[1], "alpha"),
                 step = to_double(parts[2], "alpha step");
    if (!(step > 0.0) || !(lo <= hi)) throw UsageError("alpha range needs lo <= hi and step > 0");
    std::vector<double> out;
    for (std::size_t j = 0;; ++j) {
        const double a = lo + static_cast<double>(j) * step;
        if (a > hi + 1e-9 * step) break;
        out.push_back(a);
    }
    return out;
}

std::vector<double> parse_log_list(const std::string& text, const std::string& what) {
    const auto parts = split(text, ':');
    if (parts.size() == 1) return {to_double(parts[0], what)};
    if (parts.size() != 3) throw UsageError(what + " must be a value or lo:hi:n");
    const double lo = to_double(parts[0], what), hi = to_double(parts[1], what);
    const double n = to_double(parts[2], what + " count");
    if (!(lo > 0.0) || !(lo < hi) || !(n >= 2.0) || n != std::floor(n))
        throw UsageError(what + " range needs 0 < lo < hi and an integer n >= 2");
    return log_grid(lo, hi, static_cast<std::size_t>(n));
}

std::pair<double, double> parse_pair(const std::string& text, const std::string& what) {
    const auto parts = split(text, ':');
    if (parts.size() != 2) throw UsageError(what + " must be lo:hi");
    return {to_double(parts[0], what), to_double(parts[1], what)};
}

double single_alpha(const RunConfig& cfg) { return to_double(cfg.alpha, "alpha"); }

void validate(const RunConfig& cfg) {
    auto positive = [](double x, const char* name) {
        if (!(x > 0.0)) throw UsageError(std::string(name) + " must be positive");
    };
    positive(cfg.tol, "tol");
    positive(cfg.rtol, "rtol");
    positive(cfg.t0, "t0");
    positive(cfg.a_cap, "a-cap");
    positive(cfg.H, "H");
    positive(cfg.lambda_tol, "lambda-tol");
    positive(cfg.m, "m");
    positive(cfg.t_max, "t-max");
    positive(cfg.dt, "dt");
    if (!(cfg.T >= 0.0)) throw UsageError("T must be >= 0");
    if (!(cfg.s_switch >= 0.0)) throw UsageError("s-switch must be >= 0");
    if (cfg.format != "json" && cfg.format != "csv") throw UsageError("format must be json or csv");
    if (cfg.weight != "K" && cfg.weight != "KM2") throw UsageError("weight must be K or KM2");
    if (cfg.command == "sweep") {
        const auto [lo, hi] = parse_pair(cfg.alpha_range, "alpha-range");
        if (!(lo < hi)) throw UsageError("alpha-range needs lo < hi");
    }
    if (cfg.command == "morse-table")
        parse_alpha_list(cfg.alpha);
    else if (cfg.command != "bessel" && cfg.command != "sweep")
        single_alpha(cfg);
    if (cfg.command == "bessel") parse_log_list(cfg.s, "s");
    if (cfg.command == "check-F") parse_log_list(cfg.scan, "scan");
}

ShootOptions shoot_options(const RunConfig& cfg) {
    ShootOptions o;
    o.tol = cfg.tol;
    o.rtol = cfg.rtol;
    o.t0 = cfg.t0;
    o.a_cap = cfg.a_cap;
    return o;
}

MeshParams mesh_params(const RunConfig& cfg) {
    MeshParams p;
    p.nodes = cfg.nodes;
    p.t0 = cfg.t0;
    p.T = cfg.T;
    p.H = cfg.H;
    return p;
}

struct Output {
    std::string text;
    std::string summary;
};

std::string emit(const RunConfig& cfg, const std::string& command, const json& j, const std::string& csv) {
    return cfg.format == "csv" ? csv : wrap_artifact(command, j);
}

Output run_solve(const RunConfig& cfg) {
    const ProblemSpec spec = ProblemSpec::make(cfg.N, single_alpha(cfg), parse_nonlinearity(cfg.F));
    const RadialProfile profile = shoot_ground_state(spec, shoot_options(cfg));
    const SolveArtifact a = make_solve_artifact(profile, spec);
    return {emit(cfg, "solve", a, to_csv(profile)),
            "solve N=" + std::to_string(a.N) + " alpha=" + format_double(a.alpha) + " F=" + a.F +
                " a*=" + format_double(a.a_star) + " delta=" + format_double(a.delta_fit)};
}

Output run_spectrum(const RunConfig& cfg) {
    const ProblemSpec spec = ProblemSpec::make(cfg.N, single_alpha(cfg), parse_nonlinearity(cfg.F));
    const RadialProfile profile = shoot_ground_state(spec, shoot_options(cfg));
    const Weight w = cfg.weight == "K" ? Weight::K : Weight::KM2;
    const SpectrumResult res = spectrum(profile, spec, w, cfg.n_eigs, mesh_params(cfg));
    const SpectrumArtifact a = make_spectrum_artifact(res, profile, spec);
    std::string summary = std::string("spectrum ") + to_string(w) + " lambda1=" +
                          (a.eigenvalues.empty() ? std::string("-") : format_double(a.eigenvalues[0])) +
                          " negative=" + std::to_string(a.negative_count);
    return {emit(cfg, "spectrum", a, to_csv(a)), summary};
}

Output run_morse_table(const RunConfig& cfg) {
    MorseTable t;
    t.N = cfg.N;
    for (double alpha : parse_alpha_list(cfg.alpha)) {
        if (is_bifurcation_value(alpha)) {
            t.rows.push_back(morse_report(alpha, cfg.N, cfg.n_alpha, Side::Left));
            t.rows.push_back(morse_report(alpha, cfg.N, cfg.n_alpha, Side::Right));
        } else {
            t.rows.push_back(morse_report(alpha, cfg.N, cfg.n_alpha));
        }
    }
    return {emit(cfg, "morse-table", t, to_csv(t)), "morse-table N=" + std::to_string(cfg.N) + " rows=" +
                                                         std::to_string(t.rows.size())};
}

Output run_sweep(const RunConfig& cfg) {
    const auto [lo, hi] = parse_pair(cfg.alpha_range, "alpha-range");
    SweepOptions o;
    o.mesh = mesh_params(cfg);
    o.shoot = shoot_options(cfg);
    SweepArtifact a;
    a.sweep = sweep(cfg.N, parse_nonlinearity(cfg.F), lo, hi, cfg.samples, o);
    if (!a.sweep.samples.empty()) a.identities = verify_identity_suite(a.sweep, cfg.lambda_tol);
    std::size_t ok = 0;
    for (const SweepSample& s : a.sweep.samples) ok += s.ok ? 1 : 0;
    return {emit(cfg, "sweep", a, to_csv(a.sweep)),
            "sweep samples=" + std::to_string(a.sweep.samples.size()) + " solved=" + std::to_string(ok) +
                " jumps=" + std::to_string(a.sweep.detected_jumps.size()) +
                " identities=" + (a.identities.passed ? "pass" : "FAIL")};
}

Output run_bessel(const RunConfig& cfg) {
    BesselTable t;
    BesselOptions o;
    o.s_switch = cfg.s_switch;
    for (double s : parse_log_list(cfg.s, "s")) t.rows.push_back(bessel_ik(cfg.nu, s, o));
    double worst = 0.0;
    for (const BesselPair& p : t.rows) worst = std::max(worst, std::fabs(p.wronskian() * p.s + 1.0));
    return {emit(cfg, "bessel", t, to_csv(t)), "bessel nu=" + format_double(cfg.nu) + " points=" +
                                                   std::to_string(t.rows.size()) +
                                                   " max|s W + 1|=" + format_double(worst)};
}

Output run_verify_decay(const RunConfig& cfg) {
    std::vector<double> grid;
    for (std::size_t j = 1;; ++j) {
        const double t = static_cast<double>(j) * cfg.dt;
        if (t > cfg.t_max * (1.0 + 1e-12)) break;
        grid.push_back(t);
    }
    DecayOptions o;
    o.b_o = cfg.b_o;
    const DecayReport r = verify_superexp_decay(parse_tail_source(cfg.h), single_alpha(cfg), cfg.m, cfg.N, grid, o);
    return {emit(cfg, "verify-decay", r, to_csv(r)),
            "verify-decay decade_ratio=" + format_double(r.decade_ratio) + " monotone=" +
                (r.monotone ? "yes" : "no") + " max_residual=" + format_double(r.max_residual)};
}

Output run_census(const RunConfig& cfg) {
    const double alpha = single_alpha(cfg);
    if (alpha != std::round(alpha)) throw DomainError("census needs an even integer alpha");
    const BranchReport b = branch_census(static_cast<int>(alpha), cfg.N);
    return {emit(cfg, "census", b, to_csv(b)),
            "census alpha=" + std::to_string(b.alpha_i) + " branches=" + std::to_string(b.branch_count)};
}

Output run_check_f(const RunConfig& cfg) {
    CheckFArtifact a;
    const NonlinearitySpec F = parse_nonlinearity(cfg.F).with_dimension(cfg.N);
    a.F = F.to_string();
    a.alpha = single_alpha(cfg);
    a.N = cfg.N;
    const std::vector<double> grid = parse_log_list(cfg.scan, "scan");
    a.report = check_assumptions(F, grid, a.alpha);
    return {emit(cfg, "check-F", a, to_csv(a)),
            "check-F " + a.F + " all_pass=" + (a.report.all_pass() ? "yes" : "no")};
}

Output dispatch(const RunConfig& cfg) {
    const std::string& c = cfg.command;
    if (c == "solve") return run_solve(cfg);
    if (c == "spectrum") return run_spectrum(cfg);
    if (c == "morse-table") return run_morse_table(cfg);
    if (c == "sweep") return run_sweep(cfg);
    if (c == "bessel") return run_bessel(cfg);
    if (c == "verify-decay") return run_verify_decay(cfg);
    if (c == "census") return run_census(cfg);
    if (c == "check-F") return run_check_f(cfg);
    throw UsageError("unknown command '" + c + "'");
}

bool cacheable(const std::string& command) {
    return command == "solve" || command == "spectrum" || command == "sweep" || command == "verify-decay";
}

fs::path cache_root(const RunConfig& cfg) {
    if (!cfg.cache_dir.empty()) return cfg.cache_dir;
    if (const char* env = std::getenv("HENON_CACHE_DIR"); env && *env) return env;
    if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "henon";
    return ".henon-cache";
}

std::string hex64(std::uint64_t x) {
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << x;
    return s.str();
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

std::string canonical_config(const RunConfig& cfg) {
    json j = json::object();
    j["command"] = cfg.command;
    for (const Opt& o : options())
        if (o.keyed && applies(o, cfg.command)) j[o.name] = value_json(cfg, o);
    return j.dump();
}

int parse(const std::vector<std::string>& args, RunConfig& cfg, std::ostream& out, std::ostream& err) {
    CLI::App app{"Ground states, spectra and Morse indices of weighted semilinear problems", "henon"};
    app.require_subcommand(1, 1);
    std::map<std::string, CLI::App*> subs;
    for (const auto& [c, description] : kCommands) {
        CLI::App* sub = app.add_subcommand(c, description);
        subs[c] = sub;
        for (const Opt& o : options()) {
            if (!applies(o, c)) continue;
            const std::string flag = std::string("--") + o.name;
            std::visit(
                [&](auto member) {
                    using T = std::remove_reference_t<decltype(cfg.*member)>;
                    if constexpr (std::is_same_v<T, bool>)
                        sub->add_flag(flag, cfg.*member, o.help);
                    else
                        sub->add_option(flag, cfg.*member, o.help);
                },
                o.ref);
        }
        sub->add_option("--config", cfg.config, "JSON file with option values (flags take precedence)");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help: cfg.command stays empty and run() is skipped
            out << app.help("", CLI::AppFormatMode::All);
            return kExitOk;
        }
        err << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    for (const auto& [name, sub] : subs)
        if (sub->parsed()) cfg.command = name;

    try {
        if (!cfg.config.empty()) {
            std::ifstream in(cfg.config);
            if (!in) throw UsageError("cannot read config file " + cfg.config);
            json j;
            try {
                j = json::parse(in);
            } catch (const json::parse_error& e) {
                throw UsageError("config file is not valid JSON: " + std::string(e.what()));
            }
            if (!j.is_object()) throw UsageError("config file must hold a JSON object");
            CLI::App* sub = subs.at(cfg.command);
            for (const auto& [key, value] : j.items()) {
                const Opt* o = find_option(key, cfg.command);
                if (!o) throw UsageError("unknown config key '" + key + "' for " + cfg.command);
                if (sub->get_option(std::string("--") + key)->count() > 0) continue;
                assign_from_json(cfg, *o, value);
            }
        }
        validate(cfg);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const bool use_cache = cacheable(cfg.command) && !cfg.no_cache;
        fs::path cache_file;
        Output result;
        bool hit = false;
        if (use_cache) {
            const std::string key = canonical_config(cfg);
            cache_file = cache_root(cfg) / (cfg.command + "-" + hex64(fnv1a64(key)) + "." + cfg.format);
            if (fs::exists(cache_file)) {
                result.text = read_file(cache_file);
                result.summary = cfg.command + " (cached " + cache_file.filename().string() + ")";
                hit = true;
            }
        }
        if (!hit) {
            result = dispatch(cfg);
            if (use_cache) write_atomic(cache_file, result.text);
        }
        if (cfg.out.empty()) {
            out << result.text;
            err << result.summary << "\n";
        } else {
            write_atomic(cfg.out, result.text);
            out << result.summary << " -> " << cfg.out << "\n";
        }
        return kExitOk;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}

int main_with_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    const int rc = parse(args, cfg, out, err);
    if (rc != kExitOk || cfg.command.empty()) return rc;
    return run(cfg, out, err);
}

}  // namespace henon::cli
