// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.

#include "henon/asymptotics.hpp"
#include "henon/cli.hpp"
#include "henon/continuation.hpp"
#include "henon/io.hpp"
#include "henon/linearization.hpp"
#include "henon/spectral_geometry.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace henon;

namespace {

struct CatalogueCase {
    int N;
    double p;
    double alpha;
    ProblemSpec spec;
    RadialProfile profile;
    SpectrumResult km2;
};

std::vector<CatalogueCase>& catalogue() {
    static std::vector<CatalogueCase> cases;
    return cases;
}

int failures = 0;

void report(int id, const std::string& name, const std::function<std::string(bool&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    try {
        detail = body(ok);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2d %-28s %s (%.2f s)\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::string spectral_identity(bool& ok) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_l = 0.0, worst_v = 0.0;
    for (int N : {3, 4, 5})
        for (double p : {2.0, 3.0})
            for (double alpha : {0.5, 1.0, 1.5, 2.5, 3.3}) {
                const std::string F = p == 2.0 ? "pow:p=2" : "pow:p=3";
                const ProblemSpec spec = ProblemSpec::make(N, alpha, parse_nonlinearity(F));
                if (!spec.admissible()) continue;
                RadialProfile prof = shoot_ground_state(spec);
                SpectrumResult km2 = spectrum(prof, spec, Weight::KM2, 2);
                const double k = spec.k();
                worst_l = std::max(worst_l, std::fabs(km2.eigenvalues[0] + k) / k);
                worst_v = std::max(worst_v, eigenvector_error_vs_dv(km2, prof));
                catalogue().push_back({N, p, alpha, spec, std::move(prof), std::move(km2)});
            }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok = worst_l < 1e-4 && worst_v < 1e-3 && secs < 60.0 && !catalogue().empty();
    return std::to_string(catalogue().size()) + " cases, max |l1+k|/k " + fmt(worst_l) + ", max eigvec err " +
           fmt(worst_v);
}

std::string morse_agreement(bool& ok) {
    const auto t0 = std::chrono::steady_clock::now();
    const SweepResult r = sweep(3, parse_nonlinearity("pow:p=3"), 0.2, 5.8, 29);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::size_t mismatched = 0;
    for (const SweepSample& s : r.samples)
        if (!s.ok || s.m_numeric != static_cast<std::int64_t>(s.m_closed)) ++mismatched;
    const auto inside = [](const DetectedJump& j, double c) { return j.alpha_lo >= c - 0.2 - 1e-12 && j.alpha_hi <= c + 0.2 + 1e-12; };
    const bool jumps = r.detected_jumps.size() == 2 && inside(r.detected_jumps[0], 2.0) && r.detected_jumps[0].size == 5 &&
                       inside(r.detected_jumps[1], 4.0) &&
                       r.detected_jumps[1].size == static_cast<std::int64_t>(multiplicity(3, 3));
    ok = r.samples.size() == 29 && mismatched == 0 && jumps && secs < 120.0;
    std::ostringstream d;
    d << r.samples.size() << " samples, " << mismatched << " mismatches, jumps";
    for (const DetectedJump& j : r.detected_jumps) d << " (" << j.alpha_lo << "," << j.alpha_hi << "):" << j.size;
    return d.str();
}

std::string multiplicity_oracle(bool& ok) {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t bad = 0, n = 0;
    for (int N = 3; N <= 7; ++N)
        for (int i = 0; i <= 6; ++i, ++n)
            if (multiplicity(i, N) != harmonic_dim_oracle(i, N)) ++bad;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok = bad == 0 && secs < 5.0;
    return std::to_string(n) + " pairs, " + std::to_string(bad) + " mismatches";
}

std::string degeneracy_values(bool& ok) {
    std::size_t wrong = 0, guarded = 0, roots = 0;
    for (int N = 3; N <= 7; ++N) {
        const DegeneracyScan s = scan_degeneracy_condition(N, 12, 20.0, 1e-3, 1e-9);
        guarded += s.guarded_off_even;
        std::vector<bool> seen(10, false);
        for (const auto& r : s.roots) {
            ++roots;
            const double even = 2.0 * std::round(r.alpha / 2.0);
            if (!r.exact_zero || r.alpha != even || r.alpha != 2.0 * (r.i - 1)) ++wrong;
            else seen[static_cast<std::size_t>(r.alpha / 2.0)] = true;
        }
        for (int a = 1; a <= 9; ++a)
            if (!seen[a]) ++wrong;  // alpha = 2a for i = a + 1 <= 12 must be found
    }
    ok = wrong == 0 && guarded == 0;
    return std::to_string(roots) + " roots over N=3..7, " + std::to_string(wrong) + " off-even or missing, " +
           std::to_string(guarded) + " guarded";
}

std::string symmetric_jump(bool& ok) {
    std::size_t bad = 0, n = 0;
    for (int N : {3, 4, 5})
        for (int a = 2; a < 12; a += 2, ++n)
            if (symmetric_morse_index_one_sided(a, N, Side::Right) != symmetric_morse_index_one_sided(a, N, Side::Left) + 1)
                ++bad;
    ok = bad == 0;
    return std::to_string(n) + " crossings, " + std::to_string(bad) + " not equal to 1";
}

std::string shooting_consistency(bool& ok) {
    const ProblemSpec spec = ProblemSpec::make(3, 0.0, parse_nonlinearity("pow:p=3"));
    ShootOptions a, b;
    a.rtol = 1e-10;
    b.rtol = 1e-12;
    const double x = shoot_ground_state(spec, a).a_star, y = shoot_ground_state(spec, b).a_star;
    const double rel = std::fabs(x - y) / y;
    const double pinned = 4.33738767997602;
    ok = rel < 1e-8 && std::fabs(y - pinned) / pinned < 1e-11;
    char buf[160];
    std::snprintf(buf, sizeof buf, "a* = %.14g (1e-12) vs %.14g (1e-10), rel %s", y, x, fmt(rel).c_str());
    return buf;
}

std::string decay(bool& ok) {
    double lo = INFINITY, hi = -INFINITY, worst_ni = -INFINITY;
    for (const CatalogueCase& c : catalogue()) {
        const double sm = std::sqrt(c.spec.mass());
        lo = std::min(lo, c.profile.delta_fit - sm);
        hi = std::max(hi, c.profile.delta_fit - sm);
        worst_ni = std::max(worst_ni, ni_bound_excess(c.profile));
    }
    ok = !catalogue().empty() && lo >= -0.05 && hi <= 0.01 && worst_ni <= 0.0;
    return "delta - sqrt(m) in [" + fmt(lo) + ", " + fmt(hi) + "], max bound excess " + fmt(worst_ni);
}

std::string bessel(bool& ok) {
    double worst_w = 0.0;
    for (double nu : {0.5, 1.0, 1.5, 2.3, 4.0})
        for (int j = 0; j <= 60; ++j) {
            const double s = 0.1 * std::pow(200.0, j / 60.0);
            worst_w = std::max(worst_w, std::fabs(bessel_ik(nu, s).wronskian() * s + 1.0));
        }
    double worst_h = 0.0;
    for (double s : {0.1, 1.0, 5.0, 20.0, 60.0}) {
        const BesselPair p = bessel_ik(0.5, s);
        worst_h = std::max(worst_h, std::fabs(p.I / (std::sqrt(2.0 / (M_PI * s)) * std::sinh(s)) - 1.0));
        worst_h = std::max(worst_h, std::fabs(p.K / (std::sqrt(M_PI / (2.0 * s)) * std::exp(-s)) - 1.0));
    }
    std::vector<double> grid;
    for (int i = 1; i <= 60; ++i) grid.push_back(0.5 * i);
    const DecayReport r = verify_superexp_decay(TailSource::Square, 2.0, 1.0, 3, grid);
    ok = worst_w < 1e-10 && worst_h < 1e-9 && r.decade_ratio >= 10.0;
    return "Wronskian " + fmt(worst_w) + ", half-integer " + fmt(worst_h) + ", last-decade ratio " +
           fmt(r.decade_ratio);
}

std::string nondegeneracy(bool& ok) {
    std::size_t flagged = 0;
    for (const CatalogueCase& c : catalogue()) {
        const DegeneracyResult d = degeneracy(c.profile, c.spec);
        if (d.n_alpha != 0 || d.unresolved) ++flagged;
    }
    ok = !catalogue().empty() && flagged == 0;
    return std::to_string(catalogue().size()) + " cases, " + std::to_string(flagged) + " degenerate or unresolved";
}

std::string determinism(bool& ok) {
    const auto run = [](std::vector<std::string> args) {
        std::ostringstream out, err;
        const int code = cli::main_with_args(args, out, err);
        return std::pair{code, out.str()};
    };
    const std::vector<std::pair<std::string, std::vector<std::string>>> commands = {
        {"solve", {"solve", "--alpha", "2", "--no-cache"}},
        {"spectrum", {"spectrum", "--alpha", "1.5", "--weight", "K", "--no-cache"}},
        {"morse-table", {"morse-table", "--alpha", "0.5:6:0.5"}},
        {"sweep", {"sweep", "--alpha-range", "1:3", "--samples", "5", "--no-cache"}},
        {"bessel", {"bessel", "--nu", "1.25", "--s", "0.1:60:12"}},
        {"verify-decay", {"verify-decay", "--alpha", "2", "--t-max", "12", "--no-cache"}},
        {"census", {"census", "--alpha", "6", "--N", "5"}},
        {"check-F", {"check-F", "--F", "rational:q=3,p=2,m=1"}},
    };
    std::size_t differing = 0, broken = 0;
    for (const auto& [cmd, args] : commands) {
        const auto a = run(args), b = run(args);
        if (a.first != 0 || a.second != b.second) ++differing;
        try {
            const nlohmann::json j = unwrap_artifact(a.second, cmd);
            std::string again;
            if (cmd == "solve") again = wrap_artifact(cmd, nlohmann::json(j.get<SolveArtifact>()));
            else if (cmd == "spectrum") again = wrap_artifact(cmd, nlohmann::json(j.get<SpectrumArtifact>()));
            else if (cmd == "morse-table") again = wrap_artifact(cmd, nlohmann::json(j.get<MorseTable>()));
            else if (cmd == "sweep") again = wrap_artifact(cmd, nlohmann::json(j.get<SweepArtifact>()));
            else if (cmd == "bessel") again = wrap_artifact(cmd, nlohmann::json(j.get<BesselTable>()));
            else if (cmd == "verify-decay") again = wrap_artifact(cmd, nlohmann::json(j.get<DecayReport>()));
            else if (cmd == "census") again = wrap_artifact(cmd, nlohmann::json(j.get<BranchReport>()));
            else again = wrap_artifact(cmd, nlohmann::json(j.get<CheckFArtifact>()));
            if (again != a.second) ++broken;
        } catch (const std::exception&) {
            ++broken;
        }
    }
    ok = differing == 0 && broken == 0;
    return std::to_string(commands.size()) + " commands, " + std::to_string(differing) + " not byte-identical, " +
           std::to_string(broken) + " failed round-trip";
}

}  // namespace

int main() {
    report(1, "spectral identity", spectral_identity);
    report(2, "Morse index agreement", morse_agreement);
    report(3, "multiplicity oracle", multiplicity_oracle);
    report(4, "degeneracy values", degeneracy_values);
    report(5, "symmetric jump", symmetric_jump);
    report(6, "shooting self-consistency", shooting_consistency);
    report(7, "decay", decay);
    report(8, "Bessel", bessel);
    report(9, "nondegeneracy", nondegeneracy);
    report(10, "determinism and schema", determinism);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
