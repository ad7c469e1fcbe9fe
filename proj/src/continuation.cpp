#include "henon/continuation.hpp"

#include "henon/errors.hpp"
#include "henon/format.hpp"

#include <cmath>
#include <sstream>

namespace henon {
namespace {

bool near_even(double alpha, double guard) {
    return std::fabs(alpha - 2.0 * std::round(alpha / 2.0)) < guard;
}

}  // namespace

std::int64_t morse_index_numeric(const DiscreteOperator& op, double alpha, int N) {
    const double scale = 4.0 / ((2.0 + alpha) * (2.0 + alpha));
    std::int64_t total = 0;
    for (int j = 0;; ++j) {
        const double c = scale * static_cast<double>(mu(j, N));
        const std::int64_t neg = j == 0 ? sturm_count(op, Weight::K, 0.0) : sturm_count(op.shifted(c), Weight::K, 0.0);
        if (neg == 0) break;
        total += neg * static_cast<std::int64_t>(multiplicity(j, N));
    }
    return total;
}

SweepResult sweep(int N, const NonlinearitySpec& F, double alpha_lo, double alpha_hi, std::size_t n_samples,
                  const SweepOptions& opts) {
    SweepResult out;
    out.N = N;
    out.F = F.to_string();
    out.alpha_lo = alpha_lo;
    out.alpha_hi = alpha_hi;
    out.n_samples = n_samples;
    out.mesh_nodes = opts.mesh.nodes;
    if (n_samples == 0 || !(alpha_lo <= alpha_hi)) return out;

    out.samples.reserve(n_samples);
    std::vector<const SweepSample*> solved;
    for (std::size_t j = 0; j < n_samples; ++j) {
        SweepSample s;
        s.alpha_requested =
            n_samples == 1 ? alpha_lo : alpha_lo + (alpha_hi - alpha_lo) * static_cast<double>(j) / (n_samples - 1);
        s.alpha = s.alpha_requested;
        if (near_even(s.alpha, opts.even_guard)) {
            s.alpha = 2.0 * std::round(s.alpha / 2.0) + opts.even_offset;
            s.offset = true;
        }
        try {
            const ProblemSpec spec = ProblemSpec::make(N, s.alpha, F);
            s.k = spec.k();
            s.m_closed = morse_index(s.alpha, N);
            if (!spec.admissible())
                throw DomainError("growth exponent " + format_double(spec.growth_exponent()) +
                                  " is not admissible at alpha = " + format_double(s.alpha));

            ShootOptions shoot = opts.shoot;
            if (solved.size() >= 2) {
                const SweepSample& p0 = *solved[solved.size() - 2];
                const SweepSample& p1 = *solved.back();
                shoot.a_guess = p1.a_star + (p1.a_star - p0.a_star) * (s.alpha - p1.alpha) / (p1.alpha - p0.alpha);
            } else if (solved.size() == 1) {
                shoot.a_guess = solved.back()->a_star;
            }
            s.warm_start = shoot.a_guess.has_value();
            const RadialProfile profile = shoot_ground_state(spec, shoot);
            s.a_star = profile.a_star;
            s.delta_fit = profile.delta_fit;
            s.bisections = profile.bisections;
            s.integrations = profile.integrations;

            const SpectrumResult km2 = spectrum(profile, spec, Weight::KM2, 1, opts.mesh);
            s.lambda1_km2 = km2.eigenvalues.at(0);
            s.lambda1_error = km2.mesh_error(0);

            const DegeneracyResult deg = degeneracy(profile, spec, opts.mesh);
            s.degeneracy_flag = deg.n_alpha;
            s.degeneracy_unresolved = deg.unresolved;

            const Mesh mesh = make_mesh(profile, opts.mesh).refined();
            s.m_numeric = morse_index_numeric(assemble(profile, spec, mesh), s.alpha, N);
            s.ok = true;
        } catch (const std::exception& e) {
            s.ok = false;
            s.error = e.what();
        }
        out.samples.push_back(std::move(s));
        if (out.samples.back().ok) solved.push_back(&out.samples.back());
    }

    const SweepSample* prev = nullptr;
    for (const SweepSample& s : out.samples) {
        if (!s.ok) continue;
        if (prev && s.m_numeric != prev->m_numeric) {
            out.detected_jumps.push_back({prev->alpha, s.alpha, s.m_numeric - prev->m_numeric});
            if (s.m_numeric < prev->m_numeric) out.monotone = false;
        }
        prev = &s;
    }

    for (int i = 1; 2.0 * i < alpha_hi; ++i) {
        if (2.0 * i <= alpha_lo) continue;
        PredictedValue p;
        p.alpha_i = 2 * i;
        p.kernel_dim = kernel_dimension(2.0 * i, N, 0);
        p.census = branch_census(2 * i, N);
        out.predicted.push_back(std::move(p));
    }
    return out;
}

IdentityReport verify_identity_suite(const SweepResult& sweep, double lambda_tol) {
    if (sweep.samples.empty()) throw DomainError("identity suite needs a non-empty sweep");
    IdentityReport rep;

    auto add = [&](std::string name, bool passed, std::string detail, bool gating = true) {
        rep.checks.push_back({std::move(name), passed, gating, std::move(detail)});
    };

    std::size_t failed_samples = 0;
    double worst_lambda = 0.0;
    std::size_t index_mismatch = 0, kernel_off_even = 0;
    for (const SweepSample& s : sweep.samples) {
        if (!s.ok) {
            ++failed_samples;
            continue;
        }
        worst_lambda = std::max(worst_lambda, std::fabs(s.lambda1_km2 + s.k) / s.k);
        if (s.m_numeric != static_cast<std::int64_t>(s.m_closed)) ++index_mismatch;
        if (s.degeneracy_flag != 0 || s.degeneracy_unresolved) ++kernel_off_even;
    }
    add("samples_solved", failed_samples == 0, std::to_string(failed_samples) + " failed", false);
    add("lambda1_equals_minus_k", worst_lambda <= lambda_tol,
        "max relative error " + format_double(worst_lambda) + " (tol " + format_double(lambda_tol) + ")");
    add("m_numeric_equals_m_closed", index_mismatch == 0, std::to_string(index_mismatch) + " mismatches");

    std::size_t bad_jumps = 0;
    std::ostringstream jd;
    for (const DetectedJump& j : sweep.detected_jumps) {
        const PredictedValue* hit = nullptr;
        int inside = 0;
        for (const PredictedValue& p : sweep.predicted)
            if (p.alpha_i > j.alpha_lo && p.alpha_i < j.alpha_hi) {
                ++inside;
                hit = &p;
            }
        const bool ok = inside == 1 && hit && j.size == static_cast<std::int64_t>(hit->kernel_dim);
        if (!ok) ++bad_jumps;
        jd << "(" << format_double(j.alpha_lo) << "," << format_double(j.alpha_hi) << "):" << j.size
           << (ok ? " ok; " : " MISMATCH; ");
    }
    add("jumps_match_kernel_dim", bad_jumps == 0,
        sweep.detected_jumps.empty() ? std::string("no jumps") : jd.str());

    std::size_t missed = 0;
    for (const PredictedValue& p : sweep.predicted) {
        bool seen = false;
        for (const DetectedJump& j : sweep.detected_jumps)
            if (p.alpha_i > j.alpha_lo && p.alpha_i < j.alpha_hi) seen = true;
        // a bifurcation value outside the span of solved samples cannot be seen
        double lo = INFINITY, hi = -INFINITY;
        for (const SweepSample& s : sweep.samples)
            if (s.ok) {
                lo = std::min(lo, s.alpha);
                hi = std::max(hi, s.alpha);
            }
        if (!seen && p.alpha_i > lo && p.alpha_i < hi) ++missed;
    }
    add("predicted_values_detected", missed == 0, std::to_string(missed) + " predicted values without a jump");
    add("no_radial_kernel_off_even", kernel_off_even == 0, std::to_string(kernel_off_even) + " samples flagged");
    add("m_numeric_monotone", sweep.monotone, sweep.monotone ? "non-decreasing" : "decrease observed", false);

    rep.passed = true;
    for (const IdentityCheck& c : rep.checks)
        if (c.gating && !c.passed) rep.passed = false;
    return rep;
}

}  // namespace henon
