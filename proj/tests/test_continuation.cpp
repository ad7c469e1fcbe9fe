#include "henon/continuation.hpp"
#include "henon/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace henon;

namespace {

const SweepResult& cubic_sweep() {
    static const SweepResult r = sweep(3, parse_nonlinearity("pow:p=3"), 0.2, 5.8, 29);
    return r;
}

const IdentityCheck& check_named(const IdentityReport& r, const std::string& name) {
    for (const IdentityCheck& c : r.checks)
        if (c.name == name) return c;
    throw std::runtime_error("no check " + name);
}

}  // namespace

TEST_CASE("cubic sweep in dimension 3") {
    const SweepResult& r = cubic_sweep();
    REQUIRE(r.samples.size() == 29);
    for (std::size_t i = 1; i < r.samples.size(); ++i) CHECK(r.samples[i].alpha > r.samples[i - 1].alpha);
    for (const SweepSample& s : r.samples) {
        CAPTURE(s.alpha);
        REQUIRE(s.ok);
        CHECK(s.m_numeric == static_cast<std::int64_t>(s.m_closed));
        const std::int64_t expected = s.alpha < 2.0 ? 4 : (s.alpha < 4.0 ? 9 : 16);
        CHECK(s.m_numeric == expected);
        CHECK(std::fabs(s.lambda1_km2 + s.k) / s.k < 1e-4);
        CHECK(s.degeneracy_flag == 0);
    }
    // even samples are nudged off the bifurcation values
    CHECK(r.samples[9].alpha_requested == doctest::Approx(2.0));
    CHECK(r.samples[9].offset);
    CHECK(r.samples[9].alpha == doctest::Approx(2.001));

    REQUIRE(r.detected_jumps.size() == 2);
    CHECK(r.detected_jumps[0].alpha_lo >= 1.8 - 1e-12);
    CHECK(r.detected_jumps[0].alpha_hi <= 2.2 + 1e-12);
    CHECK(r.detected_jumps[0].size == 5);
    CHECK(r.detected_jumps[1].alpha_lo >= 3.8 - 1e-12);
    CHECK(r.detected_jumps[1].alpha_hi <= 4.2 + 1e-12);
    CHECK(r.detected_jumps[1].size == 7);
    CHECK(r.monotone);

    REQUIRE(r.predicted.size() == 2);
    CHECK(r.predicted[0].alpha_i == 2);
    CHECK(r.predicted[0].kernel_dim == 5);
    CHECK(r.predicted[1].census.branch_count == 1);

    const IdentityReport rep = verify_identity_suite(r);
    CHECK(rep.passed);
    for (const IdentityCheck& c : rep.checks) {
        CAPTURE(c.name);
        CAPTURE(c.detail);
        CHECK(c.passed);
    }
}

TEST_CASE("a* varies continuously along the sweep") {
    const SweepResult& r = cubic_sweep();
    for (std::size_t i = 1; i < r.samples.size(); ++i)
        CHECK(std::fabs(r.samples[i].a_star - r.samples[i - 1].a_star) < 0.25 * r.samples[i - 1].a_star);
    for (std::size_t i = 2; i < r.samples.size(); ++i) CHECK(r.samples[i].warm_start);
}

TEST_CASE("alpha-dependent nonlinearity has the same jumps") {
    const SweepResult r = sweep(3, parse_nonlinearity("alphapow:eps=1"), 0.2, 5.8, 29);
    REQUIRE(r.detected_jumps.size() == 2);
    CHECK(r.detected_jumps[0].alpha_lo == doctest::Approx(cubic_sweep().detected_jumps[0].alpha_lo));
    CHECK(r.detected_jumps[0].alpha_hi == doctest::Approx(cubic_sweep().detected_jumps[0].alpha_hi));
    CHECK(r.detected_jumps[1].alpha_lo == doctest::Approx(cubic_sweep().detected_jumps[1].alpha_lo));
    CHECK(r.detected_jumps[1].alpha_hi == doctest::Approx(cubic_sweep().detected_jumps[1].alpha_hi));
    CHECK(verify_identity_suite(r).passed);
}

TEST_CASE("empty and single-sample sweeps") {
    const SweepResult empty = sweep(3, parse_nonlinearity("pow:p=3"), 1.0, 2.0, 0);
    CHECK(empty.samples.empty());
    CHECK(empty.detected_jumps.empty());
    CHECK(sweep(3, parse_nonlinearity("pow:p=3"), 3.0, 1.0, 5).samples.empty());
    CHECK_THROWS_AS(verify_identity_suite(empty), DomainError);

    const SweepResult one = sweep(3, parse_nonlinearity("pow:p=3"), 1.0, 1.0, 1);
    REQUIRE(one.samples.size() == 1);
    const IdentityReport rep = verify_identity_suite(one);
    CHECK(check_named(rep, "jumps_match_kernel_dim").passed);
    CHECK(check_named(rep, "predicted_values_detected").passed);
    CHECK(rep.passed);
}

TEST_CASE("coarse mesh degrades only the eigenvalue check") {
    SweepOptions coarse;
    coarse.mesh.nodes = 200;
    const SweepResult c = sweep(3, parse_nonlinearity("pow:p=3"), 0.2, 5.8, 29, coarse);
    double worst_coarse = 0.0, worst_fine = 0.0;
    for (const SweepSample& s : c.samples) worst_coarse = std::max(worst_coarse, std::fabs(s.lambda1_km2 + s.k) / s.k);
    for (const SweepSample& s : cubic_sweep().samples)
        worst_fine = std::max(worst_fine, std::fabs(s.lambda1_km2 + s.k) / s.k);
    CHECK(worst_coarse > 100.0 * worst_fine);

    // at a tolerance the fine mesh meets, the coarse mesh fails the eigenvalue identity
    const IdentityReport strict = verify_identity_suite(c, 1e-6);
    CHECK_FALSE(check_named(strict, "lambda1_equals_minus_k").passed);
    CHECK(check_named(strict, "m_numeric_equals_m_closed").passed);
    CHECK(check_named(strict, "jumps_match_kernel_dim").passed);
    CHECK(check_named(strict, "predicted_values_detected").passed);
    CHECK(verify_identity_suite(cubic_sweep(), 1e-6).passed);
}

TEST_CASE("failed samples are recorded, not thrown") {
    // p = 5.5 is supercritical for small alpha and admissible beyond alpha = 0.25
    const SweepResult r = sweep(3, parse_nonlinearity("pow:p=5.5"), 0.0, 1.0, 3);
    REQUIRE(r.samples.size() == 3);
    CHECK_FALSE(r.samples[0].ok);
    CHECK_FALSE(r.samples[0].error.empty());
    CHECK(r.samples[2].ok);
    const IdentityReport rep = verify_identity_suite(r);
    CHECK_FALSE(check_named(rep, "samples_solved").passed);
    CHECK_FALSE(check_named(rep, "samples_solved").gating);
}
