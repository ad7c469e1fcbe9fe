#include "henon/errors.hpp"
#include "henon/radial_ode.hpp"
#include "henon/spectral_geometry.hpp"

#include <doctest.h>

#include <cmath>

using namespace henon;

TEST_CASE("sphere eigenvalues") {
    CHECK(mu(0, 7) == 0);
    CHECK(mu(1, 3) == 2);
    CHECK(mu(2, 5) == 10);
}

TEST_CASE("multiplicities") {
    for (int i = 0; i <= 10; ++i) CHECK(multiplicity(i, 3) == static_cast<std::uint64_t>(2 * i + 1));
    CHECK(multiplicity(2, 4) == 9);
    for (int N = 3; N <= 9; ++N) {
        CHECK(multiplicity(0, N) == 1);
        CHECK(multiplicity(1, N) == static_cast<std::uint64_t>(N));
    }
    for (int N = 3; N <= 8; ++N)
        for (int i = 1; i <= 12; ++i) CHECK(BigInt(multiplicity(i, N)) == multiplicity_factorial_form(i, N));
}

TEST_CASE("harmonic dimension oracle agrees with the formula") {
    CHECK(harmonic_dim_oracle(2, 4) == 9);
    CHECK(harmonic_dim_oracle(0, 6) == 1);
    for (int N = 3; N <= 7; ++N) {
        CHECK(harmonic_dim_oracle(1, N) == static_cast<std::uint64_t>(N));
        for (int i = 0; i <= 6; ++i) CHECK(multiplicity(i, N) == harmonic_dim_oracle(i, N));
    }
    // both rank paths give the same nullity
    for (int N = 3; N <= 5; ++N)
        for (int i = 2; i <= 5; ++i)
            CHECK(harmonic_dim_oracle(i, N, RankMethod::Modular) == harmonic_dim_oracle(i, N, RankMethod::Rational));
}

TEST_CASE("arbitrary precision fallback") {
    CHECK(multiplicity_big(100, 50) == multiplicity_factorial_form(100, 50));
    CHECK(BigInt(multiplicity(40, 30)) == multiplicity_big(40, 30));
    CHECK_THROWS_AS(multiplicity(2000, 2000), NumericError);
}

TEST_CASE("degeneracy values are exactly the even integers") {
    CHECK(degeneracy_alphas(3) == std::vector<double>{2.0, 4.0, 6.0});
    for (int N = 3; N <= 5; ++N) {
        CAPTURE(N);
        // g_i(2(i-1)) = 0: 4 mu_i / (2i)^2 = (N + i - 2)/i ... equals k(2(i-1))
        const double k2 = k_of_alpha(2.0, N);
        CHECK(4.0 * mu(2, N) / 16.0 == doctest::Approx(k2).epsilon(1e-15));
        const DegeneracyScan s = scan_degeneracy_condition(N, 12, 20.0);
        CHECK(s.guarded_off_even == 0);
        for (const auto& r : s.roots) {
            CHECK(r.exact_zero);
            CHECK(r.alpha == 2.0 * (r.i - 1));
        }
        CHECK(s.roots.size() == 9);  // alpha = 2, 4, ..., 18
    }
}

TEST_CASE("closed-form Morse index") {
    CHECK(morse_index(1.0, 3) == 4);
    CHECK(morse_index(2.1, 3) == 9);
    CHECK(morse_index(1e-6, 3) == 4);
    CHECK(morse_index(0.0, 5) == 1);  // autonomous case: only i = 0
    CHECK(morse_index(1e-3, 5) == 1 + 5);
    CHECK_THROWS_AS(morse_index(2.0, 3), DomainError);
    CHECK_THROWS_AS(morse_index(-0.5, 3), DomainError);
    CHECK(morse_index_one_sided(2, 3, Side::Left) == 4);
    CHECK(morse_index_one_sided(2, 3, Side::Right) == 9);
    for (int N = 3; N <= 6; ++N)
        for (int i = 1; i <= 5; ++i)
            CHECK(morse_index_one_sided(2 * i, N, Side::Right) - morse_index_one_sided(2 * i, N, Side::Left) ==
                  multiplicity(i + 1, N));
}

TEST_CASE("symmetric index jumps by one") {
    CHECK(symmetric_morse_index(1.0, 3) == 2);
    CHECK(symmetric_morse_index(1e-6, 3) == 2);
    for (int N = 3; N <= 5; ++N)
        for (int a = 2; a < 12; a += 2)
            CHECK(symmetric_morse_index_one_sided(a, N, Side::Right) ==
                  symmetric_morse_index_one_sided(a, N, Side::Left) + 1);
}

TEST_CASE("kernel dimension") {
    CHECK(kernel_dimension(2.0, 3, 0) == 5);
    CHECK(kernel_dimension(3.7, 3, 1) == 1);
    CHECK(kernel_dimension(3.7, 3, 0) == 0);
    CHECK(kernel_dimension(4.0, 4, 1) == 17);
    CHECK(kernel_dimension(4.0, 3, 0) == 7);
    CHECK_THROWS_AS(kernel_dimension(2.0, 3, 3), DomainError);
}

TEST_CASE("branch census") {
    const BranchReport even = branch_census(4, 5);
    CHECK(even.branch_count == 1);
    CHECK(even.groups == std::vector<std::string>{"O(4)"});
    const BranchReport odd = branch_census(6, 4);
    CHECK(odd.branch_count == 2);
    CHECK(odd.groups == std::vector<std::string>{"O(1)xO(3)", "O(2)xO(2)"});
    CHECK(branch_census(2, 3).branch_count == 1);
    CHECK_THROWS_AS(branch_census(3, 3), DomainError);
}

TEST_CASE("Morse report") {
    const MorseReport r = morse_report(1.0, 3);
    CHECK(r.m_closed == 4);
    CHECK(r.m_symmetric == 2);
    CHECK_FALSE(r.is_bifurcation_value);
    CHECK_THROWS_AS(morse_report(2.0, 3), DomainError);
    const MorseReport right = morse_report(2.0, 3, 0, Side::Right);
    CHECK(right.m_closed == 9);
    CHECK(right.kernel_dim == 5);
    CHECK(right.side == Side::Right);
}
