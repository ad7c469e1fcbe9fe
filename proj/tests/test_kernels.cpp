#include "henon/kernels.hpp"

#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>
#include <vector>

using namespace henon::kernels;

namespace {

struct Problem {
    std::vector<double> diag, off, off_sq, mass;
};

Problem random_problem(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.1, 2.0);
    Problem p;
    for (std::size_t i = 0; i < n; ++i) {
        p.diag.push_back(2.0 + u(rng));
        p.mass.push_back(pos(rng));
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        p.off.push_back(-0.9 * pos(rng) / 2.0);
        p.off_sq.push_back(p.off.back() * p.off.back());
    }
    return p;
}

}  // namespace

TEST_CASE("dispatch reports a usable variant") {
    const Isa isa = active_isa();
    CHECK((isa == Isa::Scalar || avx2_supported()));
    CHECK(isa_name(Isa::Scalar) == "scalar");
}

#if defined(HENON_HAVE_AVX2)
TEST_CASE("AVX2 kernels are bit-identical to the scalar reference") {
    if (!avx2_supported()) {
        MESSAGE("AVX2 not available on this CPU; equivalence not exercised");
        return;
    }
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 31u, 64u, 1001u, 4096u}) {
        CAPTURE(n);
        const Problem p = random_problem(n, 1000 + n);
        const PencilView view{p.diag, p.off_sq, p.mass, 1e-300};
        for (const Shifts& s : {Shifts{-1.0, 0.0, 1.0, 2.5}, Shifts{0.3, 0.3, 0.3, 0.3}, Shifts{5.0, -5.0, 1e-3, 3.9}})
            CHECK(scalar::sturm_counts(view, s) == avx2::sturm_counts(view, s));

        std::vector<double> x(n), y(n);
        std::mt19937_64 rng(n);
        std::normal_distribution<double> g;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = g(rng);
            y[i] = g(rng);
        }
        const double a = scalar::weighted_dot(p.mass, x, y);
        const double b = avx2::weighted_dot(p.mass, x, y);
        CHECK(std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b));

        std::vector<double> ys(n), yv(n);
        scalar::tridiag_matvec(p.diag, p.off, x, ys);
        avx2::tridiag_matvec(p.diag, p.off, x, yv);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::bit_cast<std::uint64_t>(ys[i]) == std::bit_cast<std::uint64_t>(yv[i]));
    }
}
#endif

TEST_CASE("forced scalar path gives the same counts") {
    const Problem p = random_problem(500, 3);
    const PencilView view{p.diag, p.off_sq, p.mass, 1e-300};
    const Shifts s{0.5, 1.0, 1.5, 2.0};
    const Isa before = active_isa();
    force_isa(Isa::Scalar);
    const Counts c1 = sturm_counts(view, s);
    force_isa(Isa::Avx2);
    const Counts c2 = sturm_counts(view, s);
    force_isa(before);
    CHECK(c1 == c2);
    for (std::size_t j = 1; j < kSturmLanes; ++j) CHECK(c1[j] >= c1[j - 1]);
}

TEST_CASE("Sturm counts on a diagonal pencil") {
    // A = diag(1..n), B = I: count below s is floor(s) clipped to n
    const std::size_t n = 10;
    std::vector<double> d(n), off_sq(n - 1, 0.0), mass(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) d[i] = static_cast<double>(i + 1);
    const PencilView view{d, off_sq, mass, 1e-300};
    const Counts c = sturm_counts(view, Shifts{0.5, 3.5, 9.5, 20.0});
    CHECK(c == Counts{0, 3, 9, 10});
}
