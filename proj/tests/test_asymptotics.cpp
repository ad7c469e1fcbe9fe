#include "henon/asymptotics.hpp"
#include "henon/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace henon;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> wronskian_grid() {
    std::vector<double> s;
    for (int j = 0; j <= 60; ++j) s.push_back(0.1 * std::pow(200.0, j / 60.0));
    return s;
}

}  // namespace

TEST_CASE("Wronskian on the reference grid") {
    for (double nu : {0.5, 1.0, 1.5, 2.3, 4.0})
        for (double s : wronskian_grid()) {
            CAPTURE(nu);
            CAPTURE(s);
            const BesselPair p = bessel_ik(nu, s);
            CHECK(std::fabs(p.wronskian() * s + 1.0) < 1e-10);
        }
    CHECK(bessel_ik(1.3, 2.0).wronskian() == doctest::Approx(-0.5).epsilon(1e-10));
}

TEST_CASE("half-integer closed forms") {
    const BesselPair p = bessel_ik(0.5, 1.0);
    CHECK(p.I == doctest::Approx(std::sqrt(2.0 / kPi) * std::sinh(1.0)).epsilon(1e-9));
    CHECK(p.K == doctest::Approx(std::sqrt(kPi / 2.0) * std::exp(-1.0)).epsilon(1e-9));
    for (double s : {0.2, 3.0, 12.0, 40.0, 90.0}) {
        CAPTURE(s);
        const BesselPair h = bessel_ik(0.5, s);
        CHECK(h.I == doctest::Approx(std::sqrt(2.0 / (kPi * s)) * std::sinh(s)).epsilon(1e-9));
        CHECK(h.K == doctest::Approx(std::sqrt(kPi / (2.0 * s)) * std::exp(-s)).epsilon(1e-9));
        const BesselPair t = bessel_ik(1.5, s);
        CHECK(t.K == doctest::Approx(std::sqrt(kPi / (2.0 * s)) * std::exp(-s) * (1.0 + 1.0 / s)).epsilon(1e-9));
        CHECK(t.I == doctest::Approx(std::sqrt(2.0 / (kPi * s)) * (std::cosh(s) - std::sinh(s) / s)).epsilon(1e-9));
    }
}

TEST_CASE("agreement with the standard library") {
    for (double nu : {0.0, 1.0, 2.3, 4.0})
        for (double s : {0.5, 5.0, 15.0, 30.0}) {
            CAPTURE(nu);
            CAPTURE(s);
            const BesselPair p = bessel_ik(nu, s);
            CHECK(p.I == doctest::Approx(std::cyl_bessel_i(nu, s)).epsilon(1e-12));
            CHECK(p.K == doctest::Approx(std::cyl_bessel_k(nu, s)).epsilon(1e-12));
        }
}

TEST_CASE("derivative recurrences against centered differences") {
    for (double nu : {0.5, 1.0, 2.3})
        for (double s : {0.7, 4.0, 19.0, 35.0}) {
            CAPTURE(nu);
            CAPTURE(s);
            // Richardson-extrapolated centered differences, O(h^4)
            const double h = 1e-3;
            auto diff = [&](double step) {
                const BesselPair a = bessel_ik(nu, s + step), b = bessel_ik(nu, s - step);
                return std::pair{(a.I - b.I) / (2 * step), (a.K - b.K) / (2 * step)};
            };
            const auto [dI1, dK1] = diff(h);
            const auto [dI2, dK2] = diff(h / 2);
            const BesselPair p = bessel_ik(nu, s);
            CHECK(p.dI == doctest::Approx((4 * dI2 - dI1) / 3).epsilon(1e-9));
            CHECK(p.dK == doctest::Approx((4 * dK2 - dK1) / 3).epsilon(1e-9));
            // the same recurrences hold exactly for the stored order nu + 1 values
            CHECK(p.dI == doctest::Approx(nu / s * p.I + p.I_next).epsilon(1e-14));
            CHECK(p.dK == doctest::Approx(nu / s * p.K - p.K_next).epsilon(1e-14));
        }
}

TEST_CASE("monotonicity in s") {
    double I = 0.0, K = INFINITY;
    for (double s : wronskian_grid()) {
        const BesselPair p = bessel_ik(2.3, s);
        CHECK(p.I > I);
        CHECK(p.K < K);
        I = p.I;
        K = p.K;
    }
}

TEST_CASE("regimes overlap") {
    for (double nu : {0.5, 1.0, 1.5, 2.3, 4.0}) {
        const double sw = 18.0 + 2.0 * nu;
        for (int j = 0; j <= 20; ++j) {
            const double s = sw * (0.8 + 0.4 * j / 20.0);
            BesselOptions a, b;
            a.force = BesselRegime::Series;
            b.force = BesselRegime::Asymptotic;
            const BesselPair x = bessel_ik(nu, s, a), y = bessel_ik(nu, s, b);
            CHECK(x.regime == BesselRegime::Series);
            CHECK(y.regime == BesselRegime::Asymptotic);
            CHECK(std::fabs(x.I / y.I - 1.0) < 1e-9);
            CHECK(std::fabs(x.K / y.K - 1.0) < 1e-9);
        }
    }
    CHECK(bessel_ik(2.0, 21.9).regime == BesselRegime::Series);
    CHECK(bessel_ik(2.0, 22.1).regime == BesselRegime::Asymptotic);
}

TEST_CASE("large-s ratio follows the asymptotic series") {
    // I(s) sqrt(2 pi s) / e^s = 1 - (4nu^2-1)/(8s) + (4nu^2-1)(4nu^2-9)/(2 (8s)^2) - ...
    const double nu = 2.0, s = 50.0, mu = 4.0 * nu * nu;
    const double ratio = bessel_ik(nu, s).I * std::sqrt(2.0 * kPi * s) / std::exp(s);
    const double x = 8.0 * s;
    const double three = 1.0 - (mu - 1.0) / x + (mu - 1.0) * (mu - 9.0) / (2.0 * x * x);
    const double four = three - (mu - 1.0) * (mu - 9.0) * (mu - 25.0) / (6.0 * x * x * x);
    CHECK(std::fabs(ratio - three) < 1e-5);
    CHECK(std::fabs(ratio - four) < 1e-7);
    // the 1/s correction is far from negligible at s = 50
    CHECK(std::fabs(ratio - 1.0) * s == doctest::Approx((mu - 1.0) / 8.0).epsilon(0.01));
    CHECK(ratio == doctest::Approx(0.96283063842).epsilon(1e-10));
}

TEST_CASE("near-integer orders") {
    const BesselPair p = bessel_ik(1.0, 2.0);
    CHECK(p.near_integer);
    CHECK(p.K == doctest::Approx(std::cyl_bessel_k(1.0, 2.0)).epsilon(1e-13));
    const BesselPair q = bessel_ik(1.0 + 3e-7, 2.0);
    CHECK(q.K == doctest::Approx(std::cyl_bessel_k(1.0 + 3e-7, 2.0)).epsilon(1e-12));
}

TEST_CASE("Bessel domain errors") {
    CHECK_THROWS_AS(bessel_ik(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(bessel_ik(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_ik(1.0, 1e6), NumericError);
}

TEST_CASE("Kelvin transform") {
    const double k = 2.5;
    GridFunction f;
    for (int i = 1; i <= 200; ++i) {
        f.t.push_back(0.05 * i);
        f.v.push_back(std::pow(f.t.back(), -(k - 1.0)));
    }
    const GridFunction g = kelvin(f, k);
    REQUIRE(g.t.size() == f.t.size());
    for (std::size_t i = 1; i < g.t.size(); ++i) CHECK(g.t[i] > g.t[i - 1]);
    for (double v : g.v) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));

    GridFunction z{f.t, std::vector<double>(f.t.size(), 0.0)};
    for (double v : kelvin(z, k).v) CHECK(v == 0.0);

    GridFunction s{f.t, {}};
    for (double t : f.t) s.v.push_back(std::exp(-t) * std::sin(t));
    const GridFunction back = kelvin(kelvin(s, k), k);
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        CHECK(back.t[i] == doctest::Approx(s.t[i]).epsilon(1e-14));
        CHECK(back.v[i] == doctest::Approx(s.v[i]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(kelvin(GridFunction{}, k), DomainError);
    CHECK_THROWS_AS(kelvin(GridFunction{{1.0, 0.5}, {1.0, 1.0}}, k), DomainError);
}

TEST_CASE("Kelvin transform of a ground state") {
    const ProblemSpec spec = ProblemSpec::make(3, 0.0, parse_nonlinearity("pow:p=3"));
    const RadialProfile p = shoot_ground_state(spec);
    const KelvinResult r = kelvin(p, spec.k());
    double sup_t = 0.0, sup_v = 0.0;
    for (std::size_t i = 0; i < r.transformed.t.size(); ++i)
        sup_t = std::max(sup_t, r.transformed.v[i] * std::pow(r.transformed.t[i], spec.k() - 1.0));
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p.t()[i] > 0.0) sup_v = std::max(sup_v, p.v()[i]);
    CHECK(sup_t == doctest::Approx(sup_v).epsilon(1e-12));
    CHECK(r.flux_small_t < 1e-6);
}

TEST_CASE("tail sources") {
    CHECK(parse_tail_source("s2") == TailSource::Square);
    CHECK(parse_tail_source("s3/2") == TailSource::ThreeHalves);
    CHECK(std::string(to_string(TailSource::SLog)) == "slog");
    CHECK_THROWS_AS(parse_tail_source("cube"), DomainError);
    CHECK(eval_tail_source(TailSource::Square, 0.5) == 0.25);
    CHECK(eval_tail_source(TailSource::SLog, 0.0) == 0.0);
    CHECK(eval_tail_source(TailSource::Zero, 3.0) == 0.0);
}

TEST_CASE("super-exponential decay of the square source") {
    std::vector<double> grid;
    for (int i = 1; i <= 60; ++i) grid.push_back(0.5 * i);
    const DecayReport r = verify_superexp_decay(TailSource::Square, 2.0, 1.0, 3, grid);
    CHECK(r.beta == doctest::Approx(0.5));
    CHECK(r.k == doctest::Approx(1.5));
    CHECK(r.nu == doctest::Approx(0.25));
    CHECK(weighted_ratio(r, 15.0, 30.0) > 10.0);
    CHECK(r.decade_ratio >= 10.0);
    CHECK(r.monotone);
    CHECK(r.max_residual < 1e-7);
    CHECK(r.window_lo == doctest::Approx(3.0));
}

TEST_CASE("zero source keeps only the decaying homogeneous solution") {
    std::vector<double> grid;
    for (int i = 1; i <= 40; ++i) grid.push_back(0.5 * i);
    DecayOptions o;
    o.b_o = 1.0;
    const DecayReport r = verify_superexp_decay(TailSource::Zero, 2.0, 1.0, 3, grid, o);
    for (const DecaySample& s : r.samples) {
        const double exact = std::pow(s.t, -r.nu) * bessel_ik(r.nu, s.t).K;
        CHECK(s.Z == doctest::Approx(exact).epsilon(1e-12));
    }
    CHECK(weighted_ratio(r, 10.0, 20.0) > 1.0);
    CHECK(r.monotone);
    CHECK(r.max_residual < 1e-7);
}

TEST_CASE("other sources also decay") {
    std::vector<double> grid;
    for (int i = 1; i <= 30; ++i) grid.push_back(1.0 * i);
    for (TailSource h : {TailSource::SLog, TailSource::ThreeHalves}) {
        CAPTURE(to_string(h));
        const DecayReport r = verify_superexp_decay(h, 3.0, 2.0, 4, grid);
        CHECK(r.decade_ratio > 1.0);
        CHECK(r.max_residual < 1e-7);
    }
}

TEST_CASE("decay parameter checks") {
    const std::vector<double> grid{1.0, 2.0};
    CHECK_THROWS_AS(verify_superexp_decay(TailSource::Square, 0.0, 1.0, 3, grid), DomainError);
    CHECK_THROWS_AS(verify_superexp_decay(TailSource::Square, 2.0, -1.0, 3, grid), DomainError);
    CHECK_THROWS_AS(verify_superexp_decay(TailSource::Square, 2.0, 1.0, 3, {2.0, 1.0}), DomainError);
}
