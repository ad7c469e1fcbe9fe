#include "henon/asymptotics.hpp"

#include "henon/errors.hpp"
#include "henon/format.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace henon {
namespace {

using Float50 = boost::multiprecision::cpp_bin_float_50;
using Float100 = boost::multiprecision::cpp_bin_float_100;

constexpr double kPairEps = 1e-6;
constexpr double kNearIntegerFlag = 1e-4;

struct IK {
    double I;
    double K;
};

// I_mu(s) by the ascending series, summed to working precision.
template <class T>
T series_I(const T& mu, const T& s) {
    using std::abs;
    const T x = s / 2;
    const T x2 = x * x;
    T term = pow(x, mu) / boost::math::tgamma(mu + 1);
    T sum = term;
    const T eps = std::numeric_limits<T>::epsilon();
    for (int j = 1; j < 100000; ++j) {
        term *= x2 / (T(j) * (T(j) + mu));
        sum += term;
        if (T(j) > x && T(j) + mu > 0 && abs(term) <= eps * abs(sum)) return sum;
    }
    throw NumericError(NumericError::Code::NonConvergence, "bessel series did not converge");
}

// K_mu = pi / (2 sin(pi mu)) (I_-mu - I_mu) for non-integer mu.
template <class T>
IK series_IK_noninteger(double mu_d, double s_d) {
    const T mu(mu_d);
    const T s(s_d);
    const T ip = series_I<T>(mu, s);
    const T im = series_I<T>(T(-mu), s);
    const T pi = boost::math::constants::pi<T>();
    const T k = pi / (2 * sin(pi * mu)) * (im - ip);
    return {static_cast<double>(ip), static_cast<double>(k)};
}

template <class T>
IK series_IK_typed(double mu, double s) {
    const double n = std::round(mu);
    if (std::abs(mu - n) >= 0.5 * kPairEps) return series_IK_noninteger<T>(mu, s);
    auto pair = [&](double e) {
        return 0.5 * (series_IK_noninteger<T>(mu - e, s).K + series_IK_noninteger<T>(mu + e, s).K);
    };
    // symmetric pairs are even in eps; Richardson over eps and 2 eps removes the eps^2 term
    const double k = (4.0 * pair(kPairEps) - pair(2.0 * kPairEps)) / 3.0;
    const T i = series_I<T>(T(mu), T(s));
    return {static_cast<double>(i), k};
}

IK series_IK(double mu, double s) {
    // I_-mu and I_mu agree to about exp(-2s) relative; K is their difference.
    const double digits = 0.8686 * s + std::log10(std::max(s, 1.0)) + 30.0;
    if (digits <= 48.0) return series_IK_typed<Float50>(mu, s);
    if (digits <= 98.0) return series_IK_typed<Float100>(mu, s);
    throw NumericError(NumericError::Code::Precision, "bessel series requested at s = " + format_double(s));
}

IK asymptotic_IK(double mu, double s) {
    const double four_mu2 = 4.0 * mu * mu;
    double a = 1.0;
    double sum_i = 1.0, sum_k = 1.0;
    double prev = 1.0;
    for (int j = 1; j < 200; ++j) {
        const double odd = 2.0 * j - 1.0;
        a *= (four_mu2 - odd * odd) / (8.0 * j * s);
        const double mag = std::abs(a);
        if (mag == 0.0) break;
        if (mag > prev) break;
        sum_k += a;
        sum_i += (j % 2 == 0) ? a : -a;
        if (mag < 1e-17) break;
        prev = mag;
    }
    const double pi = boost::math::constants::pi<double>();
    return {std::exp(s) / std::sqrt(2.0 * pi * s) * sum_i, std::sqrt(pi / (2.0 * s)) * std::exp(-s) * sum_k};
}

IK evaluate(double mu, double s, BesselRegime regime) {
    return regime == BesselRegime::Series ? series_IK(mu, s) : asymptotic_IK(mu, s);
}

BesselRegime pick_regime(double nu, double s, const BesselOptions& opts) {
    if (opts.force) return *opts.force;
    const double sw = opts.s_switch > 0.0 ? opts.s_switch : 18.0 + 2.0 * nu;
    return s <= sw ? BesselRegime::Series : BesselRegime::Asymptotic;
}

void check_args(double nu, double s) {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("bessel: s must be positive, got " + format_double(s));
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw DomainError("bessel: nu must be >= 0, got " + format_double(nu));
}

IK ik_only(double nu, double s) {
    const IK v = evaluate(nu, s, pick_regime(nu, s, {}));
    if (!std::isfinite(v.I) || !std::isfinite(v.K))
        throw NumericError(NumericError::Code::Precision, "bessel value not finite at s = " + format_double(s));
    return v;
}

}  // namespace

const char* to_string(BesselRegime r) { return r == BesselRegime::Series ? "series" : "asymptotic"; }

BesselPair bessel_ik(double nu, double s, const BesselOptions& opts) {
    check_args(nu, s);
    BesselPair out;
    out.nu = nu;
    out.s = s;
    out.regime = pick_regime(nu, s, opts);
    out.near_integer = std::abs(nu - std::round(nu)) < kNearIntegerFlag;
    const IK cur = evaluate(nu, s, out.regime);
    const IK next = evaluate(nu + 1.0, s, out.regime);
    out.I = cur.I;
    out.K = cur.K;
    out.I_next = next.I;
    out.K_next = next.K;
    out.dI = nu / s * cur.I + next.I;
    out.dK = nu / s * cur.K - next.K;
    for (double x : {out.I, out.K, out.dI, out.dK})
        if (!std::isfinite(x))
            throw NumericError(NumericError::Code::Precision,
                               "bessel value not finite at nu = " + format_double(nu) + ", s = " + format_double(s));
    return out;
}

GridFunction kelvin(const GridFunction& f, double k) {
    if (f.t.empty() || f.t.size() != f.v.size()) throw DomainError("kelvin: empty or mismatched grid");
    for (std::size_t i = 0; i < f.t.size(); ++i) {
        if (!(f.t[i] > 0.0)) throw DomainError("kelvin: grid must be positive");
        if (i > 0 && !(f.t[i] > f.t[i - 1])) throw DomainError("kelvin: grid must be increasing");
    }
    GridFunction out;
    out.t.reserve(f.t.size());
    out.v.reserve(f.t.size());
    for (std::size_t i = f.t.size(); i-- > 0;) {
        const double s = 1.0 / f.t[i];
        out.t.push_back(s);
        out.v.push_back(std::pow(s, 1.0 - k) * f.v[i]);
    }
    return out;
}

KelvinResult kelvin(const RadialProfile& profile, double k) {
    if (profile.size() < 2 || profile.t_end() < 10.0)
        throw DomainError("kelvin: profile must extend to t >= 10, got " + format_double(profile.t_end()));
    GridFunction f;
    std::vector<double> dv;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (profile.t()[i] <= 0.0) continue;
        f.t.push_back(profile.t()[i]);
        f.v.push_back(profile.v()[i]);
        dv.push_back(profile.dv()[i]);
    }
    KelvinResult out;
    out.transformed = kelvin(f, k);
    const std::size_t n = f.t.size();
    out.flux.resize(n);
    const double t_min = out.transformed.t.front();
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t i = n - 1 - j;
        const double s = f.t[i];
        out.flux[j] = (1.0 - k) * f.v[i] - s * dv[i];
        if (out.transformed.t[j] <= 2.0 * t_min) out.flux_small_t = std::max(out.flux_small_t, std::abs(out.flux[j]));
    }
    return out;
}

const char* to_string(TailSource h) {
    switch (h) {
        case TailSource::Zero: return "zero";
        case TailSource::Square: return "s2";
        case TailSource::SLog: return "slog";
        case TailSource::ThreeHalves: return "s3/2";
    }
    return "?";
}

TailSource parse_tail_source(const std::string& name) {
    for (TailSource h : {TailSource::Zero, TailSource::Square, TailSource::SLog, TailSource::ThreeHalves})
        if (name == to_string(h)) return h;
    throw DomainError("unknown tail source '" + name + "' (expected zero, s2, slog or s3/2)");
}

double eval_tail_source(TailSource h, double s) {
    switch (h) {
        case TailSource::Zero: return 0.0;
        case TailSource::Square: return s * s;
        case TailSource::SLog: return s * std::log1p(s);
        case TailSource::ThreeHalves: return s * std::sqrt(s);
    }
    return 0.0;
}

DecayReport verify_superexp_decay(TailSource h, double alpha, double m, int N, const std::vector<double>& t_grid,
                                  const DecayOptions& opts) {
    if (!(alpha > 0.0)) throw DomainError("verify-decay: alpha must be positive (beta < 1)");
    if (!(m > 0.0)) throw DomainError("verify-decay: m must be positive");
    if (N < 3) throw DomainError("verify-decay: N must be >= 3");
    if (t_grid.size() < 2) throw DomainError("verify-decay: grid needs at least two points");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0)) throw DomainError("verify-decay: grid must be positive");
        if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw DomainError("verify-decay: grid must be increasing");
    }

    DecayReport rep;
    rep.h = h;
    rep.alpha = alpha;
    rep.m = m;
    rep.N = N;
    rep.beta = 2.0 / (2.0 + alpha);
    rep.k = k_of_alpha(alpha, N);
    rep.nu = (rep.k - 1.0) / 2.0;
    const double beta = rep.beta, nu = rep.nu, k = rep.k, sm = std::sqrt(m);

    auto exponent = [&](double t) { return std::pow(t / beta, beta); };
    auto source = [&](double t) { return eval_tail_source(h, std::exp(-exponent(t))); };
    auto a_prime = [&](double s) {
        const double hs = source(s);
        return hs == 0.0 ? 0.0 : hs * std::pow(s, nu + 1.0) * ik_only(nu, sm * s).K;
    };
    auto b_prime = [&](double s) {
        const double hs = source(s);
        return hs == 0.0 ? 0.0 : hs * std::pow(s, nu + 1.0) * ik_only(nu, sm * s).I;
    };

    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    auto integrate = [&](auto&& f, double lo, double hi) {
        double err = 0.0, l1 = 0.0;
        const double val = GK::integrate(f, lo, hi, 10, opts.quad_tol, &err, &l1);
        if (err > 100.0 * opts.quad_tol * std::max(l1, std::numeric_limits<double>::min()))
            throw NumericError(NumericError::Code::NonConvergence,
                               "verify-decay: quadrature error " + format_double(err) + " (L1 " + format_double(l1) + ") on [" + format_double(lo) + ", " +
                                   format_double(hi) + "]");
        return val;
    };

    const std::size_t n = t_grid.size();
    std::vector<double> a(n), b_int(n);
    // the integrand decays like exp(-sqrt(m) s); 50/sqrt(m) past the grid it is below 1e-21 of its start
    a[n - 1] = integrate(a_prime, t_grid[n - 1], t_grid[n - 1] + 50.0 / sm);
    for (std::size_t i = n - 1; i-- > 0;) a[i] = a[i + 1] + integrate(a_prime, t_grid[i], t_grid[i + 1]);
    b_int[0] = integrate(b_prime, 0.0, t_grid[0]);
    for (std::size_t i = 1; i < n; ++i) b_int[i] = b_int[i - 1] + integrate(b_prime, t_grid[i - 1], t_grid[i]);

    auto z_at = [&](double t, double a_t, double b_t) {
        const IK v = ik_only(nu, sm * t);
        const double w = std::pow(t, -nu);
        return a_t * w * v.I + b_t * w * v.K;
    };

    rep.window_hi = t_grid.back();
    rep.window_lo = rep.window_hi / 10.0;
    rep.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t_grid[i];
        const IK v = ik_only(nu, sm * t);
        const double w = std::pow(t, -nu);
        const double e = std::exp(exponent(t));
        const double b_t = opts.b_o + b_int[i];
        DecaySample& smp = rep.samples[i];
        smp.t = t;
        smp.Z = a[i] * w * v.I + b_t * w * v.K;
        smp.weighted = e * smp.Z;
        smp.plus_term = e * w * v.I * a[i];
        smp.minus_term = e * w * v.K * b_int[i];

        const double d = std::min(opts.fd_step, t / 4.0);
        const double a_p = a[i] - integrate(a_prime, t, t + d);
        const double a_m = a[i] + integrate(a_prime, t - d, t);
        const double b_p = b_t + integrate(b_prime, t, t + d);
        const double b_m = b_t - integrate(b_prime, t - d, t);
        const double zp = z_at(t + d, a_p, b_p);
        const double zm = z_at(t - d, a_m, b_m);
        const double z1 = (zp - zm) / (2.0 * d);
        const double z2 = (zp - 2.0 * smp.Z + zm) / (d * d);
        smp.residual = std::abs(z2 + k / t * z1 - m * smp.Z + source(t));
    }

    double last = std::numeric_limits<double>::infinity();
    rep.monotone = true;
    for (const DecaySample& smp : rep.samples) {
        if (smp.t < rep.window_lo) continue;
        rep.tail_sup = std::max(rep.tail_sup, smp.weighted);
        rep.max_residual = std::max(rep.max_residual, smp.residual);
        if (smp.weighted > last) rep.monotone = false;
        last = smp.weighted;
    }
    const double end = rep.samples.back().weighted;
    rep.decade_ratio = end > 0.0 ? rep.tail_sup / end : std::numeric_limits<double>::infinity();
    return rep;
}

double weighted_ratio(const DecayReport& report, double t_early, double t_late) {
    auto at = [&](double t) {
        for (const DecaySample& s : report.samples)
            if (std::abs(s.t - t) <= 1e-12 * std::max(1.0, t)) return s.weighted;
        throw DomainError("weighted_ratio: t = " + format_double(t) + " is not a grid point");
    };
    return at(t_early) / at(t_late);
}

}  // namespace henon
