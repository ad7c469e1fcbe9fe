#include "henon/radial_ode.hpp"

#include "henon/errors.hpp"
#include "henon/format.hpp"
#include "hermite.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace henon {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using State = std::array<double, 2>;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Rhs {
    const ProblemSpec& spec;
    double k;

    State operator()(double t, const State& y) const { return {y[1], -(k / t) * y[1] - spec.f(y[0]).value}; }
};

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
    State out = y;
    for (int c = 0; c < 2; ++c) {
        double acc = 0.0;
        for (const auto& [coef, k] : terms) acc += coef * (*k)[c];
        out[c] = y[c] + h * acc;
    }
    return out;
}

detail::HermiteEnds ends(double v0, double w0, double f0, double v1, double w1, double f1) {
    return {v0, w0, f0, v1, w1, f1};
}

// Bisection for a sign change of g on s in [0, 1] with g(0) and g(1) of
// opposite sign (or g(1) == 0).
template <class G>
double bisect_unit(G g) {
    double lo = 0.0, hi = 1.0;
    const bool lo_pos = g(0.0) > 0.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((g(mid) > 0.0) == lo_pos)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

std::size_t interval_index(const std::vector<double>& t, double x) {
    auto it = std::upper_bound(t.begin(), t.end(), x);
    std::size_t j = static_cast<std::size_t>(it - t.begin());
    if (j == 0) return 0;
    if (j >= t.size()) return t.size() - 2;
    return j - 1;
}

}  // namespace

double k_of_alpha(double alpha, int N) { return (2.0 * N - 2.0 + alpha) / (2.0 + alpha); }

double cov_forward(double r, double alpha) {
    if (!(r >= 0.0)) throw DomainError("cov_forward: r must be >= 0");
    if (!(alpha >= 0.0)) throw DomainError("cov_forward: alpha must be >= 0");
    return 2.0 / (2.0 + alpha) * std::pow(r, (2.0 + alpha) / 2.0);
}

double cov_inverse(double t, double alpha) {
    if (!(t >= 0.0)) throw DomainError("cov_inverse: t must be >= 0");
    if (!(alpha >= 0.0)) throw DomainError("cov_inverse: alpha must be >= 0");
    return std::pow((2.0 + alpha) / 2.0 * t, 2.0 / (2.0 + alpha));
}

ProblemSpec ProblemSpec::make(int N, double alpha, NonlinearitySpec F) {
    if (N < 3) throw DomainError("N must be >= 3");
    if (!std::isfinite(alpha) || alpha < 0.0) throw DomainError("alpha must be finite and >= 0");
    ProblemSpec spec;
    spec.N = N;
    spec.alpha = alpha;
    spec.F = F.with_dimension(N);
    return spec;
}

bool ProblemSpec::admissible() const {
    const double kk = k();
    if (kk <= 1.0) return true;
    return growth_exponent() < (kk + 3.0) / (kk - 1.0);
}

double largest_zero(const ProblemSpec& spec) {
    const auto grid = log_grid(1e-6, 1e6, 4000);
    double prev_u = grid[0];
    double prev_f = spec.f(prev_u).value;
    double lo = kNaN, hi = kNaN, flo = 0.0, fhi = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double u = grid[i];
        const double fu = spec.f(u).value;
        if ((prev_f <= 0.0) != (fu <= 0.0)) {
            lo = prev_u;
            hi = u;
            flo = prev_f;
            fhi = fu;
        }
        prev_u = u;
        prev_f = fu;
    }
    if (std::isnan(lo)) throw DomainError("F has no positive zero on (0, 1e6]");
    if (flo == 0.0) return lo;
    auto f = [&](double u) { return spec.f(u).value; };
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52),
                                               iters);
    return 0.5 * (r.first + r.second);
}

TaylorStart taylor_start(double a, const ProblemSpec& spec, double t0) {
    if (!(a > 0.0)) throw DomainError("taylor_start: a must be > 0");
    if (!(t0 > 0.0)) throw DomainError("taylor_start: t0 must be > 0");
    const double k = spec.k();
    const double Fa = spec.f(a).value;
    return {a - Fa * t0 * t0 / (2.0 * (1.0 + k)), -Fa * t0 / (1.0 + k)};
}

const char* to_string(ShootEvent e) {
    switch (e) {
        case ShootEvent::Overshoot: return "OVERSHOOT";
        case ShootEvent::Undershoot: return "UNDERSHOOT";
        case ShootEvent::Decay: return "DECAY";
        case ShootEvent::Timeout: return "TIMEOUT";
    }
    return "?";
}

Trajectory integrate_ivp(double a, const ProblemSpec& spec, const IvpOptions& opts) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("integrate_ivp: a must be > 0");
    if (!(opts.rtol > 0.0)) throw DomainError("integrate_ivp: rtol must be > 0");
    const double k = spec.k();
    const double sqm = std::sqrt(spec.mass());
    const double t_max = opts.t_max > 0.0 ? opts.t_max : 40.0 / sqm;
    const double max_step = opts.max_step > 0.0 ? opts.max_step : 0.05 / sqm;
    const double atol = opts.rtol * 1e-9 * a;
    const Rhs rhs{spec, k};

    Trajectory tr;
    tr.t.push_back(0.0);
    tr.v.push_back(a);
    tr.dv.push_back(0.0);

    // keep t0 well inside the core so the truncated Taylor start stays accurate
    double t0 = opts.t0;
    const double Fa = spec.f(a).value;
    if (Fa != 0.0) t0 = std::min(t0, 1e-3 * std::sqrt(2.0 * (1.0 + k) * a / std::fabs(Fa)));
    const TaylorStart start = taylor_start(a, spec, t0);
    double t = t0;
    State y{start.v, start.dv};
    tr.t.push_back(t);
    tr.v.push_back(y[0]);
    tr.dv.push_back(y[1]);

    if (y[1] >= 0.0) {
        tr.event = ShootEvent::Undershoot;
        tr.t_event = t;
        return tr;
    }

    State k1 = rhs(t, y);
    double h = std::min(max_step, 0.1 * t0);
    const double h_min = 1e-14 * std::max(1.0, t_max);

    while (true) {
        if (tr.steps + tr.rejected >= opts.max_steps)
            throw NumericError(NumericError::Code::IntegratorFailure,
                               "integrate_ivp: step budget exhausted at t=" + format_double(t));
        if (t >= t_max) {
            tr.event = ShootEvent::Timeout;
            tr.t_event = t;
            return tr;
        }
        h = std::min({h, max_step, t_max - t});
        if (h < h_min)
            throw NumericError(NumericError::Code::IntegratorFailure,
                               "integrate_ivp: step size underflow at t=" + format_double(t) +
                                   " V=" + format_double(y[0]) + " V'=" + format_double(y[1]));

        const State k2 = rhs(t + c2 * h, axpy(y, h, {{a21, &k1}}));
        const State k3 = rhs(t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
        const State k4 = rhs(t + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State k5 = rhs(t + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State k6 = rhs(t + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State y1 = axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
        const State k7 = rhs(t + h, y1);

        double err = 0.0;
        for (int c = 0; c < 2; ++c) {
            const double e = h * (e1 * k1[c] + e3 * k3[c] + e4 * k4[c] + e5 * k5[c] + e6 * k6[c] + e7 * k7[c]);
            const double sc = atol + opts.rtol * std::max(std::fabs(y[c]), std::fabs(y1[c]));
            err = std::max(err, std::fabs(e) / sc);
        }
        if (!std::isfinite(err)) {
            ++tr.rejected;
            h *= 0.2;
            continue;
        }
        if (err > 1.0) {
            ++tr.rejected;
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            continue;
        }
        ++tr.steps;

        const double t1 = t + h;
        const auto e = ends(y[0], y[1], k1[1], y1[0], y1[1], k7[1]);

        if (y1[0] <= 0.0) {
            const double s = bisect_unit([&](double s) { return detail::quintic_hermite(e, h, s).y; });
            const auto at = detail::quintic_hermite(e, h, s);
            tr.t.push_back(t + s * h);
            tr.v.push_back(0.0);
            tr.dv.push_back(at.d);
            tr.event = ShootEvent::Overshoot;
            tr.t_event = tr.t.back();
            return tr;
        }
        if (y1[1] >= 0.0) {
            const double s = bisect_unit([&](double s) { return detail::quintic_hermite(e, h, s).d; });
            const auto at = detail::quintic_hermite(e, h, s);
            tr.t.push_back(t + s * h);
            tr.v.push_back(at.y);
            tr.dv.push_back(0.0);
            tr.event = ShootEvent::Undershoot;
            tr.t_event = tr.t.back();
            return tr;
        }

        tr.t.push_back(t1);
        tr.v.push_back(y1[0]);
        tr.dv.push_back(y1[1]);

        if (y1[0] < opts.decay_tol * a) {
            // Tail structure: log-derivative close to that of t^(-k/2) e^(-sqrt(m) t).
            const double logd = y1[1] / y1[0];
            const double expected = -(sqm + 0.5 * k / t1);
            if (std::fabs(logd - expected) < 0.25 * sqm) {
                tr.event = ShootEvent::Decay;
                tr.t_event = t1;
                return tr;
            }
        }

        t = t1;
        y = y1;
        k1 = k7;
        h *= std::min(5.0, 0.9 * std::pow(std::max(err, 1e-10), -0.2));
    }
}

// ---------------------------------------------------------------------------
// RadialProfile

RadialProfile::RadialProfile(std::vector<double> t, std::vector<double> v, std::vector<double> dv,
                             std::vector<double> ddv, double k, double sqrt_m, double handoff_t)
    : t_(std::move(t)), v_(std::move(v)), dv_(std::move(dv)), ddv_(std::move(ddv)), k_(k), sqrt_m_(sqrt_m),
      handoff_t_(handoff_t) {
    const std::size_t n = t_.size();
    if (n < 2 || v_.size() != n || dv_.size() != n || ddv_.size() != n)
        throw DomainError("RadialProfile: need at least two nodes and matching array sizes");
    for (std::size_t i = 1; i < n; ++i)
        if (!(t_[i] > t_[i - 1])) throw DomainError("RadialProfile: grid must be strictly increasing");
    if (!(sqrt_m_ > 0.0)) throw DomainError("RadialProfile: sqrt_m must be > 0");
    auto it = std::lower_bound(t_.begin(), t_.end(), handoff_t_);
    if (it == t_.end() || *it != handoff_t_) throw DomainError("RadialProfile: hand-off must be a grid node");
    const std::size_t h = static_cast<std::size_t>(it - t_.begin());
    const double vh = v_[h];
    tail_c_ = vh > 0.0 && handoff_t_ > 0.0
                  ? vh * std::pow(handoff_t_, 0.5 * k_) * std::exp(sqrt_m_ * handoff_t_)
                  : 0.0;
}

RadialProfile RadialProfile::from_samples(std::vector<double> t, std::vector<double> v, std::vector<double> dv,
                                          double k, double sqrt_m) {
    const std::size_t n = t.size();
    if (n < 3 || v.size() != n || dv.size() != n) throw DomainError("from_samples: need >= 3 matching samples");
    std::vector<double> ddv(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i == 0 ? 1 : (i == n - 1 ? n - 2 : i);
        const double h0 = t[j] - t[j - 1];
        const double h1 = t[j + 1] - t[j];
        // Second-order three-point derivative of dv at t[i] on a nonuniform stencil.
        const double x = t[i] - t[j];
        const double w0 = (2.0 * x - h1) / (h0 * (h0 + h1));
        const double w1 = -(2.0 * x + h0 - h1) / (h0 * h1);
        const double w2 = (2.0 * x + h0) / (h1 * (h0 + h1));
        ddv[i] = w0 * dv[j - 1] + w1 * dv[j] + w2 * dv[j + 1];
    }
    const double handoff = t.back();
    RadialProfile p(std::move(t), std::move(v), std::move(dv), std::move(ddv), k, sqrt_m, handoff);
    p.a_star = p.v_.front();
    return p;
}

std::size_t RadialProfile::locate(double t) const { return interval_index(t_, t); }

double RadialProfile::tail_value(double t) const {
    if (tail_c_ == 0.0) return 0.0;
    return tail_c_ * std::pow(t, -0.5 * k_) * std::exp(-sqrt_m_ * t);
}

double RadialProfile::value(double t) const {
    if (t > handoff_t_) return tail_value(t);
    if (t <= t_.front()) return v_.front();
    const std::size_t j = locate(t);
    const double h = t_[j + 1] - t_[j];
    const auto e = ends(v_[j], dv_[j], ddv_[j], v_[j + 1], dv_[j + 1], ddv_[j + 1]);
    return detail::quintic_hermite(e, h, (t - t_[j]) / h).y;
}

double RadialProfile::deriv(double t) const {
    if (t > handoff_t_) return -(sqrt_m_ + 0.5 * k_ / t) * tail_value(t);
    if (t <= t_.front()) return dv_.front();
    const std::size_t j = locate(t);
    const double h = t_[j + 1] - t_[j];
    const auto e = ends(v_[j], dv_[j], ddv_[j], v_[j + 1], dv_[j + 1], ddv_[j + 1]);
    return detail::quintic_hermite(e, h, (t - t_[j]) / h).d;
}

// ---------------------------------------------------------------------------
// Shooting

namespace {

std::vector<double> second_derivatives(const Trajectory& tr, const ProblemSpec& spec) {
    const double k = spec.k();
    std::vector<double> dd(tr.t.size());
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        const double Fv = spec.f(tr.v[i]).value;
        dd[i] = tr.t[i] == 0.0 ? -Fv / (1.0 + k) : -(k / tr.t[i]) * tr.dv[i] - Fv;
    }
    return dd;
}

// Interpolant of a whole trajectory (no tail).
struct TrajectoryInterp {
    const Trajectory& tr;
    std::vector<double> dd;

    double value(double x) const {
        const std::size_t j = interval_index(tr.t, x);
        const double h = tr.t[j + 1] - tr.t[j];
        const auto e = ends(tr.v[j], tr.dv[j], dd[j], tr.v[j + 1], tr.dv[j + 1], dd[j + 1]);
        return detail::quintic_hermite(e, h, (x - tr.t[j]) / h).y;
    }
};

}  // namespace

RadialProfile shoot_ground_state(const ProblemSpec& spec, const ShootOptions& opts) {
    if (!(opts.tol > 0.0) || !(opts.rtol > 0.0)) throw DomainError("shoot_ground_state: tolerances must be > 0");
    const double theta = largest_zero(spec);
    const double sqm = std::sqrt(spec.mass());

    IvpOptions io;
    io.rtol = opts.rtol;
    io.t0 = opts.t0;

    std::size_t integrations = 0, bisections = 0;
    auto run = [&](double a) {
        ++integrations;
        return integrate_ivp(a, spec, io);
    };
    auto resolved = [](const Trajectory& tr) {
        return tr.event == ShootEvent::Decay || tr.event == ShootEvent::Timeout;
    };

    double lo = theta, hi = 0.0;
    Trajectory tr_lo, tr_hi;
    std::optional<Trajectory> hit;
    std::optional<double> a_hit;

    bool bracketed = false;
    if (opts.a_guess && *opts.a_guess > theta) {
        double w = opts.guess_width;
        double a_lo = std::max(theta, *opts.a_guess * (1.0 - w));
        double a_hi = *opts.a_guess * (1.0 + w);
        Trajectory t_lo = run(a_lo);
        Trajectory t_hi = run(a_hi);
        for (int it = 0; it < 40 && !hit; ++it) {
            if (resolved(t_lo)) {
                hit = t_lo;
                a_hit = a_lo;
                break;
            }
            if (resolved(t_hi)) {
                hit = t_hi;
                a_hit = a_hi;
                break;
            }
            const bool lo_ok = t_lo.event == ShootEvent::Undershoot;
            const bool hi_ok = t_hi.event == ShootEvent::Overshoot;
            if (lo_ok && hi_ok) {
                lo = a_lo;
                hi = a_hi;
                tr_lo = std::move(t_lo);
                tr_hi = std::move(t_hi);
                bracketed = true;
                break;
            }
            w *= 2.0;
            if (!lo_ok) {
                a_hi = a_lo;
                t_hi = std::move(t_lo);
                a_lo = std::max(theta, a_lo * (1.0 - w));
                t_lo = run(a_lo);
            } else {
                a_lo = a_hi;
                t_lo = std::move(t_hi);
                a_hi = a_hi * (1.0 + w);
                if (a_hi > opts.a_cap) break;
                t_hi = run(a_hi);
            }
        }
    }

    if (!bracketed && !hit) {
        lo = theta;
        tr_lo = run(theta);
        double a = 2.0 * theta;
        while (true) {
            if (a > opts.a_cap)
                throw NumericError(NumericError::Code::NoBracket,
                                   "no OVERSHOOT found for a in [theta, a_cap=" + format_double(opts.a_cap) + "]");
            Trajectory tr;
            try {
                tr = run(a);
            } catch (const NumericError& e) {
                if (e.code() != NumericError::Code::IntegratorFailure) throw;
                throw NumericError(NumericError::Code::NoBracket, "no OVERSHOOT found for a in [theta, " +
                                                                      format_double(a) + "): " + e.what());
            }
            if (tr.event == ShootEvent::Overshoot) {
                hi = a;
                tr_hi = std::move(tr);
                break;
            }
            if (resolved(tr)) {
                hit = std::move(tr);
                a_hit = a;
                break;
            }
            lo = a;
            tr_lo = std::move(tr);
            a *= 2.0;
        }
    }

    if (!hit) {
        while (hi - lo > opts.tol * lo) {
            const double mid = lo + 0.5 * (hi - lo);
            if (!(mid > lo && mid < hi)) break;
            ++bisections;
            Trajectory tr = run(mid);
            if (tr.event == ShootEvent::Overshoot) {
                hi = mid;
                tr_hi = std::move(tr);
            } else if (tr.event == ShootEvent::Undershoot) {
                lo = mid;
                tr_lo = std::move(tr);
            } else {
                hit = std::move(tr);
                a_hit = mid;
                break;
            }
        }
    }

    // Computed part of the profile and the hand-off node.
    const Trajectory& base = hit ? *hit : tr_lo;
    const double a_star = hit ? *a_hit : lo + 0.5 * (hi - lo);
    const double k = spec.k();
    // Log-derivative of the decaying linear solution t^(-nu) K_nu(sqrt(m) t)
    // is -sqrt(m) K_{nu+1} / K_nu.
    const double nu = 0.5 * (k - 1.0);
    auto tail_consistent = [&](std::size_t j) {
        if (base.v[j] >= 1e-4 * a_star) return true;
        const double z = sqm * base.t[j];
        const double expected = -sqm * std::cyl_bessel_k(nu + 1.0, z) / std::cyl_bessel_k(nu, z);
        return std::fabs(base.dv[j] / base.v[j] - expected) <= opts.tail_log_tol * sqm;
    };
    std::size_t handoff = 1;
    if (hit) {
        handoff = base.t.size() - 1;
        while (handoff > 1 && !(base.dv[handoff] < 0.0 && base.v[handoff] > 0.0)) --handoff;
        for (std::size_t j = 1; j < handoff; ++j)
            if (!tail_consistent(j)) {
                handoff = std::max<std::size_t>(1, j - 1);
                break;
            }
    } else {
        const TrajectoryInterp hi_interp{tr_hi, second_derivatives(tr_hi, spec)};
        const double t_hi_end = tr_hi.t.back();
        for (std::size_t j = 1; j < base.t.size(); ++j) {
            const double tj = base.t[j];
            if (!(base.v[j] > 0.0 && base.dv[j] < 0.0)) break;
            if (tj >= t_hi_end) break;
            const double gap = std::fabs(hi_interp.value(tj) - base.v[j]);
            if (gap > opts.divergence_tol * base.v[j]) break;
            if (!tail_consistent(j)) break;
            handoff = j;
            if (base.v[j] < 1e-8 * a_star) break;
        }
    }

    std::vector<double> t(base.t.begin(), base.t.begin() + static_cast<std::ptrdiff_t>(handoff) + 1);
    std::vector<double> v(base.v.begin(), base.v.begin() + static_cast<std::ptrdiff_t>(handoff) + 1);
    std::vector<double> dv(base.dv.begin(), base.dv.begin() + static_cast<std::ptrdiff_t>(handoff) + 1);
    std::vector<double> ddv;
    {
        Trajectory cut;
        cut.t = t;
        cut.v = v;
        cut.dv = dv;
        ddv = second_derivatives(cut, spec);
    }

    const double t_h = t.back();
    const double v_h = v.back();
    const double t_end = opts.t_end > 0.0 ? opts.t_end : std::max(40.0 / sqm, t_h + 10.0 / sqm);
    const double step = opts.tail_step / sqm;
    const double C = v_h * std::pow(t_h, 0.5 * k) * std::exp(sqm * t_h);
    for (std::size_t j = 1;; ++j) {
        const double x = t_h + static_cast<double>(j) * step;
        if (x > t_end + 0.5 * step) break;
        const double val = C * std::pow(x, -0.5 * k) * std::exp(-sqm * x);
        const double g = sqm + 0.5 * k / x;
        t.push_back(x);
        v.push_back(val);
        dv.push_back(-g * val);
        ddv.push_back((g * g + 0.5 * k / (x * x)) * val);
    }

    RadialProfile profile(std::move(t), std::move(v), std::move(dv), std::move(ddv), k, sqm, t_h);
    profile.a_star = a_star;
    profile.bisection_tol = opts.tol;
    profile.integrator_rtol = opts.rtol;
    profile.integrations = integrations;
    profile.bisections = bisections;
    const EnergyNorms norms = energy_norms(profile);
    profile.energy_grad = norms.grad;
    profile.energy_l2 = norms.l2;
    try {
        profile.delta_fit = decay_fit(profile, spec.mass());
    } catch (const NumericError&) {
        profile.delta_fit = kNaN;
    }
    return profile;
}

// ---------------------------------------------------------------------------
// Diagnostics

double decay_fit(const RadialProfile& profile, double m, std::optional<DecayWindow> window) {
    (void)m;
    if (profile.size() < 3) throw NumericError(NumericError::Code::TailTooShort, "decay_fit: profile too short");
    const auto& t = profile.t();
    const auto& v = profile.v();
    double lo = 0.0, hi = 0.0;
    if (window) {
        lo = window->t_lo;
        hi = window->t_hi;
        if (!(hi > lo) || lo < 0.0) throw DomainError("decay_fit: invalid window");
    } else {
        const double th = profile.handoff_t();
        const double vh = profile.value(th);
        const double a = std::max(v.front(), profile.a_star);
        if (!(vh > 0.0) || !(a > 0.0) || vh >= 1e-4 * a)
            throw NumericError(NumericError::Code::TailTooShort,
                               "decay_fit: computed tail does not reach 1e-4 a*");
        hi = th;
        lo = th;
        for (std::size_t j = 0; j < t.size() && t[j] <= th; ++j)
            if (v[j] <= 10.0 * vh) {
                lo = t[j];
                break;
            }
        if (!(hi > lo)) throw NumericError(NumericError::Code::TailTooShort, "decay_fit: empty tail window");
    }

    constexpr int n = 201;
    const double half_k = 0.5 * profile.k();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * i / (n - 1);
        const double val = profile.value(x);
        if (!(val > 0.0) || x <= 0.0)
            throw NumericError(NumericError::Code::TailTooShort, "decay_fit: non-positive tail sample");
        const double y = -(std::log(val) + half_k * std::log(x));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

// Gauss-Legendre 4-point nodes/weights on [-1, 1].
constexpr std::array<double, 4> kGlX = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                        0.8611363115940526};
constexpr std::array<double, 4> kGlW = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                        0.3478548451374538};

template <class G>
double integrate_profile(const RadialProfile& p, G g) {
    const auto& t = p.t();
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < t.size(); ++j) {
        const double a = t[j], b = t[j + 1];
        const double c = 0.5 * (a + b), r = 0.5 * (b - a);
        double s = 0.0;
        for (int q = 0; q < 4; ++q) s += kGlW[q] * g(c + r * kGlX[q]);
        total += r * s;
    }
    return total;
}

}  // namespace

EnergyNorms energy_norms(const RadialProfile& profile) {
    const double k = profile.k();
    EnergyNorms out{};
    out.grad = integrate_profile(profile, [&](double x) {
        const double d = profile.deriv(x);
        return std::pow(x, k) * d * d;
    });
    out.l2 = integrate_profile(profile, [&](double x) {
        const double v = profile.value(x);
        return std::pow(x, k) * v * v;
    });
    return out;
}

double weighted_power_integral(const RadialProfile& profile, double q) {
    const double k = profile.k();
    return integrate_profile(profile,
                             [&](double x) { return std::pow(x, k) * std::pow(std::fabs(profile.value(x)), q); });
}

double ni_bound_excess(const RadialProfile& profile) {
    const double k = profile.k();
    if (!(k > 1.0)) throw DomainError("ni_bound_excess: needs k > 1");
    const double grad = profile.energy_grad > 0.0 ? profile.energy_grad : energy_norms(profile).grad;
    const double c = std::sqrt(grad / (k - 1.0));
    double worst = -std::numeric_limits<double>::infinity();
    const auto& t = profile.t();
    const auto& v = profile.v();
    for (std::size_t j = 1; j < t.size(); ++j)
        worst = std::max(worst, v[j] - c * std::pow(t[j], -0.5 * (k - 1.0)));
    return worst;
}

RnProfile lift_to_rn(const RadialProfile& profile, double alpha, std::size_t n, double t_max) {
    if (n < 5) throw DomainError("lift_to_rn: need at least 5 points");
    const double T = t_max > 0.0 ? t_max : profile.t_end();
    const double r_max = cov_inverse(T, alpha);
    RnProfile out;
    out.r.resize(n);
    out.u.resize(n);
    out.du.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = r_max * static_cast<double>(i) / static_cast<double>(n - 1);
        const double t = cov_forward(r, alpha);
        out.r[i] = r;
        out.u[i] = profile.value(t);
        out.du[i] = profile.deriv(t) * std::pow(r, 0.5 * alpha);
    }
    return out;
}

RnProfile lift_to_rn_nodes(const RadialProfile& profile, double alpha) {
    RnProfile out;
    const auto& t = profile.t();
    out.r.resize(t.size());
    out.u = profile.v();
    out.du.resize(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        out.r[i] = alpha == 0.0 ? t[i] : cov_inverse(t[i], alpha);
        out.du[i] = alpha == 0.0 ? profile.dv()[i] : profile.dv()[i] * std::pow(out.r[i], 0.5 * alpha);
    }
    return out;
}

double rn_residual(const RnProfile& lifted, const ProblemSpec& spec) {
    const std::size_t n = lifted.r.size();
    if (n < 5 || lifted.u.size() != n) throw DomainError("rn_residual: need at least 5 points");
    const double h = lifted.r[1] - lifted.r[0];
    const auto& u = lifted.u;
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        const double r = lifted.r[i];
        const double d1 = (-u[i + 2] + 8.0 * u[i + 1] - 8.0 * u[i - 1] + u[i - 2]) / (12.0 * h);
        const double d2 = (-u[i + 2] + 16.0 * u[i + 1] - 30.0 * u[i] + 16.0 * u[i - 1] - u[i - 2]) / (12.0 * h * h);
        const double res = -d2 - (spec.N - 1.0) / r * d1 - std::pow(r, spec.alpha) * spec.f(u[i]).value;
        worst = std::max(worst, std::fabs(res));
    }
    return worst;
}

double ode_residual(const RadialProfile& profile, const ProblemSpec& spec) {
    const auto& t = profile.t();
    const double k = profile.k();
    double worst = 0.0;
    for (std::size_t j = 1; j + 1 < t.size() && t[j + 1] <= profile.handoff_t(); ++j) {
        const double h = t[j + 1] - t[j];
        const auto e = ends(profile.v()[j], profile.dv()[j], profile.ddv()[j], profile.v()[j + 1],
                            profile.dv()[j + 1], profile.ddv()[j + 1]);
        const auto at = detail::quintic_hermite(e, h, 0.5);
        const double tm = t[j] + 0.5 * h;
        worst = std::max(worst, std::fabs(at.dd + (k / tm) * at.d + spec.f(at.y).value));
    }
    return worst;
}

}  // namespace henon
