#pragma once

#include "henon/nonlinearity.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace henon {

/// k(alpha) = (2N - 2 + alpha) / (2 + alpha), the effective dimension of the
/// radial problem on the t-line.
double k_of_alpha(double alpha, int N);

/// t = 2/(2+alpha) r^((2+alpha)/2). Throws DomainError for r < 0.
double cov_forward(double r, double alpha);

/// Inverse of cov_forward. Throws DomainError for t < 0.
double cov_inverse(double t, double alpha);

/// The radial problem -V'' - (k/t) V' = F(V), V'(0) = 0, V(inf) = 0 for a
/// dimension N, weight exponent alpha and nonlinearity F.
struct ProblemSpec {
    int N = 3;
    double alpha = 0.0;
    NonlinearitySpec F;

    /// Validates N >= 3, alpha >= 0 and binds the dimension into F.
    static ProblemSpec make(int N, double alpha, NonlinearitySpec F);

    double k() const { return k_of_alpha(alpha, N); }
    double mass() const { return F.mass(); }
    double growth_exponent() const { return F.growth_exponent(alpha); }

    /// Critical exponent (N + 2 + 2 alpha)/(N - 2) of the weighted problem.
    double critical_exponent() const { return (N + 2.0 + 2.0 * alpha) / (N - 2.0); }

    /// p < (k+3)/(k-1), the range where a unique ground state exists.
    bool admissible() const;

    FValue f(double u) const { return eval(F, u, alpha); }
};

/// Largest positive zero of F (the constant solution below which no ground
/// state starts). Throws DomainError if F has no sign change on (0, 1e6].
double largest_zero(const ProblemSpec& spec);

struct TaylorStart {
    double v;
    double dv;
};

/// Second-order Frobenius start V(t0) = a - F(a) t0^2 / (2(1+k)),
/// V'(t0) = -F(a) t0 / (1+k). Throws DomainError for a <= 0.
TaylorStart taylor_start(double a, const ProblemSpec& spec, double t0);

enum class ShootEvent { Overshoot, Undershoot, Decay, Timeout };

const char* to_string(ShootEvent e);

struct IvpOptions {
    double rtol = 1e-10;
    double t0 = 1e-4;            ///< Frobenius hand-over point (capped at 1e-3 sqrt(2 (1+k) a / |F(a)|))
    double t_max = 0.0;          ///< 0 selects 40 / sqrt(m)
    double decay_tol = 1e-8;     ///< DECAY when V < decay_tol * a with tail structure
    double max_step = 0.0;       ///< 0 selects 0.05 / sqrt(m)
    std::size_t max_steps = 2'000'000;
};

/// Accepted integrator nodes, including the Frobenius start and the located
/// event. The first node is t = 0.
struct Trajectory {
    std::vector<double> t;
    std::vector<double> v;
    std::vector<double> dv;
    ShootEvent event = ShootEvent::Timeout;
    double t_event = 0.0;
    std::size_t steps = 0;
    std::size_t rejected = 0;
};

/// Adaptive Dormand-Prince 5(4) integration of the radial IVP with V(0) = a,
/// stopped at the first event. Throws NumericError(IntegratorFailure) when the
/// step size underflows.
Trajectory integrate_ivp(double a, const ProblemSpec& spec, const IvpOptions& opts = {});

/// A ground state on a graded t-grid. Nodes up to `handoff_t` come from the
/// shooting trajectory; beyond it the asymptotic tail C t^(-k/2) e^(-sqrt(m) t)
/// is tabulated and also used for evaluation past the last node.
class RadialProfile {
public:
    RadialProfile() = default;

    /// Builds a profile from samples. `ddv` is the second derivative at the
    /// nodes (used for quintic Hermite interpolation). The tail formula takes
    /// over past `handoff_t` with C matched at that node.
    RadialProfile(std::vector<double> t, std::vector<double> v, std::vector<double> dv, std::vector<double> ddv,
                  double k, double sqrt_m, double handoff_t);

    /// Profile from (t, V, V') samples with V'' estimated from V'; the whole
    /// grid is treated as computed data (hand-off at the last node).
    static RadialProfile from_samples(std::vector<double> t, std::vector<double> v, std::vector<double> dv, double k,
                                      double sqrt_m);

    const std::vector<double>& t() const { return t_; }
    const std::vector<double>& v() const { return v_; }
    const std::vector<double>& dv() const { return dv_; }
    const std::vector<double>& ddv() const { return ddv_; }
    std::size_t size() const { return t_.size(); }

    double k() const { return k_; }
    double sqrt_m() const { return sqrt_m_; }
    double handoff_t() const { return handoff_t_; }
    double tail_constant() const { return tail_c_; }
    double t_end() const { return t_.empty() ? 0.0 : t_.back(); }

    double value(double t) const;
    double deriv(double t) const;

    // Shooting metadata.
    double a_star = 0.0;
    double delta_fit = 0.0;
    double energy_grad = 0.0;  ///< int t^k (V')^2
    double energy_l2 = 0.0;    ///< int t^k V^2
    double bisection_tol = 0.0;
    double integrator_rtol = 0.0;
    std::size_t integrations = 0;
    std::size_t bisections = 0;

private:
    std::size_t locate(double t) const;
    double tail_value(double t) const;

    std::vector<double> t_, v_, dv_, ddv_;
    double k_ = 0.0;
    double sqrt_m_ = 1.0;
    double handoff_t_ = 0.0;
    double tail_c_ = 0.0;
};

struct ShootOptions {
    double tol = 1e-14;          ///< stop when a_hi - a_lo < tol * a
    double rtol = 1e-10;         ///< integrator tolerance
    double t0 = 1e-4;
    double a_cap = 1e6;
    double divergence_tol = 1e-3;///< hand-off once the bracket trajectories separate by this (relative)
    double tail_log_tol = 1e-3;  ///< hand-off once V'/V leaves the linear tail law by this (units of sqrt(m))
    double tail_step = 0.02;     ///< node spacing of the tabulated tail (units of 1/sqrt(m))
    double t_end = 0.0;          ///< 0 selects max(40, handoff + 10) / sqrt(m)
    std::optional<double> a_guess;
    double guess_width = 0.02;   ///< relative half-width of the warm-start bracket
};

/// Ground state by bisection between an UNDERSHOOT and an OVERSHOOT witness.
/// Throws NumericError(NoBracket) when no OVERSHOOT is found below a_cap.
RadialProfile shoot_ground_state(const ProblemSpec& spec, const ShootOptions& opts = {});

struct DecayWindow {
    double t_lo;
    double t_hi;
};

/// Least-squares slope of -log(V t^(k/2)) over the window (default: the last
/// decade of the computed tail before the hand-off). Throws
/// NumericError(TailTooShort) when the tail is empty, non-positive or never
/// drops below 1e-4 a*.
double decay_fit(const RadialProfile& profile, double m, std::optional<DecayWindow> window = std::nullopt);

/// int_0^T t^w g(V, V')^2 style quadratures over the profile.
struct EnergyNorms {
    double grad;  ///< int t^k (V')^2
    double l2;    ///< int t^k V^2
};

EnergyNorms energy_norms(const RadialProfile& profile);

/// int t^k |V|^q over the profile.
double weighted_power_integral(const RadialProfile& profile, double q);

/// max over nodes t >= t_1 of V(t) - (k-1)^(-1/2) (int t^k V'^2)^(1/2) t^(-(k-1)/2);
/// a non-positive value means the radial decay bound holds pointwise.
double ni_bound_excess(const RadialProfile& profile);

/// The radial solution u(r) = V(t(r)) on an r-grid.
struct RnProfile {
    std::vector<double> r;
    std::vector<double> u;
    std::vector<double> du;
};

/// Lifts the profile to R^N on a uniform r-grid of n points covering
/// [0, r(t_end)] (or r(t_max) when given).
RnProfile lift_to_rn(const RadialProfile& profile, double alpha, std::size_t n = 4001, double t_max = 0.0);

/// Lifts onto the images r_j = t^-1(t_j) of the profile nodes.
RnProfile lift_to_rn_nodes(const RadialProfile& profile, double alpha);

/// max |-u'' - (N-1)/r u' - r^alpha F(u)| over interior nodes of a uniform
/// r-grid, derivatives by fourth-order centered differences of u.
double rn_residual(const RnProfile& lifted, const ProblemSpec& spec);

/// max |V'' + (k/t) V' + F(V)| at the midpoints of the computed part of the
/// profile, derivatives from the profile interpolant.
double ode_residual(const RadialProfile& profile, const ProblemSpec& spec);

}  // namespace henon
