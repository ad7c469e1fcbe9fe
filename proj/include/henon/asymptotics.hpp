#pragma once

#include "henon/radial_ode.hpp"

#include <optional>
#include <string>
#include <vector>

namespace henon {

enum class BesselRegime { Series, Asymptotic };

const char* to_string(BesselRegime r);

/// I_nu, K_nu and their derivatives at s. The order-(nu+1) values feed the
/// derivative recurrences I' = (nu/s) I + I_{nu+1}, K' = (nu/s) K - K_{nu+1}.
struct BesselPair {
    double nu = 0.0;
    double s = 0.0;
    double I = 0.0;
    double K = 0.0;
    double dI = 0.0;
    double dK = 0.0;
    double I_next = 0.0;
    double K_next = 0.0;
    BesselRegime regime = BesselRegime::Series;
    bool near_integer = false;  ///< |nu - round(nu)| < 1e-4

    /// I K' - I' K, which equals -1/s.
    double wronskian() const { return I * dK - dI * K; }
};

struct BesselOptions {
    double s_switch = 0.0;                ///< 0 selects 18 + 2 nu
    std::optional<BesselRegime> force;    ///< evaluate in this regime regardless of s
};

/// Ascending series below s_switch (K from the I_{-nu} combination, integer
/// orders by a symmetric epsilon pair), asymptotic expansion above. Throws
/// DomainError for s <= 0 or nu < 0 and NumericError(Precision) when a value
/// is not finite.
BesselPair bessel_ik(double nu, double s, const BesselOptions& opts = {});

/// Samples (t, v) of a function on (0, T].
struct GridFunction {
    std::vector<double> t;
    std::vector<double> v;
};

/// V~(t) = t^(1-k) V(1/t) on the reciprocal grid (ascending). Throws
/// DomainError for empty, unsorted or non-positive grids.
GridFunction kelvin(const GridFunction& f, double k);

struct KelvinResult {
    GridFunction transformed;
    std::vector<double> flux;  ///< t^k V~'(t) at the transformed nodes
    double flux_small_t = 0.0; ///< max |t^k V~'| over the smallest-t nodes (t <= 2 t_min)
};

/// Kelvin transform of the computed part of a profile, with the flux
/// t^k V~' = (1-k) V(1/t) - V'(1/t)/t. Throws DomainError when the profile
/// does not extend to t >= 10 (the transform would not reach small t).
KelvinResult kelvin(const RadialProfile& profile, double k);

/// Tail sources h for -Z'' - (k/t) Z' + m Z = h(exp(-(t/beta)^beta)).
enum class TailSource { Zero, Square, SLog, ThreeHalves };

const char* to_string(TailSource h);

/// Parses "zero", "s2", "slog", "s3/2".
TailSource parse_tail_source(const std::string& name);

double eval_tail_source(TailSource h, double s);

struct DecayOptions {
    double b_o = 0.0;         ///< coefficient of t^-nu K_nu(sqrt(m) t)
    double quad_tol = 1e-10;  ///< relative quadrature tolerance
    double fd_step = 1e-3;    ///< centered-difference step of the residual check
};

struct DecaySample {
    double t = 0.0;
    double Z = 0.0;
    double weighted = 0.0;    ///< exp((t/beta)^beta) Z
    double plus_term = 0.0;   ///< exp((t/beta)^beta) t^-nu I int_t^inf h~ s^(nu+1) K
    double minus_term = 0.0;  ///< exp((t/beta)^beta) t^-nu K int_0^t h~ s^(nu+1) I
    double residual = 0.0;    ///< |Z'' + (k/t) Z' - m Z + h~| by centered differences
};

struct DecayReport {
    TailSource h = TailSource::Square;
    double alpha = 0.0;
    double m = 1.0;
    int N = 3;
    double beta = 0.0;
    double k = 0.0;
    double nu = 0.0;
    std::vector<DecaySample> samples;
    double window_lo = 0.0;     ///< start of the last decade, t_max / 10
    double window_hi = 0.0;
    double tail_sup = 0.0;      ///< sup of the weighted solution over the window
    double decade_ratio = 0.0;  ///< weighted(window_lo side) sup over weighted at t_max
    bool monotone = false;      ///< weighted values non-increasing across the window
    double max_residual = 0.0;
};

/// Variation-of-constants solution with a_o = 0 on t_grid (ascending, > 0)
/// and its weighted tail. Throws DomainError for bad grids or parameters and
/// NumericError(NonConvergence) when a quadrature misses its tolerance.
DecayReport verify_superexp_decay(TailSource h, double alpha, double m, int N, const std::vector<double>& t_grid,
                                  const DecayOptions& opts = {});

/// weighted(t_early) / weighted(t_late) for two grid points of the report.
double weighted_ratio(const DecayReport& report, double t_early, double t_late);

}  // namespace henon
