#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace henon {

enum class NonlinearityKind {
    PowerMinusLinear,    ///< u^p - m u
    AlphaDependentPower, ///< u^((N+2+2a-eps)/(N-2)) - u
    Polynomial,          ///< u^p + sum_q c_q u^q - m u
    MaxPower,            ///< max{u^p, u^q} - m u, p > q > 1
    Rational,            ///< u^q / (1 + u^(q-p)) - m u
};

/// One lower-order term c_q u^q of a polynomial nonlinearity.
struct PolyTerm {
    double exponent = 0.0;
    double coeff = 0.0;

    friend bool operator==(const PolyTerm&, const PolyTerm&) = default;
};

/// Immutable description of a nonlinear term F with F(0) = 0, F'(0) = -m.
///
/// Values for negative arguments follow the odd extension F(-u) = -F(u).
/// The alpha-dependent kind needs the space dimension; it is bound through
/// `with_dimension` (ProblemSpec does this on construction).
struct NonlinearitySpec {
    NonlinearityKind kind = NonlinearityKind::PowerMinusLinear;
    double p = 3.0;
    double q = 0.0;
    double m = 1.0;
    double eps = 0.0;
    int dimension = 0;
    std::vector<PolyTerm> terms;

    bool alpha_dependent() const noexcept { return kind == NonlinearityKind::AlphaDependentPower; }

    /// Linear mass m = -F'(0).
    double mass() const noexcept { return kind == NonlinearityKind::AlphaDependentPower ? 1.0 : m; }

    /// Growth exponent at infinity (the p of the admissibility bound).
    double growth_exponent(double alpha) const;

    NonlinearitySpec with_dimension(int N) const;

    /// Canonical CLI string, e.g. "pow:p=3" or "rational:q=3,p=2,m=1".
    std::string to_string() const;

    friend bool operator==(const NonlinearitySpec&, const NonlinearitySpec&) = default;
};

/// Parses `pow:p=3`, `alphapow:eps=1`, `poly:p=3,m=1,c2=0.5`, `max:p=3,q=2,m=1`,
/// `rational:q=3,p=2,m=1`. Throws DomainError on malformed or invalid input.
NonlinearitySpec parse_nonlinearity(const std::string& text);

struct FValue {
    double value;
    double deriv;
};

/// F(u) and F'(u). Throws DomainError when the result is not finite.
FValue eval(const NonlinearitySpec& F, double u, double alpha);

/// F(u) only; same contract as eval.
double eval_value(const NonlinearitySpec& F, double u, double alpha);

/// Primitive int_0^u F(s) ds by Gauss-Kronrod quadrature.
double primitive(const NonlinearitySpec& F, double u, double alpha);

/// Sampled verdicts on the structural assumptions of the theory.
struct AssumptionReport {
    double theta = 0.0;       ///< sign change point of F (NaN when none found)
    double phi = 0.0;         ///< zero of the primitive (NaN when none found)
    double lambda_limit = 0.0;///< limit of G(u) = u F'(u) / F(u)
    double ell = 0.0;         ///< limsup |F(u)| / u^p
    double s_witness = 0.0;   ///< a point with int_0^s F > 0 (NaN when none)

    bool fin0 = false;        ///< F(0) = 0 and F'(0) < 0
    bool fcresce = false;     ///< |F(u)| grows at most like u^p
    bool fnozero = false;     ///< the primitive turns positive somewhere
    bool f2_literal = false;  ///< F < 0 below theta, F > theta above, F' <= 0 near 0
    bool f2_positive = false; ///< same with F > 0 above theta
    bool f3 = false;          ///< G stays above G(phi) on [theta, phi] and tends to a limit >= 1
    bool g_nonincreasing = false; ///< G nonincreasing on [phi, U_max]

    /// First grid point where a check failed, per assumption (NaN if none).
    double f2_literal_witness = 0.0;
    double f3_witness = 0.0;

    bool all_pass() const noexcept { return fin0 && fcresce && fnozero && f2_positive && f3; }
};

/// Runs every structural check above on the supplied grid.
/// The grid must be positive; the scan covers (0, max(grid)].
AssumptionReport check_assumptions(const NonlinearitySpec& F, std::span<const double> scan_grid,
                                   double alpha = 0.0);

/// Log-spaced scan grid on [lo, hi] with n points.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

}  // namespace henon
