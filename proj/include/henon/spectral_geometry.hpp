#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace henon {

using BigInt = boost::multiprecision::cpp_int;

/// mu_i = i (N - 2 + i), the i-th eigenvalue of the Laplace-Beltrami operator on S^(N-1).
std::int64_t mu(int i, int N);

/// Binomial coefficient C(n, k) in exact arithmetic (0 when k < 0 or k > n).
BigInt binomial_big(std::int64_t n, std::int64_t k);

/// Dimension N_i of degree-i spherical harmonics in N variables,
/// C(N+i-1, N-1) - C(N+i-3, N-1). Evaluated in 64-bit arithmetic with overflow
/// checks and an arbitrary-precision fallback; throws NumericError(Precision)
/// only if the result itself exceeds 64 bits (use multiplicity_big then).
std::uint64_t multiplicity(int i, int N);
BigInt multiplicity_big(int i, int N);

/// (N + 2i - 2) (N + i - 3)! / ((N - 2)! i!), the factorial form of N_i.
BigInt multiplicity_factorial_form(int i, int N);

/// How the oracle obtains the rank of the Laplacian matrix.
enum class RankMethod {
    Auto,      ///< triangular certificate, else modular, else rational elimination
    Modular,   ///< elimination mod 2^61 - 1, rational fallback below full row rank
    Rational,  ///< exact rational elimination
};

/// Nullity of the Laplacian on homogeneous degree-i polynomials in N
/// variables, from the monomial-basis matrix. Guarded to i <= 8, N <= 8.
std::uint64_t harmonic_dim_oracle(int i, int N, RankMethod method = RankMethod::Auto);

/// {2(i-1) : i = 2 .. i_max + 1}.
std::vector<double> degeneracy_alphas(int i_max);

/// Sign scan of g_i(alpha) = 4 mu_i / (2 + alpha)^2 - k(alpha).
struct DegeneracyScan {
    struct Root {
        int i;
        double alpha;      ///< grid point where g_i vanishes, or midpoint of a sign change
        bool exact_zero;   ///< g_i is exactly zero at a grid point
    };
    std::vector<Root> roots;
    std::size_t points = 0;
    std::size_t guarded_off_even = 0;  ///< off-even grid points with |g_i| below the guard
};

/// Scans alpha = j * step on (0, alpha_max) for i = 1 .. i_max. The sign of
/// g_i is taken from exact integer arithmetic when 1/step is an integer,
/// otherwise from double evaluation.
DegeneracyScan scan_degeneracy_condition(int N, int i_max, double alpha_max, double step = 1e-3,
                                         double guard = 1e-9);

enum class Side { Left, Right };

const char* to_string(Side s);

/// True when alpha is within 1e-9 of 2i for an integer i >= 1.
bool is_bifurcation_value(double alpha);

/// sum of N_i over integers 0 <= i < 1 + alpha/2. Throws DomainError at
/// bifurcation values (use the one-sided form) and for alpha < 0.
std::uint64_t morse_index(double alpha, int N);

/// Morse index just left or right of alpha_even = 2i.
std::uint64_t morse_index_one_sided(int alpha_even, int N, Side side);

/// #{j >= 0 : 4 mu_j / (2 + alpha)^2 < k(alpha)}, one mode per j.
std::uint64_t symmetric_morse_index(double alpha, int N);
std::uint64_t symmetric_morse_index_one_sided(int alpha_even, int N, Side side);

/// Kernel dimension of the linearization in R^N given the radial kernel
/// dimension n_alpha in {0, 1, 2}.
std::uint64_t kernel_dimension(double alpha, int N, int n_alpha);

struct BranchReport {
    int alpha_i = 0;
    int i = 0;
    int branch_count = 0;
    std::vector<std::string> groups;          ///< "O(N-1)" style descriptors
    std::vector<std::pair<int, int>> factors; ///< (h, N-h); (N-1, 0) for O(N-1)
};

/// Branch census at alpha = 2i: one O(N-1)-invariant continuum for even i,
/// floor(N/2) continua with O(h) x O(N-h) symmetry for odd i.
BranchReport branch_census(int alpha_even, int N);

struct MorseReport {
    double alpha = 0.0;
    int N = 3;
    std::uint64_t m_closed = 0;
    std::optional<std::int64_t> m_numeric;
    std::uint64_t m_symmetric = 0;
    bool is_bifurcation_value = false;
    std::uint64_t kernel_dim = 0;
    int n_alpha_input = 0;
    std::optional<Side> side;  ///< set for one-sided rows at bifurcation values
};

/// Closed-form report; at bifurcation values `side` selects the one-sided indices.
MorseReport morse_report(double alpha, int N, int n_alpha = 0, std::optional<Side> side = std::nullopt);

}  // namespace henon
