#include "henon/spectral_geometry.hpp"

#include "henon/errors.hpp"
#include "henon/radial_ode.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <map>

namespace henon {
namespace {

void require_N(int N) {
    if (N < 3) throw DomainError("N must be >= 3");
}

void require_i(int i) {
    if (i < 0) throw DomainError("harmonic degree must be >= 0");
}

// C(n, k) in 64 bits; nullopt on overflow.
std::optional<std::uint64_t> binomial_u64(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::int64_t j = 1; j <= k; ++j) {
        // r * (n - k + j) is divisible by j at every step.
        unsigned __int128 t = static_cast<unsigned __int128>(r) * static_cast<std::uint64_t>(n - k + j);
        t /= static_cast<std::uint64_t>(j);
        if (t > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
        r = static_cast<std::uint64_t>(t);
    }
    return r;
}

BigInt factorial(std::int64_t n) {
    BigInt r = 1;
    for (std::int64_t j = 2; j <= n; ++j) r *= j;
    return r;
}

std::uint64_t to_u64(const BigInt& x) {
    if (x < 0 || x > std::numeric_limits<std::uint64_t>::max())
        throw NumericError(NumericError::Code::Precision, "value does not fit in 64 bits");
    return x.convert_to<std::uint64_t>();
}

// Exponent vectors of degree d in n variables, lexicographic.
void enumerate(int n, int d, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == n - 1) {
        cur.push_back(d);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int a = d; a >= 0; --a) {
        cur.push_back(a);
        enumerate(n, d - a, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> monomials(int n, int d) {
    std::vector<std::vector<int>> out;
    if (d < 0) return out;
    std::vector<int> cur;
    enumerate(n, d, cur, out);
    return out;
}

constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kPrime);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e) {
        if (e & 1) r = mulmod(r, a);
        a = mulmod(a, a);
        e >>= 1;
    }
    return r;
}

// Sparse row: (column, coefficient).
using SparseRow = std::vector<std::pair<std::size_t, std::int64_t>>;

std::size_t rank_mod_p(const std::vector<SparseRow>& rows, std::size_t cols) {
    std::vector<std::vector<std::uint64_t>> m(rows.size(), std::vector<std::uint64_t>(cols, 0));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (auto [c, v] : rows[r]) m[r][c] = static_cast<std::uint64_t>(((v % static_cast<std::int64_t>(kPrime)) +
                                                                           static_cast<std::int64_t>(kPrime))) %
                                              kPrime;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
        std::size_t piv = rank;
        while (piv < m.size() && m[piv][c] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[rank]);
        const std::uint64_t inv = powmod(m[rank][c], kPrime - 2);
        for (std::size_t r = rank + 1; r < m.size(); ++r) {
            if (m[r][c] == 0) continue;
            const std::uint64_t f = mulmod(m[r][c], inv);
            for (std::size_t cc = c; cc < cols; ++cc) {
                if (m[rank][cc] == 0) continue;
                m[r][cc] = (m[r][cc] + kPrime - mulmod(f, m[rank][cc])) % kPrime;
            }
        }
        ++rank;
    }
    return rank;
}

std::size_t rank_rational(const std::vector<SparseRow>& rows, std::size_t cols) {
    using boost::multiprecision::cpp_rational;
    std::vector<std::vector<cpp_rational>> m(rows.size(), std::vector<cpp_rational>(cols, 0));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (auto [c, v] : rows[r]) m[r][c] = v;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
        std::size_t piv = rank;
        while (piv < m.size() && m[piv][c] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[rank]);
        for (std::size_t r = rank + 1; r < m.size(); ++r) {
            if (m[r][c] == 0) continue;
            const cpp_rational f = m[r][c] / m[rank][c];
            for (std::size_t cc = c; cc < cols; ++cc) m[r][cc] -= f * m[rank][cc];
        }
        ++rank;
    }
    return rank;
}

// Certificate of full row rank: column m * x_0^2 for row m gives a square
// submatrix that is triangular with nonzero diagonal once rows are ordered by
// the x_0 exponent. Checked on the actual entries.
bool triangular_certificate(const std::vector<std::vector<int>>& row_monos, const std::vector<SparseRow>& rows,
                            const std::map<std::vector<int>, std::size_t>& col_index) {
    const std::size_t R = rows.size();
    std::vector<std::size_t> pivot_col(R);
    std::map<std::size_t, std::size_t> col_to_row;
    for (std::size_t r = 0; r < R; ++r) {
        auto mono = row_monos[r];
        mono[0] += 2;
        pivot_col[r] = col_index.at(mono);
        col_to_row[pivot_col[r]] = r;
    }
    for (std::size_t r = 0; r < R; ++r) {
        bool diag_ok = false;
        for (auto [c, v] : rows[r]) {
            if (c == pivot_col[r]) {
                diag_ok = v != 0;
                continue;
            }
            auto it = col_to_row.find(c);
            if (it == col_to_row.end()) continue;
            // Entry in another row's pivot column: must lie below the diagonal
            // in the x_0-exponent order.
            if (!(row_monos[r][0] > row_monos[it->second][0])) return false;
        }
        if (!diag_ok) return false;
    }
    return true;
}

bool near_even(double alpha, int& half) {
    const double h = std::round(alpha / 2.0);
    half = static_cast<int>(h);
    return std::fabs(alpha - 2.0 * h) < 1e-9;
}

}  // namespace

std::int64_t mu(int i, int N) {
    require_i(i);
    require_N(N);
    return static_cast<std::int64_t>(i) * (N - 2 + i);
}

BigInt binomial_big(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (std::int64_t j = 1; j <= k; ++j) {
        r *= (n - k + j);
        r /= j;
    }
    return r;
}

BigInt multiplicity_big(int i, int N) {
    require_i(i);
    require_N(N);
    return binomial_big(N + i - 1, N - 1) - binomial_big(N + i - 3, N - 1);
}

std::uint64_t multiplicity(int i, int N) {
    require_i(i);
    require_N(N);
    const auto a = binomial_u64(N + i - 1, N - 1);
    const auto b = binomial_u64(N + i - 3, N - 1);
    if (a && b) return *a - *b;
    return to_u64(multiplicity_big(i, N));
}

BigInt multiplicity_factorial_form(int i, int N) {
    require_i(i);
    require_N(N);
    return BigInt(N + 2 * i - 2) * factorial(N + i - 3) / (factorial(N - 2) * factorial(i));
}

std::uint64_t harmonic_dim_oracle(int i, int N, RankMethod method) {
    require_i(i);
    require_N(N);
    if (i > 8 || N > 8) throw DomainError("harmonic_dim_oracle: guarded to i <= 8, N <= 8");
    const auto cols = monomials(N, i);
    if (i < 2) return cols.size();
    const auto row_monos = monomials(N, i - 2);
    std::map<std::vector<int>, std::size_t> col_index, row_index;
    for (std::size_t c = 0; c < cols.size(); ++c) col_index[cols[c]] = c;
    for (std::size_t r = 0; r < row_monos.size(); ++r) row_index[row_monos[r]] = r;

    // Laplacian: d^2/dx_j^2 x^a = a_j (a_j - 1) x^(a - 2 e_j).
    std::vector<SparseRow> rows(row_monos.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        for (int j = 0; j < N; ++j) {
            const int a = cols[c][j];
            if (a < 2) continue;
            auto target = cols[c];
            target[j] -= 2;
            rows[row_index.at(target)].emplace_back(c, static_cast<std::int64_t>(a) * (a - 1));
        }
    }

    std::size_t rank;
    if (method == RankMethod::Rational) {
        rank = rank_rational(rows, cols.size());
    } else if (method == RankMethod::Auto && triangular_certificate(row_monos, rows, col_index)) {
        rank = rows.size();
    } else {
        rank = rank_mod_p(rows, cols.size());
        // A modular rank below the row count may be an artefact of the prime.
        if (rank < rows.size()) rank = rank_rational(rows, cols.size());
    }
    return cols.size() - rank;
}

std::vector<double> degeneracy_alphas(int i_max) {
    std::vector<double> out;
    for (int i = 2; i <= i_max + 1; ++i) out.push_back(2.0 * (i - 1));
    return out;
}

DegeneracyScan scan_degeneracy_condition(int N, int i_max, double alpha_max, double step, double guard) {
    require_N(N);
    if (!(step > 0.0) || !(alpha_max > 0.0)) throw DomainError("scan: step and alpha_max must be > 0");
    const double inv = 1.0 / step;
    const bool exact = std::fabs(inv - std::round(inv)) < 1e-9 && inv < 1e9;
    const auto D = static_cast<std::int64_t>(std::round(inv));
    const auto J = static_cast<std::int64_t>(std::ceil(alpha_max / step - 1e-9));

    DegeneracyScan out;
    for (int i = 1; i <= i_max; ++i) {
        const double m4 = 4.0 * static_cast<double>(mu(i, N));
        const __int128 m4D2 = static_cast<__int128>(4 * mu(i, N)) * D * D;
        int last = 0;
        double last_alpha = 0.0;
        for (std::int64_t j = 1; j < J; ++j) {
            const double alpha = static_cast<double>(j) * step;
            const double g = m4 / ((2.0 + alpha) * (2.0 + alpha)) - k_of_alpha(alpha, N);
            int s;
            if (exact) {
                const __int128 v = m4D2 - static_cast<__int128>(D * (2 * N - 2) + j) * (2 * D + j);
                s = v > 0 ? 1 : (v < 0 ? -1 : 0);
            } else {
                s = std::fabs(g) < guard ? 0 : (g > 0.0 ? 1 : -1);
            }
            ++out.points;
            int half = 0;
            if (!near_even(alpha, half) && std::fabs(g) < guard) ++out.guarded_off_even;
            if (s == 0) {
                out.roots.push_back({i, alpha, true});
                last = 0;
            } else {
                if (last != 0 && last != s) out.roots.push_back({i, 0.5 * (last_alpha + alpha), false});
                last = s;
            }
            last_alpha = alpha;
        }
    }
    return out;
}

const char* to_string(Side s) { return s == Side::Left ? "left" : "right"; }

bool is_bifurcation_value(double alpha) {
    int half = 0;
    return near_even(alpha, half) && half >= 1;
}

namespace {

// Number of integers j >= 0 with j < 1 + alpha/2, alpha off the even integers >= 2.
std::uint64_t modes_below(double alpha) {
    return static_cast<std::uint64_t>(std::floor(1.0 + alpha / 2.0)) + 1;
}

void require_alpha(double alpha) {
    if (!std::isfinite(alpha) || alpha < 0.0) throw DomainError("alpha must be finite and >= 0");
    if (is_bifurcation_value(alpha))
        throw DomainError("BOUNDARY: alpha is a bifurcation value; use the one-sided evaluation");
}

std::uint64_t morse_sum(std::uint64_t modes, int N) {
    std::uint64_t m = 0;
    for (std::uint64_t i = 0; i < modes; ++i) m += multiplicity(static_cast<int>(i), N);
    return m;
}

int require_even(int alpha_even) {
    if (alpha_even < 2 || alpha_even % 2 != 0) throw DomainError("alpha must be an even integer >= 2");
    return alpha_even / 2;
}

}  // namespace

std::uint64_t morse_index(double alpha, int N) {
    require_N(N);
    require_alpha(alpha);
    if (alpha == 0.0) return multiplicity(0, N);
    return morse_sum(modes_below(alpha), N);
}

std::uint64_t morse_index_one_sided(int alpha_even, int N, Side side) {
    require_N(N);
    const int i = require_even(alpha_even);
    // j < i + 1 -/+ 0: j <= i on the left, j <= i + 1 on the right.
    return morse_sum(static_cast<std::uint64_t>(side == Side::Left ? i + 1 : i + 2), N);
}

std::uint64_t symmetric_morse_index(double alpha, int N) {
    require_N(N);
    require_alpha(alpha);
    if (alpha == 0.0) return 1;
    // Direct inequality check; the guard keeps comparisons away from ties.
    std::uint64_t count = 0;
    for (int j = 0;; ++j) {
        const double lhs = 4.0 * static_cast<double>(mu(j, N)) / ((2.0 + alpha) * (2.0 + alpha));
        const double rhs = k_of_alpha(alpha, N);
        if (lhs < rhs - 1e-9)
            ++count;
        else
            break;
    }
    return count;
}

std::uint64_t symmetric_morse_index_one_sided(int alpha_even, int N, Side side) {
    require_N(N);
    const int i = require_even(alpha_even);
    return static_cast<std::uint64_t>(side == Side::Left ? i + 1 : i + 2);
}

std::uint64_t kernel_dimension(double alpha, int N, int n_alpha) {
    require_N(N);
    if (n_alpha < 0 || n_alpha > 2) throw DomainError("n_alpha must be 0, 1 or 2");
    if (!std::isfinite(alpha) || alpha < 0.0) throw DomainError("alpha must be finite and >= 0");
    int half = 0;
    if (near_even(alpha, half)) return static_cast<std::uint64_t>(n_alpha) + multiplicity(half + 1, N);
    return static_cast<std::uint64_t>(n_alpha);
}

BranchReport branch_census(int alpha_even, int N) {
    require_N(N);
    BranchReport r;
    r.alpha_i = alpha_even;
    r.i = require_even(alpha_even);
    if (r.i % 2 == 0) {
        r.branch_count = 1;
        r.groups.push_back("O(" + std::to_string(N - 1) + ")");
        r.factors.emplace_back(N - 1, 0);
    } else {
        r.branch_count = N / 2;
        for (int h = 1; h <= N / 2; ++h) {
            r.groups.push_back("O(" + std::to_string(h) + ")xO(" + std::to_string(N - h) + ")");
            r.factors.emplace_back(h, N - h);
        }
    }
    return r;
}

MorseReport morse_report(double alpha, int N, int n_alpha, std::optional<Side> side) {
    require_N(N);
    MorseReport r;
    r.alpha = alpha;
    r.N = N;
    r.n_alpha_input = n_alpha;
    r.is_bifurcation_value = is_bifurcation_value(alpha);
    r.kernel_dim = kernel_dimension(alpha, N, n_alpha);
    if (r.is_bifurcation_value) {
        if (!side) throw DomainError("BOUNDARY: alpha is a bifurcation value; choose a side");
        const int ae = static_cast<int>(std::round(alpha));
        r.side = side;
        r.m_closed = morse_index_one_sided(ae, N, *side);
        r.m_symmetric = symmetric_morse_index_one_sided(ae, N, *side);
    } else {
        r.m_closed = morse_index(alpha, N);
        r.m_symmetric = symmetric_morse_index(alpha, N);
    }
    return r;
}

}  // namespace henon
