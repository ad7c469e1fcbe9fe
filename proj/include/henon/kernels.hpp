#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

// Data-parallel inner loops of the eigen-solver and the quadratures.
//
// Every kernel has a scalar reference in `kernels::scalar` and, on x86-64, an
// AVX2 variant in `kernels::avx2`. The public entry points dispatch at runtime
// on CPU support. Both variants evaluate the same floating-point operations in
// the same order (the library builds with -ffp-contract=off), so their results
// are bit-identical; the equivalence tests rely on that.

namespace henon::kernels {

enum class Isa { Scalar, Avx2 };

/// Number of shifts a single Sturm pass evaluates.
inline constexpr std::size_t kSturmLanes = 4;

using Shifts = std::array<double, kSturmLanes>;
using Counts = std::array<std::int64_t, kSturmLanes>;

/// Symmetric tridiagonal pencil (A, B) with B diagonal:
/// A has diagonal `diag` and off-diagonal `off`, `off_sq[i] = off[i]^2`.
struct PencilView {
    std::span<const double> diag;
    std::span<const double> off_sq;
    std::span<const double> mass;
    double pivmin;
};

bool avx2_supported() noexcept;

/// Variant used by the dispatching entry points.
Isa active_isa() noexcept;

/// Overrides the runtime choice (tests and benchmarking). Requesting Avx2 on a
/// machine without it falls back to Scalar.
void force_isa(Isa isa) noexcept;

std::string_view isa_name(Isa isa) noexcept;

/// For each shift s, the number of negative pivots of the LDL^T factorization
/// of A - s B, i.e. the number of eigenvalues of A v = lambda B v below s.
Counts sturm_counts(const PencilView& pencil, const Shifts& shifts);

/// sum_i w_i x_i y_i, accumulated in four interleaved partial sums.
double weighted_dot(std::span<const double> w, std::span<const double> x, std::span<const double> y);

/// y = A x for the symmetric tridiagonal A (diag, off).
void tridiag_matvec(std::span<const double> diag, std::span<const double> off, std::span<const double> x,
                    std::span<double> y);

namespace scalar {
Counts sturm_counts(const PencilView& pencil, const Shifts& shifts);
double weighted_dot(std::span<const double> w, std::span<const double> x, std::span<const double> y);
void tridiag_matvec(std::span<const double> diag, std::span<const double> off, std::span<const double> x,
                    std::span<double> y);
}  // namespace scalar

#if defined(HENON_HAVE_AVX2)
namespace avx2 {
Counts sturm_counts(const PencilView& pencil, const Shifts& shifts);
double weighted_dot(std::span<const double> w, std::span<const double> x, std::span<const double> y);
void tridiag_matvec(std::span<const double> diag, std::span<const double> off, std::span<const double> x,
                    std::span<double> y);
}  // namespace avx2
#endif

}  // namespace henon::kernels
