#include "henon/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace henon::kernels {
namespace {

Isa detect() noexcept { return avx2_supported() ? Isa::Avx2 : Isa::Scalar; }

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

void check_sizes(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw std::invalid_argument(what);
}

}  // namespace

bool avx2_supported() noexcept {
#if defined(HENON_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) noexcept {
    if (isa == Isa::Avx2 && !avx2_supported()) isa = Isa::Scalar;
    current().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

Counts sturm_counts(const PencilView& pencil, const Shifts& shifts) {
    const std::size_t n = pencil.diag.size();
    check_sizes(pencil.mass.size(), n, "sturm_counts: mass size mismatch");
    if (n > 0) check_sizes(pencil.off_sq.size() + 1, n, "sturm_counts: off-diagonal size mismatch");
#if defined(HENON_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) return avx2::sturm_counts(pencil, shifts);
#endif
    return scalar::sturm_counts(pencil, shifts);
}

double weighted_dot(std::span<const double> w, std::span<const double> x, std::span<const double> y) {
    check_sizes(x.size(), w.size(), "weighted_dot: size mismatch");
    check_sizes(y.size(), w.size(), "weighted_dot: size mismatch");
#if defined(HENON_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) return avx2::weighted_dot(w, x, y);
#endif
    return scalar::weighted_dot(w, x, y);
}

void tridiag_matvec(std::span<const double> diag, std::span<const double> off, std::span<const double> x,
                    std::span<double> y) {
    const std::size_t n = diag.size();
    check_sizes(x.size(), n, "tridiag_matvec: size mismatch");
    check_sizes(y.size(), n, "tridiag_matvec: size mismatch");
    if (n > 0) check_sizes(off.size() + 1, n, "tridiag_matvec: off-diagonal size mismatch");
#if defined(HENON_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) return avx2::tridiag_matvec(diag, off, x, y);
#endif
    scalar::tridiag_matvec(diag, off, x, y);
}

}  // namespace henon::kernels
