#include "henon/kernels.hpp"

#include <immintrin.h>

namespace henon::kernels::avx2 {

Counts sturm_counts(const PencilView& pencil, const Shifts& shifts) {
    Counts counts{};
    const std::size_t n = pencil.diag.size();
    if (n == 0) return counts;

    const __m256d s = _mm256_loadu_pd(shifts.data());
    const __m256d pivmin = _mm256_set1_pd(pencil.pivmin);
    const __m256d neg_pivmin = _mm256_set1_pd(-pencil.pivmin);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    __m256i count = _mm256_setzero_si256();

    auto fix_and_count = [&](__m256d d) {
        const __m256d absd = _mm256_andnot_pd(sign_mask, d);
        const __m256d tiny = _mm256_cmp_pd(absd, pivmin, _CMP_LT_OQ);
        d = _mm256_blendv_pd(d, neg_pivmin, tiny);
        const __m256d neg = _mm256_cmp_pd(d, zero, _CMP_LT_OQ);
        // All-ones lanes are -1 as int64.
        count = _mm256_sub_epi64(count, _mm256_castpd_si256(neg));
        return d;
    };

    __m256d d = _mm256_sub_pd(_mm256_set1_pd(pencil.diag[0]), _mm256_mul_pd(s, _mm256_set1_pd(pencil.mass[0])));
    d = fix_and_count(d);
    for (std::size_t i = 1; i < n; ++i) {
        const __m256d t =
            _mm256_sub_pd(_mm256_set1_pd(pencil.diag[i]), _mm256_mul_pd(s, _mm256_set1_pd(pencil.mass[i])));
        d = _mm256_sub_pd(t, _mm256_div_pd(_mm256_set1_pd(pencil.off_sq[i - 1]), d));
        d = fix_and_count(d);
    }
    alignas(32) std::int64_t out[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(out), count);
    for (std::size_t l = 0; l < kSturmLanes; ++l) counts[l] = out[l];
    return counts;
}

double weighted_dot(std::span<const double> w, std::span<const double> x, std::span<const double> y) {
    const std::size_t n = w.size();
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d wx = _mm256_mul_pd(_mm256_loadu_pd(&w[i]), _mm256_loadu_pd(&x[i]));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(wx, _mm256_loadu_pd(&y[i])));
    }
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d pair = _mm_add_pd(lo, hi);  // (a0 + a2, a1 + a3)
    double sum = _mm_cvtsd_f64(pair) + _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
    for (; i < n; ++i) sum = sum + (w[i] * x[i]) * y[i];
    return sum;
}

void tridiag_matvec(std::span<const double> diag, std::span<const double> off, std::span<const double> x,
                    std::span<double> y) {
    const std::size_t n = diag.size();
    if (n < 3) {
        scalar::tridiag_matvec(diag, off, x, y);
        return;
    }
    y[0] = diag[0] * x[0] + off[0] * x[1];
    std::size_t i = 1;
    for (; i + 4 < n; i += 4) {
        const __m256d dx = _mm256_mul_pd(_mm256_loadu_pd(&diag[i]), _mm256_loadu_pd(&x[i]));
        const __m256d lo = _mm256_mul_pd(_mm256_loadu_pd(&off[i - 1]), _mm256_loadu_pd(&x[i - 1]));
        const __m256d up = _mm256_mul_pd(_mm256_loadu_pd(&off[i]), _mm256_loadu_pd(&x[i + 1]));
        _mm256_storeu_pd(&y[i], _mm256_add_pd(_mm256_add_pd(dx, lo), up));
    }
    for (; i + 1 < n; ++i) y[i] = (diag[i] * x[i] + off[i - 1] * x[i - 1]) + off[i] * x[i + 1];
    y[n - 1] = diag[n - 1] * x[n - 1] + off[n - 2] * x[n - 2];
}

}  // namespace henon::kernels::avx2
