#include "henon/kernels.hpp"

#include <cmath>

namespace henon::kernels::scalar {

Counts sturm_counts(const PencilView& pencil, const Shifts& shifts) {
    Counts counts{};
    const std::size_t n = pencil.diag.size();
    if (n == 0) return counts;
    for (std::size_t lane = 0; lane < kSturmLanes; ++lane) {
        const double s = shifts[lane];
        std::int64_t c = 0;
        double d = pencil.diag[0] - s * pencil.mass[0];
        if (std::fabs(d) < pencil.pivmin) d = -pencil.pivmin;
        if (d < 0.0) ++c;
        for (std::size_t i = 1; i < n; ++i) {
            const double t = pencil.diag[i] - s * pencil.mass[i];
            d = t - pencil.off_sq[i - 1] / d;
            if (std::fabs(d) < pencil.pivmin) d = -pencil.pivmin;
            if (d < 0.0) ++c;
        }
        counts[lane] = c;
    }
    return counts;
}

double weighted_dot(std::span<const double> w, std::span<const double> x, std::span<const double> y) {
    const std::size_t n = w.size();
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        for (std::size_t l = 0; l < 4; ++l) acc[l] = acc[l] + (w[i + l] * x[i + l]) * y[i + l];
    double sum = (acc[0] + acc[2]) + (acc[1] + acc[3]);
    for (; i < n; ++i) sum = sum + (w[i] * x[i]) * y[i];
    return sum;
}

void tridiag_matvec(std::span<const double> diag, std::span<const double> off, std::span<const double> x,
                    std::span<double> y) {
    const std::size_t n = diag.size();
    if (n == 0) return;
    if (n == 1) {
        y[0] = diag[0] * x[0];
        return;
    }
    y[0] = diag[0] * x[0] + off[0] * x[1];
    for (std::size_t i = 1; i + 1 < n; ++i) y[i] = (diag[i] * x[i] + off[i - 1] * x[i - 1]) + off[i] * x[i + 1];
    y[n - 1] = diag[n - 1] * x[n - 1] + off[n - 2] * x[n - 2];
}

}  // namespace henon::kernels::scalar
