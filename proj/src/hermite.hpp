#pragma once

// Quintic Hermite interpolation on one interval from value, first and second
// derivative at both ends.

namespace henon::detail {

struct HermiteEnds {
    double y0, d0, dd0;
    double y1, d1, dd1;
};

/// Value, first and second derivative at t = t0 + s h, s in [0, 1].
struct HermiteEval {
    double y;
    double d;
    double dd;
};

inline HermiteEval quintic_hermite(const HermiteEnds& e, double h, double s) {
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const double h0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
    const double h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
    const double h2 = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
    const double h3 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
    const double h4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
    const double h5 = 0.5 * (s3 - 2.0 * s4 + s5);

    const double g0 = -30.0 * s2 + 60.0 * s3 - 30.0 * s4;
    const double g1 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
    const double g2 = 0.5 * (2.0 * s - 9.0 * s2 + 12.0 * s3 - 5.0 * s4);
    const double g4 = -12.0 * s2 + 28.0 * s3 - 15.0 * s4;
    const double g5 = 0.5 * (3.0 * s2 - 8.0 * s3 + 5.0 * s4);

    const double k0 = -60.0 * s + 180.0 * s2 - 120.0 * s3;
    const double k1 = -36.0 * s + 96.0 * s2 - 60.0 * s3;
    const double k2 = 0.5 * (2.0 - 18.0 * s + 36.0 * s2 - 20.0 * s3);
    const double k4 = -24.0 * s + 84.0 * s2 - 60.0 * s3;
    const double k5 = 0.5 * (6.0 * s - 24.0 * s2 + 20.0 * s3);

    HermiteEval out;
    out.y = h0 * e.y0 + h * h1 * e.d0 + h * h * h2 * e.dd0 + h3 * e.y1 + h * h4 * e.d1 + h * h * h5 * e.dd1;
    out.d = (g0 * (e.y0 - e.y1)) / h + g1 * e.d0 + h * g2 * e.dd0 + g4 * e.d1 + h * g5 * e.dd1;
    out.dd = (k0 * (e.y0 - e.y1)) / (h * h) + (k1 * e.d0 + k4 * e.d1) / h + k2 * e.dd0 + k5 * e.dd1;
    return out;
}

}  // namespace henon::detail
