#pragma once

#include <algorithm>
#include <cmath>

namespace pointint {

/// Plain 2x2 real matrix, row-major. Acts on column vectors (top, bottom).
struct Mat2 {
    double a11 = 1.0, a12 = 0.0;
    double a21 = 0.0, a22 = 1.0;

    static Mat2 identity() { return {}; }

    double det() const { return a11 * a22 - a12 * a21; }

    /// Magnitude scale of the determinant computation, used for
    /// cancellation-aware unimodularity checks.
    double det_scale() const {
        return std::max(1.0, std::abs(a11 * a22) + std::abs(a12 * a21));
    }

    bool finite() const {
        return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a21) &&
               std::isfinite(a22);
    }

    friend Mat2 operator*(const Mat2& l, const Mat2& r) {
        return {l.a11 * r.a11 + l.a12 * r.a21, l.a11 * r.a12 + l.a12 * r.a22,
                l.a21 * r.a11 + l.a22 * r.a21, l.a21 * r.a12 + l.a22 * r.a22};
    }

    void apply(double& top, double& bottom) const {
        const double t = a11 * top + a12 * bottom;
        const double b = a21 * top + a22 * bottom;
        top = t;
        bottom = b;
    }
};

inline double max_abs_diff(const Mat2& a, const Mat2& b) {
    return std::max({std::abs(a.a11 - b.a11), std::abs(a.a12 - b.a12),
                     std::abs(a.a21 - b.a21), std::abs(a.a22 - b.a22)});
}

inline double max_abs_entry(const Mat2& a) {
    return std::max({std::abs(a.a11), std::abs(a.a12), std::abs(a.a21), std::abs(a.a22)});
}

}  // namespace pointint
