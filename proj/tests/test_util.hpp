#pragma once

#include <cstdint>
#include <functional>

// Small helpers shared by the test binaries only.

/// Deterministic uniform doubles, identical on every platform.
struct DetRng {
    std::uint64_t s;
    explicit DetRng(std::uint64_t seed) : s(seed * 0x9e3779b97f4a7c15ull + 1ull) {}
    double next() {  // in [0, 1)
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return static_cast<double>(s >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }
    double signed_away_from_zero(double lo, double hi) {
        const double mag = uniform(lo, hi);
        return next() < 0.5 ? -mag : mag;
    }
};

/// Composite Simpson quadrature with n subintervals (n made even).
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 == 0 ? 2.0 : 4.0);
    return sum * h / 3.0;
}

/// Bisection root finder for a strictly bracketing interval.
inline double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                          double tol = 1e-14) {
    double flo = f(lo);
    for (int i = 0; i < 300 && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}
