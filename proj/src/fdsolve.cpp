#include "pointint/fdsolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace pointint {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double operator_scale(const TridiagonalOperator& t) {
    double scale = 1.0;
    const int n = t.size();
    for (int i = 0; i < n; ++i) {
        double r = std::abs(t.diag[i]);
        if (i > 0) r += std::abs(t.offdiag[i - 1]);
        if (i + 1 < n) r += std::abs(t.offdiag[i]);
        scale = std::max(scale, r);
    }
    return scale;
}

TridiagonalOperator make_operator(double length, int n) {
    if (n < 3) throw InvalidArgument("discretize: need at least 3 interior nodes");
    if (!(length > 0.0)) throw InvalidArgument("discretize: length must be positive");
    TridiagonalOperator t;
    t.length = length;
    t.h = length / (n + 1);
    const double inv_h2 = 1.0 / (t.h * t.h);
    t.diag.assign(n, inv_h2);
    t.offdiag.assign(n - 1, -0.5 * inv_h2);
    return t;
}

/// Deterministic xorshift-based start vector for inverse iteration; fixed
/// seeding keeps the whole pipeline reproducible run to run.
std::vector<double> start_vector(int n, std::uint64_t seed) {
    std::uint64_t s = seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull;
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        v[i] = static_cast<double>(s >> 11) * 0x1.0p-53 - 0.5;
    }
    return v;
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

/// Row-pivoted LU factorization of a tridiagonal matrix (LAPACK dgttrf
/// scheme); pivoting fills in a second superdiagonal.
struct TridiagLU {
    std::vector<double> dl, d, du, du2;
    std::vector<bool> swap;

    TridiagLU(const TridiagonalOperator& t, double lambda) {
        const int n = t.size();
        dl.assign(n > 1 ? n - 1 : 0, 0.0);
        du.assign(n > 1 ? n - 1 : 0, 0.0);
        du2.assign(n > 2 ? n - 2 : 0, 0.0);
        swap.assign(n > 1 ? n - 1 : 0, false);
        d.resize(n);
        for (int i = 0; i < n; ++i) d[i] = t.diag[i] - lambda;
        for (int i = 0; i + 1 < n; ++i) {
            dl[i] = t.offdiag[i];
            du[i] = t.offdiag[i];
        }
        const double tiny = kEps * operator_scale(t);
        for (int i = 0; i + 1 < n; ++i) {
            if (std::abs(d[i]) >= std::abs(dl[i])) {
                if (d[i] == 0.0) d[i] = tiny;
                const double fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                const double fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                const double temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swap[i] = true;
            }
        }
        if (d[n - 1] == 0.0) d[n - 1] = tiny;
    }

    void solve(std::vector<double>& b) const {
        const int n = static_cast<int>(d.size());
        for (int i = 0; i + 1 < n; ++i) {
            if (swap[i]) std::swap(b[i], b[i + 1]);
            b[i + 1] -= dl[i] * b[i];
        }
        b[n - 1] /= d[n - 1];
        if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        for (int i = n - 3; i >= 0; --i)
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
};

void apply_operator(const TridiagonalOperator& t, std::span<const double> x,
                    std::vector<double>& y) {
    const int n = t.size();
    y.resize(n);
    for (int i = 0; i < n; ++i) {
        double s = t.diag[i] * x[i];
        if (i > 0) s += t.offdiag[i - 1] * x[i - 1];
        if (i + 1 < n) s += t.offdiag[i] * x[i + 1];
        y[i] = s;
    }
}

}  // namespace

std::pair<double, double> TridiagonalOperator::gershgorin() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    const int n = size();
    for (int i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(offdiag[i - 1]);
        if (i + 1 < n) r += std::abs(offdiag[i]);
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
    }
    return {lo, hi};
}

TridiagonalOperator discretize(double length, int n) { return make_operator(length, n); }

TridiagonalOperator discretize(const SampledPotential& potential, double length, int n) {
    TridiagonalOperator t = make_operator(length, n);
    const UniformGrid& g = potential.grid;
    if (g.count != n || std::abs(g.h - t.h) > 1e-12 * t.h ||
        std::abs(g.x0 - t.node(0)) > 1e-12 * length)
        throw GridMismatch("discretize: potential grid does not match the interior grid");
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(potential.values[i]))
            throw NonFinite("discretize: non-finite potential value");
        t.diag[i] += potential.values[i];
    }
    return t;
}

int sturm_count(const TridiagonalOperator& t, double lambda) {
    if (!std::isfinite(lambda)) throw NonFinite("sturm_count: non-finite shift");
    const int n = t.size();
    const double tiny = kEps * operator_scale(t);
    int count = 0;
    double p = t.diag[0] - lambda;
    if (std::abs(p) < tiny) p = p < 0.0 ? -tiny : tiny;
    if (p < 0.0) ++count;
    for (int i = 1; i < n; ++i) {
        const double e = t.offdiag[i - 1];
        p = (t.diag[i] - lambda) - e * e / p;
        if (std::abs(p) < tiny) p = p < 0.0 ? -tiny : tiny;
        if (p < 0.0) ++count;
    }
    return count;
}

namespace {

/// Bisection for the j-th smallest eigenvalue (1-based) within [lo, hi].
double bisect_eigenvalue(const TridiagonalOperator& t, int j, double lo, double hi, double tol) {
    for (int it = 0; it < 20000 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (sturm_count(t, mid) >= j)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> lowest_eigenvalues(const TridiagonalOperator& t, int m, double tol) {
    if (m < 1 || m > t.size()) throw InvalidArgument("lowest_eigenvalues: bad count");
    if (!(tol > 0.0)) throw InvalidArgument("lowest_eigenvalues: tol must be positive");
    const auto [glo, ghi] = t.gershgorin();
    std::vector<double> out;
    out.reserve(m);
    double lo = glo;
    for (int j = 1; j <= m; ++j) {
        const double ev = bisect_eigenvalue(t, j, lo, ghi, tol);
        out.push_back(ev);
        lo = std::max(glo, ev - tol);  // later eigenvalues cannot lie below
    }
    return out;
}

std::vector<double> eigenvalues_in_window(const TridiagonalOperator& t, double emin, double emax,
                                          int max_count, double tol) {
    if (!(emin < emax)) throw InvalidArgument("eigenvalues_in_window: need emin < emax");
    if (max_count < 1) throw InvalidArgument("eigenvalues_in_window: bad count");
    if (!(tol > 0.0)) throw InvalidArgument("eigenvalues_in_window: tol must be positive");
    const auto [glo, ghi] = t.gershgorin();
    const int below = sturm_count(t, emin);
    const int upto = sturm_count(t, emax);
    const int count = std::min(max_count, upto - below);
    std::vector<double> out;
    out.reserve(std::max(count, 0));
    double lo = std::max(emin, glo);
    for (int j = below + 1; j <= below + count; ++j) {
        const double ev = bisect_eigenvalue(t, j, lo, std::min(emax, ghi), tol);
        out.push_back(ev);
        lo = std::max(lo, ev - tol);
    }
    return out;
}

EigenPair eigenvector(const TridiagonalOperator& t, double lambda, double tol,
                      std::span<const std::vector<double>> orthogonal_to) {
    const int n = t.size();
    const double scale = operator_scale(t);
    const TridiagLU lu(t, lambda);

    auto project_out = [&](std::vector<double>& v) {
        for (const std::vector<double>& q : orthogonal_to) {
            double dot = 0.0;
            for (int i = 0; i < n; ++i) dot += v[i] * q[i];
            const double qn2 = norm2(q);
            if (qn2 == 0.0) continue;
            const double coef = dot / (qn2 * qn2);
            for (int i = 0; i < n; ++i) v[i] -= coef * q[i];
        }
    };

    std::vector<double> v = start_vector(n, static_cast<std::uint64_t>(n) * 1000003ull);
    project_out(v);
    const double threshold = 10.0 * tol + 1e3 * kEps * scale;
    double residual = std::numeric_limits<double>::infinity();
    std::vector<double> work;
    for (int iter = 0; iter < 5; ++iter) {
        lu.solve(v);
        project_out(v);
        const double nv = norm2(v);
        if (nv == 0.0 || !std::isfinite(nv))
            throw NoConvergence("eigenvector: iteration collapsed");
        for (double& x : v) x /= nv;
        apply_operator(t, v, work);
        double r = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = work[i] - lambda * v[i];
            r += d * d;
        }
        residual = std::sqrt(r);
        if (residual < threshold) break;
    }
    if (residual >= threshold)
        throw NoConvergence("eigenvector: residual did not converge in 5 iterations");

    // Deterministic sign: first component of noticeable size non-negative.
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    for (double x : v) {
        if (std::abs(x) > 1e-12 * vmax) {
            if (x < 0.0)
                for (double& y : v) y = -y;
            break;
        }
    }
    const double weight = 1.0 / std::sqrt(t.h);
    for (double& x : v) x *= weight;
    return {lambda, std::move(v), residual};
}

std::vector<EigenPair> eigenpairs(const TridiagonalOperator& t, std::span<const double> values,
                                  double tol) {
    std::vector<EigenPair> out;
    std::vector<std::vector<double>> cluster;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0 && values[i] - values[i - 1] >= 1e3 * tol) cluster.clear();
        EigenPair pair = eigenvector(t, values[i], tol, cluster);
        // keep the unit-l2 copy for the next projection in this cluster
        std::vector<double> unit = pair.vector;
        const double un = norm2(unit);
        for (double& x : unit) x /= un;
        cluster.push_back(std::move(unit));
        out.push_back(std::move(pair));
    }
    return out;
}

}  // namespace pointint
