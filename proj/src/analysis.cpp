#include "pointint/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace pointint {

namespace {

struct WaveFit {
    double a_cos = 0.0, b_sin = 0.0;
};

/// Least-squares fit of samples to A cos(kx) + B sin(kx) over [lo, hi].
/// The fit runs in a phase-shifted basis around the window midpoint for
/// conditioning and is mapped back to the global basis afterwards.
WaveFit fit_window(const UniformGrid& grid, std::span<const double> psi, double k, double lo,
                   double hi, double fit_width) {
    if (lo < grid.x0 - 1e-12 * grid.h || hi > grid.last() + 1e-12 * grid.h)
        throw WindowOutOfRange("extract_boundary_data: fit window outside the sampled grid");
    const int first = static_cast<int>(std::ceil((lo - grid.x0) / grid.h - 1e-9));
    const int last = static_cast<int>(std::floor((hi - grid.x0) / grid.h + 1e-9));
    if (last - first + 1 < 3)
        throw WindowOutOfRange("extract_boundary_data: too few samples in the fit window");

    const double mid = 0.5 * (lo + hi);
    double scc = 0.0, scs = 0.0, sss = 0.0, rc = 0.0, rs = 0.0;
    for (int i = first; i <= last; ++i) {
        const double ph = k * (grid.node(i) - mid);
        const double c = std::cos(ph);
        const double s = std::sin(ph);
        scc += c * c;
        scs += c * s;
        sss += s * s;
        rc += c * psi[i];
        rs += s * psi[i];
    }
    // condition number of the symmetric 2x2 normal matrix
    const double tr = scc + sss;
    const double det = scc * sss - scs * scs;
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    const double lmax = 0.5 * (tr + disc);
    const double lmin = 0.5 * (tr - disc);
    const double cond = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
    if (k * fit_width < 0.25 * std::numbers::pi && cond > 1e8)
        throw IllConditionedFit("extract_boundary_data: window spans too little phase");
    if (!(det != 0.0))
        throw IllConditionedFit("extract_boundary_data: singular normal matrix");

    const double am = (rc * sss - rs * scs) / det;
    const double bm = (rs * scc - rc * scs) / det;
    // psi = am cos(k(x-mid)) + bm sin(k(x-mid)) -> global cos/sin basis
    const double cm = std::cos(k * mid);
    const double sm = std::sin(k * mid);
    return {am * cm - bm * sm, am * sm + bm * cm};
}

}  // namespace

BoundaryData extract_boundary_data(const UniformGrid& grid, std::span<const double> psi,
                                   double k, double x0, double exclusion, double fit_width) {
    if (!(k > 0.0)) throw InvalidArgument("extract_boundary_data: need k > 0");
    if (!(exclusion >= 0.0) || !(fit_width > 0.0))
        throw InvalidArgument("extract_boundary_data: bad window parameters");
    if (psi.size() != static_cast<std::size_t>(grid.count))
        throw InvalidArgument("extract_boundary_data: sample count does not match grid");

    const WaveFit right =
        fit_window(grid, psi, k, x0 + exclusion, x0 + exclusion + fit_width, fit_width);
    const WaveFit left =
        fit_window(grid, psi, k, x0 - exclusion - fit_width, x0 - exclusion, fit_width);

    const double c0 = std::cos(k * x0);
    const double s0 = std::sin(k * x0);
    BoundaryData out;
    out.k = k;
    out.psi_minus = left.a_cos * c0 + left.b_sin * s0;
    out.dpsi_minus = k * (-left.a_cos * s0 + left.b_sin * c0);
    out.psi_plus = right.a_cos * c0 + right.b_sin * s0;
    out.dpsi_plus = k * (-right.a_cos * s0 + right.b_sin * c0);
    return out;
}

FitReport fit_connection_matrix(std::span<const BoundaryData> data) {
    const std::size_t n = data.size();
    if (n < 2) throw InvalidArgument("fit_connection_matrix: need at least 2 states");

    // the in-vectors (psi'_-, psi_-) must span the plane
    double best_sine = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ni = std::hypot(data[i].dpsi_minus, data[i].psi_minus);
        if (ni == 0.0) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double nj = std::hypot(data[j].dpsi_minus, data[j].psi_minus);
            if (nj == 0.0) continue;
            const double cross = data[i].dpsi_minus * data[j].psi_minus -
                                 data[i].psi_minus * data[j].dpsi_minus;
            best_sine = std::max(best_sine, std::abs(cross) / (ni * nj));
        }
    }
    if (best_sine < 1e-6)
        throw DegenerateInputs("fit_connection_matrix: in-vectors are pairwise parallel");

    // normal equations, shared Gram matrix for both rows of T
    double m11 = 0.0, m12 = 0.0, m22 = 0.0;
    double r1a = 0.0, r1b = 0.0, r2a = 0.0, r2b = 0.0;
    for (const BoundaryData& d : data) {
        m11 += d.dpsi_minus * d.dpsi_minus;
        m12 += d.dpsi_minus * d.psi_minus;
        m22 += d.psi_minus * d.psi_minus;
        r1a += d.dpsi_plus * d.dpsi_minus;
        r1b += d.dpsi_plus * d.psi_minus;
        r2a += d.psi_plus * d.dpsi_minus;
        r2b += d.psi_plus * d.psi_minus;
    }
    const double det = m11 * m22 - m12 * m12;
    if (det == 0.0) throw DegenerateInputs("fit_connection_matrix: singular Gram matrix");

    FitReport rep;
    rep.states = static_cast<int>(n);
    rep.fitted.a11 = (r1a * m22 - r1b * m12) / det;
    rep.fitted.a12 = (r1b * m11 - r1a * m12) / det;
    rep.fitted.a21 = (r2a * m22 - r2b * m12) / det;
    rep.fitted.a22 = (r2b * m11 - r2a * m12) / det;

    double res2 = 0.0, out2 = 0.0;
    for (const BoundaryData& d : data) {
        const double e1 =
            d.dpsi_plus - (rep.fitted.a11 * d.dpsi_minus + rep.fitted.a12 * d.psi_minus);
        const double e2 =
            d.psi_plus - (rep.fitted.a21 * d.dpsi_minus + rep.fitted.a22 * d.psi_minus);
        res2 += e1 * e1 + e2 * e2;
        out2 += d.dpsi_plus * d.dpsi_plus + d.psi_plus * d.psi_plus;
    }
    rep.residual = out2 > 0.0 ? std::sqrt(res2 / out2) : std::sqrt(res2);
    rep.det_deviation = std::abs(rep.fitted.det() - 1.0);
    return rep;
}

bool ConvergenceTable::errors_strictly_decreasing() const {
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (!(rows[i].abs_error < rows[i - 1].abs_error)) return false;
    return !rows.empty();
}

namespace {

void check_a_list(std::span<const double> a_list) {
    if (a_list.empty()) throw InvalidArgument("convergence_study: empty a list");
    for (std::size_t i = 0; i < a_list.size(); ++i) {
        if (!(a_list[i] > 0.0))
            throw InvalidArgument("convergence_study: separations must be positive");
        if (i > 0 && !(a_list[i] < a_list[i - 1]))
            throw InvalidArgument("convergence_study: a list must be strictly decreasing");
    }
}

}  // namespace

ConvergenceTable convergence_study(const RenormalizedFamily& family,
                                   std::span<const double> a_list, const TransferProbe& probe) {
    check_a_list(a_list);
    const Mat2 target = family.target().matrix();
    const double target_scale = max_abs_entry(target);

    ConvergenceTable table;
    table.observable = "transfer_matrix_max_entry_error@E=" + std::to_string(probe.energy);
    for (double a : a_list) {
        const Mat2 m = train_transfer(family.train_at(a), probe.energy).m;
        const double err = max_abs_diff(m, target);
        table.rows.push_back({a, err, 0.0, err, err / target_scale});
    }
    return table;
}

ConvergenceTable convergence_study(const RenormalizedFamily& family,
                                   std::span<const double> a_list, const EigenvalueProbe& probe) {
    check_a_list(a_list);
    if (probe.index < 1) throw InvalidArgument("convergence_study: eigenvalue index >= 1");

    const BoxSystem reference_sys =
        BoxSystem::with_point(probe.length, family.target(), 0.0, probe.left, probe.right);
    const Spectrum ref =
        eigenvalues(reference_sys, probe.emin, probe.emax, probe.index, probe.tol);
    if (static_cast<int>(ref.eigenvalues.size()) < probe.index)
        throw InvalidArgument("convergence_study: window holds fewer reference states than index");
    const double target = ref.eigenvalues[probe.index - 1];

    ConvergenceTable table;
    table.observable = "box_eigenvalue_" + std::to_string(probe.index);
    for (double a : a_list) {
        const BoxSystem sys = BoxSystem::with_train(probe.length, family.train_at(a),
                                                    probe.left, probe.right);
        const Spectrum spec = eigenvalues(sys, probe.emin, probe.emax, probe.index, probe.tol);
        if (static_cast<int>(spec.eigenvalues.size()) < probe.index)
            throw InvalidArgument("convergence_study: window holds fewer train states than index");
        const double observed = spec.eigenvalues[probe.index - 1];
        const double err = std::abs(observed - target);
        table.rows.push_back({a, observed, target, err, err / std::abs(target)});
    }
    return table;
}

std::vector<std::pair<int, double>> degeneracy_gaps(std::span<const double> eigenvalues) {
    if (eigenvalues.size() < 2) throw InvalidArgument("degeneracy_gaps: need >= 2 eigenvalues");
    std::vector<std::pair<int, double>> gaps;
    for (std::size_t i = 0; i + 1 < eigenvalues.size(); i += 2)
        gaps.emplace_back(static_cast<int>(i / 2 + 1),
                          (eigenvalues[i + 1] - eigenvalues[i]) / eigenvalues[i]);
    return gaps;
}

}  // namespace pointint
