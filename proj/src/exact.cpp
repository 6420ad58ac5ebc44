#include "pointint/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace pointint {

namespace {

constexpr double kPi = std::numbers::pi;

/// Evaluate the free solution at signed offset t from a base state
/// (dpsi0, psi0). Negative t continues the segment's solution backward.
void eval_free(double energy, double t, double dpsi0, double psi0, double& dpsi, double& psi) {
    if (energy > 0.0) {
        const double k = std::sqrt(2.0 * energy);
        const double c = std::cos(k * t);
        const double s = std::sin(k * t);
        psi = psi0 * c + dpsi0 * s / k;
        dpsi = -psi0 * k * s + dpsi0 * c;
    } else if (energy < 0.0) {
        const double kp = std::sqrt(-2.0 * energy);
        const double c = std::cosh(kp * t);
        const double s = std::sinh(kp * t);
        psi = psi0 * c + dpsi0 * s / kp;
        dpsi = psi0 * kp * s + dpsi0 * c;
    } else {
        psi = psi0 + dpsi0 * t;
        dpsi = dpsi0;
    }
}

struct Site {
    double position;
    Mat2 matrix;
};

std::vector<Site> interaction_sites(const BoxSystem& sys) {
    std::vector<Site> sites;
    if (const auto* train = std::get_if<DeltaTrain>(&sys.interaction())) {
        sites.reserve(train->spikes().size());
        for (const DeltaSpike& s : train->spikes())
            sites.push_back({s.position, delta_step(s.strength).m});
    } else if (const auto* pt = std::get_if<PointInteraction>(&sys.interaction())) {
        sites.push_back({pt->position, pt->matrix.matrix()});
    } else if (std::holds_alternative<SampledPotential>(sys.interaction())) {
        throw UnsupportedInteraction(
            "exact solver: sampled potentials belong to the finite-difference solver");
    }
    return sites;
}

void start_vector(BoundaryKind bc, double& dpsi, double& psi) {
    if (bc == BoundaryKind::Dirichlet) {
        dpsi = 1.0;
        psi = 0.0;
    } else {
        dpsi = 0.0;
        psi = 1.0;
    }
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

double t_of_energy(double e) { return e >= 0.0 ? std::sqrt(2.0 * e) : -std::sqrt(-2.0 * e); }
double energy_of_t(double t) { return 0.5 * t * std::abs(t); }

/// Golden-section minimization of |F| on [a, b].
template <typename F>
double golden_min_abs(F&& f, double a, double b) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = std::abs(f(x1));
    double f2 = std::abs(f(x2));
    for (int i = 0; i < 120 && (b - a) > 8.0 * std::numeric_limits<double>::epsilon() *
                                              std::max(1.0, std::abs(a) + std::abs(b));
         ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = std::abs(f(x1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = std::abs(f(x2));
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

BoxSystem::BoxSystem(double length, BoundaryKind left, BoundaryKind right, Interaction in)
    : length_(length), left_(left), right_(right), interaction_(std::move(in)) {
    if (!(length_ > 0.0) || !std::isfinite(length_))
        throw InvalidArgument("BoxSystem: length must be positive");
    const double half = 0.5 * length_;
    if (const auto* train = std::get_if<DeltaTrain>(&interaction_)) {
        if (!(train->leftmost() > -half) || !(train->rightmost() < half))
            throw InvalidArgument("BoxSystem: spikes must lie strictly inside the box");
    } else if (const auto* pt = std::get_if<PointInteraction>(&interaction_)) {
        if (!(pt->position > -half) || !(pt->position < half))
            throw InvalidArgument("BoxSystem: interaction must lie strictly inside the box");
    }
}

BoxSystem BoxSystem::free_box(double length, BoundaryKind left, BoundaryKind right) {
    return BoxSystem(length, left, right, std::monostate{});
}

BoxSystem BoxSystem::with_train(double length, DeltaTrain train, BoundaryKind left,
                                BoundaryKind right) {
    return BoxSystem(length, left, right, std::move(train));
}

BoxSystem BoxSystem::with_point(double length, ConnectionMatrix matrix, double position,
                                BoundaryKind left, BoundaryKind right) {
    return BoxSystem(length, left, right, PointInteraction{matrix, position});
}

BoxSystem BoxSystem::with_sampled(double length, SampledPotential potential, BoundaryKind left,
                                  BoundaryKind right) {
    return BoxSystem(length, left, right, std::move(potential));
}

int BoxSystem::site_count() const {
    if (const auto* train = std::get_if<DeltaTrain>(&interaction_)) return train->size();
    if (std::holds_alternative<PointInteraction>(interaction_)) return 1;
    return 0;
}

TransferMatrix free_propagator(double energy, double distance) {
    if (distance < 0.0) throw NegativeDistance("free_propagator: distance must be >= 0");
    if (!std::isfinite(energy) || !std::isfinite(distance))
        throw NonFinite("free_propagator: non-finite input");
    TransferMatrix t;
    t.energy = energy;
    if (energy > 0.0) {
        const double k = std::sqrt(2.0 * energy);
        const double c = std::cos(k * distance);
        const double s = std::sin(k * distance);
        t.m = {c, -k * s, s / k, c};
    } else if (energy < 0.0) {
        const double kp = std::sqrt(-2.0 * energy);
        const double c = std::cosh(kp * distance);
        const double s = std::sinh(kp * distance);
        t.m = {c, kp * s, s / kp, c};
    } else {
        t.m = {1.0, 0.0, distance, 1.0};
    }
    return t;
}

TransferMatrix delta_step(double v) {
    if (!std::isfinite(v)) throw NonFinite("delta_step: non-finite strength");
    return {{1.0, 2.0 * v, 0.0, 1.0}, 0.0};
}

TransferMatrix train_transfer(const DeltaTrain& train, double energy) {
    const auto& spikes = train.spikes();
    Mat2 m = delta_step(spikes.front().strength).m;
    for (std::size_t i = 1; i < spikes.size(); ++i) {
        const double gap = spikes[i].position - spikes[i - 1].position;
        m = free_propagator(energy, gap).m * m;
        m = delta_step(spikes[i].strength).m * m;
    }
    return {m, energy};
}

double spectral_function(const BoxSystem& sys, double energy) {
    if (!std::isfinite(energy)) throw NonFinite("spectral_function: non-finite energy");
    const std::vector<Site> sites = interaction_sites(sys);
    double dpsi, psi;
    start_vector(sys.left_bc(), dpsi, psi);
    double x = -0.5 * sys.length();
    for (const Site& site : sites) {
        double dp, p;
        eval_free(energy, site.position - x, dpsi, psi, dp, p);
        site.matrix.apply(dp, p);
        dpsi = dp;
        psi = p;
        x = site.position;
    }
    double dp, p;
    eval_free(energy, 0.5 * sys.length() - x, dpsi, psi, dp, p);
    return sys.right_bc() == BoundaryKind::Dirichlet ? p : dp;
}

namespace {

/// Bisect a sign-change bracket [ta, tb] in scan coordinates down to
/// |dE| < tol; returns the midpoint energy.
double bisect_bracket(const BoxSystem& sys, double ta, double tb, double fa, double tol) {
    const int sa = sign_of(fa);
    for (int i = 0; i < 200; ++i) {
        if (std::abs(energy_of_t(tb) - energy_of_t(ta)) < tol) break;
        const double tm = 0.5 * (ta + tb);
        const double fm = spectral_function(sys, energy_of_t(tm));
        if (fm == 0.0) return energy_of_t(tm);
        if (sign_of(fm) == sa)
            ta = tm;
        else
            tb = tm;
    }
    return 0.5 * (energy_of_t(ta) + energy_of_t(tb));
}

/// Probe a no-sign-change cell for a pair of roots hiding between scan
/// nodes. Locates the minimum of |F|, then samples a geometric ladder of
/// offsets around it; every sign change found becomes a bracket.
void probe_dip(const BoxSystem& sys, double ta, double tb, double tol,
               std::vector<double>& roots) {
    auto f = [&](double t) { return spectral_function(sys, energy_of_t(t)); };
    const double tstar = golden_min_abs(f, ta, tb);

    std::vector<double> ts;
    ts.push_back(ta);
    const double w0 =
        std::max(std::abs(tstar), tb - ta) * 4.0 * std::numeric_limits<double>::epsilon();
    for (double w = 0.5 * (tb - ta); w > w0; w *= 0.5)
        if (tstar - w > ta) ts.push_back(tstar - w);
    ts.push_back(tstar);
    std::vector<double> ups;
    for (double w = 0.5 * (tb - ta); w > w0; w *= 0.5)
        if (tstar + w < tb) ups.push_back(tstar + w);
    ts.insert(ts.end(), ups.rbegin(), ups.rend());
    ts.push_back(tb);

    double prev_t = ts.front();
    double prev_f = f(prev_t);
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const double cur_f = f(ts[i]);
        if (prev_f == 0.0) {
            roots.push_back(energy_of_t(prev_t));
        } else if (cur_f != 0.0 && sign_of(cur_f) != sign_of(prev_f)) {
            roots.push_back(bisect_bracket(sys, prev_t, ts[i], prev_f, tol));
        }
        prev_t = ts[i];
        prev_f = cur_f;
    }
    if (prev_f == 0.0) roots.push_back(energy_of_t(prev_t));
}

std::vector<double> scan_pass(const BoxSystem& sys, double emin, double emax, double dt,
                              double tol, bool& pair_found) {
    const double tlo = t_of_energy(emin);
    const double thi = t_of_energy(emax);
    const int n = std::max(3, static_cast<int>(std::ceil((thi - tlo) / dt)) + 1);
    std::vector<double> ts(n), fs(n);
    for (int i = 0; i < n; ++i) {
        ts[i] = tlo + (thi - tlo) * i / (n - 1);
        fs[i] = spectral_function(sys, energy_of_t(ts[i]));
    }

    std::vector<double> roots;
    for (int i = 0; i < n; ++i)
        if (fs[i] == 0.0) roots.push_back(energy_of_t(ts[i]));
    for (int i = 0; i + 1 < n; ++i) {
        if (fs[i] == 0.0 || fs[i + 1] == 0.0) continue;
        if (sign_of(fs[i]) != sign_of(fs[i + 1]))
            roots.push_back(bisect_bracket(sys, ts[i], ts[i + 1], fs[i], tol));
    }

    // |F| dipping between nodes with no sign change flags a possible root
    // pair sharing a scan cell.
    for (int i = 1; i + 1 < n; ++i) {
        const int s = sign_of(fs[i]);
        if (s == 0 || sign_of(fs[i - 1]) != s || sign_of(fs[i + 1]) != s) continue;
        if (std::abs(fs[i]) > std::abs(fs[i - 1]) || std::abs(fs[i]) > std::abs(fs[i + 1]))
            continue;
        const std::size_t before = roots.size();
        probe_dip(sys, ts[i - 1], ts[i + 1], tol, roots);
        if (roots.size() > before) pair_found = true;
    }
    return roots;
}

void sort_dedupe(std::vector<double>& roots, double tol) {
    std::sort(roots.begin(), roots.end());
    std::vector<double> out;
    for (double e : roots) {
        const double sep = std::max(2.0 * tol, 8.0 * std::numeric_limits<double>::epsilon() *
                                                   std::max(1.0, std::abs(e)));
        if (out.empty() || e - out.back() > sep) out.push_back(e);
    }
    roots.swap(out);
}

}  // namespace

Spectrum eigenvalues(const BoxSystem& sys, double emin, double emax, int max_count, double tol) {
    if (!(emin < emax)) throw InvalidArgument("eigenvalues: need emin < emax");
    if (max_count < 1) throw InvalidArgument("eigenvalues: max_count must be >= 1");
    if (!(tol > 0.0)) throw InvalidArgument("eigenvalues: tol must be positive");

    Spectrum spec;
    spec.tol = tol;
    spec.scan.emin = emin;
    spec.scan.emax = emax;
    spec.scan.dk = kPi / (4.0 * sys.length() * (1.0 + sys.site_count()));

    bool pair_found = false;
    std::vector<double> roots = scan_pass(sys, emin, emax, spec.scan.dk, tol, pair_found);
    if (pair_found) {
        // One automatic rescan at 4x resolution, then report via metadata.
        bool again = false;
        std::vector<double> refined =
            scan_pass(sys, emin, emax, spec.scan.dk / 4.0, tol, again);
        roots.insert(roots.end(), refined.begin(), refined.end());
        spec.scan.rescanned = true;
    }
    sort_dedupe(roots, tol);
    if (static_cast<int>(roots.size()) > max_count) roots.resize(max_count);
    spec.eigenvalues = std::move(roots);
    return spec;
}

double BoundaryData::scale() const {
    const double kk = std::max(k, 1e-300);
    return std::max({std::abs(psi_minus), std::abs(psi_plus), std::abs(dpsi_minus) / kk,
                     std::abs(dpsi_plus) / kk});
}

namespace {

/// Closed-form integral of psi^2 over a segment of length d starting from
/// base state (dpsi0, psi0).
double segment_norm2(double energy, double d, double dpsi0, double psi0) {
    if (!(d > 0.0)) return 0.0;
    if (energy > 0.0) {
        const double k = std::sqrt(2.0 * energy);
        const double a = psi0;
        const double b = dpsi0 / k;
        const double s2 = std::sin(2.0 * k * d);
        const double sd = std::sin(k * d);
        return a * a * (0.5 * d + s2 / (4.0 * k)) + b * b * (0.5 * d - s2 / (4.0 * k)) +
               a * b * sd * sd / k;
    }
    if (energy < 0.0) {
        const double kp = std::sqrt(-2.0 * energy);
        const double a = psi0;
        const double b = dpsi0 / kp;
        const double s2 = std::sinh(2.0 * kp * d);
        const double sd = std::sinh(kp * d);
        return a * a * (0.5 * d + s2 / (4.0 * kp)) + b * b * (-0.5 * d + s2 / (4.0 * kp)) +
               a * b * sd * sd / kp;
    }
    return psi0 * psi0 * d + psi0 * dpsi0 * d * d + dpsi0 * dpsi0 * d * d * d / 3.0;
}

}  // namespace

Eigenfunction eigenfunction(const BoxSystem& sys, double energy, const UniformGrid& grid,
                            double tol) {
    const double half = 0.5 * sys.length();
    if (grid.x0 < -half - 1e-9 * sys.length() || grid.last() > half + 1e-9 * sys.length())
        throw InvalidArgument("eigenfunction: grid must lie inside the box");

    // Residual consistency: an eigenvalue converged to |dE| <= tol has
    // |F(E)| of order slope * tol.
    const double f0 = spectral_function(sys, energy);
    const double de = std::max({tol, std::abs(energy) * 1e-8, 1e-13});
    const double f_hi = spectral_function(sys, energy + de);
    const double f_lo = spectral_function(sys, energy - de);
    const double slope = std::abs(f_hi - f_lo) / (2.0 * de);
    const double floor = 1e-13 * (std::abs(f_hi) + std::abs(f_lo));
    if (std::abs(f0) > 10.0 * (slope * tol + floor) + 1e-300)
        throw NotAnEigenvalue("eigenfunction: spectral residual too large");

    // Piecewise bases: segment i starts at base[i] with state states[i].
    const std::vector<Site> sites = interaction_sites(sys);
    std::vector<double> bases;
    std::vector<std::pair<double, double>> states;  // (dpsi, psi)
    double dpsi, psi;
    start_vector(sys.left_bc(), dpsi, psi);
    bases.push_back(-half);
    states.push_back({dpsi, psi});
    for (const Site& site : sites) {
        double dp, p;
        eval_free(energy, site.position - bases.back(), states.back().first,
                  states.back().second, dp, p);
        site.matrix.apply(dp, p);
        bases.push_back(site.position);
        states.push_back({dp, p});
    }

    double norm2 = 0.0;
    for (std::size_t i = 0; i < bases.size(); ++i) {
        const double end = (i + 1 < bases.size()) ? bases[i + 1] : half;
        norm2 += segment_norm2(energy, end - bases[i], states[i].first, states[i].second);
    }
    if (!(norm2 > 0.0)) throw NotAnEigenvalue("eigenfunction: vanishing norm");
    const double scale = 1.0 / std::sqrt(norm2);

    Eigenfunction ef;
    ef.energy = energy;
    ef.grid = grid;
    ef.values.resize(grid.count);
    for (int i = 0; i < grid.count; ++i) {
        const double x = std::clamp(grid.node(i), -half, half);
        std::size_t seg = std::upper_bound(bases.begin(), bases.end(), x) - bases.begin();
        if (seg > 0) --seg;
        double dp, p;
        eval_free(energy, x - bases[seg], states[seg].first, states[seg].second, dp, p);
        ef.values[i] = scale * p;
    }

    // Boundary data: outer free solutions continued analytically to the
    // defect site.
    const double x0 = std::holds_alternative<PointInteraction>(sys.interaction())
                          ? std::get<PointInteraction>(sys.interaction()).position
                          : 0.0;
    double dpm, pm, dpp, pp;
    eval_free(energy, x0 - bases.front(), states.front().first, states.front().second, dpm, pm);
    eval_free(energy, x0 - bases.back(), states.back().first, states.back().second, dpp, pp);
    ef.boundary = {scale * pm, scale * dpm, scale * pp, scale * dpp,
                   std::sqrt(2.0 * std::abs(energy))};

    if (energy > 0.0) {
        const double k = std::sqrt(2.0 * energy);
        auto to_global = [&](double base, double dp0, double p0) -> SideWave {
            const double cb = std::cos(k * base);
            const double sb = std::sin(k * base);
            return {scale * (p0 * cb - dp0 / k * sb), scale * (p0 * sb + dp0 / k * cb)};
        };
        ef.left = to_global(bases.front(), states.front().first, states.front().second);
        ef.right = to_global(bases.back(), states.back().first, states.back().second);
    }
    return ef;
}

}  // namespace pointint
