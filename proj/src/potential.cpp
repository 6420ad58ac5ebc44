#include "pointint/potential.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace pointint {

DeltaTrain DeltaTrain::from_spikes(std::vector<DeltaSpike> spikes) {
    if (spikes.empty()) throw InvalidArgument("DeltaTrain: empty spike list");
    for (std::size_t i = 0; i < spikes.size(); ++i) {
        if (!std::isfinite(spikes[i].position) || !std::isfinite(spikes[i].strength))
            throw NonFinite("DeltaTrain: non-finite spike");
        if (i > 0 && !(spikes[i].position > spikes[i - 1].position))
            throw InvalidArgument("DeltaTrain: positions must be strictly increasing");
    }
    DeltaTrain t;
    t.spikes_ = std::move(spikes);
    return t;
}

double DeltaTrain::min_spacing() const {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < spikes_.size(); ++i)
        gap = std::min(gap, spikes_[i].position - spikes_[i - 1].position);
    return gap;
}

double DeltaTrain::total_strength() const {
    double sum = 0.0;
    for (const DeltaSpike& s : spikes_) sum += s.strength;
    return sum;
}

DeltaTrain DeltaTrain::reflected() const {
    std::vector<DeltaSpike> out(spikes_.rbegin(), spikes_.rend());
    for (DeltaSpike& s : out) s.position = -s.position;
    return from_spikes(std::move(out));
}

DeltaTrain xi_train(double v, double u, double a) {
    if (!(a > 0.0)) throw NonPositiveSeparation("xi_train: separation a must be positive");
    if (!std::isfinite(v) || !std::isfinite(u)) throw NonFinite("xi_train: non-finite strength");
    return DeltaTrain::from_spikes({{-a, v}, {0.0, u}, {a, v}});
}

BDCoefficients bd_coefficients(double v, double u, double a) {
    if (!(a > 0.0)) throw NonPositiveSeparation("bd_coefficients: a must be positive");
    const double den_b = 1.0 + a * u;
    const double den_d = 2.0 * a * v + 1.0;
    if (std::abs(den_b) < 1e-14) throw SingularDenominator("bd_coefficients: 1 + a*u ~ 0");
    if (std::abs(den_d) < 1e-14) throw SingularDenominator("bd_coefficients: 2*a*v + 1 ~ 0");
    return {2.0 * v + u / den_b, a / den_d};
}

namespace {

void check_finite_params(std::initializer_list<double> ps, const char* law) {
    for (double p : ps)
        if (!std::isfinite(p)) throw NonFinite(std::string(law) + ": non-finite parameter");
}

constexpr double kLawTol = 1e-9;

}  // namespace

RenormalizedFamily::RenormalizedFamily(Law law) : law_(std::move(law)) {
    std::visit(
        [](const auto& l) {
            using L = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<L, ConstantLaw>) {
                check_finite_params({l.v0, l.u0}, "Constant");
            } else if constexpr (std::is_same_v<L, EpsilonLaw>) {
                check_finite_params({l.c}, "Epsilon");
                if (l.c == 0.0) throw LawConstraintViolation("Epsilon: c must be nonzero");
            } else if constexpr (std::is_same_v<L, Chi3Law>) {
                check_finite_params({l.alpha, l.beta, l.gamma, l.delta}, "Chi3");
                if (l.delta == 0.0) throw LawConstraintViolation("Chi3: delta must be nonzero");
                if (std::abs(l.alpha * l.gamma - l.beta * l.delta - 1.0) > kLawTol)
                    throw LawConstraintViolation("Chi3: alpha*gamma - beta*delta != 1");
            } else if constexpr (std::is_same_v<L, Chi5Law>) {
                check_finite_params({l.alpha, l.beta, l.gamma}, "Chi5");
                if (l.beta == 0.0) throw LawConstraintViolation("Chi5: beta must be nonzero");
                if (std::abs(l.alpha * l.gamma - 1.0) > kLawTol)
                    throw LawConstraintViolation("Chi5: alpha*gamma != 1");
                if (l.alpha == -1.0 || l.gamma == -1.0)
                    throw LawConstraintViolation("Chi5: alpha = gamma = -1 has no five-spike form");
            } else {
                check_finite_params({l.alpha, l.gamma}, "Chi5z");
                if (l.alpha == 0.0) throw LawConstraintViolation("Chi5z: alpha must be nonzero");
                if (std::abs(l.alpha * l.gamma - 1.0) > kLawTol)
                    throw LawConstraintViolation("Chi5z: alpha*gamma != 1");
            }
        },
        law_);
}

DeltaTrain RenormalizedFamily::train_at(double a) const {
    if (!(a > 0.0))
        throw NonPositiveSeparation("RenormalizedFamily: separation a must be positive");
    return std::visit(
        [a](const auto& l) -> DeltaTrain {
            using L = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<L, ConstantLaw>) {
                return xi_train(l.v0, l.u0, a);
            } else if constexpr (std::is_same_v<L, EpsilonLaw>) {
                const double v = 1.0 / (2.0 * l.c) - 1.0 / (2.0 * a);
                const double u = -1.0 / a + l.c / (a * a);
                return xi_train(v, u, a);
            } else if constexpr (std::is_same_v<L, Chi3Law>) {
                const double left = (l.gamma - 1.0) / (2.0 * l.delta) - 1.0 / (2.0 * a);
                const double mid = -1.0 / a - l.delta / (2.0 * a * a);
                const double right = (l.alpha - 1.0) / (2.0 * l.delta) - 1.0 / (2.0 * a);
                return DeltaTrain::from_spikes({{-a, left}, {0.0, mid}, {a, right}});
            } else if constexpr (std::is_same_v<L, Chi5Law>) {
                const double ap1 = l.alpha + 1.0;
                const double gp1 = l.gamma + 1.0;
                return DeltaTrain::from_spikes(
                    {{-2.0 * a, l.beta / ap1 - 1.0 / (2.0 * a)},
                     {-a, -1.0 / a + ap1 / (2.0 * l.beta * a * a)},
                     {0.0, l.beta / ap1 + l.beta / gp1 - l.beta / 2.0 - 1.0 / a},
                     {a, -1.0 / a + gp1 / (2.0 * l.beta * a * a)},
                     {2.0 * a, l.beta / gp1 - 1.0 / (2.0 * a)}});
            } else {
                const double rho = std::sqrt(std::abs(l.alpha));
                const double sgn = l.alpha < 0.0 ? 1.0 : -1.0;
                return DeltaTrain::from_spikes(
                    {{-2.0 * a, sgn / (2.0 * rho) - 1.0 / (2.0 * a)},
                     {-a, -1.0 / a + sgn * rho / (2.0 * a * a)},
                     {0.0, -rho / 2.0 + sgn / (2.0 * rho) - 1.0 / a},
                     {a, -1.0 / a - 1.0 / (2.0 * rho * a * a)},
                     {2.0 * a, -rho / 2.0 - 1.0 / (2.0 * a)}});
            }
        },
        law_);
}

ConnectionMatrix RenormalizedFamily::target() const {
    return std::visit(
        [](const auto& l) -> ConnectionMatrix {
            using L = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<L, ConstantLaw>) {
                return ConnectionMatrix::from_delta_strength(2.0 * l.v0 + l.u0);
            } else if constexpr (std::is_same_v<L, EpsilonLaw>) {
                return ConnectionMatrix::from_epsilon_strength(l.c);
            } else if constexpr (std::is_same_v<L, Chi3Law>) {
                return ConnectionMatrix::from_parameters(l.alpha, l.beta, l.gamma, l.delta);
            } else if constexpr (std::is_same_v<L, Chi5Law>) {
                return ConnectionMatrix::from_parameters(l.alpha, l.beta, l.gamma, 0.0);
            } else {
                return ConnectionMatrix::from_parameters(l.alpha, 0.0, l.gamma, 0.0);
            }
        },
        law_);
}

double RenormalizedFamily::outermost(double a) const {
    const bool five = std::holds_alternative<Chi5Law>(law_) ||
                      std::holds_alternative<Chi5zLaw>(law_);
    return five ? 2.0 * a : a;
}

std::string RenormalizedFamily::name() const {
    return std::visit(
        [](const auto& l) -> std::string {
            using L = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<L, ConstantLaw>) return "constant";
            else if constexpr (std::is_same_v<L, EpsilonLaw>) return "epsilon";
            else if constexpr (std::is_same_v<L, Chi3Law>) return "chi3";
            else if constexpr (std::is_same_v<L, Chi5Law>) return "chi5";
            else return "chi5z";
        },
        law_);
}

Bump::Bump(double s) : s_(s) {
    if (!(s > 0.0) || !std::isfinite(s)) throw NonPositiveWidth("Bump: width must be positive");
}

double Bump::operator()(double x) const {
    if (std::abs(x) >= 0.5 * s_) return 0.0;
    const double c = std::cos(std::numbers::pi * x / s_);
    return 2.0 / s_ * c * c;
}

double Bump::cumulative(double x) const {
    if (x <= -0.5 * s_) return 0.0;
    if (x >= 0.5 * s_) return 1.0;
    return 0.5 + x / s_ +
           std::sin(2.0 * std::numbers::pi * x / s_) / (2.0 * std::numbers::pi);
}

double Bump::cell_average(double lo, double hi) const {
    if (!(hi > lo)) throw InvalidArgument("Bump::cell_average: need hi > lo");
    return (cumulative(hi) - cumulative(lo)) / (hi - lo);
}

SampledPotential smear(const DeltaTrain& train, double s, const UniformGrid& grid) {
    const Bump shape(s);
    if (!(s < train.min_spacing()))
        throw OverlappingSupports("smear: bump width must be below the spike spacing");
    // Nominal resolution requirement is ten cells per bump width; a 5%
    // grace keeps power-of-two grids at the margin usable.
    if (grid.h * 10.0 > s * 1.05)
        throw GridTooCoarse("smear: grid spacing too coarse for bump width");
    if (train.leftmost() - 0.5 * s < grid.cell_left(0) ||
        train.rightmost() + 0.5 * s > grid.cell_right(grid.count - 1))
        throw GridMismatch("smear: grid does not cover every bump support");

    SampledPotential pot{grid, std::vector<double>(grid.count, 0.0)};
    for (const DeltaSpike& spike : train.spikes()) {
        // Only cells overlapping [position - s/2, position + s/2] contribute.
        const int first =
            std::max(0, static_cast<int>(std::floor((spike.position - 0.5 * s - grid.x0) / grid.h)));
        const int last = std::min(grid.count - 1,
                                  static_cast<int>(std::ceil((spike.position + 0.5 * s - grid.x0) / grid.h)));
        for (int i = first; i <= last; ++i) {
            const double mass = shape.cumulative(grid.cell_right(i) - spike.position) -
                                shape.cumulative(grid.cell_left(i) - spike.position);
            pot.values[i] += spike.strength * mass / grid.h;
        }
    }
    return pot;
}

}  // namespace pointint
