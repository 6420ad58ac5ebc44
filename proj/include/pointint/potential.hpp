#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pointint/connection.hpp"
#include "pointint/errors.hpp"
#include "pointint/grid.hpp"

namespace pointint {

/// A single Dirac delta term strength * delta(x - position) in the potential.
/// Strength has units 1/length (the Schroedinger equation is written with
/// hbar = m = 1, so the kinetic term is -psi''/2).
struct DeltaSpike {
    double position = 0.0;
    double strength = 0.0;
};

/// Finite ordered train of delta spikes, positions strictly increasing.
class DeltaTrain {
  public:
    static DeltaTrain from_spikes(std::vector<DeltaSpike> spikes);

    const std::vector<DeltaSpike>& spikes() const { return spikes_; }
    int size() const { return static_cast<int>(spikes_.size()); }
    double leftmost() const { return spikes_.front().position; }
    double rightmost() const { return spikes_.back().position; }
    /// Smallest gap between neighbouring spikes (+inf for a single spike).
    double min_spacing() const;
    /// Sum of the spike strengths (the zeroth moment of the train).
    double total_strength() const;

    /// Spatial mirror image about x = 0.
    DeltaTrain reflected() const;

  private:
    std::vector<DeltaSpike> spikes_;
};

/// The symmetric three-spike train v delta(x+a) + u delta(x) + v delta(x-a).
DeltaTrain xi_train(double v, double u, double a);

/// The pair (B, D) governing the zero-range limit of a three-spike train:
/// B = 2v + u/(1 + a u),  D = a/(2 a v + 1).
/// In the a -> 0 limit B is the residual delta strength (times 1/2) and D
/// the epsilon strength of the limiting interaction.
struct BDCoefficients {
    double b = 0.0;
    double d = 0.0;
};

BDCoefficients bd_coefficients(double v, double u, double a);

// -- Renormalized families ---------------------------------------------------
//
// Each law maps a separation a > 0 to a DeltaTrain whose a -> 0 limit is the
// point interaction returned by target().

/// Fixed strengths: the limit is the ordinary delta of strength 2*v0 + u0.
struct ConstantLaw {
    double v0 = 0.0, u0 = 0.0;
};

/// v(a) = 1/(2c) - 1/(2a), u(a) = -1/a + c/a^2: the limit is the
/// discontinuity-inducing interaction epsilon(x; c). Requires c != 0.
struct EpsilonLaw {
    double c = 0.0;
};

/// Three-spike realization of the general interaction chi(alpha, beta,
/// gamma, delta), valid for delta != 0.
struct Chi3Law {
    double alpha = -1.0, beta = 0.0, gamma = -1.0, delta = 0.0;
};

/// Five-spike realization for delta = 0, beta != 0 (then alpha*gamma = 1).
/// Requires alpha != -1 (equivalently gamma != -1) so the strengths stay
/// finite.
struct Chi5Law {
    double alpha = -1.0, beta = 0.0, gamma = -1.0;
};

/// Five-spike realization for beta = delta = 0 (diagonal case,
/// alpha*gamma = 1), built around rho = sqrt(|alpha|) with the sign branch
/// picked by sign(alpha).
struct Chi5zLaw {
    double alpha = -1.0, gamma = -1.0;
};

class RenormalizedFamily {
  public:
    using Law = std::variant<ConstantLaw, EpsilonLaw, Chi3Law, Chi5Law, Chi5zLaw>;

    /// Validates the law parameters; throws LawConstraintViolation.
    explicit RenormalizedFamily(Law law);

    static RenormalizedFamily constant(double v0, double u0) {
        return RenormalizedFamily(ConstantLaw{v0, u0});
    }
    static RenormalizedFamily epsilon(double c) { return RenormalizedFamily(EpsilonLaw{c}); }
    static RenormalizedFamily chi3(double alpha, double beta, double gamma, double delta) {
        return RenormalizedFamily(Chi3Law{alpha, beta, gamma, delta});
    }
    static RenormalizedFamily chi5(double alpha, double beta, double gamma) {
        return RenormalizedFamily(Chi5Law{alpha, beta, gamma});
    }
    static RenormalizedFamily chi5z(double alpha, double gamma) {
        return RenormalizedFamily(Chi5zLaw{alpha, gamma});
    }

    /// The train realizing this family at separation a > 0.
    DeltaTrain train_at(double a) const;

    /// The point interaction this family converges to as a -> 0.
    ConnectionMatrix target() const;

    /// Outermost spike distance from the centre at separation a
    /// (a for three-spike laws, 2a for five-spike ones).
    double outermost(double a) const;

    const Law& law() const { return law_; }
    std::string name() const;

  private:
    Law law_;
};

// -- Finite-range smearing ---------------------------------------------------

/// Normalized cos^2 bump of width s: (2/s) cos^2(pi x / s) on |x| < s/2,
/// zero outside; integrates to exactly 1.
class Bump {
  public:
    explicit Bump(double s);

    double width() const { return s_; }
    double operator()(double x) const;
    /// Integral of the bump over (-inf, x], exact within the support.
    double cumulative(double x) const;
    /// Mean value over the cell [lo, hi].
    double cell_average(double lo, double hi) const;

  private:
    double s_;
};

inline Bump bump(double s) { return Bump(s); }

/// Potential sampled on a uniform grid; values have units 1/length^2.
struct SampledPotential {
    UniformGrid grid;
    std::vector<double> values;
};

/// Replace every spike of the train by strength * Bump(s) centred at the
/// spike and sample on the grid. Sampling is cell-averaged (each value is
/// the exact mean of the smeared potential over its grid cell), which
/// preserves the total strength exactly. Supports must not overlap
/// (s < min spacing), cells must resolve the bump, and the grid must cover
/// every support.
SampledPotential smear(const DeltaTrain& train, double s, const UniformGrid& grid);

}  // namespace pointint
