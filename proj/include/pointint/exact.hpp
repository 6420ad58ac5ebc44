#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "pointint/connection.hpp"
#include "pointint/grid.hpp"
#include "pointint/potential.hpp"

namespace pointint {

/// An ideal point interaction placed at `position` inside the box.
struct PointInteraction {
    ConnectionMatrix matrix;
    double position = 0.0;
};

/// A particle of unit mass on [-L/2, L/2] with outer boundary conditions
/// and at most one interaction payload (a delta train or an ideal point
/// interaction). Sampled potentials are the finite-difference solver's
/// territory and are rejected here.
class BoxSystem {
  public:
    using Interaction =
        std::variant<std::monostate, DeltaTrain, PointInteraction, SampledPotential>;

    static BoxSystem free_box(double length, BoundaryKind left = BoundaryKind::Dirichlet,
                              BoundaryKind right = BoundaryKind::Dirichlet);
    static BoxSystem with_train(double length, DeltaTrain train,
                                BoundaryKind left = BoundaryKind::Dirichlet,
                                BoundaryKind right = BoundaryKind::Dirichlet);
    static BoxSystem with_point(double length, ConnectionMatrix matrix, double position = 0.0,
                                BoundaryKind left = BoundaryKind::Dirichlet,
                                BoundaryKind right = BoundaryKind::Dirichlet);
    static BoxSystem with_sampled(double length, SampledPotential potential,
                                  BoundaryKind left = BoundaryKind::Dirichlet,
                                  BoundaryKind right = BoundaryKind::Dirichlet);

    double length() const { return length_; }
    BoundaryKind left_bc() const { return left_; }
    BoundaryKind right_bc() const { return right_; }
    const Interaction& interaction() const { return interaction_; }

    /// Number of interaction sites (spikes, or 1 for a point interaction).
    int site_count() const;

  private:
    BoxSystem(double length, BoundaryKind left, BoundaryKind right, Interaction in);

    double length_;
    BoundaryKind left_, right_;
    Interaction interaction_;
};

/// 2x2 transfer matrix acting on (psi', psi) at fixed energy; unimodular.
struct TransferMatrix {
    Mat2 m;
    double energy = 0.0;
};

/// Free propagation over a distance d >= 0 at energy E (E = k^2/2 for
/// E > 0; the E < 0 matrix is the real analytic continuation k -> i*kappa).
TransferMatrix free_propagator(double energy, double distance);

/// Transfer across an ideal delta of strength v; energy independent.
TransferMatrix delta_step(double v);

/// Exact transfer across the whole train: from just left of the first
/// spike to just right of the last one.
TransferMatrix train_transfer(const DeltaTrain& train, double energy);

/// Scalar quantization function whose simple zeros are the box
/// eigenvalues: propagate the left-edge boundary vector to the right edge
/// and return the component the right boundary condition requires to
/// vanish.
double spectral_function(const BoxSystem& sys, double energy);

struct ScanInfo {
    double dk = 0.0;         ///< node spacing of the scan in k-space
    double emin = 0.0, emax = 0.0;
    bool rescanned = false;  ///< a root pair shared a scan cell; a 4x rescan was done
};

struct Spectrum {
    std::vector<double> eigenvalues;  ///< sorted ascending
    ScanInfo scan;
    double tol = 0.0;
};

/// All eigenvalues in (emin, emax), lowest max_count of them, each
/// bisected to |dE| < tol.
///
/// The scan walks k = sqrt(2E) (continued through negative energies)
/// with spacing pi / (4 L (1 + sites)). Sign changes between nodes are
/// bisected directly. Cells where |F| dips without a sign change are probed
/// for root pairs closer than the scan spacing: the local minimum of |F| is
/// located by golden-section search and a geometric ladder of samples
/// around it picks up both crossings. Pairs that coalesce only in singular
/// limits (true tangencies) are not resolvable this way.
Spectrum eigenvalues(const BoxSystem& sys, double emin, double emax, int max_count,
                     double tol = 1e-12);

/// Wavefunction and derivative limits at the defect: psi_-, psi'_- are the
/// left outer free solution continued analytically to the defect site,
/// psi_+, psi'_+ the right one. For an ideal point interaction these are
/// the jump values at the site itself.
struct BoundaryData {
    double psi_minus = 0.0, dpsi_minus = 0.0;
    double psi_plus = 0.0, dpsi_plus = 0.0;
    double k = 0.0;  ///< sqrt(2|E|); scales derivative magnitudes

    double scale() const;
};

/// Outer free solution written as a_cos * cos(kx) + b_sin * sin(kx)
/// (meaningful for E > 0 only; zero otherwise).
struct SideWave {
    double a_cos = 0.0, b_sin = 0.0;
};

struct Eigenfunction {
    double energy = 0.0;
    UniformGrid grid;
    std::vector<double> values;   ///< L2-normalized over the box, weight = segment integrals
    BoundaryData boundary;        ///< at the defect site (0 for trains)
    SideWave left, right;
};

/// Sample the eigenfunction belonging to a converged eigenvalue on the
/// given grid (grid must lie inside the box). Normalization integrates
/// |psi|^2 segment by segment in closed form, so the discontinuity at the
/// defect is handled exactly. Throws NotAnEigenvalue when the spectral
/// residual at `energy` is inconsistent with |dE| <= tol.
Eigenfunction eigenfunction(const BoxSystem& sys, double energy, const UniformGrid& grid,
                            double tol = 1e-10);

}  // namespace pointint
