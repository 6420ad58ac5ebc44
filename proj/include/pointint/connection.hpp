#pragma once

#include <span>
#include <vector>

#include "pointint/errors.hpp"
#include "pointint/mat2.hpp"

namespace pointint {

/// Outer boundary condition of a box, and the classification of the
/// singular strong-coupling limits: Dirichlet (psi = 0) is the v -> inf
/// limit of a delta interaction, Neumann (psi' = 0) the c -> inf limit of
/// an epsilon interaction. These limits are deliberately not representable
/// as ConnectionMatrix values (their transfer matrices are singular).
enum class BoundaryKind { Dirichlet, Neumann };

/// Transfer relation across a point interaction: the column (psi'_+, psi_+)
/// just right of the defect equals T times (psi'_-, psi_-) just left of it.
///
/// The canonical representation is the matrix T itself. The customary
/// interaction parameters carry an extra sign, T = [[-alpha, -beta],
/// [-delta, -gamma]], and are exposed as accessors only. Unimodularity
/// (alpha*gamma - beta*delta = 1) is enforced on construction; the check is
/// scaled by the entry magnitude so that large-strength matrices survive
/// floating-point cancellation.
class ConnectionMatrix {
  public:
    /// Identity transfer: no interaction.
    ConnectionMatrix() = default;

    /// Build from the interaction parameters (alpha, beta, gamma, delta).
    static ConnectionMatrix from_parameters(double alpha, double beta, double gamma,
                                            double delta, double tol = 1e-9);

    /// T = [[1, 2v], [0, 1]]: continuous psi, derivative jump 2*v*psi.
    static ConnectionMatrix from_delta_strength(double v);

    /// T = [[1, 0], [2c, 1]]: continuous psi', wavefunction jump 2*c*psi'.
    static ConnectionMatrix from_epsilon_strength(double c);

    /// Adopt a raw matrix, verifying finiteness and det = 1 within tol
    /// (relative to entry magnitude).
    static ConnectionMatrix from_matrix(const Mat2& m, double tol = 1e-12);

    double t11() const { return m_.a11; }
    double t12() const { return m_.a12; }
    double t21() const { return m_.a21; }
    double t22() const { return m_.a22; }
    const Mat2& matrix() const { return m_; }

    double alpha() const { return -m_.a11; }
    double beta() const { return -m_.a12; }
    double delta_p() const { return -m_.a21; }
    double gamma() const { return -m_.a22; }

    /// (psi'_-, psi_-) -> (psi'_+, psi_+).
    void apply(double& dpsi, double& psi) const { m_.apply(dpsi, psi); }

    bool is_identity(double tol = 1e-12) const;

  private:
    Mat2 m_{};
};

/// Composite of two interactions at the same point: `first` is encountered
/// first along increasing x, so the result is second * first.
ConnectionMatrix compose(const ConnectionMatrix& first, const ConnectionMatrix& second);

/// Classification of a connection matrix into the named special forms.
struct InteractionClass {
    enum class Tag { Free, DeltaOnly, EpsilonOnly, General };
    Tag tag = Tag::Free;
    /// delta strength v (units 1/length) for DeltaOnly, epsilon strength c
    /// (units length) for EpsilonOnly, 0 otherwise.
    double strength = 0.0;
};

/// Tightest tag first: Free, then DeltaOnly/EpsilonOnly, else General.
/// Entries are compared with absolute tolerance `tol`.
InteractionClass classify(const ConnectionMatrix& t, double tol = 1e-12);

/// One primitive factor of a decomposition: an ideal delta of strength v or
/// an ideal epsilon of strength c.
struct PrimitiveFactor {
    enum class Kind { DeltaStep, EpsilonStep };
    Kind kind;
    double strength;

    Mat2 matrix() const;
};

/// Ordered factorization of a connection matrix into delta/epsilon steps.
/// List order is spatial order of encounter along increasing x; as matrices
/// the factors therefore multiply in reverse list order.
struct DeltaFactorization {
    std::vector<PrimitiveFactor> factors;

    /// Product of the factor matrices in reverse list order.
    Mat2 reconstruct() const;
};

/// Factor a general connection matrix into ideal delta/epsilon steps.
///
/// Branches, selected on the parameters (alpha, beta, gamma, delta) of T:
///  - delta != 0: three factors
///      [delta_step((gamma+1)/(2 delta)), eps_step(-delta/2),
///       delta_step((alpha+1)/(2 delta))];
///  - delta = 0, beta != 0: three factors
///      [eps_step((alpha+1)/(2 beta)), delta_step(-beta/2),
///       eps_step((gamma+1)/(2 beta))];
///  - beta = delta = 0, T = identity: empty factorization;
///  - beta = delta = 0 otherwise (diagonal, alpha*gamma = 1): six factors
///      built around rho = sqrt(|alpha|), with the sign branch picked by
///      sign(alpha).
/// Branch selection treats entries below 1e-10 * max(1, |alpha|, |gamma|)
/// as zero; for well-scaled inputs the reverse-order product reproduces T
/// to better than 1e-10 per entry.
DeltaFactorization decompose_general(const ConnectionMatrix& t);

}  // namespace pointint
