#pragma once

#include <span>
#include <vector>

#include "pointint/grid.hpp"
#include "pointint/potential.hpp"

namespace pointint {

/// Symmetric tridiagonal discretization of -psi''/2 + V psi on the interior
/// nodes x_i = -L/2 + i*h, i = 1..N, h = L/(N+1), with implicit Dirichlet
/// values at both box edges.
struct TridiagonalOperator {
    std::vector<double> diag;     ///< 1/h^2 + V(x_i)
    std::vector<double> offdiag;  ///< -1/(2 h^2), size N-1
    double length = 0.0;
    double h = 0.0;

    int size() const { return static_cast<int>(diag.size()); }
    double node(int i) const { return -0.5 * length + (i + 1) * h; }
    UniformGrid grid() const { return UniformGrid(node(0), h, size()); }

    /// [min, max] bounds on the spectrum from Gershgorin discs.
    std::pair<double, double> gershgorin() const;
};

/// Free-particle operator (V = 0).
TridiagonalOperator discretize(double length, int n);

/// Operator with a sampled potential; the potential grid must coincide
/// with the interior grid (same spacing and nodes), else GridMismatch.
TridiagonalOperator discretize(const SampledPotential& potential, double length, int n);

/// Number of eigenvalues strictly below lambda, from the signs of the
/// LDL^T pivots; pivots within eps*scale of zero are nudged to +eps*scale,
/// which keeps the count strict at spectrum points.
int sturm_count(const TridiagonalOperator& t, double lambda);

/// The m smallest eigenvalues, each bracketed by bisection on sturm_count
/// to interval width < tol; multiplicities come out of count differences.
std::vector<double> lowest_eigenvalues(const TridiagonalOperator& t, int m, double tol);

/// Up to max_count eigenvalues in (emin, emax), smallest first. Finite-a
/// delta trains carry spurious deep bound states; windowing is how those
/// are excluded from low-energy studies.
std::vector<double> eigenvalues_in_window(const TridiagonalOperator& t, double emin, double emax,
                                          int max_count, double tol);

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;  ///< normalized with weight h: sum(v_i^2) * h = 1
    double residual = 0.0;       ///< ||(T - value) v||_2 / ||v||_2
};

/// Inverse iteration at a converged eigenvalue (at most 5 iterations,
/// deterministic pseudo-random start). Vectors in `orthogonal_to` are
/// projected out each iteration, which keeps near-degenerate clusters from
/// collapsing onto one vector. The first nonzero component of the result
/// is made non-negative. Throws NoConvergence if the residual does not
/// settle, which signals that lambda is not an eigenvalue.
EigenPair eigenvector(const TridiagonalOperator& t, double lambda, double tol = 1e-10,
                      std::span<const std::vector<double>> orthogonal_to = {});

/// Eigenpairs for a list of converged eigenvalues; eigenvalues closer than
/// 1e3*tol are treated as one cluster and re-orthogonalized.
std::vector<EigenPair> eigenpairs(const TridiagonalOperator& t, std::span<const double> values,
                                  double tol = 1e-10);

}  // namespace pointint
