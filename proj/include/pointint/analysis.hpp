#pragma once

#include <span>
#include <string>
#include <vector>

#include "pointint/exact.hpp"
#include "pointint/potential.hpp"

namespace pointint {

/// Least-squares estimate of a connection matrix from boundary data of
/// several states. The raw 2x2 is reported as-is: |det - 1| is itself a
/// convergence observable, so the determinant is diagnosed, never enforced.
struct FitReport {
    Mat2 fitted;
    double residual = 0.0;       ///< relative RMS of the transfer equations
    double det_deviation = 0.0;  ///< |det(fitted) - 1|
    int states = 0;

    double alpha() const { return -fitted.a11; }
    double beta() const { return -fitted.a12; }
    double delta_p() const { return -fitted.a21; }
    double gamma() const { return -fitted.a22; }
};

/// Recover the boundary data (psi, psi' from each side of x0) from a
/// sampled wavefunction. Samples in the windows
/// [x0 + exclusion, x0 + exclusion + fit_width] and its mirror are fitted
/// to the exact free basis A cos(kx) + B sin(kx), then psi and psi' are
/// evaluated at x0 analytically from each side. The exclusion must cover
/// the interaction support.
BoundaryData extract_boundary_data(const UniformGrid& grid, std::span<const double> psi,
                                   double k, double x0, double exclusion, double fit_width);

inline BoundaryData extract_boundary_data(const Eigenfunction& ef, double x0, double exclusion,
                                          double fit_width) {
    return extract_boundary_data(ef.grid, ef.values, std::sqrt(2.0 * std::abs(ef.energy)), x0,
                                 exclusion, fit_width);
}

/// Least-squares fit of the 2x2 transfer relation out = T in over >= 2
/// states, in = (psi'_-, psi_-), out = (psi'_+, psi_+). The in-vectors
/// must not all be parallel (DegenerateInputs).
FitReport fit_connection_matrix(std::span<const BoundaryData> data);

// -- Convergence studies ------------------------------------------------------

struct ConvergenceRow {
    double a = 0.0;
    double observed = 0.0;
    double reference = 0.0;
    double abs_error = 0.0;
    double rel_error = 0.0;
};

struct ConvergenceTable {
    std::string observable;
    std::vector<ConvergenceRow> rows;  ///< a strictly decreasing down the rows

    bool errors_strictly_decreasing() const;
};

/// Probe the family's train transfer matrix at fixed energy against the
/// family's target connection matrix; observed is the max entrywise
/// deviation.
struct TransferProbe {
    double energy = 0.0;
};

/// Probe one box eigenvalue (1-based index inside the window) of the
/// family's train against the same eigenvalue of the ideal target point
/// interaction. The window excludes the spurious deep bound states of
/// finite-a trains.
struct EigenvalueProbe {
    int index = 1;
    double length = 10.0;
    double emin = 0.0;
    double emax = 1.0;
    double tol = 1e-10;
    BoundaryKind left = BoundaryKind::Dirichlet;
    BoundaryKind right = BoundaryKind::Dirichlet;
};

ConvergenceTable convergence_study(const RenormalizedFamily& family,
                                   std::span<const double> a_list, const TransferProbe& probe);

ConvergenceTable convergence_study(const RenormalizedFamily& family,
                                   std::span<const double> a_list, const EigenvalueProbe& probe);

/// Relative gaps (E_{2i} - E_{2i-1}) / E_{2i-1} of consecutive disjoint
/// eigenvalue pairs; small gaps witness closeness to the Neumann limit.
std::vector<std::pair<int, double>> degeneracy_gaps(std::span<const double> eigenvalues);

inline std::vector<std::pair<int, double>> degeneracy_gaps(const Spectrum& spec) {
    return degeneracy_gaps(std::span<const double>(spec.eigenvalues));
}

}  // namespace pointint
