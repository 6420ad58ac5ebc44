#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "pointint/connection.hpp"
#include "pointint/exact.hpp"
#include "pointint/potential.hpp"

namespace pointint::cli {

/// Configuration problem; `field` names the offending key.
struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(std::string field_, const std::string& message)
        : std::runtime_error(field_ + ": " + message), field(std::move(field_)) {}
};

enum class InteractionKind { Free, Delta, Epsilon, Chi, Train, Family };
enum class SolverMethod { Exact, Fd };

/// One experiment description, read from an INI-style config file with
/// sections [box], [interaction], [solver], [output].
struct RunConfig {
    // [box]
    double length = 10.0;
    BoundaryKind left_bc = BoundaryKind::Dirichlet;
    BoundaryKind right_bc = BoundaryKind::Dirichlet;

    // [interaction]
    InteractionKind kind = InteractionKind::Free;
    double v = 0.0;                                              // kind = delta
    double c = 0.0;                                              // kind = epsilon
    double alpha = -1.0, beta = 0.0, gamma = -1.0, delta = 0.0;  // kind = chi
    std::string family;  // constant | epsilon | chi3 | chi5 | chi5z
    double v0 = 0.0, u0 = 0.0;
    std::vector<double> positions, strengths;  // kind = train
    double a = 0.0;                            // family separation
    double s = 0.0;                            // bump width; 0 = ideal deltas

    // [solver]
    SolverMethod method = SolverMethod::Exact;
    int grid_points = 2001;
    double emin = 0.0, emax = 1.0;
    int max_states = 4;
    double tolerance = 1e-10;

    // [output]
    std::string format = "csv";
    std::string path;
    bool wavefunctions = false;
};

/// Parse and validate; throws ConfigError naming the offending field.
RunConfig load_config(const std::filesystem::path& file);
void validate(const RunConfig& cfg);

/// The renormalized family selected by a kind=family config.
RenormalizedFamily family_of(const RunConfig& cfg);

/// The delta train of a train/family config (family realized at its a).
DeltaTrain train_of(const RunConfig& cfg);

/// The exact-solver system for this config (method must be exact).
BoxSystem exact_system_of(const RunConfig& cfg);

/// Whether the config names a point-interaction target (everything except
/// an explicit train).
bool has_target_matrix(const RunConfig& cfg);
ConnectionMatrix target_matrix_of(const RunConfig& cfg);

/// Outermost interaction extent from the centre (0 for free/point kinds).
double interaction_extent(const RunConfig& cfg);

}  // namespace pointint::cli
