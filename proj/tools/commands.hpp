#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"

namespace pointint::cli {

struct CommandContext {
    std::filesystem::path out;  ///< output file, or directory for fig1
    std::string format;         ///< "", "csv" or "json"; overrides the config
    std::uint64_t seed = 1;
    bool quiet = false;
};

/// Solve the configured system and write the eigenvalue table (plus
/// wavefunction samples when requested).
int cmd_spectrum(const RunConfig& cfg, const CommandContext& ctx);

/// The box experiment: finite-difference solve of the smeared
/// discontinuity-inducing potential, with the ideal-train and zero-range
/// reference spectra, per-state wavefunctions, potential profiles and the
/// pair-gap report.
struct Fig1Options {
    double c = 5.0;
    double length = 10.0;
    double a = 0.333;
    double s = 0.012;
    int n = 8191;
};
int cmd_fig1(const Fig1Options& opt, const CommandContext& ctx);

struct ConvergeOptions {
    std::string family = "epsilon";  // constant | epsilon | chi3 | chi5 | chi5z
    double c = 5.0;
    double v0 = 1.0, u0 = 1.0;
    double alpha = -1.0, beta = 0.0, gamma = -1.0, delta = 0.0;
    std::vector<double> a_list;
    std::string probe = "transfer:0.045";  // transfer:<energy> | eigenvalue:<index>
    double length = 10.0;
    double emin = 0.0, emax = 1.0;
    double tolerance = 1e-10;
};
int cmd_converge(const ConvergeOptions& opt, const CommandContext& ctx);

/// Seeded property suites over the factorization and composition
/// identities; exit 0 iff every branch's max error is below 1e-10.
struct VerifyOptions {
    std::uint64_t seed = 1;
    int trials = 1000;
};
int cmd_verify(const VerifyOptions& opt, const CommandContext& ctx);

/// Solve, extract boundary data for the lowest states, fit the connection
/// matrix and report deviations from the configured target.
int cmd_extract(const RunConfig& cfg, int states, const CommandContext& ctx);

}  // namespace pointint::cli
