#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "output.hpp"
#include "pointint/analysis.hpp"
#include "pointint/fdsolve.hpp"

namespace pointint::cli {

namespace {

const char* kind_name(InteractionKind k) {
    switch (k) {
        case InteractionKind::Free: return "free";
        case InteractionKind::Delta: return "delta";
        case InteractionKind::Epsilon: return "epsilon";
        case InteractionKind::Chi: return "chi";
        case InteractionKind::Train: return "train";
        case InteractionKind::Family: return "family";
    }
    return "?";
}

const char* bc_name(BoundaryKind bc) {
    return bc == BoundaryKind::Dirichlet ? "dirichlet" : "neumann";
}

Provenance provenance_of(const RunConfig& cfg, const std::string& command) {
    Provenance prov;
    prov.command = command;
    prov.add("box.length", cfg.length);
    prov.add("box.left_bc", std::string(bc_name(cfg.left_bc)));
    prov.add("box.right_bc", std::string(bc_name(cfg.right_bc)));
    prov.add("interaction.kind", std::string(kind_name(cfg.kind)));
    switch (cfg.kind) {
        case InteractionKind::Delta: prov.add("interaction.v", cfg.v); break;
        case InteractionKind::Epsilon: prov.add("interaction.c", cfg.c); break;
        case InteractionKind::Chi:
            prov.add("interaction.alpha", cfg.alpha);
            prov.add("interaction.beta", cfg.beta);
            prov.add("interaction.gamma", cfg.gamma);
            prov.add("interaction.delta", cfg.delta);
            break;
        case InteractionKind::Family: {
            prov.add("interaction.family", cfg.family);
            if (cfg.family == "constant") {
                prov.add("interaction.v0", cfg.v0);
                prov.add("interaction.u0", cfg.u0);
            } else if (cfg.family == "epsilon") {
                prov.add("interaction.c", cfg.c);
            } else {
                prov.add("interaction.alpha", cfg.alpha);
                if (cfg.family != "chi5z") prov.add("interaction.beta", cfg.beta);
                prov.add("interaction.gamma", cfg.gamma);
                if (cfg.family == "chi3") prov.add("interaction.delta", cfg.delta);
            }
            prov.add("interaction.a", cfg.a);
            break;
        }
        case InteractionKind::Train: {
            std::string ps, ss;
            for (std::size_t i = 0; i < cfg.positions.size(); ++i) {
                if (i) { ps += ' '; ss += ' '; }
                ps += format_double(cfg.positions[i]);
                ss += format_double(cfg.strengths[i]);
            }
            prov.add("interaction.positions", ps);
            prov.add("interaction.strengths", ss);
            break;
        }
        default: break;
    }
    if (cfg.kind != InteractionKind::Free) prov.add("interaction.s", cfg.s);
    prov.add("solver.method", std::string(cfg.method == SolverMethod::Exact ? "exact" : "fd"));
    prov.add("solver.grid_points", static_cast<long long>(cfg.grid_points));
    prov.add("solver.energy_window",
             format_double(cfg.emin) + " " + format_double(cfg.emax));
    prov.add("solver.max_states", static_cast<long long>(cfg.max_states));
    prov.add("solver.tolerance", cfg.tolerance);
    return prov;
}

struct SolveResult {
    std::vector<double> energies;
    UniformGrid grid{-1.0, 1.0, 2};
    std::vector<std::vector<double>> waves;  // per state, on `grid`
    bool rescanned = false;
};

SolveResult solve_config(const RunConfig& cfg, bool want_waves) {
    SolveResult r;
    if (cfg.method == SolverMethod::Exact) {
        const BoxSystem sys = exact_system_of(cfg);
        const Spectrum spec =
            eigenvalues(sys, cfg.emin, cfg.emax, cfg.max_states, cfg.tolerance);
        r.energies = spec.eigenvalues;
        r.rescanned = spec.scan.rescanned;
        if (want_waves) {
            r.grid = UniformGrid::over(-cfg.length / 2, cfg.length / 2, cfg.grid_points);
            for (double e : r.energies)
                r.waves.push_back(eigenfunction(sys, e, r.grid, cfg.tolerance).values);
        }
    } else {
        const int n = cfg.grid_points;
        const double h = cfg.length / (n + 1);
        const UniformGrid interior(-cfg.length / 2 + h, h, n);
        const TridiagonalOperator op =
            cfg.kind == InteractionKind::Free
                ? discretize(cfg.length, n)
                : discretize(smear(train_of(cfg), cfg.s, interior), cfg.length, n);
        r.energies =
            eigenvalues_in_window(op, cfg.emin, cfg.emax, cfg.max_states, cfg.tolerance);
        if (want_waves) {
            r.grid = interior;
            for (auto& p : eigenpairs(op, r.energies, cfg.tolerance))
                r.waves.push_back(std::move(p.vector));
        }
    }
    return r;
}

void print_energies(const std::vector<double>& energies) {
    for (std::size_t i = 0; i < energies.size(); ++i)
        std::printf("E_%zu = %s\n", i + 1, format_double(energies[i]).c_str());
}

std::filesystem::path sibling_with_suffix(const std::filesystem::path& path,
                                          const std::string& suffix) {
    std::filesystem::path out = path;
    out.replace_filename(path.stem().string() + suffix + path.extension().string());
    return out;
}

/// Deterministic uniform doubles for the verify suites.
struct DetRng {
    std::uint64_t s;
    explicit DetRng(std::uint64_t seed) : s(seed * 0x9e3779b97f4a7c15ull + 1ull) {}
    double next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return static_cast<double>(s >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }
    double signed_away_from_zero(double lo, double hi) {
        const double mag = uniform(lo, hi);
        return next() < 0.5 ? -mag : mag;
    }
};

}  // namespace

int cmd_spectrum(const RunConfig& cfg, const CommandContext& ctx) {
    const std::string format = ctx.format.empty() ? cfg.format : ctx.format;
    const std::filesystem::path path = ctx.out.empty() ? std::filesystem::path(cfg.path) : ctx.out;
    if (path.empty())
        throw ConfigError("output.path", "missing (set it in the config or pass --out)");

    const SolveResult res = solve_config(cfg, cfg.wavefunctions);
    Provenance prov = provenance_of(cfg, "spectrum");
    if (res.rescanned) prov.add("solver.rescanned", std::string("true"));

    if (format == "csv") {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < res.energies.size(); ++i)
            rows.push_back({std::to_string(i + 1), format_double(res.energies[i])});
        write_text_atomic(path, csv_document(prov, {"index", "energy"}, rows));
        if (cfg.wavefunctions) {
            std::vector<std::string> header = {"x"};
            for (std::size_t s = 0; s < res.waves.size(); ++s)
                header.push_back("psi_" + std::to_string(s + 1));
            std::vector<std::vector<std::string>> wrows;
            for (int i = 0; i < res.grid.count; ++i) {
                std::vector<std::string> row = {format_double(res.grid.node(i))};
                for (const auto& wave : res.waves) row.push_back(format_double(wave[i]));
                wrows.push_back(std::move(row));
            }
            write_text_atomic(sibling_with_suffix(path, "_states"),
                              csv_document(prov, header, wrows));
        }
    } else {
        nlohmann::ordered_json j;
        j["provenance"] = provenance_json(prov);
        j["eigenvalues"] = res.energies;
        if (cfg.wavefunctions) {
            j["grid"] = {{"x0", res.grid.x0}, {"h", res.grid.h}, {"count", res.grid.count}};
            j["wavefunctions"] = res.waves;
        }
        write_text_atomic(path, j.dump(2) + "\n");
    }

    if (!ctx.quiet) {
        std::printf("%zu state(s) in (%s, %s), written to %s\n", res.energies.size(),
                    format_double(cfg.emin).c_str(), format_double(cfg.emax).c_str(),
                    path.string().c_str());
        print_energies(res.energies);
    }
    return 0;
}

int cmd_fig1(const Fig1Options& opt, const CommandContext& ctx) {
    const std::filesystem::path dir = ctx.out.empty() ? std::filesystem::path("fig1_out") : ctx.out;
    const double length = opt.length;
    const int n = opt.n;
    const double h = length / (n + 1);
    const int n_states = 4;
    const double fd_tol = 1e-10;

    Provenance prov;
    prov.command = "fig1";
    prov.add("c", opt.c);
    prov.add("L", length);
    prov.add("a", opt.a);
    prov.add("s", opt.s);
    prov.add("N", static_cast<long long>(n));

    const auto family = RenormalizedFamily::epsilon(opt.c);
    const auto train = family.train_at(opt.a);
    const UniformGrid interior(-length / 2 + h, h, n);
    const SampledPotential pot = smear(train, opt.s, interior);
    const TridiagonalOperator op = discretize(pot, length, n);

    const auto fd_energies =
        eigenvalues_in_window(op, 0.0, op.gershgorin().second + 1.0, n_states, fd_tol);
    if (static_cast<int>(fd_energies.size()) < n_states)
        throw Error("fig1: fewer than four positive-energy states found");
    const auto pairs = eigenpairs(op, fd_energies, fd_tol);

    const double ref_emax = 2.0 * fd_energies.back() + 1.0;
    const auto train_exact =
        eigenvalues(BoxSystem::with_train(length, train), 0.0, ref_emax, n_states, 1e-12);
    const auto limit = eigenvalues(
        BoxSystem::with_point(length, ConnectionMatrix::from_epsilon_strength(opt.c)), 0.0,
        ref_emax, n_states, 1e-12);

    // eigenvalue table with the ideal-train and zero-range reference columns
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < n_states; ++i)
        rows.push_back({std::to_string(i + 1), format_double(fd_energies[i]),
                        format_double(train_exact.eigenvalues[i]),
                        format_double(limit.eigenvalues[i])});
    write_text_atomic(dir / "eigenvalues.csv",
                      csv_document(prov, {"index", "energy", "train_exact", "reference_limit"},
                                   rows));

    // per-state wavefunctions, box edges included
    for (int s = 0; s < n_states; ++s) {
        Provenance sp = prov;
        sp.add("state", static_cast<long long>(s + 1));
        sp.add("energy", fd_energies[s]);
        std::vector<std::vector<std::string>> wrows;
        wrows.push_back({format_double(-length / 2), "0"});
        for (int i = 0; i < n; ++i)
            wrows.push_back({format_double(interior.node(i)), format_double(pairs[s].vector[i])});
        wrows.push_back({format_double(length / 2), "0"});
        write_text_atomic(dir / ("state_" + std::to_string(s + 1) + ".csv"),
                          csv_document(sp, {"x", "psi"}, wrows));
    }

    // potential profile at full and zoomed horizontal range
    std::vector<std::vector<std::string>> prow, zrow;
    const double zoom = opt.a + 10.0 * opt.s;
    for (int i = 0; i < n; ++i) {
        const double x = interior.node(i);
        prow.push_back({format_double(x), format_double(pot.values[i])});
        if (std::abs(x) <= zoom)
            zrow.push_back({format_double(x), format_double(pot.values[i])});
    }
    write_text_atomic(dir / "potential.csv", csv_document(prov, {"x", "V"}, prow));
    write_text_atomic(dir / "potential_zoom.csv", csv_document(prov, {"x", "V"}, zrow));

    // near-degeneracy report
    const auto gaps = degeneracy_gaps(std::span<const double>(fd_energies));
    std::vector<std::vector<std::string>> grow;
    for (const auto& [pair, gap] : gaps)
        grow.push_back({std::to_string(pair), format_double(fd_energies[2 * (pair - 1)]),
                        format_double(fd_energies[2 * pair - 1]), format_double(gap)});
    write_text_atomic(dir / "gaps.csv",
                      csv_document(prov, {"pair", "e_lower", "e_upper", "relative_gap"}, grow));

    if (!ctx.quiet) {
        std::printf("box experiment written to %s\n", dir.string().c_str());
        for (int i = 0; i < n_states; ++i)
            std::printf("E_%d = %s  (ideal train %s, zero-range limit %s)\n", i + 1,
                        format_double(fd_energies[i]).c_str(),
                        format_double(train_exact.eigenvalues[i]).c_str(),
                        format_double(limit.eigenvalues[i]).c_str());
    }
    return 0;
}

int cmd_converge(const ConvergeOptions& opt, const CommandContext& ctx) {
    if (opt.a_list.empty()) throw ConfigError("a", "need a decreasing list of separations");
    if (ctx.out.empty()) throw ConfigError("out", "need --out for the convergence table");

    RunConfig fam_cfg;  // reuse the family construction and its error reporting
    fam_cfg.kind = InteractionKind::Family;
    fam_cfg.family = opt.family;
    fam_cfg.c = opt.c;
    fam_cfg.v0 = opt.v0;
    fam_cfg.u0 = opt.u0;
    fam_cfg.alpha = opt.alpha;
    fam_cfg.beta = opt.beta;
    fam_cfg.gamma = opt.gamma;
    fam_cfg.delta = opt.delta;
    const RenormalizedFamily family = family_of(fam_cfg);

    ConvergenceTable table;
    const auto colon = opt.probe.find(':');
    const std::string probe_kind = opt.probe.substr(0, colon);
    const std::string probe_arg =
        colon == std::string::npos ? std::string() : opt.probe.substr(colon + 1);
    try {
        if (probe_kind == "transfer") {
            table = convergence_study(family, opt.a_list, TransferProbe{std::stod(probe_arg)});
        } else if (probe_kind == "eigenvalue") {
            EigenvalueProbe probe;
            probe.index = std::stoi(probe_arg);
            probe.length = opt.length;
            probe.emin = opt.emin;
            probe.emax = opt.emax;
            probe.tol = opt.tolerance;
            table = convergence_study(family, opt.a_list, probe);
        } else {
            throw ConfigError("probe", "expected transfer:<energy> or eigenvalue:<index>");
        }
    } catch (const std::invalid_argument&) {
        throw ConfigError("probe", "bad probe argument in '" + opt.probe + "'");
    }

    Provenance prov;
    prov.command = "converge";
    prov.add("family", opt.family);
    prov.add("probe", opt.probe);
    prov.add("observable", table.observable);
    prov.add("L", opt.length);

    const bool monotone = table.errors_strictly_decreasing();
    const std::string format = ctx.format.empty() ? "csv" : ctx.format;
    if (format == "csv") {
        std::vector<std::vector<std::string>> rows;
        for (const auto& row : table.rows)
            rows.push_back({format_double(row.a), format_double(row.observed),
                            format_double(row.reference), format_double(row.abs_error),
                            format_double(row.rel_error)});
        write_text_atomic(ctx.out,
                          csv_document(prov, {"a", "observable", "reference", "abs_error",
                                              "rel_error"},
                                       rows,
                                       {std::string("monotone_decreasing: ") +
                                        (monotone ? "yes" : "no")}));
    } else {
        nlohmann::ordered_json j;
        j["provenance"] = provenance_json(prov);
        nlohmann::ordered_json jrows = nlohmann::ordered_json::array();
        for (const auto& row : table.rows)
            jrows.push_back({{"a", row.a},
                             {"observable", row.observed},
                             {"reference", row.reference},
                             {"abs_error", row.abs_error},
                             {"rel_error", row.rel_error}});
        j["rows"] = std::move(jrows);
        j["monotone_decreasing"] = monotone;
        write_text_atomic(ctx.out, j.dump(2) + "\n");
    }

    if (!ctx.quiet) {
        std::printf("%s: ", table.observable.c_str());
        for (const auto& row : table.rows)
            std::printf("err(a=%s)=%s ", format_double(row.a).c_str(),
                        format_double(row.abs_error).c_str());
        std::printf("monotone=%s\n", monotone ? "yes" : "no");
    }
    return 0;
}

int cmd_verify(const VerifyOptions& opt, const CommandContext& ctx) {
    if (opt.trials < 1) throw ConfigError("trials", "must be >= 1");
    constexpr double tolerance = 1e-10;
    DetRng rng(opt.seed);

    auto reconstruction_error = [](const ConnectionMatrix& t) {
        return max_abs_diff(decompose_general(t).reconstruct(), t.matrix());
    };

    double err_delta_branch = 0.0;
    for (int i = 0; i < opt.trials; ++i) {
        const double alpha = rng.uniform(-3.0, 3.0);
        const double gamma = rng.uniform(-3.0, 3.0);
        const double delta = rng.signed_away_from_zero(0.25, 3.0);
        err_delta_branch = std::max(
            err_delta_branch, reconstruction_error(ConnectionMatrix::from_parameters(
                                  alpha, (alpha * gamma - 1.0) / delta, gamma, delta)));
    }

    double err_eps_branch = 0.0;
    for (int i = 0; i < opt.trials; ++i) {
        const double alpha = rng.signed_away_from_zero(1.0 / 3.0, 3.0);
        const double beta = rng.signed_away_from_zero(0.25, 3.0);
        err_eps_branch = std::max(err_eps_branch,
                                  reconstruction_error(ConnectionMatrix::from_parameters(
                                      alpha, beta, 1.0 / alpha, 0.0)));
    }

    double err_diag_neg = 0.0, err_diag_pos = 0.0;
    for (int i = 0; i < opt.trials; ++i) {
        const double mag = rng.uniform(1.0 / 3.0, 3.0);
        err_diag_neg = std::max(err_diag_neg,
                                reconstruction_error(ConnectionMatrix::from_parameters(
                                    -mag, 0.0, -1.0 / mag, 0.0)));
        err_diag_pos = std::max(err_diag_pos,
                                reconstruction_error(ConnectionMatrix::from_parameters(
                                    mag, 0.0, 1.0 / mag, 0.0)));
    }

    double err_compose = 0.0;
    auto random_matrix = [&rng]() {
        const double alpha = rng.uniform(-2.0, 2.0);
        const double gamma = rng.uniform(-2.0, 2.0);
        const double delta = rng.signed_away_from_zero(0.3, 2.0);
        return ConnectionMatrix::from_parameters(alpha, (alpha * gamma - 1.0) / delta, gamma,
                                                 delta);
    };
    for (int i = 0; i < opt.trials; ++i) {
        const auto a = random_matrix();
        const auto b = random_matrix();
        const auto c = random_matrix();
        const auto left = compose(compose(a, b), c);
        const auto right = compose(a, compose(b, c));
        err_compose = std::max(err_compose, max_abs_diff(left.matrix(), right.matrix()));
        err_compose =
            std::max(err_compose, std::abs(left.matrix().det() - 1.0) / left.matrix().det_scale());
    }

    // pinned regression vector: chi(-2, 1, -1, 1) = [[2,-1],[-1,1]]
    const auto pinned = ConnectionMatrix::from_parameters(-2.0, 1.0, -1.0, 1.0);
    const double err_pinned =
        std::max(reconstruction_error(pinned),
                 max_abs_diff(pinned.matrix(), Mat2{2.0, -1.0, -1.0, 1.0}));

    const double worst = std::max({err_delta_branch, err_eps_branch, err_diag_neg,
                                   err_diag_pos, err_compose, err_pinned});
    const bool pass = worst < tolerance;

    Provenance prov;
    prov.command = "verify";
    prov.add("seed", static_cast<long long>(opt.seed));
    prov.add("trials", static_cast<long long>(opt.trials));

    nlohmann::ordered_json j;
    j["provenance"] = provenance_json(prov);
    j["tolerance"] = tolerance;
    j["max_errors"] = {{"three_factor_delta_branch", err_delta_branch},
                       {"three_factor_epsilon_branch", err_eps_branch},
                       {"six_factor_diagonal_negative", err_diag_neg},
                       {"six_factor_diagonal_positive", err_diag_pos},
                       {"compose_associativity", err_compose},
                       {"pinned_case", err_pinned}};
    j["pass"] = pass;
    const std::string text = j.dump(2) + "\n";
    if (!ctx.out.empty())
        write_text_atomic(ctx.out, text);
    else
        std::fputs(text.c_str(), stdout);

    if (!ctx.quiet)
        std::printf("verify: %s (max error %s, tolerance %s)\n", pass ? "pass" : "FAIL",
                    format_double(worst).c_str(), format_double(tolerance).c_str());
    return pass ? 0 : 1;
}

int cmd_extract(const RunConfig& cfg, int states, const CommandContext& ctx) {
    if (states < 2) throw ConfigError("states", "need at least 2 states to fit");
    if (ctx.out.empty()) throw ConfigError("out", "need --out for the extraction report");

    RunConfig run = cfg;
    run.max_states = states;
    const SolveResult res = solve_config(run, true);
    if (static_cast<int>(res.energies.size()) < states)
        throw Error("extract: window holds only " + std::to_string(res.energies.size()) +
                    " state(s); widen solver.energy_window");

    const double exclusion =
        std::max(interaction_extent(cfg) + cfg.s, 2.0 * res.grid.h);
    const double fit_width = 0.1 * cfg.length;

    std::vector<BoundaryData> data;
    for (int i = 0; i < states; ++i) {
        if (!(res.energies[i] > 0.0))
            throw Error("extract: needs positive-energy states; raise solver.energy_window");
        data.push_back(extract_boundary_data(res.grid, res.waves[i],
                                             std::sqrt(2.0 * res.energies[i]), 0.0, exclusion,
                                             fit_width));
    }
    const FitReport rep = fit_connection_matrix(data);

    Provenance prov = provenance_of(cfg, "extract");
    prov.add("states", static_cast<long long>(states));
    prov.add("exclusion", exclusion);
    prov.add("fit_width", fit_width);

    nlohmann::ordered_json j;
    j["provenance"] = provenance_json(prov);
    nlohmann::ordered_json jstates = nlohmann::ordered_json::array();
    for (int i = 0; i < states; ++i)
        jstates.push_back({{"energy", res.energies[i]},
                           {"k", data[i].k},
                           {"psi_minus", data[i].psi_minus},
                           {"dpsi_minus", data[i].dpsi_minus},
                           {"psi_plus", data[i].psi_plus},
                           {"dpsi_plus", data[i].dpsi_plus}});
    j["states"] = std::move(jstates);
    j["fitted"] = {{"t11", rep.fitted.a11},     {"t12", rep.fitted.a12},
                   {"t21", rep.fitted.a21},     {"t22", rep.fitted.a22},
                   {"alpha", rep.alpha()},      {"beta", rep.beta()},
                   {"gamma", rep.gamma()},      {"delta", rep.delta_p()},
                   {"residual", rep.residual},  {"det_deviation", rep.det_deviation}};
    if (has_target_matrix(cfg)) {
        const ConnectionMatrix target = target_matrix_of(cfg);
        j["target"] = {{"alpha", target.alpha()},
                       {"beta", target.beta()},
                       {"gamma", target.gamma()},
                       {"delta", target.delta_p()}};
        j["deviation"] = {{"alpha", rep.alpha() - target.alpha()},
                          {"beta", rep.beta() - target.beta()},
                          {"gamma", rep.gamma() - target.gamma()},
                          {"delta", rep.delta_p() - target.delta_p()},
                          {"max_entry", max_abs_diff(rep.fitted, target.matrix())}};
    }
    write_text_atomic(ctx.out, j.dump(2) + "\n");

    if (!ctx.quiet)
        std::printf(
            "extract: fitted alpha=%s beta=%s gamma=%s delta=%s (residual %s, |det-1| %s)\n",
            format_double(rep.alpha()).c_str(), format_double(rep.beta()).c_str(),
            format_double(rep.gamma()).c_str(), format_double(rep.delta_p()).c_str(),
            format_double(rep.residual).c_str(), format_double(rep.det_deviation).c_str());
    return 0;
}

}  // namespace pointint::cli
