#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

namespace pointint::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_double(const std::string& field, const std::string& text) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
        throw ConfigError(field, "not a number: '" + t + "'");
    return value;
}

long parse_int(const std::string& field, const std::string& text) {
    const std::string t = trim(text);
    long value = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
        throw ConfigError(field, "not an integer: '" + t + "'");
    return value;
}

std::vector<double> parse_list(const std::string& field, const std::string& text) {
    std::vector<double> out;
    std::string token;
    for (char ch : text + " ") {
        if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') {
            if (!token.empty()) out.push_back(parse_double(field, token));
            token.clear();
        } else {
            token += ch;
        }
    }
    return out;
}

bool parse_bool(const std::string& field, const std::string& text) {
    const std::string t = lower(trim(text));
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ConfigError(field, "not a boolean: '" + t + "'");
}

BoundaryKind parse_bc(const std::string& field, const std::string& text) {
    const std::string t = lower(trim(text));
    if (t == "dirichlet") return BoundaryKind::Dirichlet;
    if (t == "neumann") return BoundaryKind::Neumann;
    throw ConfigError(field, "expected dirichlet or neumann, got '" + t + "'");
}

using KeyMap = std::map<std::string, std::string>;

}  // namespace

RunConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("config", "cannot read " + file.string());

    std::map<std::string, KeyMap> sections;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("config", "bad section header at line " + std::to_string(lineno));
            section = lower(trim(t.substr(1, t.size() - 2)));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config", "expected key = value at line " + std::to_string(lineno));
        sections[section][lower(trim(t.substr(0, eq)))] = trim(t.substr(eq + 1));
    }

    RunConfig cfg;
    auto get = [&](const std::string& sec, const std::string& key) -> const std::string* {
        const auto s = sections.find(sec);
        if (s == sections.end()) return nullptr;
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    };
    auto want = [&](const std::string& sec, const std::string& key) -> const std::string& {
        const std::string* v = get(sec, key);
        if (!v) throw ConfigError(sec + "." + key, "missing required key");
        return *v;
    };

    if (const auto* v = get("box", "length")) cfg.length = parse_double("box.length", *v);
    if (const auto* v = get("box", "left_bc")) cfg.left_bc = parse_bc("box.left_bc", *v);
    if (const auto* v = get("box", "right_bc")) cfg.right_bc = parse_bc("box.right_bc", *v);

    const std::string kind = lower(trim(want("interaction", "kind")));
    if (kind == "free") cfg.kind = InteractionKind::Free;
    else if (kind == "delta") cfg.kind = InteractionKind::Delta;
    else if (kind == "epsilon") cfg.kind = InteractionKind::Epsilon;
    else if (kind == "chi") cfg.kind = InteractionKind::Chi;
    else if (kind == "train") cfg.kind = InteractionKind::Train;
    else if (kind == "family") cfg.kind = InteractionKind::Family;
    else throw ConfigError("interaction.kind", "unknown kind '" + kind + "'");

    if (const auto* v = get("interaction", "v")) cfg.v = parse_double("interaction.v", *v);
    if (const auto* v = get("interaction", "c")) cfg.c = parse_double("interaction.c", *v);
    if (const auto* v = get("interaction", "alpha"))
        cfg.alpha = parse_double("interaction.alpha", *v);
    if (const auto* v = get("interaction", "beta"))
        cfg.beta = parse_double("interaction.beta", *v);
    if (const auto* v = get("interaction", "gamma"))
        cfg.gamma = parse_double("interaction.gamma", *v);
    if (const auto* v = get("interaction", "delta"))
        cfg.delta = parse_double("interaction.delta", *v);
    if (const auto* v = get("interaction", "family")) cfg.family = lower(trim(*v));
    if (const auto* v = get("interaction", "v0")) cfg.v0 = parse_double("interaction.v0", *v);
    if (const auto* v = get("interaction", "u0")) cfg.u0 = parse_double("interaction.u0", *v);
    if (const auto* v = get("interaction", "positions"))
        cfg.positions = parse_list("interaction.positions", *v);
    if (const auto* v = get("interaction", "strengths"))
        cfg.strengths = parse_list("interaction.strengths", *v);
    if (const auto* v = get("interaction", "a")) cfg.a = parse_double("interaction.a", *v);
    if (const auto* v = get("interaction", "s")) cfg.s = parse_double("interaction.s", *v);

    if (const auto* v = get("solver", "method")) {
        const std::string m = lower(trim(*v));
        if (m == "exact") cfg.method = SolverMethod::Exact;
        else if (m == "fd") cfg.method = SolverMethod::Fd;
        else throw ConfigError("solver.method", "expected exact or fd, got '" + m + "'");
    }
    if (const auto* v = get("solver", "grid_points"))
        cfg.grid_points = static_cast<int>(parse_int("solver.grid_points", *v));
    if (const auto* v = get("solver", "energy_window")) {
        const auto w = parse_list("solver.energy_window", *v);
        if (w.size() != 2) throw ConfigError("solver.energy_window", "expected two numbers");
        cfg.emin = w[0];
        cfg.emax = w[1];
    }
    if (const auto* v = get("solver", "max_states"))
        cfg.max_states = static_cast<int>(parse_int("solver.max_states", *v));
    if (const auto* v = get("solver", "tolerance"))
        cfg.tolerance = parse_double("solver.tolerance", *v);

    if (const auto* v = get("output", "format")) cfg.format = lower(trim(*v));
    if (const auto* v = get("output", "path")) cfg.path = *v;
    if (const auto* v = get("output", "wavefunctions"))
        cfg.wavefunctions = parse_bool("output.wavefunctions", *v);

    validate(cfg);
    return cfg;
}

void validate(const RunConfig& cfg) {
    if (!(cfg.length > 0.0) || !std::isfinite(cfg.length))
        throw ConfigError("box.length", "must be positive and finite");

    auto require_finite = [](const std::string& field, double x) {
        if (!std::isfinite(x)) throw ConfigError(field, "must be finite");
    };

    switch (cfg.kind) {
        case InteractionKind::Free:
            break;
        case InteractionKind::Delta:
            require_finite("interaction.v", cfg.v);
            break;
        case InteractionKind::Epsilon:
            require_finite("interaction.c", cfg.c);
            if (cfg.c == 0.0) throw ConfigError("interaction.c", "must be nonzero");
            break;
        case InteractionKind::Chi: {
            for (const auto& [name, val] : {std::pair<const char*, double>{"alpha", cfg.alpha},
                                            {"beta", cfg.beta},
                                            {"gamma", cfg.gamma},
                                            {"delta", cfg.delta}})
                require_finite(std::string("interaction.") + name, val);
            if (std::abs(cfg.alpha * cfg.gamma - cfg.beta * cfg.delta - 1.0) > 1e-9)
                throw ConfigError("interaction.alpha..delta",
                                  "constraint alpha*gamma - beta*delta = 1 violated");
            break;
        }
        case InteractionKind::Train: {
            if (cfg.positions.empty())
                throw ConfigError("interaction.positions", "missing or empty");
            if (cfg.positions.size() != cfg.strengths.size())
                throw ConfigError("interaction.strengths",
                                  "must have one strength per position");
            for (std::size_t i = 0; i < cfg.positions.size(); ++i) {
                require_finite("interaction.positions", cfg.positions[i]);
                require_finite("interaction.strengths", cfg.strengths[i]);
                if (i > 0 && !(cfg.positions[i] > cfg.positions[i - 1]))
                    throw ConfigError("interaction.positions", "must be strictly increasing");
                if (std::abs(cfg.positions[i]) >= 0.5 * cfg.length)
                    throw ConfigError("interaction.positions",
                                      "must lie strictly inside the box");
            }
            break;
        }
        case InteractionKind::Family: {
            if (!(cfg.a > 0.0)) throw ConfigError("interaction.a", "must be positive");
            try {
                const RenormalizedFamily fam = family_of(cfg);
                if (fam.outermost(cfg.a) >= 0.5 * cfg.length)
                    throw ConfigError("interaction.a", "train does not fit inside the box");
            } catch (const LawConstraintViolation& e) {
                throw ConfigError("interaction.family", e.what());
            } catch (const NonFinite& e) {
                throw ConfigError("interaction.family", e.what());
            }
            break;
        }
    }

    if (cfg.s < 0.0 || !std::isfinite(cfg.s))
        throw ConfigError("interaction.s", "must be >= 0 and finite");
    if (cfg.method == SolverMethod::Exact && cfg.s != 0.0)
        throw ConfigError("interaction.s", "solver.method=exact requires interaction.s = 0");
    if (cfg.method == SolverMethod::Fd) {
        if (cfg.kind == InteractionKind::Delta || cfg.kind == InteractionKind::Epsilon ||
            cfg.kind == InteractionKind::Chi)
            throw ConfigError("interaction.kind",
                              "solver.method=fd needs a finite-range realization "
                              "(kind = free, train or family)");
        if (cfg.kind != InteractionKind::Free && cfg.s == 0.0)
            throw ConfigError("interaction.s", "solver.method=fd requires interaction.s > 0");
    }

    if (cfg.grid_points < 3) throw ConfigError("solver.grid_points", "must be >= 3");
    if (!(cfg.emin < cfg.emax))
        throw ConfigError("solver.energy_window", "requires emin < emax");
    if (cfg.max_states < 1) throw ConfigError("solver.max_states", "must be >= 1");
    if (!(cfg.tolerance > 0.0)) throw ConfigError("solver.tolerance", "must be positive");

    if (cfg.format != "csv" && cfg.format != "json")
        throw ConfigError("output.format", "expected csv or json");
}

RenormalizedFamily family_of(const RunConfig& cfg) {
    if (cfg.family == "constant") return RenormalizedFamily::constant(cfg.v0, cfg.u0);
    if (cfg.family == "epsilon") return RenormalizedFamily::epsilon(cfg.c);
    if (cfg.family == "chi3")
        return RenormalizedFamily::chi3(cfg.alpha, cfg.beta, cfg.gamma, cfg.delta);
    if (cfg.family == "chi5") return RenormalizedFamily::chi5(cfg.alpha, cfg.beta, cfg.gamma);
    if (cfg.family == "chi5z") return RenormalizedFamily::chi5z(cfg.alpha, cfg.gamma);
    throw ConfigError("interaction.family",
                      "expected constant, epsilon, chi3, chi5 or chi5z, got '" + cfg.family +
                          "'");
}

DeltaTrain train_of(const RunConfig& cfg) {
    if (cfg.kind == InteractionKind::Train) {
        std::vector<DeltaSpike> spikes;
        for (std::size_t i = 0; i < cfg.positions.size(); ++i)
            spikes.push_back({cfg.positions[i], cfg.strengths[i]});
        return DeltaTrain::from_spikes(std::move(spikes));
    }
    if (cfg.kind == InteractionKind::Family) return family_of(cfg).train_at(cfg.a);
    throw ConfigError("interaction.kind", "no delta train for this kind");
}

BoxSystem exact_system_of(const RunConfig& cfg) {
    switch (cfg.kind) {
        case InteractionKind::Free:
            return BoxSystem::free_box(cfg.length, cfg.left_bc, cfg.right_bc);
        case InteractionKind::Delta:
            return BoxSystem::with_point(cfg.length, ConnectionMatrix::from_delta_strength(cfg.v),
                                         0.0, cfg.left_bc, cfg.right_bc);
        case InteractionKind::Epsilon:
            return BoxSystem::with_point(cfg.length,
                                         ConnectionMatrix::from_epsilon_strength(cfg.c), 0.0,
                                         cfg.left_bc, cfg.right_bc);
        case InteractionKind::Chi:
            return BoxSystem::with_point(
                cfg.length,
                ConnectionMatrix::from_parameters(cfg.alpha, cfg.beta, cfg.gamma, cfg.delta), 0.0,
                cfg.left_bc, cfg.right_bc);
        default:
            return BoxSystem::with_train(cfg.length, train_of(cfg), cfg.left_bc, cfg.right_bc);
    }
}

bool has_target_matrix(const RunConfig& cfg) { return cfg.kind != InteractionKind::Train; }

ConnectionMatrix target_matrix_of(const RunConfig& cfg) {
    switch (cfg.kind) {
        case InteractionKind::Free:
            return ConnectionMatrix();
        case InteractionKind::Delta:
            return ConnectionMatrix::from_delta_strength(cfg.v);
        case InteractionKind::Epsilon:
            return ConnectionMatrix::from_epsilon_strength(cfg.c);
        case InteractionKind::Chi:
            return ConnectionMatrix::from_parameters(cfg.alpha, cfg.beta, cfg.gamma, cfg.delta);
        case InteractionKind::Family:
            return family_of(cfg).target();
        default:
            throw ConfigError("interaction.kind", "explicit trains have no target matrix");
    }
}

double interaction_extent(const RunConfig& cfg) {
    if (cfg.kind == InteractionKind::Train) {
        double ext = 0.0;
        for (double p : cfg.positions) ext = std::max(ext, std::abs(p));
        return ext;
    }
    if (cfg.kind == InteractionKind::Family) return family_of(cfg).outermost(cfg.a);
    return 0.0;
}

}  // namespace pointint::cli
