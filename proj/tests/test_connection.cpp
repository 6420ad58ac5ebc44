#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>

#include "pointint/connection.hpp"

using namespace pointint;

namespace {

// deterministic uniform doubles, identical on every platform
struct DetRng {
    std::uint64_t s;
    explicit DetRng(std::uint64_t seed) : s(seed * 0x9e3779b97f4a7c15ull + 1ull) {}
    double next() {  // in [0, 1)
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return static_cast<double>(s >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }
    /// magnitude in [lo, hi], random sign
    double signed_away_from_zero(double lo, double hi) {
        const double mag = uniform(lo, hi);
        return next() < 0.5 ? -mag : mag;
    }
};

void check_entries(const Mat2& m, double e11, double e12, double e21, double e22,
                   double tol = 1e-12) {
    CHECK(std::abs(m.a11 - e11) <= tol);
    CHECK(std::abs(m.a12 - e12) <= tol);
    CHECK(std::abs(m.a21 - e21) <= tol);
    CHECK(std::abs(m.a22 - e22) <= tol);
}

}  // namespace

TEST_CASE("make_connection builds the transfer matrix from the parameters") {
    const auto free = ConnectionMatrix::from_parameters(-1.0, 0.0, -1.0, 0.0);
    CHECK(free.is_identity());

    const auto delta3 = ConnectionMatrix::from_parameters(-1.0, -6.0, -1.0, 0.0);
    check_entries(delta3.matrix(), 1.0, 6.0, 0.0, 1.0);

    // alpha*gamma - beta*delta = (-2)(-1) - (1)(1) = 1
    const auto general = ConnectionMatrix::from_parameters(-2.0, 1.0, -1.0, 1.0);
    check_entries(general.matrix(), 2.0, -1.0, -1.0, 1.0);
    CHECK(general.matrix().det() == doctest::Approx(1.0).epsilon(1e-14));

    CHECK(general.alpha() == -2.0);
    CHECK(general.beta() == 1.0);
    CHECK(general.gamma() == -1.0);
    CHECK(general.delta_p() == 1.0);
}

TEST_CASE("make_connection rejects bad input") {
    CHECK_THROWS_AS(ConnectionMatrix::from_parameters(-2.0, 1.0, -1.0, 0.9),
                    ConstraintViolation);
    CHECK_THROWS_AS(ConnectionMatrix::from_parameters(-1.0, 1.0, -1.0, 1e-8),
                    ConstraintViolation);
    const double nan = std::nan("");
    CHECK_THROWS_AS(ConnectionMatrix::from_parameters(nan, 0.0, -1.0, 0.0), NonFinite);
    CHECK_THROWS_AS(ConnectionMatrix::from_delta_strength(nan), NonFinite);
    CHECK_THROWS_AS(ConnectionMatrix::from_epsilon_strength(
                        std::numeric_limits<double>::infinity()),
                    NonFinite);
}

TEST_CASE("delta and epsilon special matrices") {
    CHECK(ConnectionMatrix::from_delta_strength(0.0).is_identity());
    check_entries(ConnectionMatrix::from_delta_strength(3.0).matrix(), 1.0, 6.0, 0.0, 1.0);
    check_entries(ConnectionMatrix::from_delta_strength(-1.4015).matrix(), 1.0, -2.8030, 0.0,
                  1.0);

    CHECK(ConnectionMatrix::from_epsilon_strength(0.0).is_identity());
    check_entries(ConnectionMatrix::from_epsilon_strength(5.0).matrix(), 1.0, 0.0, 10.0, 1.0);

    // a continuous-derivative state picks up the jump 2 c psi'
    double dpsi = 1.0, psi = 0.2;
    ConnectionMatrix::from_epsilon_strength(5.0).apply(dpsi, psi);
    CHECK(dpsi == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(psi == doctest::Approx(10.2).epsilon(1e-15));
}

TEST_CASE("compose applies the first-encountered interaction first") {
    const auto t = ConnectionMatrix::from_parameters(-2.0, 1.0, -1.0, 1.0);
    CHECK(max_abs_diff(compose(ConnectionMatrix(), t).matrix(), t.matrix()) < 1e-15);

    const auto d1 = ConnectionMatrix::from_delta_strength(1.0);
    const auto d2 = ConnectionMatrix::from_delta_strength(2.0);
    CHECK(max_abs_diff(compose(d1, d2).matrix(),
                       ConnectionMatrix::from_delta_strength(3.0).matrix()) < 1e-15);

    // delta and epsilon steps do not commute; the asymmetry survives the
    // zero-range limit
    const auto e1 = ConnectionMatrix::from_epsilon_strength(1.0);
    const auto ed = compose(e1, d1);
    const auto de = compose(d1, e1);
    CHECK(max_abs_diff(ed.matrix(), de.matrix()) > 0.5);
}

TEST_CASE("classify picks the tightest tag") {
    CHECK(classify(ConnectionMatrix()).tag == InteractionClass::Tag::Free);

    const auto eps = classify(ConnectionMatrix::from_epsilon_strength(5.0));
    CHECK(eps.tag == InteractionClass::Tag::EpsilonOnly);
    CHECK(eps.strength == 5.0);

    const auto gen = classify(ConnectionMatrix::from_parameters(-2.0, 1.0, -1.0, 1.0));
    CHECK(gen.tag == InteractionClass::Tag::General);

    // exact round-trips
    for (double v : {-7.25, -0.5, 0.125, 42.087}) {
        const auto cls = classify(ConnectionMatrix::from_delta_strength(v));
        CHECK(cls.tag == InteractionClass::Tag::DeltaOnly);
        CHECK(cls.strength == v);
    }
    for (double c : {-3.0, 0.25, 5.0, 1e6}) {
        const auto cls = classify(ConnectionMatrix::from_epsilon_strength(c));
        CHECK(cls.tag == InteractionClass::Tag::EpsilonOnly);
        CHECK(cls.strength == c);
    }
}

TEST_CASE("decompose_general: pinned three-factor case") {
    const auto t = ConnectionMatrix::from_parameters(-2.0, 1.0, -1.0, 1.0);
    const auto fac = decompose_general(t);
    REQUIRE(fac.factors.size() == 3);
    CHECK(fac.factors[0].kind == PrimitiveFactor::Kind::DeltaStep);
    CHECK(fac.factors[0].strength == doctest::Approx(0.0));
    CHECK(fac.factors[1].kind == PrimitiveFactor::Kind::EpsilonStep);
    CHECK(fac.factors[1].strength == doctest::Approx(-0.5));
    CHECK(fac.factors[2].kind == PrimitiveFactor::Kind::DeltaStep);
    CHECK(fac.factors[2].strength == doctest::Approx(-0.5));
    // product check, hand-multiplied: [[1,-1],[0,1]] [[1,0],[-1,1]] [[1,0],[0,1]]
    CHECK(max_abs_diff(fac.reconstruct(), Mat2{2.0, -1.0, -1.0, 1.0}) < 1e-14);
}

TEST_CASE("decompose_general: delta matrix goes through the epsilon branch") {
    const double v = 3.0;
    const auto fac = decompose_general(ConnectionMatrix::from_delta_strength(v));
    REQUIRE(fac.factors.size() == 3);
    CHECK(fac.factors[0].kind == PrimitiveFactor::Kind::EpsilonStep);
    CHECK(fac.factors[0].strength == doctest::Approx(0.0));
    CHECK(fac.factors[1].kind == PrimitiveFactor::Kind::DeltaStep);
    CHECK(fac.factors[1].strength == doctest::Approx(v));
    CHECK(fac.factors[2].strength == doctest::Approx(0.0));
    CHECK(max_abs_diff(fac.reconstruct(), Mat2{1.0, 6.0, 0.0, 1.0}) < 1e-14);
}

TEST_CASE("decompose_general: diagonal matrices need six factors") {
    // diag(2, 1/2): alpha = -2 < 0, rho = sqrt(2), upper sign branch
    const auto t = ConnectionMatrix::from_parameters(-2.0, 0.0, -0.5, 0.0);
    const auto fac = decompose_general(t);
    REQUIRE(fac.factors.size() == 6);
    CHECK(max_abs_diff(fac.reconstruct(), Mat2{2.0, 0.0, 0.0, 0.5}) < 1e-14);

    // alpha > 0 diagonal, lower sign branch
    const auto tp = ConnectionMatrix::from_parameters(2.0, 0.0, 0.5, 0.0);
    const auto facp = decompose_general(tp);
    REQUIRE(facp.factors.size() == 6);
    CHECK(max_abs_diff(facp.reconstruct(), Mat2{-2.0, 0.0, 0.0, -0.5}) < 1e-14);

    CHECK(decompose_general(ConnectionMatrix()).factors.empty());
}

TEST_CASE("decomposition identities hold on random matrices, all branches") {
    DetRng rng(20240217);
    double worst = 0.0;

    // delta != 0 branch
    for (int i = 0; i < 1000; ++i) {
        const double alpha = rng.uniform(-3.0, 3.0);
        const double gamma = rng.uniform(-3.0, 3.0);
        const double delta = rng.signed_away_from_zero(0.25, 3.0);
        const double beta = (alpha * gamma - 1.0) / delta;
        const auto t = ConnectionMatrix::from_parameters(alpha, beta, gamma, delta);
        const auto fac = decompose_general(t);
        REQUIRE(fac.factors.size() == 3);
        worst = std::max(worst, max_abs_diff(fac.reconstruct(), t.matrix()));
    }
    CHECK(worst < 1e-10);

    // delta = 0, beta != 0 branch
    worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double alpha = rng.signed_away_from_zero(1.0 / 3.0, 3.0);
        const double gamma = 1.0 / alpha;
        const double beta = rng.signed_away_from_zero(0.25, 3.0);
        const auto t = ConnectionMatrix::from_parameters(alpha, beta, gamma, 0.0);
        const auto fac = decompose_general(t);
        REQUIRE(fac.factors.size() == 3);
        worst = std::max(worst, max_abs_diff(fac.reconstruct(), t.matrix()));
    }
    CHECK(worst < 1e-10);

    // beta = delta = 0 branch, both signs of alpha
    worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double mag = rng.uniform(1.0 / 3.0, 3.0);
        const double alpha = i % 2 == 0 ? -mag : mag;
        const auto t = ConnectionMatrix::from_parameters(alpha, 0.0, 1.0 / alpha, 0.0);
        const auto fac = decompose_general(t);
        REQUIRE(fac.factors.size() == 6);
        worst = std::max(worst, max_abs_diff(fac.reconstruct(), t.matrix()));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("compose is associative and preserves the determinant") {
    DetRng rng(7);
    auto random_matrix = [&]() {
        const double alpha = rng.uniform(-2.0, 2.0);
        const double gamma = rng.uniform(-2.0, 2.0);
        const double delta = rng.signed_away_from_zero(0.3, 2.0);
        return ConnectionMatrix::from_parameters(alpha, (alpha * gamma - 1.0) / delta, gamma,
                                                 delta);
    };
    for (int i = 0; i < 200; ++i) {
        const auto a = random_matrix();
        const auto b = random_matrix();
        const auto c = random_matrix();
        const auto left = compose(compose(a, b), c);
        const auto right = compose(a, compose(b, c));
        CHECK(max_abs_diff(left.matrix(), right.matrix()) < 1e-12 *
                                                                std::max(1.0, max_abs_entry(left.matrix())));
        CHECK(std::abs(left.matrix().det() - 1.0) < 1e-12 * left.matrix().det_scale());
    }
}

TEST_CASE("applying T reproduces the component equations of the parameters") {
    DetRng rng(99);
    for (int i = 0; i < 200; ++i) {
        const double alpha = rng.uniform(-2.0, 2.0);
        const double gamma = rng.uniform(-2.0, 2.0);
        const double delta = rng.signed_away_from_zero(0.3, 2.0);
        const double beta = (alpha * gamma - 1.0) / delta;
        const auto t = ConnectionMatrix::from_parameters(alpha, beta, gamma, delta);
        double dpsi = rng.uniform(-1.0, 1.0);
        double psi = rng.uniform(-1.0, 1.0);
        const double dpsi_in = dpsi, psi_in = psi;
        t.apply(dpsi, psi);
        CHECK(dpsi == doctest::Approx(-alpha * dpsi_in - beta * psi_in).epsilon(1e-12));
        CHECK(psi == doctest::Approx(-delta * dpsi_in - gamma * psi_in).epsilon(1e-12));
    }
}
