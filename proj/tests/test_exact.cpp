#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pointint/analysis.hpp"
#include "pointint/exact.hpp"
#include "test_util.hpp"

using namespace pointint;

namespace {

constexpr double kPi = std::numbers::pi;

/// Roots of tan(x) = -x, the odd-type quantization of epsilon(c = L/2) in
/// a Dirichlet box; branch m lives in ((2m-1) pi/2, m pi).
double tan_root(int m) {
    return bisect_root([](double x) { return std::tan(x) + x; },
                       (2.0 * m - 1.0) * kPi / 2.0 + 1e-9, m * kPi - 1e-12, 1e-14);
}

}  // namespace

TEST_CASE("free propagator basics") {
    const auto id = free_propagator(2.0, 0.0);
    CHECK(max_abs_diff(id.m, Mat2::identity()) == 0.0);

    // k = 1, d = pi/2 rotates the state by a quarter period
    const auto quarter = free_propagator(0.5, kPi / 2.0);
    CHECK(max_abs_diff(quarter.m, Mat2{0.0, -1.0, 1.0, 0.0}) < 1e-15);

    // group property
    const auto whole = free_propagator(2.0, 1.0);
    const auto split = free_propagator(2.0, 0.7).m * free_propagator(2.0, 0.3).m;
    CHECK(max_abs_diff(whole.m, split) < 1e-12);

    // E = 0 shears, E < 0 is the hyperbolic continuation
    CHECK(max_abs_diff(free_propagator(0.0, 2.5).m, Mat2{1.0, 0.0, 2.5, 1.0}) == 0.0);
    const double kp = std::sqrt(2.0 * 0.8);
    const auto neg = free_propagator(-0.8, 0.4);
    CHECK(neg.m.a11 == doctest::Approx(std::cosh(kp * 0.4)).epsilon(1e-14));
    CHECK(neg.m.a12 == doctest::Approx(kp * std::sinh(kp * 0.4)).epsilon(1e-14));
    CHECK(std::abs(neg.m.det() - 1.0) < 1e-12);

    CHECK_THROWS_AS(free_propagator(1.0, -0.1), NegativeDistance);
}

TEST_CASE("delta step matches the connection-matrix convention") {
    CHECK(max_abs_diff(delta_step(0.0).m, Mat2::identity()) == 0.0);
    double dpsi = 0.0, psi = 1.0;
    delta_step(42.087).m.apply(dpsi, psi);
    CHECK(dpsi == doctest::Approx(84.174).epsilon(1e-14));
    CHECK(psi == 1.0);
    CHECK(max_abs_diff(delta_step(-1.4015).m,
                       ConnectionMatrix::from_delta_strength(-1.4015).matrix()) == 0.0);
}

TEST_CASE("train transfer approaches the point-interaction matrices") {
    const auto single = DeltaTrain::from_spikes({{0.3, 2.0}});
    CHECK(max_abs_diff(train_transfer(single, 1.0).m, delta_step(2.0).m) == 0.0);

    // epsilon family at shrinking separation
    const auto eps = RenormalizedFamily::epsilon(5.0);
    const Mat2 eps_target = ConnectionMatrix::from_epsilon_strength(5.0).matrix();
    double prev = 1e300;
    for (double a : {1e-2, 1e-3, 1e-4}) {
        const auto tm = train_transfer(eps.train_at(a), 0.045);
        CHECK(std::abs(tm.m.det() - 1.0) < 1e-10 * tm.m.det_scale());
        const double err = max_abs_diff(tm.m, eps_target);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-2);

    // constant family collapses onto the plain delta of strength 2 v0 + u0
    const auto con = RenormalizedFamily::constant(1.0, 1.0);
    const Mat2 delta3 = ConnectionMatrix::from_delta_strength(3.0).matrix();
    prev = 1e300;
    for (double a : {1e-3, 1e-4, 1e-5}) {
        const double err = max_abs_diff(train_transfer(con.train_at(a), 0.3).m, delta3);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("spectral function vanishes on known eigenvalues") {
    const double L = 10.0;
    const auto empty = BoxSystem::free_box(L);
    CHECK(std::abs(spectral_function(empty, kPi * kPi / 200.0)) < 1e-12);
    CHECK(std::abs(spectral_function(empty, 0.05)) > 1e-4);

    // even-parity states ignore the epsilon interaction for every strength
    for (double c : {0.5, 5.0, 50.0}) {
        const auto sys =
            BoxSystem::with_point(L, ConnectionMatrix::from_epsilon_strength(c));
        for (int n : {1, 3, 5})
            CHECK(std::abs(spectral_function(sys, n * n * kPi * kPi / 200.0)) < 1e-10);
    }
}

TEST_CASE("sampled potentials are rejected by the exact solver") {
    const auto grid = UniformGrid(-0.4, 0.001, 801);
    const auto pot = smear(xi_train(1.0, 1.0, 0.2), 0.012, grid);
    const auto sys = BoxSystem::with_sampled(10.0, pot);
    CHECK_THROWS_AS(spectral_function(sys, 0.1), UnsupportedInteraction);
    CHECK_THROWS_AS(eigenvalues(sys, 0.0, 1.0, 4), UnsupportedInteraction);
}

TEST_CASE("empty box spectrum is n^2 pi^2 / (2 L^2)") {
    const auto spec = eigenvalues(BoxSystem::free_box(10.0), 0.0, 0.5, 16, 1e-12);
    REQUIRE(spec.eigenvalues.size() == 3);
    for (int n = 1; n <= 3; ++n)
        CHECK(spec.eigenvalues[n - 1] ==
              doctest::Approx(n * n * kPi * kPi / 200.0).epsilon(1e-10));
    CHECK_FALSE(spec.scan.rescanned);
    CHECK_THROWS_AS(eigenvalues(BoxSystem::free_box(10.0), 1.0, 0.5, 4), InvalidArgument);
}

TEST_CASE("epsilon(5) box spectrum against the transcendental oracle") {
    const double L = 10.0;
    const auto sys = BoxSystem::with_point(L, ConnectionMatrix::from_epsilon_strength(5.0));
    const auto spec = eigenvalues(sys, 0.0, 0.5, 8, 1e-12);
    REQUIRE(spec.eigenvalues.size() == 4);

    const double x1 = tan_root(1);  // ~2.0287578
    const double x2 = tan_root(2);  // ~4.9131804
    CHECK(x1 == doctest::Approx(2.0287578).epsilon(1e-7));
    CHECK(x2 == doctest::Approx(4.9131804).epsilon(1e-7));

    CHECK(std::abs(spec.eigenvalues[0] - kPi * kPi / 200.0) < 1e-11);
    CHECK(std::abs(spec.eigenvalues[1] - x1 * x1 / 50.0) < 1e-9);
    CHECK(std::abs(spec.eigenvalues[2] - 9.0 * kPi * kPi / 200.0) < 1e-11);
    CHECK(std::abs(spec.eigenvalues[3] - x2 * x2 / 50.0) < 1e-9);
}

TEST_CASE("near-degenerate Neumann-limit pairs are resolved") {
    const double c = 1e6;
    const auto sys = BoxSystem::with_point(10.0, ConnectionMatrix::from_epsilon_strength(c));
    const auto spec = eigenvalues(sys, 0.01, 0.2, 4, 1e-12);
    REQUIRE(spec.eigenvalues.size() >= 2);
    CHECK(spec.scan.rescanned);
    const double gap = (spec.eigenvalues[1] - spec.eigenvalues[0]) / spec.eigenvalues[0];
    CHECK(gap > 0.0);
    CHECK(gap < 1e-5);
    // perturbation estimate of the splitting: 4 L / (c pi^2)
    CHECK(gap == doctest::Approx(40.0 / (c * kPi * kPi)).epsilon(0.05));
}

TEST_CASE("eigenfunction of the empty box ground state") {
    const double L = 10.0;
    const auto sys = BoxSystem::free_box(L);
    const auto spec = eigenvalues(sys, 0.0, 0.1, 1, 1e-13);
    REQUIRE(spec.eigenvalues.size() == 1);
    const auto grid = UniformGrid::over(-L / 2, L / 2, 801);
    const auto ef = eigenfunction(sys, spec.eigenvalues[0], grid, 1e-13);

    const double k = kPi / L;
    double worst = 0.0;
    for (int i = 0; i < grid.count; ++i) {
        const double target = std::sqrt(2.0 / L) * std::sin(k * (grid.node(i) + L / 2));
        worst = std::max(worst, std::abs(ef.values[i] - target));
    }
    CHECK(worst < 1e-9);

    // independent quadrature check of the closed-form normalization
    double trap = 0.0;
    for (int i = 0; i + 1 < grid.count; ++i)
        trap += 0.5 * (ef.values[i] * ef.values[i] + ef.values[i + 1] * ef.values[i + 1]) *
                grid.h;
    CHECK(trap == doctest::Approx(1.0).epsilon(1e-5));

    // no defect: both boundary sides agree
    CHECK(ef.boundary.psi_minus == doctest::Approx(ef.boundary.psi_plus).epsilon(1e-14));
    CHECK(ef.boundary.dpsi_minus == doctest::Approx(ef.boundary.dpsi_plus).epsilon(1e-14));

    CHECK_THROWS_AS(eigenfunction(sys, 0.06, grid, 1e-13), NotAnEigenvalue);
}

TEST_CASE("epsilon eigenfunctions carry the wavefunction jump") {
    const double c = 5.0, L = 10.0;
    const auto sys = BoxSystem::with_point(L, ConnectionMatrix::from_epsilon_strength(c));
    const auto spec = eigenvalues(sys, 0.0, 0.5, 4, 1e-12);
    REQUIRE(spec.eigenvalues.size() == 4);
    const auto grid = UniformGrid::over(-L / 2, L / 2, 801);

    const auto ef = eigenfunction(sys, spec.eigenvalues[1], grid, 1e-12);
    const double scale = ef.boundary.scale();
    CHECK(std::abs(ef.boundary.dpsi_plus - ef.boundary.dpsi_minus) < 1e-10 * scale);
    CHECK(std::abs(ef.boundary.psi_plus - ef.boundary.psi_minus -
                   2.0 * c * ef.boundary.dpsi_minus) < 1e-10 * scale);
    // the jump itself is visible
    CHECK(std::abs(ef.boundary.psi_plus - ef.boundary.psi_minus) > 0.1);
}

TEST_CASE("strong epsilon coupling approaches the Neumann boundary") {
    const double c = 1e8, L = 10.0;
    const auto sys = BoxSystem::with_point(L, ConnectionMatrix::from_epsilon_strength(c));
    const auto spec = eigenvalues(sys, 0.01, 0.2, 2, 1e-12);
    REQUIRE(spec.eigenvalues.size() == 2);
    const auto grid = UniformGrid::over(-L / 2, L / 2, 401);
    for (double e : spec.eigenvalues) {
        const auto ef = eigenfunction(sys, e, grid, 1e-12);
        CHECK(std::abs(ef.boundary.dpsi_minus) < 1e-8);
        CHECK(std::abs(ef.boundary.dpsi_plus) < 1e-8);
    }
}

TEST_CASE("point interactions match their merged train realizations") {
    const double L = 10.0;

    SUBCASE("chi3 eigenvalue convergence") {
        const auto fam = RenormalizedFamily::chi3(-2.0, 1.0, -1.0, 1.0);
        const auto point = BoxSystem::with_point(L, fam.target());
        const auto ref = eigenvalues(point, 0.0, 0.4, 2, 1e-12);
        REQUIRE(ref.eigenvalues.size() == 2);
        for (int idx : {0, 1}) {
            double prev = 1e300;
            for (double a : {0.1, 0.03, 0.01}) {
                const auto sys = BoxSystem::with_train(L, fam.train_at(a));
                const auto spec = eigenvalues(sys, 0.0, 0.4, 2, 1e-12);
                REQUIRE(spec.eigenvalues.size() == 2);
                const double err = std::abs(spec.eigenvalues[idx] - ref.eigenvalues[idx]);
                CHECK(err < prev);
                prev = err;
            }
        }
    }

    SUBCASE("chi5 and chi5z transfer convergence") {
        for (const auto& fam : {RenormalizedFamily::chi5(-2.0, 1.0, -0.5),
                                RenormalizedFamily::chi5z(-2.0, -0.5),
                                RenormalizedFamily::chi5z(2.0, 0.5)}) {
            const Mat2 target = fam.target().matrix();
            double prev = 1e300;
            for (double a : {1e-2, 1e-3, 1e-4}) {
                const double err =
                    max_abs_diff(train_transfer(fam.train_at(a), 0.045).m, target);
                CHECK(err < prev);
                prev = err;
            }
            CHECK(prev < 1e-2);
        }
    }

    SUBCASE("chi5z eigenvalue convergence with mixed boundaries") {
        const auto fam = RenormalizedFamily::chi5z(-2.0, -0.5);
        const auto point = BoxSystem::with_point(L, fam.target(), 0.0, BoundaryKind::Neumann,
                                                 BoundaryKind::Dirichlet);
        const auto ref = eigenvalues(point, 0.001, 0.2, 1, 1e-12);
        REQUIRE(ref.eigenvalues.size() >= 1);
        double prev = 1e300;
        for (double a : {0.1, 0.03, 0.01}) {
            const auto sys = BoxSystem::with_train(L, fam.train_at(a), BoundaryKind::Neumann,
                                                   BoundaryKind::Dirichlet);
            const auto spec = eigenvalues(sys, 0.001, 0.2, 1, 1e-12);
            REQUIRE(spec.eigenvalues.size() >= 1);
            const double err = std::abs(spec.eigenvalues[0] - ref.eigenvalues[0]);
            CHECK(err < prev);
            prev = err;
        }
    }
}

TEST_CASE("mirror image of an asymmetric train") {
    const double L = 10.0;
    const auto fam = RenormalizedFamily::chi3(-2.0, 1.0, -1.0, 1.0);
    const auto train = fam.train_at(0.05);
    const auto sys = BoxSystem::with_train(L, train);
    const auto mirrored = BoxSystem::with_train(L, train.reflected());

    const auto spec = eigenvalues(sys, 0.0, 0.4, 2, 1e-13);
    const auto mspec = eigenvalues(mirrored, 0.0, 0.4, 2, 1e-13);
    REQUIRE(spec.eigenvalues.size() == 2);
    REQUIRE(mspec.eigenvalues.size() == 2);
    for (int i = 0; i < 2; ++i)
        CHECK(spec.eigenvalues[i] == doctest::Approx(mspec.eigenvalues[i]).epsilon(1e-10));

    const auto grid = UniformGrid::over(-L / 2, L / 2, 401);
    const auto ef = eigenfunction(sys, spec.eigenvalues[0], grid, 1e-13);
    const auto mef = eigenfunction(mirrored, mspec.eigenvalues[0], grid, 1e-13);
    // psi_mirror(x) = +- psi(-x); align the sign at the peak
    int peak = 0;
    for (int i = 0; i < grid.count; ++i)
        if (std::abs(ef.values[i]) > std::abs(ef.values[peak])) peak = i;
    const double sign = ef.values[peak] * mef.values[grid.count - 1 - peak] > 0 ? 1.0 : -1.0;
    double worst = 0.0;
    for (int i = 0; i < grid.count; ++i)
        worst = std::max(worst,
                         std::abs(ef.values[i] - sign * mef.values[grid.count - 1 - i]));
    CHECK(worst < 1e-8);
}
