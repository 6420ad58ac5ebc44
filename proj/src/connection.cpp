#include "pointint/connection.hpp"

#include <cmath>

namespace pointint {

namespace {

void require_finite(const Mat2& m, const char* what) {
    if (!m.finite()) throw NonFinite(std::string(what) + ": non-finite entry");
}

}  // namespace

ConnectionMatrix ConnectionMatrix::from_parameters(double alpha, double beta, double gamma,
                                                   double delta, double tol) {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma) ||
        !std::isfinite(delta))
        throw NonFinite("make_connection: non-finite parameter");
    const double scale = std::max(1.0, std::abs(alpha * gamma) + std::abs(beta * delta));
    if (std::abs(alpha * gamma - beta * delta - 1.0) > tol * scale)
        throw ConstraintViolation("make_connection: alpha*gamma - beta*delta != 1");
    ConnectionMatrix t;
    t.m_ = {-alpha, -beta, -delta, -gamma};
    return t;
}

ConnectionMatrix ConnectionMatrix::from_delta_strength(double v) {
    if (!std::isfinite(v)) throw NonFinite("from_delta_strength: non-finite v");
    ConnectionMatrix t;
    t.m_ = {1.0, 2.0 * v, 0.0, 1.0};
    return t;
}

ConnectionMatrix ConnectionMatrix::from_epsilon_strength(double c) {
    if (!std::isfinite(c)) throw NonFinite("from_epsilon_strength: non-finite c");
    ConnectionMatrix t;
    t.m_ = {1.0, 0.0, 2.0 * c, 1.0};
    return t;
}

ConnectionMatrix ConnectionMatrix::from_matrix(const Mat2& m, double tol) {
    require_finite(m, "ConnectionMatrix");
    if (std::abs(m.det() - 1.0) > tol * m.det_scale())
        throw ConstraintViolation("ConnectionMatrix: det != 1");
    ConnectionMatrix t;
    t.m_ = m;
    return t;
}

bool ConnectionMatrix::is_identity(double tol) const {
    return std::abs(m_.a11 - 1.0) <= tol && std::abs(m_.a12) <= tol &&
           std::abs(m_.a21) <= tol && std::abs(m_.a22 - 1.0) <= tol;
}

ConnectionMatrix compose(const ConnectionMatrix& first, const ConnectionMatrix& second) {
    return ConnectionMatrix::from_matrix(second.matrix() * first.matrix(), 1e-10);
}

InteractionClass classify(const ConnectionMatrix& t, double tol) {
    const Mat2& m = t.matrix();
    const bool diag_unit = std::abs(m.a11 - 1.0) <= tol && std::abs(m.a22 - 1.0) <= tol;
    if (diag_unit && std::abs(m.a12) <= tol && std::abs(m.a21) <= tol)
        return {InteractionClass::Tag::Free, 0.0};
    if (diag_unit && std::abs(m.a21) <= tol)
        return {InteractionClass::Tag::DeltaOnly, m.a12 / 2.0};
    if (diag_unit && std::abs(m.a12) <= tol)
        return {InteractionClass::Tag::EpsilonOnly, m.a21 / 2.0};
    return {InteractionClass::Tag::General, 0.0};
}

Mat2 PrimitiveFactor::matrix() const {
    if (kind == Kind::DeltaStep) return {1.0, 2.0 * strength, 0.0, 1.0};
    return {1.0, 0.0, 2.0 * strength, 1.0};
}

Mat2 DeltaFactorization::reconstruct() const {
    Mat2 prod = Mat2::identity();
    for (const PrimitiveFactor& f : factors) prod = f.matrix() * prod;
    return prod;
}

DeltaFactorization decompose_general(const ConnectionMatrix& t) {
    const double alpha = t.alpha();
    const double beta = t.beta();
    const double gamma = t.gamma();
    const double delta = t.delta_p();
    const double zero_tol = 1e-10 * std::max({1.0, std::abs(alpha), std::abs(gamma)});
    using K = PrimitiveFactor::Kind;

    DeltaFactorization out;
    if (std::abs(delta) > zero_tol) {
        out.factors = {{K::DeltaStep, (gamma + 1.0) / (2.0 * delta)},
                       {K::EpsilonStep, -delta / 2.0},
                       {K::DeltaStep, (alpha + 1.0) / (2.0 * delta)}};
        return out;
    }
    if (std::abs(beta) > zero_tol) {
        out.factors = {{K::EpsilonStep, (alpha + 1.0) / (2.0 * beta)},
                       {K::DeltaStep, -beta / 2.0},
                       {K::EpsilonStep, (gamma + 1.0) / (2.0 * beta)}};
        return out;
    }
    if (t.is_identity(zero_tol)) return out;

    // Diagonal case: alpha*gamma = 1 with beta = delta = 0. With
    // rho = sqrt(|alpha|) the matrix splits into two antidiagonal factors,
    // each of which factors into three steps; the sign branch follows
    // sign(alpha). Listed here first-encountered first (reverse matrix
    // order).
    const double rho = std::sqrt(std::abs(alpha));
    const double sgn = alpha < 0.0 ? 1.0 : -1.0;
    out.factors = {{K::DeltaStep, -sgn / (2.0 * rho)}, {K::EpsilonStep, sgn * rho / 2.0},
                   {K::DeltaStep, -sgn / (2.0 * rho)}, {K::DeltaStep, rho / 2.0},
                   {K::EpsilonStep, -1.0 / (2.0 * rho)}, {K::DeltaStep, rho / 2.0}};
    return out;
}

}  // namespace pointint
