#pragma once

// Geometry of the open operator ball of contractions H- -> H+: Moebius maps,
// their J-unitary matrices, fractional-linear actions and the hyperbolic metric.

#include <cmath>

#include "kreinkit/core.hpp"

namespace kreinkit {

inline constexpr double kBoundaryMargin = 1e-8;
inline constexpr double kEigenFloor = 1e-14;
inline constexpr double kDenominatorCond = 1e12;

namespace detail {

template <typename T>
void require_strict(const BallPoint<T>& a, const char* what) {
    if (!(a.norm() < T(1) - T(kBoundaryMargin)))
        throw DomainError(std::string(what) + ": point must lie strictly inside the unit ball");
}

/// (I - H)^p for Hermitian 0 <= H < I, eigenvalues of I - H floored at kEigenFloor.
template <typename T>
CMatrix<T> defect_power(const CMatrix<T>& h, T p) {
    const Eigen::Index n = h.rows();
    const CMatrix<T> d = CMatrix<T>::Identity(n, n) - h;
    return hermitian_function<T>(d, [p](T x) { return std::pow(std::max(x, T(kEigenFloor)), p); });
}

}  // namespace detail

/// mu_A(X) = (I - AA*)^{-1/2} (A + X) (I + A*X)^{-1} (I - A*A)^{1/2}.
template <typename T>
BallPoint<T> mobius_apply(const BallPoint<T>& a, const BallPoint<T>& x) {
    if (!(a.space() == x.space())) throw DomainError("mobius_apply: points on different spaces");
    detail::require_strict(a, "mobius_apply");
    detail::require_strict(x, "mobius_apply");
    const auto& s = a.space();
    const CMatrix<T>& am = a.matrix();
    const CMatrix<T>& xm = x.matrix();
    const CMatrix<T> left = detail::defect_power<T>(am * am.adjoint(), T(-0.5));
    const CMatrix<T> right = detail::defect_power<T>(am.adjoint() * am, T(0.5));
    const CMatrix<T> denom = CMatrix<T>::Identity(s.n_minus(), s.n_minus()) + am.adjoint() * xm;
    // (A + X) denom^{-1} right = (A + X) * solve(denom, right)
    const CMatrix<T> tail = denom.partialPivLu().solve(right);
    return BallPoint<T>(s, left * (am + xm) * tail);
}

/// The J-unitary block matrix M_A with phi_{M_A} = mu_A.
template <typename T>
BlockOperator<T> mobius_matrix(const BallPoint<T>& a) {
    detail::require_strict(a, "mobius_matrix");
    const auto& s = a.space();
    const CMatrix<T>& am = a.matrix();
    const CMatrix<T> sm = detail::defect_power<T>(am.adjoint() * am, T(-0.5));  // on H-
    const CMatrix<T> tm = detail::defect_power<T>(am * am.adjoint(), T(-0.5));  // on H+
    return BlockOperator<T>::from_blocks(s, sm, am.adjoint() * tm, am * sm, tm);
}

/// phi_U(W) = (U21 + U22 W)(U11 + U12 W)^{-1}: the action of U on graph subspaces.
template <typename T>
BallPoint<T> fractional_linear(const BlockOperator<T>& u, const BallPoint<T>& w, T max_cond = T(kDenominatorCond)) {
    if (!(u.space() == w.space())) throw DomainError("fractional_linear: operator and point on different spaces");
    const auto& s = u.space();
    if (s.n_minus() == 0) return BallPoint<T>::zero(s);
    const CMatrix<T>& wm = w.matrix();
    const CMatrix<T> denom = u.a11() + u.a12() * wm;
    const CMatrix<T> numer = u.a21() + u.a22() * wm;
    if (!(condition_number(denom) <= max_cond)) throw DomainError("map undefined at W: singular denominator");
    CMatrix<T> out = denom.transpose().fullPivLu().solve(numer.transpose()).transpose();
    return BallPoint<T>(s, std::move(out));
}

/// rho(A, B) = atanh(||mu_{-A}(B)||).
template <typename T>
T hyperbolic_distance(const BallPoint<T>& a, const BallPoint<T>& b) {
    detail::require_strict(a, "hyperbolic_distance");
    detail::require_strict(b, "hyperbolic_distance");
    const T r = mobius_apply(-a, b).norm();
    return std::atanh(std::min(r, T(1) - std::numeric_limits<T>::epsilon()));
}

template <typename T>
struct MobiusNorm {
    T norm{};
    T upper_bound{};
    T lower_bound{};
};

/// ||M_A|| together with the bracket sqrt((1+r^2)/(1-r^2)) <= ||M_A|| <= sqrt((1+r)/(1-r)), r = ||A||.
template <typename T>
MobiusNorm<T> mobius_norm(const BallPoint<T>& a) {
    MobiusNorm<T> out;
    out.norm = mobius_matrix(a).norm();
    const T r = a.norm();
    out.upper_bound = std::sqrt((T(1) + r) / (T(1) - r));
    out.lower_bound = std::sqrt((T(1) + r * r) / (T(1) - r * r));
    return out;
}

/// Largest possible ||phi_U(0)|| for a J-unitary U with ||U|| = c.
template <typename T>
T radius_from_norm(T c) {
    if (!(c >= T(1))) throw DomainError("radius_from_norm: norm of a J-unitary operator is at least 1");
    return std::sqrt((c * c - T(1)) / (c * c + T(1)));
}

}  // namespace kreinkit
