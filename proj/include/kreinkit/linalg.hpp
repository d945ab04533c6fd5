#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace kreinkit {

template <typename T>
using CMatrix = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using CVector = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, 1>;
template <typename T>
using RVector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using MatrixXcd = CMatrix<double>;
using VectorXcd = CVector<double>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an operation receives input outside its domain (shape, signature, norm).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Raised when a numerical procedure cannot produce a trustworthy result.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Sign and null counts of a Hermitian matrix.
struct Inertia {
    int n_pos = 0;
    int n_neg = 0;
    int n_null = 0;

    bool negative() const { return n_pos == 0 && n_null == 0; }
    bool positive() const { return n_neg == 0 && n_null == 0; }
    bool nonpositive() const { return n_pos == 0; }
    bool nonnegative() const { return n_neg == 0; }
    bool neutral() const { return n_pos == 0 && n_neg == 0; }

    friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// Spectral norm (largest singular value). Zero for empty matrices.
template <typename Derived>
typename Derived::RealScalar opnorm(const Eigen::MatrixBase<Derived>& m) {
    using Real = typename Derived::RealScalar;
    if (m.rows() == 0 || m.cols() == 0) return Real(0);
    using Plain = typename Derived::PlainObject;
    if (std::min(m.rows(), m.cols()) <= 16) {
        Eigen::JacobiSVD<Plain> svd(m.eval());
        return svd.singularValues()(0);
    }
    Eigen::BDCSVD<Plain> svd(m.eval());
    return svd.singularValues()(0);
}

/// Smallest singular value of a (tall or square) matrix; zero for empty input.
template <typename Derived>
typename Derived::RealScalar min_singular_value(const Eigen::MatrixBase<Derived>& m) {
    using Real = typename Derived::RealScalar;
    if (m.rows() == 0 || m.cols() == 0) return Real(0);
    using Plain = typename Derived::PlainObject;
    Eigen::BDCSVD<Plain> svd(m.eval());
    const auto& s = svd.singularValues();
    return s(s.size() - 1);
}

/// 2-norm condition number; infinity when singular.
template <typename Derived>
typename Derived::RealScalar condition_number(const Eigen::MatrixBase<Derived>& m) {
    using Real = typename Derived::RealScalar;
    if (m.rows() == 0 || m.cols() == 0) return Real(1);
    using Plain = typename Derived::PlainObject;
    Eigen::BDCSVD<Plain> svd(m.eval());
    const auto& s = svd.singularValues();
    const Real smin = s(s.size() - 1);
    if (smin == Real(0)) return std::numeric_limits<Real>::infinity();
    return s(0) / smin;
}

template <typename T>
CMatrix<T> hermitian_part(const CMatrix<T>& m) {
    return (m + m.adjoint()) * T(0.5);
}

/// Applies f to the eigenvalues of a Hermitian matrix: V f(D) V*.
template <typename T>
CMatrix<T> hermitian_function(const CMatrix<T>& h, const std::function<T(T)>& f) {
    if (h.rows() == 0) return h;
    Eigen::SelfAdjointEigenSolver<CMatrix<T>> es(hermitian_part(h));
    if (es.info() != Eigen::Success) throw NumericalError("hermitian eigensolver failed");
    RVector<T> mapped = es.eigenvalues().unaryExpr([&](T x) { return f(x); });
    return es.eigenvectors() * mapped.template cast<std::complex<T>>().asDiagonal() *
           es.eigenvectors().adjoint();
}

/// Ascending eigenvalues of the Hermitian part of h.
template <typename T>
RVector<T> hermitian_eigenvalues(const CMatrix<T>& h) {
    if (h.rows() == 0) return RVector<T>();
    Eigen::SelfAdjointEigenSolver<CMatrix<T>> es(hermitian_part(h), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("hermitian eigensolver failed");
    return es.eigenvalues();
}

template <typename T>
T lambda_min(const CMatrix<T>& h) {
    if (h.rows() == 0) return std::numeric_limits<T>::infinity();
    return hermitian_eigenvalues(h)(0);
}

/// Inertia of a Hermitian matrix; eigenvalues with |λ| <= threshold count as null.
template <typename T>
Inertia inertia(const CMatrix<T>& h, T threshold) {
    Inertia out;
    if (h.rows() == 0) return out;
    const RVector<T> ev = hermitian_eigenvalues(h);
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) > threshold)
            ++out.n_pos;
        else if (ev(i) < -threshold)
            ++out.n_neg;
        else
            ++out.n_null;
    }
    return out;
}

/// Orthonormal basis of the column span (thin QR; input assumed full column rank).
template <typename T>
CMatrix<T> orthonormalize(const CMatrix<T>& z) {
    if (z.cols() == 0) return CMatrix<T>(z.rows(), 0);
    Eigen::HouseholderQR<CMatrix<T>> qr(z);
    return qr.householderQ() * CMatrix<T>::Identity(z.rows(), z.cols());
}

/// Largest sine of the principal angles between two subspaces of equal dimension.
template <typename T>
T subspace_gap(const CMatrix<T>& a, const CMatrix<T>& b) {
    if (a.cols() != b.cols()) return T(1);
    if (a.cols() == 0) return T(0);
    const CMatrix<T> qa = orthonormalize(a);
    const CMatrix<T> qb = orthonormalize(b);
    return opnorm((qb - qa * (qa.adjoint() * qb)).eval());
}

/// Ordered complex Schur form A = Q T Q*, T upper triangular.
template <typename T>
struct SchurForm {
    CMatrix<T> q;
    CMatrix<T> t;

    CVector<T> eigenvalues() const { return t.diagonal(); }
};

template <typename T>
SchurForm<T> complex_schur(const CMatrix<T>& a) {
    SchurForm<T> out;
    if (a.rows() == 0) {
        out.q = a;
        out.t = a;
        return out;
    }
    Eigen::ComplexSchur<CMatrix<T>> cs(a);
    if (cs.info() != Eigen::Success) throw NumericalError("complex Schur decomposition did not converge");
    out.q = cs.matrixU();
    out.t = cs.matrixT();
    return out;
}

/// Swaps the adjacent diagonal entries k and k+1 of the triangular factor by a Givens rotation.
template <typename T>
void swap_schur_pair(SchurForm<T>& s, Eigen::Index k) {
    using C = std::complex<T>;
    const Eigen::Index n = s.t.rows();
    const C a = s.t(k, k);
    const C b = s.t(k + 1, k + 1);
    const C c = s.t(k, k + 1);
    if (a == b) return;
    // first column of the rotation is the eigenvector of b in the 2x2 block
    C v1 = c;
    C v2 = b - a;
    const T nrm = std::hypot(std::abs(v1), std::abs(v2));
    v1 /= nrm;
    v2 /= nrm;
    Eigen::Matrix<C, 2, 2> g;
    g << v1, -std::conj(v2), v2, std::conj(v1);

    auto rows = s.t.block(k, k, 2, n - k);
    rows = (g.adjoint() * rows).eval();
    auto cols = s.t.block(0, k, k + 2, 2);
    cols = (cols * g).eval();
    auto qcols = s.q.middleCols(k, 2);
    qcols = (qcols * g).eval();

    s.t(k + 1, k) = C(0);
    s.t(k, k) = b;
    s.t(k + 1, k + 1) = a;
}

/// Reorders the Schur form so eigenvalues satisfying `select` lead the diagonal.
/// Returns the number of selected eigenvalues; the leading columns of q span
/// the corresponding invariant subspace.
template <typename T, typename Pred>
Eigen::Index reorder_schur(SchurForm<T>& s, Pred select) {
    const Eigen::Index n = s.t.rows();
    Eigen::Index placed = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!select(s.t(i, i))) continue;
        for (Eigen::Index k = i; k > placed; --k) swap_schur_pair(s, k - 1);
        ++placed;
    }
    return placed;
}

}  // namespace kreinkit
