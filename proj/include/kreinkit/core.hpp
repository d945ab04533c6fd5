#pragma once

// Finite-dimensional indefinite-metric spaces.
//
// Coordinates are ordered (H-, H+): the first n_minus coordinates span the
// negative part, the last n_plus the positive part, and J = diag(-I, +I).
// The form is [x, y] = (Jx, y) = y* J x, linear in x and conjugate-linear in y.

#include <complex>
#include <string>

#include "kreinkit/linalg.hpp"

namespace kreinkit {

struct Tolerances {
    double rank = 1e-9;       // relative threshold for inertia / rank decisions
    double predicate = 1e-9;  // classify_operator and friends
    double graph_cond = 1e12; // graph_from_subspace guard

    Tolerances scaled(double factor) const {
        return {rank * factor, predicate * factor, graph_cond};
    }
};

class IndefiniteSpace {
public:
    IndefiniteSpace() = default;
    IndefiniteSpace(int n_minus, int n_plus) : n_minus_(n_minus), n_plus_(n_plus) {
        if (n_minus < 0 || n_plus < 0) throw DomainError("space dimensions must be nonnegative");
        if (n_minus + n_plus < 1) throw DomainError("space must have positive total dimension");
    }

    int n_minus() const { return n_minus_; }
    int n_plus() const { return n_plus_; }
    int dim() const { return n_minus_ + n_plus_; }

    /// Diagonal of J.
    template <typename T = double>
    RVector<T> signs() const {
        RVector<T> s(dim());
        s.head(n_minus_).setConstant(T(-1));
        s.tail(n_plus_).setConstant(T(1));
        return s;
    }

    template <typename T = double>
    CMatrix<T> J() const {
        return signs<T>().template cast<std::complex<T>>().asDiagonal();
    }

    /// Multiplies by J from the left without forming it.
    template <typename Derived>
    typename Derived::PlainObject apply_J(const Eigen::MatrixBase<Derived>& x) const {
        typename Derived::PlainObject out = x;
        out.topRows(n_minus_) *= typename Derived::Scalar(-1);
        return out;
    }

    friend bool operator==(const IndefiniteSpace&, const IndefiniteSpace&) = default;

private:
    int n_minus_ = 0;
    int n_plus_ = 1;
};

inline IndefiniteSpace build_space(int n_minus, int n_plus) { return IndefiniteSpace(n_minus, n_plus); }

/// A square operator over an indefinite space with (H-, H+) block views.
template <typename T = double>
class BlockOperator {
public:
    BlockOperator() = default;
    BlockOperator(IndefiniteSpace space, CMatrix<T> m) : space_(space), m_(std::move(m)) {
        if (m_.rows() != space_.dim() || m_.cols() != space_.dim())
            throw DomainError("operator shape does not match space dimension");
    }

    const IndefiniteSpace& space() const { return space_; }
    const CMatrix<T>& matrix() const { return m_; }

    auto a11() const { return m_.topLeftCorner(space_.n_minus(), space_.n_minus()); }
    auto a12() const { return m_.topRightCorner(space_.n_minus(), space_.n_plus()); }
    auto a21() const { return m_.bottomLeftCorner(space_.n_plus(), space_.n_minus()); }
    auto a22() const { return m_.bottomRightCorner(space_.n_plus(), space_.n_plus()); }

    static BlockOperator from_blocks(IndefiniteSpace space, const CMatrix<T>& a11, const CMatrix<T>& a12,
                                     const CMatrix<T>& a21, const CMatrix<T>& a22) {
        const int k = space.n_minus();
        const int m = space.n_plus();
        if (a11.rows() != k || a11.cols() != k || a12.rows() != k || a12.cols() != m || a21.rows() != m ||
            a21.cols() != k || a22.rows() != m || a22.cols() != m)
            throw DomainError("block shapes do not match space signature");
        CMatrix<T> full(k + m, k + m);
        full << a11, a12, a21, a22;
        return BlockOperator(space, std::move(full));
    }

    T norm() const { return opnorm(m_); }

private:
    IndefiniteSpace space_;
    CMatrix<T> m_;
};

/// An n_plus x n_minus matrix W: H- -> H+, the angular operator of a graph subspace.
template <typename T = double>
class BallPoint {
public:
    BallPoint() = default;
    BallPoint(IndefiniteSpace space, CMatrix<T> w) : space_(space), w_(std::move(w)) {
        if (w_.rows() != space_.n_plus() || w_.cols() != space_.n_minus())
            throw DomainError("ball point must be n_plus x n_minus");
    }

    static BallPoint zero(IndefiniteSpace space) {
        return BallPoint(space, CMatrix<T>::Zero(space.n_plus(), space.n_minus()));
    }

    /// Closed-ball point: ||W|| <= 1 + tol.
    static BallPoint closed(IndefiniteSpace space, CMatrix<T> w, T tol = T(1e-9)) {
        BallPoint p(space, std::move(w));
        if (p.norm() > T(1) + tol) throw DomainError("point lies outside the closed operator ball");
        return p;
    }

    /// Strict-ball point: ||W|| < 1 - margin.
    static BallPoint strict(IndefiniteSpace space, CMatrix<T> w, T margin = T(1e-8)) {
        BallPoint p(space, std::move(w));
        if (!(p.norm() < T(1) - margin)) throw DomainError("point is not in the open operator ball");
        return p;
    }

    const IndefiniteSpace& space() const { return space_; }
    const CMatrix<T>& matrix() const { return w_; }
    T norm() const { return opnorm(w_); }

    BallPoint operator-() const { return BallPoint(space_, -w_); }

private:
    IndefiniteSpace space_;
    CMatrix<T> w_;
};

/// A subspace given by a full-column-rank basis.
template <typename T = double>
class Subspace {
public:
    Subspace() = default;
    Subspace(IndefiniteSpace space, CMatrix<T> basis, T rank_tol = T(1e-9)) : space_(space), z_(std::move(basis)) {
        if (z_.rows() != space_.dim()) throw DomainError("basis rows must equal space dimension");
        if (z_.cols() > 0) {
            const T smax = opnorm(z_);
            if (!(min_singular_value(z_) > rank_tol * std::max(smax, T(1))))
                throw DomainError("subspace basis is rank deficient");
        }
    }

    const IndefiniteSpace& space() const { return space_; }
    const CMatrix<T>& basis() const { return z_; }
    Eigen::Index dim() const { return z_.cols(); }

    /// Hermitian Gram matrix Z* J Z of the form restricted to the subspace.
    CMatrix<T> gram() const { return z_.adjoint() * space_.apply_J(z_); }

    /// ||(I - P) X|| for the orthogonal projector P onto the subspace; measures X ⊆ span.
    T projection_residual(const CMatrix<T>& x) const {
        const CMatrix<T> q = orthonormalize(z_);
        return opnorm((x - q * (q.adjoint() * x)).eval());
    }

    /// Relative invariance residual ||(I-P) A Q|| / max(1, ||A||) over an orthonormal basis Q.
    T invariance_defect(const CMatrix<T>& a) const {
        if (z_.cols() == 0) return T(0);
        const CMatrix<T> q = orthonormalize(z_);
        const CMatrix<T> aq = a * q;
        return opnorm((aq - q * (q.adjoint() * aq)).eval());
    }

private:
    IndefiniteSpace space_;
    CMatrix<T> z_;
};

/// [x, y] = y* J x.
template <typename T>
std::complex<T> indefinite_product(const IndefiniteSpace& space, const CVector<T>& x, const CVector<T>& y) {
    if (x.size() != space.dim() || y.size() != space.dim()) throw DomainError("vector length does not match space");
    return y.dot(space.apply_J(x));
}

/// A^# = J A* J.
template <typename T>
BlockOperator<T> j_adjoint(const BlockOperator<T>& a) {
    const auto& s = a.space();
    CMatrix<T> adj = s.apply_J(CMatrix<T>(a.matrix().adjoint()));
    adj.leftCols(s.n_minus()) *= std::complex<T>(-1);
    return BlockOperator<T>(s, std::move(adj));
}

/// The Hermitian matrix (JA - A*J)/(2i), i.e. Im[Ax, x] as a quadratic form.
template <typename T>
CMatrix<T> dissipativity_form(const BlockOperator<T>& a) {
    const CMatrix<T> ja = a.space().apply_J(a.matrix());
    const std::complex<T> two_i(0, 2);
    return hermitian_part(CMatrix<T>((ja - ja.adjoint()) / two_i));
}

/// lambda_min of the dissipativity form; nonnegative iff A is J-dissipative.
template <typename T>
T dissipativity_margin(const BlockOperator<T>& a) {
    return lambda_min(dissipativity_form(a));
}

struct OperatorClass {
    bool j_selfadjoint = false;
    bool j_dissipative = false;
    bool strongly_j_dissipative = false;
    bool j_unitary = false;
    bool j_expanding = false;
    double dissipativity_margin = 0;
    double unitarity_defect = 0;
};

template <typename T>
OperatorClass classify_operator(const BlockOperator<T>& a, T tol = T(1e-9)) {
    OperatorClass c;
    const auto& s = a.space();
    const CMatrix<T>& m = a.matrix();
    c.j_selfadjoint = opnorm((m - j_adjoint(a).matrix()).eval()) <= tol;
    const T margin = dissipativity_margin(a);
    c.dissipativity_margin = static_cast<double>(margin);
    c.j_dissipative = margin >= -tol;
    c.strongly_j_dissipative = margin > tol;
    const CMatrix<T> jm = s.apply_J(m);
    const CMatrix<T> expansion = m.adjoint() * jm - s.template J<T>();
    const T defect = opnorm(expansion);
    c.unitarity_defect = static_cast<double>(defect);
    c.j_unitary = defect <= tol;
    c.j_expanding = lambda_min(hermitian_part(expansion)) >= -tol;
    return c;
}

/// Basis [I; W] of the graph subspace L_W.
template <typename T>
Subspace<T> graph_of(const BallPoint<T>& w) {
    const auto& s = w.space();
    CMatrix<T> z(s.dim(), s.n_minus());
    z.topRows(s.n_minus()).setIdentity();
    z.bottomRows(s.n_plus()) = w.matrix();
    return Subspace<T>(s, std::move(z));
}

/// Angular operator W = Z+ Z-^{-1} of a subspace that is a graph over H-.
template <typename T>
BallPoint<T> graph_from_subspace(const Subspace<T>& z, T max_cond = T(1e12)) {
    const auto& s = z.space();
    if (z.dim() != s.n_minus()) throw DomainError("subspace dimension must equal n_minus");
    if (s.n_minus() == 0) return BallPoint<T>::zero(s);
    const CMatrix<T> zm = z.basis().topRows(s.n_minus());
    const CMatrix<T> zp = z.basis().bottomRows(s.n_plus());
    if (!(condition_number(zm) <= max_cond)) throw DomainError("subspace is not a graph over H-");
    // W Zm = Zp  <=>  Zm^T W^T = Zp^T
    CMatrix<T> w = zm.transpose().fullPivLu().solve(zp.transpose()).transpose();
    return BallPoint<T>(s, std::move(w));
}

template <typename T>
Inertia subspace_signature(const Subspace<T>& z, T tol = T(1e-9)) {
    if (z.dim() == 0) return {};
    const T scale = std::max(opnorm(z.basis()), T(1));
    return inertia(z.gram(), tol * scale * scale);
}

/// ||W A11 + W A12 W - A21 - A22 W||: zero iff L_W is A-invariant.
template <typename T>
T invariance_residual(const BlockOperator<T>& a, const BallPoint<T>& w) {
    if (!(a.space() == w.space())) throw DomainError("operator and ball point live on different spaces");
    const CMatrix<T>& x = w.matrix();
    const CMatrix<T> r = x * a.a11() + x * (a.a12() * x) - a.a21() - a.a22() * x;
    return opnorm(r);
}

}  // namespace kreinkit
