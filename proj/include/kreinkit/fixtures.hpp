#pragma once

// Seeded generators for reproducible test corpora.

#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "kreinkit/fixpoint.hpp"
#include "kreinkit/mnps.hpp"
#include "kreinkit/qpd.hpp"

namespace kreinkit::fixtures {

using Rng = std::mt19937_64;

template <typename T = double>
CMatrix<T> random_complex(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<T> n01(T(0), T(1));
    CMatrix<T> m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = std::complex<T>(n01(rng), n01(rng));
    return m;
}

template <typename T = double>
CMatrix<T> random_hermitian(Rng& rng, Eigen::Index n) {
    return hermitian_part(random_complex<T>(rng, n, n));
}

template <typename T = double>
CMatrix<T> random_unitary(Rng& rng, Eigen::Index n) {
    if (n == 0) return CMatrix<T>(0, 0);
    Eigen::HouseholderQR<CMatrix<T>> qr(random_complex<T>(rng, n, n));
    CMatrix<T> q = qr.householderQ();
    const CMatrix<T> r = qr.matrixQR().template triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::complex<T> d = r(i, i);
        if (std::abs(d) > T(0)) q.col(i) *= d / std::abs(d);
    }
    return q;
}

template <typename T = double>
CVector<T> random_vector(Rng& rng, Eigen::Index n) {
    return random_complex<T>(rng, n, 1);
}

/// Ball point with prescribed operator norm.
template <typename T = double>
BallPoint<T> random_ball_point(Rng& rng, const IndefiniteSpace& s, T norm) {
    CMatrix<T> w = random_complex<T>(rng, s.n_plus(), s.n_minus());
    const T nw = opnorm(w);
    if (nw > T(0)) w *= norm / nw;
    return BallPoint<T>(s, std::move(w));
}

template <typename T = double>
BallPoint<T> random_strict_point(Rng& rng, const IndefiniteSpace& s, T max_norm = T(0.95)) {
    std::uniform_real_distribution<T> u(T(0), max_norm);
    return random_ball_point<T>(rng, s, u(rng));
}

enum class DissipationKind { full_rank, low_rank, zero };

/// A = J (H + i P) with H Hermitian and P >= 0, so the dissipativity form of A is exactly P.
template <typename T = double>
BlockOperator<T> random_dissipative(Rng& rng, const IndefiniteSpace& s, DissipationKind kind, T p_scale = T(1)) {
    const Eigen::Index n = s.dim();
    const CMatrix<T> h = random_hermitian<T>(rng, n);
    CMatrix<T> p = CMatrix<T>::Zero(n, n);
    if (kind != DissipationKind::zero) {
        std::uniform_int_distribution<Eigen::Index> rank_pick(1, std::max<Eigen::Index>(1, n / 2));
        const Eigen::Index r = kind == DissipationKind::full_rank ? n : rank_pick(rng);
        const CMatrix<T> g = random_complex<T>(rng, n, r);
        p = g * g.adjoint() * (p_scale / T(std::max<Eigen::Index>(r, 1)));
        if (kind == DissipationKind::full_rank) p += CMatrix<T>::Identity(n, n) * (T(0.1) * p_scale);
    }
    const CMatrix<T> jh = s.apply_J(CMatrix<T>(h + std::complex<T>(0, 1) * p));
    return BlockOperator<T>(s, jh);
}

/// Strongly J-dissipative: A = J(H + iP) with P >= margin * I.
template <typename T = double>
BlockOperator<T> random_strongly_dissipative(Rng& rng, const IndefiniteSpace& s, T margin = T(0.1)) {
    const Eigen::Index n = s.dim();
    const CMatrix<T> h = random_hermitian<T>(rng, n);
    const CMatrix<T> g = random_complex<T>(rng, n, n);
    const CMatrix<T> p = g * g.adjoint() / T(n) + CMatrix<T>::Identity(n, n) * margin;
    return BlockOperator<T>(s, s.apply_J(CMatrix<T>(h + std::complex<T>(0, 1) * p)));
}

template <typename T>
BlockOperator<T> random_j_unitary(Rng& rng, const IndefiniteSpace& s, T norm);

/// J-selfadjoint nilpotent [[1, 1], [-1, -1]] on space(1,1): its only invariant line is the neutral (1, -1).
template <typename T = double>
BlockOperator<T> jordan_neutral_fixture() {
    CMatrix<T> a(2, 2);
    a << T(1), T(1), T(-1), T(-1);
    return BlockOperator<T>(IndefiniteSpace(1, 1), a);
}

/// J-selfadjoint operator with a neutral Jordan chain embedded in a larger space, plus definite spectrum.
template <typename T = double>
BlockOperator<T> jordan_neutral_fixture(Rng& rng, const IndefiniteSpace& s) {
    if (s.n_minus() < 1 || s.n_plus() < 1) throw DomainError("need both signs for a neutral Jordan block");
    const Eigen::Index n = s.dim();
    // Hermitian H, A = J H. The neutral block couples coordinate 0 (negative) and n_minus (positive).
    CMatrix<T> h = CMatrix<T>::Zero(n, n);
    std::uniform_real_distribution<T> spread(T(1), T(3));
    for (Eigen::Index i = 0; i < n; ++i) h(i, i) = (i < s.n_minus() ? T(-1) : T(1)) * (T(2) + spread(rng));
    const Eigen::Index a = 0;
    const Eigen::Index b = s.n_minus();
    // J H restricted to {a, b} equals [[1, 1], [-1, -1]] when H = [[-1, -1], [-1, -1]]
    h(a, a) = T(-1);
    h(b, b) = T(-1);
    h(a, b) = T(-1);
    h(b, a) = T(-1);
    // a J-unitary similarity keeps A J-selfadjoint and the Jordan chain neutral
    const BlockOperator<T> v = random_j_unitary<T>(rng, s, T(0.5));
    const CMatrix<T> a_diag = s.apply_J(h);
    return BlockOperator<T>(s, v.matrix() * a_diag * j_adjoint(v).matrix());
}

/// A = S diag(D) S^{-1} with Im D < 0 on the first d_minus entries; returns A and the two known spans.
template <typename T = double>
struct SplitFixture {
    BlockOperator<T> a;
    CMatrix<T> lower_span;
    CMatrix<T> upper_span;
};

template <typename T = double>
SplitFixture<T> similarity_split_fixture(Rng& rng, const IndefiniteSpace& s, Eigen::Index d_minus) {
    const Eigen::Index n = s.dim();
    std::uniform_real_distribution<T> re(T(-2), T(2));
    std::uniform_real_distribution<T> im(T(0.5), T(2));
    CVector<T> d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = std::complex<T>(re(rng), i < d_minus ? -im(rng) : im(rng));
    const CMatrix<T> sim = random_complex<T>(rng, n, n) + CMatrix<T>::Identity(n, n) * T(3);
    const CMatrix<T> a = sim * d.asDiagonal() * sim.inverse();
    return {BlockOperator<T>(s, a), sim.leftCols(d_minus), sim.rightCols(n - d_minus)};
}

/// Strongly dissipative fixture whose couplings to positive coordinate j decay like q^j.
template <typename T = double>
BlockOperator<T> ladder_decay_fixture(Rng& rng, const IndefiniteSpace& s, T q = T(0.9)) {
    const Eigen::Index n = s.dim();
    const Eigen::Index k = s.n_minus();
    CMatrix<T> h = random_hermitian<T>(rng, n);
    CMatrix<T> p = random_hermitian<T>(rng, n) * T(0.02);
    auto weight = [&](Eigen::Index i) { return i < k ? T(1) : std::pow(q, T(i - k)); };
    std::uniform_real_distribution<T> diag(T(-3), T(3));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const T w = weight(i) * weight(j);
            h(i, j) *= w;
            p(i, j) *= w;
        }
    for (Eigen::Index i = 0; i < n; ++i) {
        h(i, i) = diag(rng);
        p(i, i) = T(1);
    }
    // p is diagonally dominant, hence positive definite
    return BlockOperator<T>(s, s.apply_J(CMatrix<T>(h + std::complex<T>(0, 1) * p)));
}

/// A random J-unitary operator M_A diag(U-, U+) with ||A|| = norm.
template <typename T>
BlockOperator<T> random_j_unitary(Rng& rng, const IndefiniteSpace& s, T norm) {
    const BallPoint<T> a = random_ball_point<T>(rng, s, norm);
    const CMatrix<T> d = BlockOperator<T>::from_blocks(s, random_unitary<T>(rng, s.n_minus()),
                                                       CMatrix<T>::Zero(s.n_minus(), s.n_plus()),
                                                       CMatrix<T>::Zero(s.n_plus(), s.n_minus()),
                                                       random_unitary<T>(rng, s.n_plus()))
                             .matrix();
    return BlockOperator<T>(s, mobius_matrix(a).matrix() * d);
}

// Small named groups with a faithful unitary representation and a nontrivial
// one-dimensional character that is not a constituent of that representation.

template <typename T = double>
struct NamedGroup {
    std::string name;
    MatrixGroup<T> mg;
    std::vector<std::complex<T>> character;
    int defining_dim = 1;
};

template <typename T = double>
NamedGroup<T> cyclic_group(int n) {
    if (n < 2) throw DomainError("cyclic fixture needs order >= 2");
    const T ang = T(2) * std::numbers::pi_v<T> / T(n);
    CMatrix<T> g(1, 1);
    g(0, 0) = std::polar(T(1), ang);
    NamedGroup<T> out{"Z" + std::to_string(n), generate_group<T>({g}, "r"), {}, 1};
    for (const auto& e : out.mg.elements) {
        if (n == 2) {
            out.character.push_back(e(0, 0));  // sign character; the defining rep is replaced by trivial below
        } else {
            // chi(r^j) = r^{2j}, distinct from r^j and 1 whenever n > 2
            out.character.push_back(e(0, 0) * e(0, 0));
        }
    }
    return out;
}

template <typename T = double>
NamedGroup<T> dihedral_group(int n) {
    const T ang = T(2) * std::numbers::pi_v<T> / T(n);
    CMatrix<T> r(2, 2), f(2, 2);
    r << std::cos(ang), -std::sin(ang), std::sin(ang), std::cos(ang);
    f << T(1), T(0), T(0), T(-1);
    NamedGroup<T> out{n == 3 ? "S3" : "D" + std::to_string(n), generate_group<T>({r, f}, "d"), {}, 2};
    for (const auto& e : out.mg.elements) out.character.push_back(e.determinant());
    return out;
}

template <typename T = double>
NamedGroup<T> quaternion_group() {
    const std::complex<T> i(0, 1);
    CMatrix<T> qi(2, 2), qj(2, 2);
    qi << i, T(0), T(0), -i;
    qj << T(0), T(1), T(-1), T(0);
    NamedGroup<T> out{"Q8", generate_group<T>({qi, qj}, "q"), {}, 2};
    // the subgroup {±1, ±i} is exactly the diagonal matrices
    for (const auto& e : out.mg.elements)
        out.character.push_back(std::abs(e(0, 1)) < T(1e-12) ? std::complex<T>(1) : std::complex<T>(-1));
    return out;
}

/// Symmetric group S_n via permutation matrices.
template <typename T = double>
NamedGroup<T> symmetric_group(int n) {
    CMatrix<T> cyc = CMatrix<T>::Zero(n, n), tr = CMatrix<T>::Identity(n, n);
    for (int i = 0; i < n; ++i) cyc((i + 1) % n, i) = T(1);
    tr(0, 0) = tr(1, 1) = T(0);
    tr(0, 1) = tr(1, 0) = T(1);
    NamedGroup<T> out{"S" + std::to_string(n), generate_group<T>({cyc, tr}, "p"), {}, n};
    for (const auto& e : out.mg.elements) out.character.push_back(e.determinant());
    return out;
}

template <typename T = double>
NamedGroup<T> named_group(const std::string& name) {
    if (name == "Q8") return quaternion_group<T>();
    if (name == "S3") return dihedral_group<T>(3);
    if (name == "S4") return symmetric_group<T>(4);
    if (name.size() > 1 && name[0] == 'Z') return cyclic_group<T>(std::stoi(name.substr(1)));
    if (name.size() > 1 && name[0] == 'D') return dihedral_group<T>(std::stoi(name.substr(1)));
    throw DomainError("unknown group fixture: " + name);
}

template <typename T = double>
struct ConjugatedRepFixture {
    GroupRep<T> rep;
    BallPoint<T> a;  // the known common fixed point
};

/// pi = M_A diag(chi I_k, u+) M_{-A} with u+ = copies of the defining rep plus trivial summands
/// (for Z2 only trivial summands), all conjugated by random unitaries. The character on H- is not
/// a constituent of u+, so A is the unique common fixed point.
template <typename T = double>
ConjugatedRepFixture<T> conjugated_rep_fixture(Rng& rng, const NamedGroup<T>& ng, int k, int defining_copies,
                                               int trivial_copies, T a_norm) {
    const bool use_defining = ng.name != "Z2";
    const int dd = use_defining ? ng.defining_dim : 0;
    const int n_plus = defining_copies * dd + trivial_copies;
    if (n_plus < 1) throw DomainError("conjugated fixture needs a positive part");
    const IndefiniteSpace s(k, n_plus);
    const int m = ng.mg.group.order();
    const CMatrix<T> w_minus = random_unitary<T>(rng, k);
    const CMatrix<T> w_plus = random_unitary<T>(rng, n_plus);
    std::vector<CMatrix<T>> u_minus, u_plus;
    for (int g = 0; g < m; ++g) {
        u_minus.push_back(CMatrix<T>::Identity(k, k) * ng.character[g]);
        CMatrix<T> blk = CMatrix<T>::Zero(n_plus, n_plus);
        for (int c = 0; c < defining_copies && use_defining; ++c) blk.block(c * dd, c * dd, dd, dd) = ng.mg.elements[g];
        for (int t = 0; t < trivial_copies; ++t) blk(defining_copies * dd + t, defining_copies * dd + t) = T(1);
        u_plus.push_back(w_plus * blk * w_plus.adjoint());
        u_minus.back() = w_minus * u_minus.back() * w_minus.adjoint();
    }
    BallPoint<T> a = random_ball_point<T>(rng, s, a_norm);
    return {fixture_conjugated_rep(ng.mg.group, u_plus, u_minus, a), a};
}

/// Positive definite phi(g) = (lambda(g) x, x) for the left regular representation.
template <typename T = double>
CVector<T> regular_matrix_element(const FiniteGroup& g, const CVector<T>& x) {
    const int m = g.order();
    CVector<T> v(m);
    for (int a = 0; a < m; ++a) {
        std::complex<T> s(0);
        // (lambda(a) x)(h) = x(a^{-1} h)
        for (int h = 0; h < m; ++h) s += x(g.mul(g.inverse(a), h)) * std::conj(x(h));
        v(a) = s;
    }
    return v;
}

/// Positive definite phi(g) = sum_i (rho(g) y_i, y_i) for a unitary rep rho; Gram rank <= dim rho.
template <typename T = double>
CVector<T> rep_matrix_element(const std::vector<CMatrix<T>>& rho, const std::vector<CVector<T>>& ys) {
    CVector<T> v = CVector<T>::Zero(static_cast<Eigen::Index>(rho.size()));
    for (std::size_t g = 0; g < rho.size(); ++g)
        for (const auto& y : ys) v(static_cast<Eigen::Index>(g)) += y.dot(rho[g] * y);
    return v;
}

/// Small unitary representations of a named group, each a per-element list of d x d matrices:
/// the trivial rep, the distinguished character, the defining rep and, for cyclic groups,
/// every character r^a -> w^{ja}.
template <typename T = double>
std::vector<std::vector<CMatrix<T>>> small_unitary_reps(const NamedGroup<T>& ng) {
    const auto& elems = ng.mg.elements;
    std::vector<std::vector<CMatrix<T>>> reps;
    auto scalar_rep = [&](auto&& value) {
        std::vector<CMatrix<T>> r;
        for (std::size_t g = 0; g < elems.size(); ++g) r.push_back(CMatrix<T>::Constant(1, 1, value(g)));
        return r;
    };
    reps.push_back(scalar_rep([](std::size_t) { return std::complex<T>(1); }));
    if (ng.name[0] == 'Z') {
        const int n = ng.mg.group.order();
        for (int j = 1; j < n; ++j)
            reps.push_back(scalar_rep([&](std::size_t g) { return std::pow(elems[g](0, 0), j); }));
    } else {
        reps.push_back(scalar_rep([&](std::size_t g) { return ng.character[g]; }));
        reps.push_back(elems);
    }
    return reps;
}

template <typename T = double>
struct QpdFixture {
    GroupFunction<T> phi;
    int subtracted_rank = 0;  // Gram rank of the finite-type part removed
};

/// phi = phi_pd - c * phi_fin with phi_pd a generic regular-representation matrix element and
/// phi_fin = sum of (rho(g) y, y) over small unitary reps of total dimension k. The scale c pushes
/// every nonzero Gram eigenvalue of c * phi_fin above ||Gram(phi_pd)||, so phi has exactly
/// rank(Gram(phi_fin)) negative squares.
template <typename T = double>
QpdFixture<T> qpd_fixture(Rng& rng, const NamedGroup<T>& ng, int k) {
    const FiniteGroup& g = ng.mg.group;
    const int m = g.order();
    const CVector<T> pd = regular_matrix_element<T>(g, random_vector<T>(rng, m));
    if (k == 0) return {GroupFunction<T>(g, pd), 0};

    const auto reps = small_unitary_reps(ng);
    std::vector<std::size_t> order(reps.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    CVector<T> fin = CVector<T>::Zero(m);
    int budget = k;
    for (std::size_t idx : order) {
        const auto& rho = reps[idx];
        const int d = static_cast<int>(rho.front().rows());
        if (d > budget) continue;
        fin += rep_matrix_element<T>(rho, {random_vector<T>(rng, d)});
        budget -= d;
        if (budget == 0) break;
    }
    if (budget == k) throw DomainError("no representation small enough for the requested rank");

    const GroupFunction<T> fin_fn(g, fin, T(1e-9));
    const RVector<T> fin_ev = hermitian_eigenvalues(full_gram(fin_fn));
    const T fin_thr = T(1e-9) * fin_ev.cwiseAbs().maxCoeff();
    T smallest = std::numeric_limits<T>::infinity();
    int rank = 0;
    for (Eigen::Index i = 0; i < fin_ev.size(); ++i)
        if (fin_ev(i) > fin_thr) {
            smallest = std::min(smallest, fin_ev(i));
            ++rank;
        }
    const T pd_norm = opnorm(full_gram(GroupFunction<T>(g, pd, T(1e-9))));
    std::uniform_real_distribution<T> extra(T(1.5), T(3));
    const T c = extra(rng) * pd_norm / smallest;
    CVector<T> phi = pd - c * fin;
    // exact Hermitian symmetry
    CVector<T> sym(m);
    for (int a = 0; a < m; ++a) sym(a) = (phi(a) + std::conj(phi(g.inverse(a)))) / T(2);
    return {GroupFunction<T>(g, sym), rank};
}

}  // namespace kreinkit::fixtures
