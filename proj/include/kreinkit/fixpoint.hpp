#pragma once

// Common fixed points of bounded groups of fractional-linear maps and the
// resulting unitarization of J-unitary representations.
//
// Averaging pi(g)* pi(g) over the group gives a positive definite B with
// pi(g)* B pi(g) = B. Each pi(g) then commutes with B^{-1} J, so the negative
// eigenspace of the definite pencil (J, B) is a pi-invariant negative subspace
// of dimension n_minus; its angular operator K is fixed by every phi_{pi(g)}.

#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "kreinkit/ball.hpp"
#include "kreinkit/group.hpp"

namespace kreinkit {

/// (1/m) sum_g pi(g)* pi(g), summed in element order.
template <typename T>
CMatrix<T> group_average_metric(const GroupRep<T>& rep) {
    const Eigen::Index n = rep.space().dim();
    CMatrix<T> b = CMatrix<T>::Zero(n, n);
    for (const auto& m : rep.matrices()) b.noalias() += m.adjoint() * m;
    b /= T(rep.group().order());
    return hermitian_part(b);
}

/// max_g ||pi(g)* B pi(g) - B||.
template <typename T>
T metric_invariance_defect(const std::vector<CMatrix<T>>& mats, const CMatrix<T>& b) {
    T d = 0;
    for (const auto& m : mats) d = std::max(d, opnorm((m.adjoint() * b * m - b).eval()));
    return d;
}

/// All distinct products of at most max_length generators (and their inverses), including I.
template <typename T>
std::vector<CMatrix<T>> enumerate_words(const std::vector<CMatrix<T>>& generators, int max_length,
                                        bool include_inverses = true, T dedup_tol = T(1e-9)) {
    if (generators.empty()) throw DomainError("need at least one generator");
    std::vector<CMatrix<T>> letters = generators;
    if (include_inverses)
        for (const auto& g : generators) letters.push_back(g.inverse());
    const Eigen::Index n = generators.front().rows();

    // key on rounded entries so lookup is logarithmic; near-boundary collisions are rare and harmless
    auto key = [&](const CMatrix<T>& m) {
        std::vector<long long> k;
        k.reserve(2 * m.size());
        for (Eigen::Index i = 0; i < m.size(); ++i) {
            k.push_back(std::llround(m.data()[i].real() / (dedup_tol * 1e3)));
            k.push_back(std::llround(m.data()[i].imag() / (dedup_tol * 1e3)));
        }
        return k;
    };
    std::set<std::vector<long long>> seen;
    std::vector<CMatrix<T>> words{CMatrix<T>::Identity(n, n)};
    seen.insert(key(words.front()));
    std::size_t begin = 0;
    for (int len = 1; len <= max_length; ++len) {
        const std::size_t end = words.size();
        for (std::size_t i = begin; i < end; ++i)
            for (const auto& l : letters) {
                CMatrix<T> w = words[i] * l;
                if (seen.insert(key(w)).second) words.push_back(std::move(w));
            }
        begin = end;
        if (begin == words.size()) break;
    }
    return words;
}

/// Average of w* w over a list of operators (approximate mode for infinite groups).
template <typename T>
CMatrix<T> word_average_metric(const std::vector<CMatrix<T>>& words) {
    if (words.empty()) throw DomainError("empty word list");
    const Eigen::Index n = words.front().rows();
    CMatrix<T> b = CMatrix<T>::Zero(n, n);
    for (const auto& w : words) b.noalias() += w.adjoint() * w;
    b /= T(words.size());
    return hermitian_part(b);
}

/// max_g ||phi_{pi(g)}(0)||.
template <typename T>
T orbit_radius(const GroupRep<T>& rep) {
    const BallPoint<T> origin = BallPoint<T>::zero(rep.space());
    T r = 0;
    for (int g = 0; g < rep.group().order(); ++g) r = std::max(r, fractional_linear(rep.op(g), origin).norm());
    return r;
}

template <typename T = double>
struct PencilSplit {
    Subspace<T> negative;       // eigenvectors with lambda < 0
    Subspace<T> positive;       // eigenvectors with lambda > 0
    RVector<T> eigenvalues;     // ascending
};

/// Solves J v = lambda B v for Hermitian positive definite B.
template <typename T>
PencilSplit<T> definite_pencil_split(const IndefiniteSpace& space, const CMatrix<T>& b) {
    const Eigen::Index n = space.dim();
    Eigen::LLT<CMatrix<T>> llt(b);
    if (llt.info() != Eigen::Success) throw NumericalError("averaged metric is not positive definite");
    const CMatrix<T> l = llt.matrixL();
    // C = L^{-1} J L^{-*}
    const CMatrix<T> linv = l.template triangularView<Eigen::Lower>().solve(CMatrix<T>::Identity(n, n));
    const CMatrix<T> c = hermitian_part(CMatrix<T>(linv * space.apply_J(CMatrix<T>(linv.adjoint()))));
    Eigen::SelfAdjointEigenSolver<CMatrix<T>> es(c);
    if (es.info() != Eigen::Success) throw NumericalError("pencil eigensolver failed");
    const RVector<T>& ev = es.eigenvalues();

    const T binv_norm = opnorm(CMatrix<T>(linv.adjoint() * linv));
    for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(ev(i)) <= T(1e-10) * binv_norm)
            throw NumericalError("pencil has an eigenvalue at zero: neutral invariant direction");
    Eigen::Index neg = 0;
    while (neg < n && ev(neg) < T(0)) ++neg;
    if (neg != space.n_minus()) throw NumericalError("pencil inertia does not match the signature");

    const CMatrix<T> v = linv.adjoint() * es.eigenvectors();
    PencilSplit<T> out;
    out.negative = Subspace<T>(space, v.leftCols(neg));
    out.positive = Subspace<T>(space, v.rightCols(n - neg));
    out.eigenvalues = ev;
    return out;
}

template <typename T = double>
struct FixedPointOptions {
    T map_tol = T(1e-8);         // max_g ||phi_g(K) - K||
    T radius_slack = T(1e-8);    // ||K|| <= radius_from_norm(||pi||) + slack
    T invariance_tol = T(1e-10); // exact-mode metric invariance, relative to ||B||
};

template <typename T = double>
struct FixedPointReport {
    BallPoint<T> k;
    T max_map_residual = 0;         // max_g ||phi_{pi(g)}(K) - K||
    T max_invariance_residual = 0;  // max_g invariance residual of the graph of K
    T orbit_radius = 0;             // max_g ||phi_{pi(g)}(0)||
    T radius_bound = 0;             // radius_from_norm(||pi||)
    T k_norm = 0;
    T rep_bound = 0;                // ||pi||
    T metric_defect = 0;            // max_g ||pi(g)* B pi(g) - B||
    bool exact = true;
    bool certified = false;
    std::string message;
};

namespace detail {

template <typename T>
FixedPointReport<T> fixed_point_from_metric(const IndefiniteSpace& space, const std::vector<CMatrix<T>>& mats,
                                            const CMatrix<T>& b, bool exact, const FixedPointOptions<T>& opts) {
    FixedPointReport<T> r;
    r.exact = exact;
    r.metric_defect = metric_invariance_defect(mats, b);
    const PencilSplit<T> split = definite_pencil_split(space, b);
    if (subspace_signature(split.negative, T(1e-9)).n_pos != 0 ||
        !subspace_signature(split.negative, T(1e-12)).negative())
        throw NumericalError("pencil negative eigenspace is not a negative subspace");
    r.k = graph_from_subspace(split.negative);
    r.k_norm = r.k.norm();

    const BallPoint<T> origin = BallPoint<T>::zero(space);
    for (const auto& m : mats) {
        const BlockOperator<T> u(space, m);
        r.rep_bound = std::max(r.rep_bound, opnorm(m));
        r.max_map_residual =
            std::max(r.max_map_residual, opnorm((fractional_linear(u, r.k).matrix() - r.k.matrix()).eval()));
        r.max_invariance_residual = std::max(r.max_invariance_residual, invariance_residual(u, r.k));
        r.orbit_radius = std::max(r.orbit_radius, fractional_linear(u, origin).norm());
    }
    r.radius_bound = radius_from_norm(std::max(T(1), r.rep_bound));
    const bool metric_ok = !exact || r.metric_defect <= opts.invariance_tol * std::max(T(1), opnorm(b));
    r.certified = r.max_map_residual <= opts.map_tol && r.k_norm <= r.radius_bound + opts.radius_slack && metric_ok;
    if (!r.certified) {
        if (!metric_ok)
            r.message = "averaged metric is not invariant";
        else if (r.max_map_residual > opts.map_tol)
            r.message = "fixed-point residual above tolerance";
        else
            r.message = "fixed point lies outside the orbit-radius bound";
    }
    return r;
}

}  // namespace detail

/// Common fixed point of {phi_{pi(g)}} for a finite group (exact averaging).
template <typename T>
FixedPointReport<T> common_fixed_point(const GroupRep<T>& rep, const FixedPointOptions<T>& opts = {}) {
    return detail::fixed_point_from_metric(rep.space(), rep.matrices(), group_average_metric(rep), true, opts);
}

/// Approximate mode: a finitely generated bounded group, averaged over words of length <= max_length.
/// Certification is by the map residual over the word set only.
template <typename T>
FixedPointReport<T> common_fixed_point_generated(const IndefiniteSpace& space,
                                                 const std::vector<CMatrix<T>>& generators, int max_length = 12,
                                                 const FixedPointOptions<T>& opts = {}) {
    const std::vector<CMatrix<T>> words = enumerate_words(generators, max_length);
    return detail::fixed_point_from_metric(space, words, word_average_metric(words), false, opts);
}

template <typename T = double>
struct DualPair {
    Subspace<T> positive;
    Subspace<T> negative;
    T max_invariance_defect = 0;  // max_g of the projection residual of pi(g) on either subspace
    Inertia positive_inertia;
    Inertia negative_inertia;
    bool spans_space = false;
};

/// Invariant dual pair: the graph of K and its J-orthogonal complement.
template <typename T>
DualPair<T> invariant_dual_pair(const GroupRep<T>& rep, const BallPoint<T>& k) {
    const auto& s = rep.space();
    DualPair<T> out;
    out.negative = graph_of(k);
    // {x : Z* J x = 0} = orthogonal complement of span(J Z)
    const Eigen::Index n = s.dim();
    CMatrix<T> pos;
    if (s.n_minus() == 0) {
        pos = CMatrix<T>::Identity(n, n);
    } else {
        const CMatrix<T> jz = s.apply_J(out.negative.basis());
        Eigen::HouseholderQR<CMatrix<T>> qr(jz);
        const CMatrix<T> q = qr.householderQ() * CMatrix<T>::Identity(n, n);
        pos = q.rightCols(n - s.n_minus());
    }
    out.positive = Subspace<T>(s, pos);
    for (const auto& m : rep.matrices()) {
        out.max_invariance_defect = std::max(out.max_invariance_defect, out.negative.invariance_defect(m));
        out.max_invariance_defect = std::max(out.max_invariance_defect, out.positive.invariance_defect(m));
    }
    out.positive_inertia = subspace_signature(out.positive, T(1e-9));
    out.negative_inertia = subspace_signature(out.negative, T(1e-9));
    CMatrix<T> both(n, n);
    both << out.negative.basis(), out.positive.basis();
    out.spans_space = n == 0 || min_singular_value(both) > T(1e-9) * std::max(T(1), opnorm(both));
    return out;
}

template <typename T>
DualPair<T> invariant_dual_pair(const GroupRep<T>& rep, const FixedPointOptions<T>& opts = {}) {
    const FixedPointReport<T> fp = common_fixed_point(rep, opts);
    if (!fp.certified) throw NumericalError("common fixed point not certified: " + fp.message);
    return invariant_dual_pair(rep, fp.k);
}

template <typename T = double>
struct UnitarizationReport {
    CMatrix<T> v;
    CMatrix<T> v_inv;
    std::vector<CMatrix<T>> unitary;  // V pi(g) V^{-1}
    T max_unitarity_defect = 0;       // max_g ||U(g)* U(g) - I||
    T cond = 0;                       // ||V|| ||V^{-1}||
    T bound = 0;                      // 2 ||pi||^2 + 1
    T sharp_bound = 0;                // (1 + ||K||) / (1 - ||K||)
    FixedPointReport<T> fixed_point;
    bool certified = false;
    std::string message;
};

/// Similarity V = M_{-K} taking pi to a unitary representation, where K is the common fixed point.
template <typename T>
UnitarizationReport<T> unitarize(const GroupRep<T>& rep, const FixedPointOptions<T>& opts = {},
                                 T unitarity_tol = T(1e-8)) {
    UnitarizationReport<T> r;
    r.fixed_point = common_fixed_point(rep, opts);
    if (!r.fixed_point.certified) {
        r.message = "common fixed point not certified: " + r.fixed_point.message;
        return r;
    }
    const BallPoint<T>& k = r.fixed_point.k;
    if (!(k.norm() < T(1) - T(kBoundaryMargin))) {
        r.message = "fixed point on the boundary; cannot form M_K";
        return r;
    }
    // phi_{M_{-K} pi(g) M_K}(0) = mu_{-K}(phi_{pi(g)}(K)) = mu_{-K}(K) = 0
    r.v = mobius_matrix(-k).matrix();
    r.v_inv = mobius_matrix(k).matrix();
    const Eigen::Index n = rep.space().dim();
    for (const auto& m : rep.matrices()) {
        CMatrix<T> u = r.v * m * r.v_inv;
        r.max_unitarity_defect =
            std::max(r.max_unitarity_defect, opnorm((u.adjoint() * u - CMatrix<T>::Identity(n, n)).eval()));
        r.unitary.push_back(std::move(u));
    }
    r.cond = opnorm(r.v) * opnorm(r.v_inv);
    const T pn = rep.bound();
    r.bound = T(2) * pn * pn + T(1);
    const T kn = k.norm();
    r.sharp_bound = (T(1) + kn) / (T(1) - kn);
    r.certified = r.max_unitarity_defect <= unitarity_tol && r.cond <= r.bound + T(1e-8) &&
                  r.cond <= r.sharp_bound + T(1e-8);
    if (!r.certified) r.message = "unitarization certificate failed";
    return r;
}

/// pi(g) = M_A diag(u_minus(g), u_plus(g)) M_{-A}; fixes A whenever the blocks fix 0.
template <typename T>
GroupRep<T> fixture_conjugated_rep(const FiniteGroup& group, const std::vector<CMatrix<T>>& u_plus,
                                   const std::vector<CMatrix<T>>& u_minus, const BallPoint<T>& a) {
    const auto& s = a.space();
    if (static_cast<int>(u_plus.size()) != group.order() || static_cast<int>(u_minus.size()) != group.order())
        throw DomainError("unitary blocks must be given for every group element");
    const CMatrix<T> ma = mobius_matrix(a).matrix();
    const CMatrix<T> mna = mobius_matrix(-a).matrix();
    std::vector<CMatrix<T>> mats;
    for (int g = 0; g < group.order(); ++g) {
        const CMatrix<T> d =
            BlockOperator<T>::from_blocks(s, u_minus[g], CMatrix<T>::Zero(s.n_minus(), s.n_plus()),
                                          CMatrix<T>::Zero(s.n_plus(), s.n_minus()), u_plus[g])
                .matrix();
        mats.push_back(ma * d * mna);
    }
    return GroupRep<T>(group, s, std::move(mats));
}

/// Gram matrix of [x1 + y1, x2 + y2] = (x1, y2) + (y1, x2) on H + H: [[0, I], [I, 0]].
template <typename T>
CMatrix<T> doubled_form(Eigen::Index d) {
    CMatrix<T> g = CMatrix<T>::Zero(2 * d, 2 * d);
    g.topRightCorner(d, d).setIdentity();
    g.bottomLeftCorner(d, d).setIdentity();
    return g;
}

/// Unitary change of coordinates to (H-, H+) = ({x + (-x)}, {x + x}); Q* G Q = J.
template <typename T>
CMatrix<T> doubled_frame(Eigen::Index d) {
    const T s = T(1) / std::sqrt(T(2));
    CMatrix<T> q(2 * d, 2 * d);
    const CMatrix<T> id = CMatrix<T>::Identity(d, d);
    q << id * s, id * s, -id * s, id * s;
    return q;
}

/// diag(P, (P^{-1})*) in x + y coordinates.
template <typename T>
CMatrix<T> double_operator(const CMatrix<T>& p, const CMatrix<T>& p_inv) {
    const Eigen::Index d = p.rows();
    CMatrix<T> tau = CMatrix<T>::Zero(2 * d, 2 * d);
    tau.topLeftCorner(d, d) = p;
    tau.bottomRightCorner(d, d) = p_inv.adjoint();
    return tau;
}

/// tau(g) = diag(pi(g), pi(g^{-1})*) expressed in the J-diagonal frame of the doubled form.
template <typename T>
GroupRep<T> fixture_double_rep(const FiniteGroup& group, const std::vector<CMatrix<T>>& pi) {
    if (static_cast<int>(pi.size()) != group.order()) throw DomainError("need one matrix per group element");
    const Eigen::Index d = pi.front().rows();
    const CMatrix<T> q = doubled_frame<T>(d);
    std::vector<CMatrix<T>> mats;
    for (int g = 0; g < group.order(); ++g) {
        if (!(condition_number(pi[g]) < T(1e12))) throw DomainError("representation operator is not invertible");
        const int ginv = group.inverse(g);
        if (ginv < 0) throw DomainError("group table has no inverse for an element");
        mats.push_back(q.adjoint() * double_operator(pi[g], pi[ginv]) * q);
    }
    return GroupRep<T>(group, IndefiniteSpace(static_cast<int>(d), static_cast<int>(d)), std::move(mats));
}

}  // namespace kreinkit
