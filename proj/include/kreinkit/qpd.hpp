#pragma once

// Quasi-positive-definite functions on finite groups.
//
// The form on functions f: G -> C is [f1, f2] = f2* Phi f1 with the full Gram
// Phi(a, b) = phi(a^{-1} b). With this placement [T_g e_e, e_e] = phi(g) for the
// left translation T_g e_h = e_{gh}, and P_g* Phi P_g = Phi for every g.

#include <complex>
#include <vector>

#include "kreinkit/fixpoint.hpp"

namespace kreinkit {

inline constexpr double kGramKernelTol = 1e-10;

template <typename T = double>
class GroupFunction {
public:
    GroupFunction() = default;
    GroupFunction(FiniteGroup group, CVector<T> values, T symmetry_tol = T(1e-12))
        : group_(std::move(group)), values_(std::move(values)) {
        if (values_.size() != group_.order()) throw DomainError("need one value per group element");
        const T scale = std::max(T(1), values_.size() ? values_.cwiseAbs().maxCoeff() : T(0));
        for (int g = 0; g < group_.order(); ++g) {
            const int gi = group_.inverse(g);
            if (gi < 0) throw DomainError("group table has no inverse for an element");
            if (std::abs(values_(gi) - std::conj(values_(g))) > symmetry_tol * scale)
                throw DomainError("function is not Hermitian: phi(g^-1) != conj(phi(g))");
        }
    }

    const FiniteGroup& group() const { return group_; }
    const CVector<T>& values() const { return values_; }
    std::complex<T> operator()(int g) const { return values_(g); }

private:
    FiniteGroup group_;
    CVector<T> values_;
};

/// Entry (i, j) = phi(g_i^{-1} g_j).
template <typename T>
CMatrix<T> gram_matrix(const GroupFunction<T>& phi, const std::vector<int>& elements) {
    const auto& g = phi.group();
    const Eigen::Index n = static_cast<Eigen::Index>(elements.size());
    CMatrix<T> out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out(i, j) = phi(g.mul(g.inverse(elements[i]), elements[j]));
    return out;
}

template <typename T>
CMatrix<T> full_gram(const GroupFunction<T>& phi) {
    std::vector<int> all(phi.group().order());
    for (int i = 0; i < phi.group().order(); ++i) all[i] = i;
    return gram_matrix(phi, all);
}

/// Permutation matrix of left translation: P_g e_h = e_{gh}.
template <typename T>
CMatrix<T> translation_matrix(const FiniteGroup& group, int g) {
    const int m = group.order();
    CMatrix<T> p = CMatrix<T>::Zero(m, m);
    for (int h = 0; h < m; ++h) p(group.mul(g, h), h) = T(1);
    return p;
}

namespace detail {

template <typename T>
T gram_threshold(const RVector<T>& ev) {
    const T nrm = ev.size() ? ev.cwiseAbs().maxCoeff() : T(0);
    return T(kGramKernelTol) * nrm;
}

}  // namespace detail

/// Number of negative eigenvalues of the full Gram matrix.
template <typename T>
int negative_squares(const GroupFunction<T>& phi) {
    const CMatrix<T> gram = full_gram(phi);
    const RVector<T> ev = hermitian_eigenvalues(gram);
    const T thr = detail::gram_threshold(ev);
    int k = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) < -thr) ++k;
    return k;
}

/// Rank of the full Gram matrix of a positive definite function.
template <typename T>
int finite_type_rank(const GroupFunction<T>& phi) {
    const CMatrix<T> gram = full_gram(phi);
    const RVector<T> ev = hermitian_eigenvalues(gram);
    const T thr = detail::gram_threshold(ev);
    int rank = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -thr) throw DomainError("function is not positive definite");
        if (ev(i) > thr) ++rank;
    }
    return rank;
}

template <typename T = double>
struct GnsResult {
    int rank = 0;
    int negative = 0;           // k
    RVector<T> signs;           // negatives first
    CMatrix<T> coordinates;     // p x m, function on G -> Pi_k coordinates
    std::vector<CMatrix<T>> u;  // per-element J'-unitary matrices
    CVector<T> cyclic;          // image of the indicator of e
    T homomorphism_defect = 0;
    T unitarity_defect = 0;
    T reproduction_defect = 0;  // max_g |phi(g) - [U(g) f, f]|

    IndefiniteSpace space() const { return IndefiniteSpace(negative, rank - negative); }
};

/// Quotient of the translation representation by the kernel of the form.
template <typename T>
GnsResult<T> gns_construct(const GroupFunction<T>& phi) {
    const auto& group = phi.group();
    const int m = group.order();
    const CMatrix<T> gram = full_gram(phi);
    Eigen::SelfAdjointEigenSolver<CMatrix<T>> es(hermitian_part(gram));
    if (es.info() != Eigen::Success) throw NumericalError("Gram eigensolver failed");
    const RVector<T>& ev = es.eigenvalues();  // ascending: negatives come first
    const T thr = detail::gram_threshold(ev);

    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev(i)) > thr) keep.push_back(i);

    GnsResult<T> r;
    r.rank = static_cast<int>(keep.size());
    const Eigen::Index p = r.rank;
    CMatrix<T> vp(m, p);
    r.signs.resize(p);
    RVector<T> scale(p);
    for (Eigen::Index c = 0; c < p; ++c) {
        vp.col(c) = es.eigenvectors().col(keep[c]);
        const T lam = ev(keep[c]);
        r.signs(c) = lam < 0 ? T(-1) : T(1);
        if (lam < 0) ++r.negative;
        scale(c) = std::sqrt(std::abs(lam));
    }
    // C = |L|^{1/2} V*, right inverse C+ = V |L|^{-1/2}
    r.coordinates = scale.template cast<std::complex<T>>().asDiagonal() * vp.adjoint();
    const CMatrix<T> cplus = vp * scale.cwiseInverse().template cast<std::complex<T>>().asDiagonal();

    for (int g = 0; g < m; ++g) r.u.push_back(r.coordinates * translation_matrix<T>(group, g) * cplus);
    r.cyclic = r.coordinates.col(group.identity());

    const CMatrix<T> jp = r.signs.template cast<std::complex<T>>().asDiagonal();
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b)
            r.homomorphism_defect =
                std::max(r.homomorphism_defect, opnorm((r.u[group.mul(a, b)] - r.u[a] * r.u[b]).eval()));
        r.unitarity_defect = std::max(r.unitarity_defect, opnorm((r.u[a].adjoint() * jp * r.u[a] - jp).eval()));
        const std::complex<T> rebuilt = r.cyclic.dot(jp * (r.u[a] * r.cyclic));
        r.reproduction_defect = std::max(r.reproduction_defect, std::abs(rebuilt - phi(a)));
    }
    return r;
}

template <typename T = double>
struct DecompositionCertificate {
    T reconstruction_error = 0;  // max_g |phi - phi1 + phi2|
    T relative_error = 0;        // divided by max_g |phi|
    int negative_squares = 0;    // of phi
    int phi1_negative_squares = 0;
    int phi2_negative_squares = 0;
    int phi2_rank = 0;
    bool reconstructs = false;
    bool phi1_pd = false;
    bool phi2_pd = false;
    bool rank_consistent = false;  // negative_squares(phi) <= rank(phi2)
    bool passed() const { return reconstructs && phi1_pd && phi2_pd && rank_consistent; }
};

template <typename T = double>
struct Decomposition {
    GroupFunction<T> phi1;
    GroupFunction<T> phi2;
    DecompositionCertificate<T> certificate;
    bool rank_within_k = false;  // rank(phi2) <= negative_squares(phi)
};

template <typename T>
DecompositionCertificate<T> verify_decomposition(const GroupFunction<T>& phi, const GroupFunction<T>& phi1,
                                                 const GroupFunction<T>& phi2, T tol = T(1e-8)) {
    if (phi.group().order() != phi1.group().order() || phi.group().order() != phi2.group().order())
        throw DomainError("functions live on different groups");
    DecompositionCertificate<T> c;
    c.reconstruction_error = (phi.values() - phi1.values() + phi2.values()).cwiseAbs().maxCoeff();
    const T scale = phi.values().cwiseAbs().maxCoeff();
    c.relative_error = scale > T(0) ? c.reconstruction_error / scale : c.reconstruction_error;
    c.reconstructs = c.reconstruction_error <= tol * std::max(scale, std::numeric_limits<T>::min());
    if (scale == T(0)) c.reconstructs = c.reconstruction_error <= tol;
    c.negative_squares = negative_squares(phi);
    c.phi1_negative_squares = negative_squares(phi1);
    c.phi2_negative_squares = negative_squares(phi2);
    c.phi1_pd = c.phi1_negative_squares == 0;
    c.phi2_pd = c.phi2_negative_squares == 0;
    c.phi2_rank = c.phi2_pd ? finite_type_rank(phi2) : -1;
    c.rank_consistent = c.phi2_pd && c.negative_squares <= c.phi2_rank;
    return c;
}

/// phi = phi1 - phi2 with phi1 positive definite and phi2 positive definite of rank <= k.
template <typename T>
Decomposition<T> decompose(const GroupFunction<T>& phi, const FixedPointOptions<T>& opts = {}) {
    const auto& group = phi.group();
    const int m = group.order();
    const GnsResult<T> gns = gns_construct(phi);

    CVector<T> v1 = CVector<T>::Zero(m);
    CVector<T> v2 = CVector<T>::Zero(m);
    if (gns.rank > 0) {
        const IndefiniteSpace space = gns.space();
        const GroupRep<T> rep(group, space, gns.u);
        const DualPair<T> pair = invariant_dual_pair(rep, opts);
        // f = f+ + f- along the dual pair
        const Eigen::Index k = space.n_minus();
        CMatrix<T> basis(space.dim(), space.dim());
        basis << pair.negative.basis(), pair.positive.basis();
        const CVector<T> coef = basis.fullPivLu().solve(gns.cyclic);
        const CVector<T> f_minus = pair.negative.basis() * coef.head(k);
        const CVector<T> f_plus = pair.positive.basis() * coef.tail(space.dim() - k);
        for (int g = 0; g < m; ++g) {
            v1(g) = indefinite_product<T>(space, rep(g) * f_plus, f_plus);
            v2(g) = -indefinite_product<T>(space, rep(g) * f_minus, f_minus);
        }
    }
    // the construction is exactly Hermitian; symmetrize away rounding
    auto symmetrize = [&](CVector<T>& v) {
        CVector<T> s(m);
        for (int g = 0; g < m; ++g) s(g) = (v(g) + std::conj(v(group.inverse(g)))) / T(2);
        v = s;
    };
    symmetrize(v1);
    symmetrize(v2);

    Decomposition<T> d{GroupFunction<T>(group, v1), GroupFunction<T>(group, v2), {}, false};
    d.certificate = verify_decomposition(phi, d.phi1, d.phi2);
    d.rank_within_k = d.certificate.phi2_rank >= 0 && d.certificate.phi2_rank <= d.certificate.negative_squares;
    return d;
}

}  // namespace kreinkit
