#pragma once

// Invariant maximal non-positive subspaces of J-dissipative matrices.
//
// A strongly J-dissipative matrix has no real eigenvalues, and its spectral
// subspace for the open lower half-plane is negative of dimension n_minus.
// A merely dissipative A is handled by the regularization A + i t J with
// t -> 0, certifying each candidate against A itself.

#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "kreinkit/core.hpp"
#include "kreinkit/parallel.hpp"

namespace kreinkit {

template <typename T = double>
struct MnpsReport {
    BallPoint<T> w;
    T residual = 0;   // against the un-regularized operator
    T w_norm = 0;
    Inertia subspace_inertia;
    T regularization_t = 0;
    int iterations = 0;
    bool certified = false;
    std::string message;
};

template <typename T = double>
struct MnpsOptions {
    std::optional<T> t0;  // default 1e-2 * max(1, ||A||)
    T shrink = T(0.5);
    T tol_res = T(1e-9);
    int max_iter = 40;
    T dissipativity_tol = T(1e-9);  // relative to max(1, ||A||)
    T norm_tol = T(1e-8);           // ||W|| <= 1 + norm_tol
    bool try_unregularized = true;  // attempt the spectral split of A itself first
    // shrink t by up to `max_jump` per step, guided by residual ~ t, instead of the fixed `shrink`
    bool accelerate = true;
    T max_jump = T(1e-3);
};

class NotDissipativeError : public DomainError {
public:
    using DomainError::DomainError;
};

class SpectrumOnAxisError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

namespace detail {

template <typename T>
BlockOperator<T> add_i_t_J(const BlockOperator<T>& a, T t) {
    CMatrix<T> b = a.matrix();
    const auto signs = a.space().template signs<T>();
    for (Eigen::Index i = 0; i < b.rows(); ++i) b(i, i) += std::complex<T>(0, t * signs(i));
    return BlockOperator<T>(a.space(), std::move(b));
}

}  // namespace detail

/// B = A + i t J; its dissipativity form is that of A plus t I.
template <typename T>
BlockOperator<T> strongify(const BlockOperator<T>& a, T t, T tol = T(1e-9)) {
    if (!(t > T(0))) throw DomainError("strongify: regularization parameter must be positive");
    const T scale = std::max(T(1), a.norm());
    if (dissipativity_margin(a) < -tol * scale) throw NotDissipativeError("not J-dissipative");
    return detail::add_i_t_J(a, t);
}

template <typename T = double>
struct SpectralSplit {
    Subspace<T> z_minus;  // Im lambda < 0
    Subspace<T> z_plus;   // Im lambda > 0
    T min_abs_imag = 0;
};

/// Invariant subspaces of A for the lower and upper open half-planes.
template <typename T>
SpectralSplit<T> spectral_split(const BlockOperator<T>& a, T tol_axis) {
    const SchurForm<T> schur = complex_schur(a.matrix());
    const CVector<T> ev = schur.eigenvalues();
    T min_imag = std::numeric_limits<T>::infinity();
    for (Eigen::Index i = 0; i < ev.size(); ++i) min_imag = std::min(min_imag, std::abs(ev(i).imag()));
    if (!(min_imag > tol_axis))
        throw SpectrumOnAxisError("spectrum touches real axis; increase regularization");

    SchurForm<T> lower = schur;
    const Eigen::Index d_minus = reorder_schur(lower, [](const std::complex<T>& z) { return z.imag() < T(0); });
    SchurForm<T> upper = schur;
    const Eigen::Index d_plus = reorder_schur(upper, [](const std::complex<T>& z) { return z.imag() > T(0); });

    SpectralSplit<T> out;
    out.z_minus = Subspace<T>(a.space(), lower.q.leftCols(d_minus));
    out.z_plus = Subspace<T>(a.space(), upper.q.leftCols(d_plus));
    out.min_abs_imag = min_imag;
    return out;
}

namespace detail {

template <typename T>
MnpsReport<T> certify(const BlockOperator<T>& original, BallPoint<T> w, const MnpsOptions<T>& opts, T scale) {
    MnpsReport<T> r;
    r.residual = invariance_residual(original, w);
    r.w_norm = w.norm();
    r.subspace_inertia = subspace_signature(graph_of(w), T(1e-9));
    r.certified = r.w_norm <= T(1) + opts.norm_tol && r.residual <= opts.tol_res * scale &&
                  r.subspace_inertia.n_pos == 0;
    r.w = std::move(w);
    return r;
}

template <typename T>
BallPoint<T> lower_half_plane_graph(const BlockOperator<T>& a, T tol_axis) {
    const SpectralSplit<T> split = spectral_split(a, tol_axis);
    if (split.z_minus.dim() != a.space().n_minus())
        throw NumericalError("lower half-plane spectral subspace has dimension " +
                             std::to_string(split.z_minus.dim()) + ", expected n_minus");
    return graph_from_subspace(split.z_minus);
}

}  // namespace detail

/// MNPS of a strongly J-dissipative operator: the graph of its lower half-plane spectral subspace.
template <typename T>
MnpsReport<T> mnps_strong(const BlockOperator<T>& a, T tol = T(1e-9)) {
    const T margin = dissipativity_margin(a);
    if (!(margin > tol)) throw NotDissipativeError("operator is not strongly J-dissipative");
    // |Im lambda| >= margin for every eigenvalue
    MnpsOptions<T> opts;
    opts.tol_res = T(1e-8);
    MnpsReport<T> r =
        detail::certify(a, detail::lower_half_plane_graph(a, margin / T(2)), opts, std::max(T(1), a.norm()));
    r.regularization_t = T(0);
    r.iterations = 0;
    if (!r.certified) r.message = "strong solve failed its certificate";
    return r;
}

/// Certified invariant MNPS of a J-dissipative operator.
template <typename T>
MnpsReport<T> mnps(const BlockOperator<T>& a, const MnpsOptions<T>& opts = {}) {
    const T scale = std::max(T(1), a.norm());
    const T margin = dissipativity_margin(a);
    if (margin < -opts.dissipativity_tol * scale) throw NotDissipativeError("not J-dissipative");

    std::optional<MnpsReport<T>> best;
    auto consider = [&](MnpsReport<T> r) {
        if (!best || (r.certified && !best->certified) ||
            (r.certified == best->certified && r.residual < best->residual))
            best = std::move(r);
    };

    if (opts.try_unregularized) {
        try {
            const T tol_axis = std::sqrt(std::numeric_limits<T>::epsilon()) * scale;
            MnpsReport<T> r = detail::certify(a, detail::lower_half_plane_graph(a, tol_axis), opts, scale);
            r.regularization_t = T(0);
            r.iterations = 0;
            if (r.certified) return r;
            consider(std::move(r));
        } catch (const Error&) {
            // spectrum on or near the axis: regularize
        }
    }

    const T t0 = opts.t0.value_or(T(1e-2) * scale);
    const T target = opts.tol_res * scale;
    T t = t0;
    for (int j = 0; j < opts.max_iter; ++j) {
        const BlockOperator<T> b = detail::add_i_t_J(a, t);
        T factor = opts.shrink;
        try {
            MnpsReport<T> r = detail::certify(a, detail::lower_half_plane_graph(b, t / T(2)), opts, scale);
            r.regularization_t = t;
            r.iterations = j + 1;
            if (r.certified) return r;
            if (opts.accelerate && r.residual > target && r.w_norm <= T(1) + opts.norm_tol)
                factor = std::clamp(T(0.25) * target / r.residual, opts.max_jump, opts.shrink);
            consider(std::move(r));
        } catch (const Error&) {
            // eigenvalues of B not resolved at this t; keep shrinking only while useful
            if (best) break;
        }
        t *= factor;
    }
    if (!best) throw NumericalError("failed to certify; spectrum may be degenerate near real axis");
    best->message = "failed to certify; spectrum may be degenerate near real axis";
    return *best;
}

template <typename T = double>
struct VerifyResult {
    bool maximal_nonpositive = false;
    bool invariant = false;
    T residual = 0;
    Inertia inertia;
};

template <typename T>
VerifyResult<T> verify_mnps(const BlockOperator<T>& a, const BallPoint<T>& w, T tol = T(1e-8)) {
    VerifyResult<T> v;
    v.residual = invariance_residual(a, w);
    v.inertia = subspace_signature(graph_of(w), T(1e-9));
    v.maximal_nonpositive = w.norm() <= T(1) + tol && w.matrix().cols() == a.space().n_minus();
    v.invariant = v.residual <= tol * std::max(T(1), a.norm());
    return v;
}

// Truncation ladder: solve on leading coordinate blocks of growing size.

struct LadderLevel {
    int k_minus = 0;
    int k_plus = 0;
};

template <typename T = double>
struct LadderStep {
    LadderLevel level;
    CMatrix<T> w;  // embedded n_plus x n_minus, zero padded
    T residual = 0;   // against the truncated operator
    T delta_to_previous = 0;
    bool certified = false;
    std::string message;
};

template <typename T = double>
struct LadderReport {
    std::vector<LadderStep<T>> steps;
    BallPoint<T> w;
    bool all_certified = false;
};

/// P A P for P the coordinate projection onto the first k- negative and k+ positive coordinates.
template <typename T>
BlockOperator<T> compress(const BlockOperator<T>& a, LadderLevel lv) {
    const auto& s = a.space();
    if (lv.k_minus < 0 || lv.k_plus < 0 || lv.k_minus > s.n_minus() || lv.k_plus > s.n_plus())
        throw DomainError("ladder level exceeds space dimensions");
    std::vector<Eigen::Index> idx;
    for (int i = 0; i < lv.k_minus; ++i) idx.push_back(i);
    for (int i = 0; i < lv.k_plus; ++i) idx.push_back(s.n_minus() + i);
    const CMatrix<T> sub = a.matrix()(idx, idx);
    return BlockOperator<T>(IndefiniteSpace(lv.k_minus, lv.k_plus), sub);
}

template <typename T>
LadderReport<T> approximation_ladder(const BlockOperator<T>& a, const std::vector<LadderLevel>& levels,
                                     const MnpsOptions<T>& opts = {}) {
    const auto& s = a.space();
    if (levels.empty()) throw DomainError("ladder needs at least one level");
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (levels[i].k_minus < levels[i - 1].k_minus || levels[i].k_plus < levels[i - 1].k_plus)
            throw DomainError("ladder levels must be nondecreasing");
    if (levels.back().k_minus != s.n_minus() || levels.back().k_plus != s.n_plus())
        throw DomainError("last ladder level must be the full space");
    if (dissipativity_margin(a) < -opts.dissipativity_tol * std::max(T(1), a.norm()))
        throw NotDissipativeError("not J-dissipative");

    LadderReport<T> out;
    out.steps.resize(levels.size());
    parallel_for(levels.size(), [&](std::size_t i) {
        LadderStep<T>& st = out.steps[i];
        st.level = levels[i];
        st.w = CMatrix<T>::Zero(s.n_plus(), s.n_minus());
        try {
            const BlockOperator<T> ak = compress(a, levels[i]);
            const MnpsReport<T> r = mnps(ak, opts);
            st.w.topLeftCorner(levels[i].k_plus, levels[i].k_minus) = r.w.matrix();
            st.residual = r.residual;
            st.certified = r.certified;
            st.message = r.message;
        } catch (const Error& e) {
            st.certified = false;
            st.message = e.what();
            st.residual = std::numeric_limits<T>::infinity();
        }
    });
    out.all_certified = true;
    for (std::size_t i = 0; i < out.steps.size(); ++i) {
        out.all_certified = out.all_certified && out.steps[i].certified;
        out.steps[i].delta_to_previous = i == 0 ? T(0) : opnorm((out.steps[i].w - out.steps[i - 1].w).eval());
    }
    out.w = BallPoint<T>(s, out.steps.back().w);
    return out;
}

}  // namespace kreinkit
