#pragma once

// Reference computations that avoid the library's own code paths.

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "kreinkit/linalg.hpp"

namespace oracle {

using kreinkit::MatrixXcd;
using kreinkit::VectorXcd;
using cd = std::complex<double>;

/// Largest singular value via Jacobi SVD.
inline double norm2(const MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<MatrixXcd>(m).singularValues()(0);
}

/// Principal inverse square root through the Schur-based matrix square root.
inline MatrixXcd inv_sqrt(const MatrixXcd& h) {
    const MatrixXcd s = h.sqrt();
    return s.inverse();
}

/// M_A assembled from Schur-based square roots, blocks ordered (H-, H+).
inline MatrixXcd mobius_matrix(const MatrixXcd& a) {
    const Eigen::Index m = a.rows();
    const Eigen::Index k = a.cols();
    const MatrixXcd s = inv_sqrt(MatrixXcd::Identity(k, k) - a.adjoint() * a);
    const MatrixXcd t = inv_sqrt(MatrixXcd::Identity(m, m) - a * a.adjoint());
    MatrixXcd out(k + m, k + m);
    out << s, a.adjoint() * t, a * s, t;
    return out;
}

/// mu_A(X) from Schur-based square roots.
inline MatrixXcd mobius_apply(const MatrixXcd& a, const MatrixXcd& x) {
    const Eigen::Index m = a.rows();
    const Eigen::Index k = a.cols();
    const MatrixXcd left = inv_sqrt(MatrixXcd::Identity(m, m) - a * a.adjoint());
    const MatrixXcd right = (MatrixXcd::Identity(k, k) - a.adjoint() * a).sqrt();
    return left * (a + x) * (MatrixXcd::Identity(k, k) + a.adjoint() * x).inverse() * right;
}

/// Poincare-disk distance.
inline double disk_distance(cd a, cd b) { return std::atanh(std::abs(b - a) / std::abs(1.0 - std::conj(a) * b)); }

/// Angular operator of the eigenvectors with Im lambda < 0, from an unordered eigendecomposition.
inline MatrixXcd lower_half_plane_graph(const MatrixXcd& a, int n_minus) {
    Eigen::ComplexEigenSolver<MatrixXcd> es(a);
    std::vector<Eigen::Index> pick;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        if (es.eigenvalues()(i).imag() < 0) pick.push_back(i);
    MatrixXcd z(a.rows(), static_cast<Eigen::Index>(pick.size()));
    for (std::size_t c = 0; c < pick.size(); ++c) z.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(pick[c]);
    const MatrixXcd zm = z.topRows(n_minus);
    const MatrixXcd zp = z.bottomRows(a.rows() - n_minus);
    return zp * zm.inverse();
}

/// Sorted eigenvalues of a Hermitian matrix.
inline Eigen::VectorXd eigenvalues(const MatrixXcd& h) {
    return Eigen::SelfAdjointEigenSolver<MatrixXcd>(h, Eigen::EigenvaluesOnly).eigenvalues();
}

inline int count_below(const Eigen::VectorXd& ev, double thr) {
    int c = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) c += ev(i) < -thr ? 1 : 0;
    return c;
}

/// Fourier coefficients c_j of phi on Z_n: phi(r^a) = sum_j c_j exp(2 pi i j a / n).
inline VectorXcd cyclic_fourier(const VectorXcd& phi) {
    const Eigen::Index n = phi.size();
    VectorXcd c(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        cd s = 0;
        for (Eigen::Index a = 0; a < n; ++a) s += phi(a) * std::polar(1.0, -2.0 * M_PI * double(j * a) / double(n));
        c(j) = s / double(n);
    }
    return c;
}

}  // namespace oracle
