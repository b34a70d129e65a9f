#include "dopamine/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace dopamine {

namespace {

/// Largest root modulus of x^2 - c1 x - c0 (the 2-step Krylov companion
/// polynomial). Complex roots have product -c0, so the pair's modulus is
/// sqrt(-c0).
double companion_radius(double c0, double c1) {
    const double disc = c1 * c1 + 4.0 * c0;
    if (disc >= 0.0) {
        const double r = std::sqrt(disc);
        return std::max(std::abs(c1 + r), std::abs(c1 - r)) / 2.0;
    }
    return std::sqrt(-c0);
}

}  // namespace

SpectralEstimate spectral_radius(const Matrix& w, double tol, int max_iter) {
    if (w.rows() != w.cols() || w.rows() == 0)
        throw std::invalid_argument("spectral_radius: matrix must be square and non-empty");
    const Eigen::Index n = w.rows();

    // Deterministic Gaussian start vector; a fixed pattern like all-ones can
    // be orthogonal to the dominant eigenvector.
    Eigen::VectorXd v(n);
    {
        GaussianStream g(0x5eedf00dULL);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = g.next();
    }
    v.normalize();

    double est = -1.0;
    int stable = 0;
    for (int it = 1; it <= max_iter; ++it) {
        Eigen::VectorXd u = w * v;
        // Norm growth ||w v|| with ||v|| = 1: converges to |lambda_1| for a
        // real dominant eigenvalue and equals the radius outright for scaled
        // rotations. (The Rayleigh magnitude |v^T w v| fails there: v stays
        // orthogonal to w v, reading a stable 0.)
        const double nu = u.norm();
        if (nu < 1e-300) return {0.0, true, it};  // w^k v hit zero: nilpotent direction
        u /= nu;
        if (std::abs(nu - est) <= tol * std::max(1.0, nu)) {
            if (++stable >= 3) return {nu, true, it};
        } else {
            stable = 0;
        }
        est = nu;
        v = std::move(u);
    }

    // Rayleigh magnitude oscillated (dominant complex pair): project onto the
    // 2-step Krylov subspace span{v, wv} and take the companion roots.
    Eigen::VectorXd v1 = w * v;
    Eigen::VectorXd v2 = w * v1;
    Eigen::Matrix<double, Eigen::Dynamic, 2> k(n, 2);
    k.col(0) = v;
    k.col(1) = v1;
    Eigen::Vector2d c = k.colPivHouseholderQr().solve(v2);
    const double radius = companion_radius(c(0), c(1));
    const double resid = (v2 - k * c).norm();
    const bool ok = radius > 0.0 && resid <= 1e-6 * std::max(1.0, v2.norm());
    return {radius, ok, max_iter};
}

double dense_spectral_radius(const Matrix& w) {
    if (w.rows() != w.cols() || w.rows() == 0)
        throw std::invalid_argument("dense_spectral_radius: matrix must be square and non-empty");
    Eigen::EigenSolver<Eigen::MatrixXd> solver(w, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("dense_spectral_radius: eigensolver failed");
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix spectral_reset(const Matrix& w, double lambda, double tol) {
    if (lambda <= 0.0) throw std::invalid_argument("spectral_reset: lambda must be positive");
    SpectralEstimate est = spectral_radius(w, tol);
    const double rho = est.converged ? est.value : dense_spectral_radius(w);
    if (!(rho > 1e-300))
        throw std::domain_error("spectral_reset: spectral radius ~0, cannot rescale");
    return w * (lambda / rho);
}

}  // namespace dopamine
