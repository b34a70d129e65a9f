#pragma once

#include "dopamine/network.hpp"

namespace dopamine {

struct SpectralEstimate {
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Spectral radius (largest absolute eigenvalue) by power iteration with
/// Rayleigh-quotient magnitude tracking. A dominant complex pair makes the
/// Rayleigh magnitude oscillate; a two-iterate Krylov fallback (eigenvalues
/// of the projected 2x2 map) covers that case, e.g. rotation matrices.
/// Non-convergence is reported, not fatal; callers may use a dense fallback.
SpectralEstimate spectral_radius(const Matrix& w, double tol = 1e-8, int max_iter = 1000);

/// Full eigendecomposition route. O(n^3); used as fallback and by oracles.
double dense_spectral_radius(const Matrix& w);

/// Returns w * (lambda / rho(w)). Falls back to the dense eigensolver when
/// power iteration does not converge. Throws when rho(w) is ~0.
Matrix spectral_reset(const Matrix& w, double lambda, double tol = 1e-8);

}  // namespace dopamine
