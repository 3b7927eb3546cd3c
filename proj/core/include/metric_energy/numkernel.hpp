#pragma once

#include <Eigen/Dense>

namespace metric_energy {

/// Thresholds that turn exact dichotomies (zero vs nonzero eigenvalue) into
/// auditable numerical decisions.
struct ToleranceConfig {
  double rel_eig_zero = 1e-9;
  double abs_floor = 1e-12;
  int max_jacobi_sweeps = 64;

  /// Throws Error(BadParameter) unless every field is strictly positive.
  void validate() const;

  /// max(abs_floor, rel_eig_zero * spectral_radius).
  double zero_threshold(double spectral_radius) const;
};

/// Full eigendecomposition of a dense symmetric matrix S = V diag(l) V^T.
struct SpectralDecomposition {
  Eigen::Index dim = 0;
  Eigen::VectorXd eigenvalues;   // sorted descending
  Eigen::MatrixXd eigenvectors;  // orthonormal columns, column i pairs with eigenvalues[i]
  double zero_threshold = 0.0;
  double residual = 0.0;  // max_i |S v_i - l_i v_i|

  double spectral_radius() const;
  Eigen::MatrixXd reconstruct() const;

  /// Number of eigenvalues with |l| > zero_threshold.
  Eigen::Index rank() const;

  /// The decomposition of -S, re-sorted descending. Threshold and residual
  /// carry over unchanged.
  SpectralDecomposition negated() const;
};

/// Cyclic Jacobi eigensolver.
///
/// Rejects input whose asymmetry exceeds 1e-12 relative to its largest entry
/// (Error NotSymmetric) and reports Error NoConvergence if the off-diagonal
/// mass has not vanished after `tol.max_jacobi_sweeps` sweeps. Eigenvector
/// signs are normalised so the first component of magnitude above 1e-12 is
/// positive; equal eigenvalues are ordered lexicographically by eigenvector
/// (descending). The result is bit-identical for identical input.
SpectralDecomposition sym_eig(const Eigen::MatrixXd& s, const ToleranceConfig& tol = {});

struct PinvSolution {
  Eigen::VectorXd x;
  bool in_range = false;
  double residual = 0.0;
};

/// Applies the pseudoinverse of the decomposed matrix to g, dropping every
/// eigen-direction with |l| <= zero_threshold. `in_range` is true when the
/// part of g lying in that numerical null space has norm at most
/// zero_threshold * (1 + |g|).
PinvSolution pinv_apply(const SpectralDecomposition& dec, const Eigen::VectorXd& g);

/// Orthogonal projector Id - ones/n onto the mass-zero subspace.
Eigen::MatrixXd mass_zero_projection(Eigen::Index n);

/// Helmert basis: an n x (n-1) matrix with orthonormal columns spanning the
/// mass-zero subspace. Used to restrict quadratic forms to that subspace
/// without carrying the forced zero eigenvalue along the ones direction.
Eigen::MatrixXd mass_zero_basis(Eigen::Index n);

}  // namespace metric_energy
