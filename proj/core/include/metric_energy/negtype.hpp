#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "metric_energy/numkernel.hpp"
#include "metric_energy/spaces.hpp"

namespace metric_energy {

/// D v against span(ones) for one null-space vector v.
struct ConstantPotential {
  double value = 0.0;     // c_v = mean of D v
  double residual = 0.0;  // max_i |(D v)_i - c_v|
};

/// Negative-type classification of a finite metric space, obtained from
/// the distance form restricted to the mass-zero subspace.
struct NegativeTypeReport {
  bool is_qhm = false;
  std::optional<bool> is_strict;  // set only when is_qhm
  std::optional<Eigen::VectorXd> violation_witness;

  Eigen::MatrixXd f_basis;  // n x f_dim, orthonormal, mass-zero
  Eigen::Index f_dim = 0;
  std::vector<ConstantPotential> constant_potentials;  // one per f_basis column

  double zero_threshold = 0.0;
  Eigen::VectorXd projected_eigenvalues;  // n - 1 values, descending

  /// Restricted form R = Q^T D Q in the Helmert basis Q, and its
  /// decomposition. Kept so later stages (M, embedding) reuse one solve.
  Eigen::MatrixXd mass_zero_basis;
  SpectralDecomposition projected_form;

  double max_projected_eigenvalue() const;
};

NegativeTypeReport classify_negative_type(const MetricSpace& space,
                                          const ToleranceConfig& tol = {});

struct Embedding {
  Eigen::MatrixXd coords;  // n x r
  Eigen::Index r = 0;
  double max_roundtrip_error = 0.0;  // max_ij | |phi_i - phi_j|^2 - d_ij |
  double zero_threshold = 0.0;
};

/// Coordinates phi_i with |phi_i - phi_j|^2 = d(x_i, x_j), i.e. an isometric
/// embedding of (X, d^{1/2}) into R^r. Throws Error(NotQuasihypermetric)
/// carrying the offending eigenvalue when no such embedding exists.
Embedding schoenberg_embed(const MetricSpace& space, const ToleranceConfig& tol = {});
Embedding schoenberg_embed(const MetricSpace& space, const NegativeTypeReport& report);

struct TOperatorReport {
  Eigen::Index rank_d = 0;
  bool t_injective = false;
  bool im_t_dense = false;
  // x -> d(x, .) is an isometry into sup-norm: max over pairs of
  // |max_z |d(x,z) - d(y,z)| - d(x,y)|, zero up to roundoff.
  double embedding_max_deviation = 0.0;
  double zero_threshold = 0.0;
  Eigen::VectorXd d_eigenvalues;
};

/// Rank of D and the resulting injectivity / density verdict for mu -> d_mu,
/// plus the deviation of max_z |d(x,z) - d(y,z)| from d(x,y).
TOperatorReport t_operator_report(const MetricSpace& space, const ToleranceConfig& tol = {});

enum class QhmCondition {
  tuples,            // sum d(x_i,x_j) + sum d(y_i,y_j) <= 2 sum d(x_i,y_j)
  energy_nonpos,     // I(mu) <= 0 on mass zero
  cauchy_schwarz,    // I(mu,nu)^2 <= I(mu) I(nu) on mass zero
  midpoint_signed,   // I(mu) + I(nu) <= 2 I(mu,nu) on mass one
  midpoint_prob,     // same on probability measures
  concave_signed,    // (I(mu)+I(nu))/2 <= I((mu+nu)/2) on mass one
  concave_prob,      // same on probability measures
  convex_signed,     // a I(mu) + b I(nu) <= I(a mu + b nu), a+b=1, on mass one
  convex_prob,       // same on probability measures
};

inline constexpr int kQhmConditionCount = 9;

/// Conventional numbering: "2".."8", "7'", "8'".
std::string condition_label(QhmCondition c);

struct ConditionResult {
  QhmCondition condition{};
  int trials = 0;
  int passes = 0;
  double worst_margin = 0.0;             // min over samples of (rhs - lhs)
  double worst_normalized_margin = 0.0;  // margin / sample scale
};

struct BatteryReport {
  std::vector<ConditionResult> conditions;
  bool all_pass = false;
  double relative_tolerance = 0.0;
  std::vector<std::string> failed_conditions;
  /// I(w) for a supplied witness, with the verdict of condition (3) on it.
  std::optional<double> witness_energy;
  std::optional<bool> witness_fails_condition3;
};

/// rhs - lhs of the tuple inequality for the given point indices.
double tuple_condition_margin(const MetricSpace& space, const std::vector<Eigen::Index>& xs,
                              const std::vector<Eigen::Index>& ys);

/// Samples every inequality equivalent to the quasihypermetric property.
/// A sample passes when its margin is >= -relative_tolerance * scale, where
/// scale is D(X) times the product of the measure norms involved (squared
/// for the Cauchy-Schwarz form, tuple length squared for tuples).
BatteryReport qhm_equivalence_battery(const MetricSpace& space, std::uint64_t seed, int trials,
                                      const std::optional<Eigen::VectorXd>& witness = std::nullopt,
                                      double relative_tolerance = 1e-9);

}  // namespace metric_energy
