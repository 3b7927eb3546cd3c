#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "metric_energy/numkernel.hpp"
#include "metric_energy/spaces.hpp"

namespace metric_energy {

/// mu = sum_i w_i delta_{x_i} over the points of a fixed space.
class DiscreteSignedMeasure {
 public:
  DiscreteSignedMeasure(MetricSpace space, Eigen::VectorXd weights);

  static DiscreteSignedMeasure zero(const MetricSpace& space);
  static DiscreteSignedMeasure point(const MetricSpace& space, Eigen::Index i);
  static DiscreteSignedMeasure uniform(const MetricSpace& space);

  const MetricSpace& space() const { return space_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  Eigen::Index size() const { return weights_.size(); }

  /// mu(X).
  double mass() const { return weights_.sum(); }

  /// Hahn-Jordan split mu = mu_plus - mu_minus with disjoint supports.
  std::pair<DiscreteSignedMeasure, DiscreteSignedMeasure> hahn_jordan() const;

  DiscreteSignedMeasure operator+(const DiscreteSignedMeasure& other) const;
  DiscreteSignedMeasure operator-(const DiscreteSignedMeasure& other) const;
  DiscreteSignedMeasure operator*(double s) const;
  friend DiscreteSignedMeasure operator*(double s, const DiscreteSignedMeasure& mu) { return mu * s; }

 private:
  MetricSpace space_;
  Eigen::VectorXd weights_;
};

/// I(mu) = w^T D w.
double energy(const DiscreteSignedMeasure& mu);

/// I(mu, nu) = w_mu^T D w_nu, also the functional J(mu) evaluated at nu.
/// Throws Error(SpaceMismatch) if the measures live on different spaces.
double cross_energy(const DiscreteSignedMeasure& mu, const DiscreteSignedMeasure& nu);

/// d_mu = D w, i.e. T(mu).
Eigen::VectorXd potential(const DiscreteSignedMeasure& mu);

/// Total variation mu_plus(X) + mu_minus(X).
double measure_norm(const DiscreteSignedMeasure& mu);

struct Seminorm {
  double value = 0.0;
  /// Positive I(mu) absorbed by the clamp at zero (0 when I(mu) <= 0).
  double clamped = 0.0;
};

/// [-I(mu)]^{1/2} on mass-zero measures. Positive I(mu) up to
/// `positive_tolerance` is treated as roundoff and clamped; beyond it the
/// space cannot be quasihypermetric and Error(PositiveEnergy) is thrown.
/// Error(NotMassZero) if |mu(X)| > 1e-10 * max(1, |mu|_M).
Seminorm seminorm0(const DiscreteSignedMeasure& mu, double positive_tolerance);

/// Same, with the tolerance max(abs_floor, rel_eig_zero * D(X) * |mu|_M^2).
Seminorm seminorm0(const DiscreteSignedMeasure& mu, const ToleranceConfig& tol = {});

/// (M + 1) mu(X) nu(X) - I(mu, nu); M must be the finite M(X) of the space.
double inner_product_E(const DiscreteSignedMeasure& mu, const DiscreteSignedMeasure& nu,
                       double m_value);

struct SequenceRow {
  Eigen::Index index = 0;    // the x_n point
  double distance = 0.0;     // c_n = d(x, x_n)
  double seminorm = 0.0;     // |mu_n| in E_0(X), evaluated from the measure
  double seminorm_sq = 0.0;  // -I(mu_n)
  double measure_norm = 0.0;
};

/// For mu_n = c_n^{-1/3} (delta_x - delta_{x_n}) evaluates the E_0 seminorm
/// and the measure norm. In closed form these are (2 c_n^{1/3})^{1/2} and
/// 2 c_n^{-1/3}: the first tends to 0 while the second blows up.
/// Throws Error(ZeroDistance) if some x_n coincides with x.
std::vector<SequenceRow> topology_sequence(const MetricSpace& space, Eigen::Index x_index,
                                           const std::vector<Eigen::Index>& xn_indices);

}  // namespace metric_energy
