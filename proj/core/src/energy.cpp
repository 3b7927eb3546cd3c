#include "metric_energy/energy.hpp"

#include <cmath>
#include <string>

#include "metric_energy/error.hpp"

namespace metric_energy {

namespace {

void require_same_space(const DiscreteSignedMeasure& mu, const DiscreteSignedMeasure& nu) {
  if (!mu.space().same_as(nu.space())) {
    throw Error(ErrorCode::SpaceMismatch, "measures live on different spaces");
  }
}

}  // namespace

DiscreteSignedMeasure::DiscreteSignedMeasure(MetricSpace space, Eigen::VectorXd weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
  if (weights_.size() != space_.size()) {
    throw Error(ErrorCode::BadParameter,
                "measure has " + std::to_string(weights_.size()) + " weights for " +
                    std::to_string(space_.size()) + " points");
  }
  if (!weights_.allFinite()) throw Error(ErrorCode::BadParameter, "measure weights must be finite");
}

DiscreteSignedMeasure DiscreteSignedMeasure::zero(const MetricSpace& space) {
  return {space, Eigen::VectorXd::Zero(space.size())};
}

DiscreteSignedMeasure DiscreteSignedMeasure::point(const MetricSpace& space, Eigen::Index i) {
  if (i < 0 || i >= space.size()) throw Error(ErrorCode::BadParameter, "point index out of range");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(space.size());
  w[i] = 1.0;
  return {space, std::move(w)};
}

DiscreteSignedMeasure DiscreteSignedMeasure::uniform(const MetricSpace& space) {
  return {space, Eigen::VectorXd::Constant(space.size(), 1.0 / static_cast<double>(space.size()))};
}

std::pair<DiscreteSignedMeasure, DiscreteSignedMeasure> DiscreteSignedMeasure::hahn_jordan() const {
  return {DiscreteSignedMeasure(space_, weights_.cwiseMax(0.0)),
          DiscreteSignedMeasure(space_, (-weights_).cwiseMax(0.0))};
}

DiscreteSignedMeasure DiscreteSignedMeasure::operator+(const DiscreteSignedMeasure& other) const {
  require_same_space(*this, other);
  return {space_, weights_ + other.weights_};
}

DiscreteSignedMeasure DiscreteSignedMeasure::operator-(const DiscreteSignedMeasure& other) const {
  require_same_space(*this, other);
  return {space_, weights_ - other.weights_};
}

DiscreteSignedMeasure DiscreteSignedMeasure::operator*(double s) const {
  return {space_, weights_ * s};
}

double energy(const DiscreteSignedMeasure& mu) {
  return mu.weights().dot(mu.space().dist() * mu.weights());
}

double cross_energy(const DiscreteSignedMeasure& mu, const DiscreteSignedMeasure& nu) {
  require_same_space(mu, nu);
  // Pairwise sum so that swapping the arguments gives the same bits.
  const Eigen::MatrixXd& d = mu.space().dist();
  const Eigen::VectorXd& a = mu.weights();
  const Eigen::VectorXd& b = nu.weights();
  double total = 0.0;
  for (Eigen::Index j = 1; j < d.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) total += d(i, j) * (a[i] * b[j] + a[j] * b[i]);
  }
  return total;
}

Eigen::VectorXd potential(const DiscreteSignedMeasure& mu) {
  return mu.space().dist() * mu.weights();
}

double measure_norm(const DiscreteSignedMeasure& mu) {
  return mu.weights().cwiseAbs().sum();
}

Seminorm seminorm0(const DiscreteSignedMeasure& mu, double positive_tolerance) {
  const double total_variation = measure_norm(mu);
  if (std::abs(mu.mass()) > 1e-10 * std::max(1.0, total_variation)) {
    throw Error(ErrorCode::NotMassZero, "seminorm0 needs a mass-zero measure", {}, {mu.mass()});
  }
  const double e = energy(mu);
  if (e > positive_tolerance) {
    throw Error(ErrorCode::PositiveEnergy,
                "I(mu) = " + std::to_string(e) + " > 0 on a mass-zero measure", {}, {e});
  }
  Seminorm out;
  if (e > 0.0) {
    out.clamped = e;
    return out;
  }
  out.value = std::sqrt(-e);
  return out;
}

Seminorm seminorm0(const DiscreteSignedMeasure& mu, const ToleranceConfig& tol) {
  const double tv = measure_norm(mu);
  return seminorm0(mu, tol.zero_threshold(mu.space().diameter() * tv * tv));
}

double inner_product_E(const DiscreteSignedMeasure& mu, const DiscreteSignedMeasure& nu,
                       double m_value) {
  return (m_value + 1.0) * mu.mass() * nu.mass() - cross_energy(mu, nu);
}

std::vector<SequenceRow> topology_sequence(const MetricSpace& space, Eigen::Index x_index,
                                           const std::vector<Eigen::Index>& xn_indices) {
  if (x_index < 0 || x_index >= space.size()) {
    throw Error(ErrorCode::BadParameter, "x index out of range");
  }
  std::vector<SequenceRow> rows;
  rows.reserve(xn_indices.size());
  for (const Eigen::Index xn : xn_indices) {
    if (xn < 0 || xn >= space.size()) throw Error(ErrorCode::BadParameter, "x_n index out of range");
    const double c = space.dist(x_index, xn);
    if (!(c > 0.0)) {
      throw Error(ErrorCode::ZeroDistance, "d(x, x_n) = 0",
                  {static_cast<std::size_t>(x_index), static_cast<std::size_t>(xn)});
    }
    const double scale = 1.0 / std::cbrt(c);
    const auto mu = (DiscreteSignedMeasure::point(space, x_index) -
                     DiscreteSignedMeasure::point(space, xn)) * scale;
    SequenceRow row;
    row.index = xn;
    row.distance = c;
    row.seminorm_sq = -energy(mu);
    row.seminorm = std::sqrt(row.seminorm_sq);
    row.measure_norm = measure_norm(mu);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace metric_energy
