#include "metric_energy/sampling.hpp"

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace metric_energy {

double Sampler::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

double Sampler::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Sampler::normal() {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Eigen::Index Sampler::index(Eigen::Index n) {
  return static_cast<Eigen::Index>(uniform() * static_cast<double>(n));
}

Eigen::VectorXd Sampler::support_mask(Eigen::Index n, Eigen::Index lo) {
  const Eigen::Index k = lo + index(n - lo + 1);
  Eigen::VectorXd mask = Eigen::VectorXd::Zero(n);
  // Partial Fisher-Yates over the index set.
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::Index j = i + index(n - i);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    mask[idx[static_cast<std::size_t>(i)]] = 1.0;
  }
  return mask;
}

Eigen::VectorXd Sampler::mass_zero(Eigen::Index n) {
  if (n < 2) return Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd mask =
      uniform() < 0.5 ? Eigen::VectorXd::Ones(n) : support_mask(n, 2);
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = mask[i] * normal();
  const double mean = w.sum() / mask.sum();
  for (Eigen::Index i = 0; i < n; ++i) w[i] -= mask[i] * mean;
  return w;
}

Eigen::VectorXd Sampler::mass_one(Eigen::Index n) {
  const Eigen::VectorXd base = probability(n);
  const double spread = uniform(0.0, 3.0);
  return base + spread * mass_zero(n);
}

Eigen::VectorXd Sampler::probability(Eigen::Index n) {
  const Eigen::VectorXd mask = support_mask(n, 1);
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = mask[i] * -std::log(1.0 - uniform());
  const double total = w.sum();
  return total > 0.0 ? Eigen::VectorXd(w / total) : Eigen::VectorXd(mask / mask.sum());
}

}  // namespace metric_energy
