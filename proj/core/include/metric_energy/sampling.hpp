#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace metric_energy {

/// Seeded source of random weight vectors. Draws come straight from the raw
/// 64-bit engine output, so sequences are identical across standard library
/// implementations.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform();                 // [0, 1)
  double uniform(double lo, double hi);
  double normal();                  // standard normal, Box-Muller
  Eigen::Index index(Eigen::Index n);  // uniform on {0, ..., n-1}

  /// Random support of size k in [lo, n], returned as a 0/1 mask.
  Eigen::VectorXd support_mask(Eigen::Index n, Eigen::Index lo);

  /// Signed weights summing to zero; dense or on a random support of size >= 2.
  Eigen::VectorXd mass_zero(Eigen::Index n);

  /// Signed weights summing to one.
  Eigen::VectorXd mass_one(Eigen::Index n);

  /// Nonnegative weights summing to one (flat Dirichlet on a random support).
  Eigen::VectorXd probability(Eigen::Index n);

 private:
  std::mt19937_64 rng_;
};

}  // namespace metric_energy
