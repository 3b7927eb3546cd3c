#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace metric_energy {

enum class SpaceKind { matrix, interval, circle, sphere, lp_cloud, random };

std::string_view to_string(SpaceKind kind);

struct MatrixParams {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
};
struct IntervalParams {
  double a = 0.0;
  double b = 1.0;
  int n = 2;
};
struct CircleParams {
  int n = 2;
};
struct SphereParams {
  int n = 2;
  int dim = 2;
};
struct LpCloudParams {
  std::vector<std::vector<double>> coords;
  double p = 2.0;  // +infinity selects the max-norm
};
struct RandomParams {
  int n = 2;
  std::uint64_t seed = 0;
};

/// How a space was (or is to be) built. The kind is the active alternative.
struct SpaceDescriptor {
  std::variant<MatrixParams, IntervalParams, CircleParams, SphereParams, LpCloudParams,
               RandomParams>
      params;

  SpaceKind kind() const { return static_cast<SpaceKind>(params.index()); }
};

/// A validated finite metric space. Immutable; copies share storage.
class MetricSpace {
 public:
  Eigen::Index size() const { return data_->dist.rows(); }
  const Eigen::MatrixXd& dist() const { return data_->dist; }
  double dist(Eigen::Index i, Eigen::Index j) const { return data_->dist(i, j); }
  const std::vector<std::string>& labels() const { return data_->labels; }
  const SpaceDescriptor& provenance() const { return data_->provenance; }

  /// D(X), the largest pairwise distance (0 for a single point).
  double diameter() const { return data_->diameter; }

  /// A pair (i, j) attaining the diameter; (0, 0) for a single point.
  std::pair<Eigen::Index, Eigen::Index> diameter_pair() const { return data_->diameter_pair; }

  /// 16 hex digits of FNV-1a over the point count and the raw distance
  /// bytes. Guards measure files against being applied to the wrong space.
  const std::string& hash() const { return data_->hash; }

  /// True if both objects carry bit-identical distance matrices.
  bool same_as(const MetricSpace& other) const;

  /// The subspace on the given points, in the given order.
  MetricSpace restrict_to(const std::vector<Eigen::Index>& indices) const;

  /// The same points with every distance multiplied by s > 0.
  MetricSpace scaled(double s) const;

 private:
  struct Data {
    Eigen::MatrixXd dist;
    std::vector<std::string> labels;
    SpaceDescriptor provenance;
    double diameter = 0.0;
    std::pair<Eigen::Index, Eigen::Index> diameter_pair{0, 0};
    std::string hash;
  };
  explicit MetricSpace(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;

  friend MetricSpace make_space(Eigen::MatrixXd dist, std::vector<std::string> labels,
                                SpaceDescriptor provenance);
};

/// Checks every metric axiom and returns the space, or throws Error with
/// NotSquare, NotSymmetric(i,j), NonzeroDiagonal(i), NonpositiveOffDiagonal(i,j)
/// or TriangleViolation(i,j,k) carrying d(i,j), d(i,k), d(k,j). Symmetry is
/// exact; the triangle inequality allows 1e-12 additive slack.
MetricSpace validate_metric(const Eigen::MatrixXd& matrix,
                            std::vector<std::string> labels = {},
                            std::optional<SpaceDescriptor> provenance = std::nullopt);

/// n equally spaced points a = x_0 < ... < x_{n-1} = b with |x_i - x_j|.
MetricSpace interval_grid(double a, double b, int n);

/// n points at angles 2*pi*k/n on the unit circle with arc-length distance.
MetricSpace circle_grid(int n);

/// n Fibonacci-lattice points on the unit sphere S^2, great-circle metric.
/// Only dim = 2 is supported.
MetricSpace sphere_grid(int n, int dim = 2);

/// Great-circle metric on arbitrary points of a unit sphere (each row is
/// renormalised to unit length).
MetricSpace great_circle_space(const std::vector<std::vector<double>>& points);

/// p-norm distances between the given points; p = infinity is the max-norm.
MetricSpace lp_cloud(const std::vector<std::vector<double>>& coords, double p);

/// Off-diagonal entries i.i.d. uniform on [1, 2], so the triangle inequality
/// holds unconditionally. Reproducible for a fixed seed.
MetricSpace random_metric(int n, std::uint64_t seed);

/// Builds the space a descriptor describes.
MetricSpace build_space(const SpaceDescriptor& descriptor);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace metric_energy
