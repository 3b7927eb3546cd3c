#include "metric_energy/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <sstream>
#include <iomanip>

#include "metric_energy/error.hpp"

namespace metric_energy {

namespace {

std::string fnv1a_hash(const Eigen::MatrixXd& dist) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* bytes, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(bytes);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  const std::uint64_t n = static_cast<std::uint64_t>(dist.rows());
  mix(&n, sizeof n);
  mix(dist.data(), static_cast<std::size_t>(dist.size()) * sizeof(double));
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::vector<std::string> default_labels(Eigen::Index n) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
  return labels;
}

MatrixParams matrix_params(const Eigen::MatrixXd& m, std::vector<std::string> labels) {
  MatrixParams params;
  params.labels = std::move(labels);
  params.rows.resize(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto& row = params.rows[static_cast<std::size_t>(i)];
    row.resize(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
  }
  return params;
}

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementation.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::string_view to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::matrix: return "matrix";
    case SpaceKind::interval: return "interval";
    case SpaceKind::circle: return "circle";
    case SpaceKind::sphere: return "sphere";
    case SpaceKind::lp_cloud: return "lp_cloud";
    case SpaceKind::random: return "random";
  }
  return "unknown";
}

MetricSpace make_space(Eigen::MatrixXd dist, std::vector<std::string> labels,
                       SpaceDescriptor provenance) {
  auto data = std::make_shared<MetricSpace::Data>();
  const Eigen::Index n = dist.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (dist(i, j) > data->diameter) {
        data->diameter = dist(i, j);
        data->diameter_pair = {i, j};
      }
    }
  }
  data->hash = fnv1a_hash(dist);
  data->dist = std::move(dist);
  data->labels = labels.empty() ? default_labels(n) : std::move(labels);
  data->provenance = std::move(provenance);
  return MetricSpace(std::move(data));
}

bool MetricSpace::same_as(const MetricSpace& other) const {
  return data_ == other.data_ ||
         (size() == other.size() && dist() == other.dist());
}

MetricSpace MetricSpace::restrict_to(const std::vector<Eigen::Index>& indices) const {
  const auto m = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd sub(m, m);
  std::vector<std::string> sub_labels;
  for (Eigen::Index a = 0; a < m; ++a) {
    const Eigen::Index i = indices[static_cast<std::size_t>(a)];
    if (i < 0 || i >= size()) throw Error(ErrorCode::BadParameter, "restrict_to: index out of range");
    sub_labels.push_back(labels()[static_cast<std::size_t>(i)]);
    for (Eigen::Index b = 0; b < m; ++b) sub(a, b) = dist(i, indices[static_cast<std::size_t>(b)]);
  }
  return validate_metric(sub, std::move(sub_labels));
}

MetricSpace MetricSpace::scaled(double s) const {
  if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorCode::BadParameter, "scale must be positive");
  return validate_metric(dist() * s, labels());
}

MetricSpace validate_metric(const Eigen::MatrixXd& matrix, std::vector<std::string> labels,
                            std::optional<SpaceDescriptor> provenance) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw Error(ErrorCode::NotSquare, "distance matrix must be square and non-empty");
  }
  const Eigen::Index n = matrix.rows();
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != n) {
    throw Error(ErrorCode::BadParameter, "label count does not match point count");
  }
  auto idx = [](Eigen::Index i) { return static_cast<std::size_t>(i); };
  for (Eigen::Index i = 0; i < n; ++i) {
    if (matrix(i, i) != 0.0) {
      throw Error(ErrorCode::NonzeroDiagonal, "d(" + std::to_string(i) + "," + std::to_string(i) + ") != 0",
                  {idx(i)}, {matrix(i, i)});
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (matrix(i, j) != matrix(j, i)) {
        throw Error(ErrorCode::NotSymmetric,
                    "d(" + std::to_string(i) + "," + std::to_string(j) + ") != d(" +
                        std::to_string(j) + "," + std::to_string(i) + ")",
                    {idx(i), idx(j)}, {matrix(i, j), matrix(j, i)});
      }
      if (!(matrix(i, j) > 0.0) || !std::isfinite(matrix(i, j))) {
        throw Error(ErrorCode::NonpositiveOffDiagonal,
                    "d(" + std::to_string(i) + "," + std::to_string(j) + ") must be positive and finite",
                    {idx(i), idx(j)}, {matrix(i, j)});
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (matrix(i, j) > matrix(i, k) + matrix(k, j) + 1e-12) {
          throw Error(ErrorCode::TriangleViolation,
                      "d(" + std::to_string(i) + "," + std::to_string(j) + ") > d(" +
                          std::to_string(i) + "," + std::to_string(k) + ") + d(" +
                          std::to_string(k) + "," + std::to_string(j) + ")",
                      {idx(i), idx(j), idx(k)},
                      {matrix(i, j), matrix(i, k), matrix(k, j)});
        }
      }
    }
  }
  SpaceDescriptor prov = provenance ? std::move(*provenance)
                                    : SpaceDescriptor{matrix_params(matrix, labels)};
  return make_space(matrix, std::move(labels), std::move(prov));
}

MetricSpace interval_grid(double a, double b, int n) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::BadRange, "interval needs a < b", {}, {a, b});
  }
  if (n < 2) throw Error(ErrorCode::BadParameter, "interval grid needs n >= 2");
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(i)] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  x.back() = b;
  Eigen::MatrixXd d(n, n);
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) {
    std::ostringstream os;
    os << std::setprecision(17) << x[static_cast<std::size_t>(i)];
    labels.push_back(os.str());
    for (int j = 0; j < n; ++j) d(i, j) = std::abs(x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)]);
  }
  return validate_metric(d, std::move(labels), SpaceDescriptor{IntervalParams{a, b, n}});
}

MetricSpace circle_grid(int n) {
  if (n < 2) throw Error(ErrorCode::BadParameter, "circle grid needs n >= 2");
  constexpr double pi = std::numbers::pi;
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // Steps along the shorter arc, computed in integers so antipodal and
      // mirrored pairs get bit-identical distances.
      const int diff = std::abs(i - j);
      const int steps = std::min(diff, n - diff);
      d(i, j) = 2.0 * pi * static_cast<double>(steps) / static_cast<double>(n);
    }
  }
  return validate_metric(d, {}, SpaceDescriptor{CircleParams{n}});
}

MetricSpace great_circle_space(const std::vector<std::vector<double>>& points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  if (n < 1) throw Error(ErrorCode::BadParameter, "need at least one point");
  std::vector<Eigen::VectorXd> unit;
  for (const auto& p : points) {
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
    if (v.size() != static_cast<Eigen::Index>(points.front().size()) || v.norm() == 0.0) {
      throw Error(ErrorCode::BadParameter, "sphere points need equal nonzero dimension");
    }
    unit.push_back(v / v.norm());
  }
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double c = std::clamp(unit[static_cast<std::size_t>(i)].dot(unit[static_cast<std::size_t>(j)]), -1.0, 1.0);
      d(i, j) = d(j, i) = std::acos(c);
    }
  }
  return validate_metric(d);
}

MetricSpace sphere_grid(int n, int dim) {
  if (n < 2) throw Error(ErrorCode::BadParameter, "sphere grid needs n >= 2");
  if (dim != 2) throw Error(ErrorCode::BadParameter, "sphere grid supports dim = 2 only");
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * static_cast<double>(i);
    pts.push_back({r * std::cos(phi), r * std::sin(phi), z});
  }
  const MetricSpace s = great_circle_space(pts);
  return validate_metric(s.dist(), {}, SpaceDescriptor{SphereParams{n, dim}});
}

MetricSpace lp_cloud(const std::vector<std::vector<double>>& coords, double p) {
  if (coords.empty()) throw Error(ErrorCode::BadParameter, "lp cloud needs m >= 1 points");
  const std::size_t k = coords.front().size();
  if (k == 0) throw Error(ErrorCode::BadParameter, "lp cloud needs k >= 1 coordinates");
  for (const auto& c : coords) {
    if (c.size() != k) throw Error(ErrorCode::BadParameter, "lp cloud points need equal dimension");
  }
  if (!(p >= 1.0)) throw Error(ErrorCode::BadParameter, "lp cloud needs p >= 1", {}, {p});
  const auto m = static_cast<Eigen::Index>(coords.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const auto& x = coords[static_cast<std::size_t>(i)];
      const auto& y = coords[static_cast<std::size_t>(j)];
      double acc = 0.0;
      for (std::size_t t = 0; t < k; ++t) {
        const double diff = std::abs(x[t] - y[t]);
        if (std::isinf(p)) {
          acc = std::max(acc, diff);
        } else if (p == 1.0) {
          acc += diff;
        } else if (p == 2.0) {
          acc += diff * diff;
        } else {
          acc += std::pow(diff, p);
        }
      }
      if (!std::isinf(p) && p != 1.0) acc = (p == 2.0) ? std::sqrt(acc) : std::pow(acc, 1.0 / p);
      if (acc == 0.0) {
        throw Error(ErrorCode::DuplicatePoints,
                    "points " + std::to_string(i) + " and " + std::to_string(j) + " coincide",
                    {static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
      }
      d(i, j) = d(j, i) = acc;
    }
  }
  return validate_metric(d, {}, SpaceDescriptor{LpCloudParams{coords, p}});
}

MetricSpace random_metric(int n, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::BadParameter, "random metric needs n >= 2");
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i) = 1.0 + unit_uniform(rng);
  }
  return validate_metric(d, {}, SpaceDescriptor{RandomParams{n, seed}});
}

MetricSpace build_space(const SpaceDescriptor& descriptor) {
  struct Visitor {
    MetricSpace operator()(const MatrixParams& m) const {
      const auto n = static_cast<Eigen::Index>(m.rows.size());
      Eigen::MatrixXd d(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = m.rows[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(row.size()) != n) {
          throw Error(ErrorCode::NotSquare, "row " + std::to_string(i) + " has wrong length");
        }
        for (Eigen::Index j = 0; j < n; ++j) d(i, j) = row[static_cast<std::size_t>(j)];
      }
      return validate_metric(d, m.labels);
    }
    MetricSpace operator()(const IntervalParams& p) const { return interval_grid(p.a, p.b, p.n); }
    MetricSpace operator()(const CircleParams& p) const { return circle_grid(p.n); }
    MetricSpace operator()(const SphereParams& p) const { return sphere_grid(p.n, p.dim); }
    MetricSpace operator()(const LpCloudParams& p) const { return lp_cloud(p.coords, p.p); }
    MetricSpace operator()(const RandomParams& p) const { return random_metric(p.n, p.seed); }
  };
  return std::visit(Visitor{}, descriptor.params);
}

}  // namespace metric_energy
