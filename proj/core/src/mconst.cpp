#include "metric_energy/mconst.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/LU>
#include <string>

#include "metric_energy/error.hpp"
#include "metric_energy/sampling.hpp"

namespace metric_energy {

namespace {

const NegativeTypeReport& require_classification(const MResult& m) {
  if (!m.classification) {
    throw Error(ErrorCode::BadParameter, "MResult carries no classification");
  }
  return *m.classification;
}

// Pairs of probability measures used to probe the Lipschitz behaviour of I:
// independent draws, pairs of point masses, and small perturbations.
std::pair<Eigen::VectorXd, Eigen::VectorXd> probability_pair(Sampler& sampler, Eigen::Index n,
                                                             int kind) {
  switch (kind % 3) {
    case 0: {
      Eigen::VectorXd a = sampler.probability(n);
      Eigen::VectorXd b = sampler.probability(n);
      return {a, b};
    }
    case 1: {
      Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
      Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
      a[sampler.index(n)] = 1.0;
      b[sampler.index(n)] = 1.0;
      return {a, b};
    }
    default: {
      Eigen::VectorXd a = sampler.probability(n);
      const double t = sampler.uniform(0.0, 0.2);
      Eigen::VectorXd b = (1.0 - t) * a + t * sampler.probability(n);
      return {a, b};
    }
  }
}

// Solves the stationarity system D_SS w = lambda 1, sum w = 1 on the support S
// of a Frank-Wolfe iterate. Frank-Wolfe pins the value quickly but the weights
// only to about sqrt(gap), so an exact solve on the right support sharpens them.
std::optional<Eigen::VectorXd> polish_on_support(const Eigen::MatrixXd& d, const Eigen::VectorXd& w,
                                                 double cutoff) {
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i] > cutoff) support.push_back(i);
  }
  const auto k = static_cast<Eigen::Index>(support.size());
  if (k == 0) return std::nullopt;
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) kkt(r, c) = d(support[r], support[c]);
    kkt(r, k) = -1.0;
    kkt(k, r) = 1.0;
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs[k] = 1.0;
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
  if (!lu.isInvertible()) return std::nullopt;
  const Eigen::VectorXd sol = lu.solve(rhs);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(w.size());
  for (Eigen::Index r = 0; r < k; ++r) {
    if (!(sol[r] >= 0.0)) return std::nullopt;
    out[support[r]] = sol[r];
  }
  return out;
}

}  // namespace

std::string_view to_string(MStatus status) {
  switch (status) {
    case MStatus::InfiniteNotQhm: return "InfiniteNotQhm";
    case MStatus::InfiniteConstantPotential: return "InfiniteConstantPotential";
    case MStatus::Finite: return "Finite";
  }
  return "Unknown";
}

MResult compute_M(const MetricSpace& space, const ToleranceConfig& tol) {
  return compute_M(space, std::make_shared<const NegativeTypeReport>(classify_negative_type(space, tol)));
}

MResult compute_M(const MetricSpace& space, std::shared_ptr<const NegativeTypeReport> report) {
  MResult out;
  out.classification = report;
  out.zero_threshold = report->zero_threshold;
  out.f_dim = report->f_dim;
  const Eigen::Index n = space.size();

  if (!report->is_qhm) {
    out.status = MStatus::InfiniteNotQhm;
    out.witness = DiscreteSignedMeasure(space, *report->violation_witness);
    return out;
  }

  // c_v is linear in v, so the F-direction with the largest constant is
  // sum_k c_k f_k.
  if (report->f_dim > 0) {
    Eigen::VectorXd c(report->f_dim);
    for (Eigen::Index k = 0; k < report->f_dim; ++k) {
      c[k] = report->constant_potentials[static_cast<std::size_t>(k)].value;
    }
    if (c.cwiseAbs().maxCoeff() > report->zero_threshold) {
      Eigen::VectorXd v = report->f_basis * (c / c.norm());
      out.status = MStatus::InfiniteConstantPotential;
      out.witness_constant = (space.dist() * v).mean();
      out.witness = DiscreteSignedMeasure(space, std::move(v));
      return out;
    }
  }

  out.status = MStatus::Finite;
  if (n == 1) {
    out.value = 0.0;
    out.lambda = 0.0;
    out.maximizer = DiscreteSignedMeasure::point(space, 0);
    return out;
  }

  // mu = ones/n + Q y:  I(mu) = c0 + 2 g^T y - y^T A y  with A = -Q^T D Q.
  const Eigen::MatrixXd& q = report->mass_zero_basis;
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  const Eigen::VectorXd b = space.dist() * u;
  const double c0 = u.dot(b);
  const Eigen::VectorXd g = q.transpose() * b;
  const SpectralDecomposition a = report->projected_form.negated();
  const PinvSolution sol = pinv_apply(a, g);
  if (!sol.in_range) {
    throw Error(ErrorCode::InconsistentClassification,
                "gradient has a null-space component although no constant-potential "
                "direction was found",
                {}, {sol.residual, report->zero_threshold});
  }
  out.pinv_residual = sol.residual;
  Eigen::VectorXd w = u + q * sol.x;
  out.value = c0 + g.dot(sol.x);
  out.lambda = (space.dist() * w).mean();
  out.maximizer = DiscreteSignedMeasure(space, std::move(w));
  return out;
}

MPlusResult compute_M_plus(const MetricSpace& space, int max_iters, double gap_tolerance) {
  const Eigen::Index n = space.size();
  const Eigen::MatrixXd& d = space.dist();
  MPlusResult out;
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  Eigen::VectorXd g = d * w;  // half the gradient of w^T D w
  double f = w.dot(g);

  auto fw_gap = [&](Eigen::Index& s) {
    g.maxCoeff(&s);
    return 2.0 * (g[s] - f);
  };

  int it = 0;
  Eigen::Index s = 0;
  double gap = fw_gap(s);
  for (; it < max_iters && gap > gap_tolerance; ++it) {
    Eigen::Index a = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (w[i] > 0.0 && (a < 0 || g[i] < g[a])) a = i;
    }
    const double away_gap = 2.0 * (f - g[a]);

    Eigen::VectorXd dd;  // D times the step direction
    double slope = 0.0;  // direction^T g
    double curvature = 0.0;  // direction^T D direction
    double gamma_max = 1.0;
    const bool toward = gap >= away_gap || w[a] >= 1.0;
    if (toward) {
      dd = d.col(s) - g;
      slope = g[s] - f;
      curvature = d(s, s) - 2.0 * g[s] + f;
    } else {
      dd = g - d.col(a);
      slope = f - g[a];
      curvature = f - 2.0 * g[a] + d(a, a);
      gamma_max = w[a] / (1.0 - w[a]);
    }
    double gamma = gamma_max;
    if (curvature < 0.0) gamma = std::min(gamma_max, -slope / curvature);

    if (toward) {
      w *= (1.0 - gamma);
      w[s] += gamma;
    } else {
      w *= (1.0 + gamma);
      w[a] -= gamma;
      if (gamma == gamma_max) w[a] = 0.0;
    }
    g += gamma * dd;
    if ((it + 1) % 64 == 0) g = d * w;
    f = w.dot(g);
    gap = fw_gap(s);
  }
  g = d * w;
  f = w.dot(g);
  gap = fw_gap(s);
  for (const double cutoff : {1e-3, 1e-6, 1e-9}) {
    const auto polished = polish_on_support(d, w, cutoff);
    if (!polished) continue;
    const Eigen::VectorXd pg = d * *polished;
    const double pf = polished->dot(pg);
    Eigen::Index ps = 0;
    pg.maxCoeff(&ps);
    const double pgap = 2.0 * (pg[ps] - pf);
    if (pf >= f - 1e-15 * std::abs(f) && pgap <= gap) {
      w = *polished;
      g = pg;
      f = pf;
      gap = pgap;
      break;
    }
  }
  out.value = f;
  out.gap = gap;
  out.weights = std::move(w);
  out.iterations = it;
  return out;
}

OperatorConstants operator_constants(const MetricSpace& space, const MResult& m,
                                     std::uint64_t seed, int lip_samples) {
  if (!m.is_finite()) throw Error(ErrorCode::NotFinite, "operator constants need a finite M(X)");
  const NegativeTypeReport& report = require_classification(m);
  const Eigen::Index n = space.size();
  const Eigen::MatrixXd& d = space.dist();
  OperatorConstants out;
  const double mv = *m.value;
  out.c_potential = mv + 1.0 + std::sqrt(mv + 1.0);
  if (n == 1) return out;

  const SpectralDecomposition a = report.projected_form.negated();
  const Eigen::MatrixXd& q = report.mass_zero_basis;
  double k_sq = 0.0;
  for (Eigen::Index x = 0; x < n; ++x) {
    const Eigen::VectorXd g = q.transpose() * d.col(x);
    const double val = g.dot(pinv_apply(a, g).x);
    if (val > k_sq) {
      k_sq = val;
      out.k_argmax = x;
    }
  }
  out.k = std::sqrt(k_sq);
  out.c_t = out.k;

  Sampler sampler(seed);
  for (int t = 0; t < lip_samples; ++t) {
    const auto [mu1, mu2] = probability_pair(sampler, n, t);
    const Eigen::VectorXd nu = mu1 - mu2;
    const double tv = nu.cwiseAbs().sum();
    const double norm_sq = -nu.dot(d * nu);
    if (!(norm_sq > report.zero_threshold * space.diameter() * tv * tv)) continue;
    const double di = mu1.dot(d * mu1) - mu2.dot(d * mu2);
    out.c_lip = std::max(out.c_lip, std::abs(di) / std::sqrt(norm_sq));
    ++out.lip_samples;
  }
  return out;
}

std::vector<WitnessStep> divergence_witness(const MetricSpace& space, const MResult& m, int steps) {
  if (m.is_finite()) throw Error(ErrorCode::WrongStatus, "divergence witness needs an infinite M(X)");
  if (!m.witness) throw Error(ErrorCode::BadParameter, "MResult carries no witness");
  if (steps < 1) throw Error(ErrorCode::BadParameter, "steps must be >= 1");
  const Eigen::MatrixXd& d = space.dist();
  const Eigen::VectorXd& w = m.witness->weights();
  std::vector<WitnessStep> out;

  if (m.status == MStatus::InfiniteNotQhm) {
    // Orient w so that d_w(x) >= 0 at the anchor point; then every term of
    // n^2 I(w) + 2 n d_w(x) is nonnegative and the sequence increases.
    const Eigen::VectorXd pot = d * w;
    Eigen::Index hi = 0, lo = 0;
    pot.maxCoeff(&hi);
    pot.minCoeff(&lo);
    const bool flip = pot[hi] < -pot[lo];
    const Eigen::Index x = flip ? lo : hi;
    const Eigen::VectorXd dir = flip ? Eigen::VectorXd(-w) : w;
    const double iw = w.dot(d * w);
    const double dwx = flip ? -pot[lo] : pot[hi];
    for (int k = 1; k <= steps; ++k) {
      Eigen::VectorXd mu = static_cast<double>(k) * dir;
      mu[x] += 1.0;
      DiscreteSignedMeasure measure(space, std::move(mu));
      const double e = energy(measure);
      const double kk = static_cast<double>(k);
      out.push_back({k, std::move(measure), e, kk * kk * iw + 2.0 * kk * dwx});
    }
    return out;
  }

  const auto [plus, minus] = m.witness->hahn_jordan();
  const Eigen::VectorXd mu1 = plus.weights() / plus.weights().sum();
  const Eigen::VectorXd mu2 = minus.weights() / minus.weights().sum();
  const Eigen::VectorXd diff = mu1 - mu2;
  const double kconst = (d * diff).mean();
  const double sign = kconst >= 0.0 ? 1.0 : -1.0;
  const double i_mu2 = mu2.dot(d * mu2);
  for (int k = 1; k <= steps; ++k) {
    const double kk = static_cast<double>(k);
    DiscreteSignedMeasure measure(space, kk * sign * diff + mu2);
    const double e = energy(measure);
    out.push_back({k, std::move(measure), e, 2.0 * kk * std::abs(kconst) + i_mu2});
  }
  return out;
}

MaximizerCertificate certify_maximizer(const DiscreteSignedMeasure& candidate,
                                       const ToleranceConfig& tol) {
  return certify_maximizer(candidate, classify_negative_type(candidate.space(), tol));
}

MaximizerCertificate certify_maximizer(const DiscreteSignedMeasure& candidate,
                                       const NegativeTypeReport& report) {
  MaximizerCertificate out;
  out.mass_error = std::abs(candidate.mass() - 1.0);
  if (out.mass_error > 1e-10 * std::max(1.0, measure_norm(candidate))) {
    throw Error(ErrorCode::NotMassOne, "candidate must have mass one", {}, {candidate.mass()});
  }
  const Eigen::VectorXd pot = potential(candidate);
  out.lambda = pot.mean();
  out.potential_deviation = (pot.array() - out.lambda).abs().maxCoeff();
  out.stationarity_tolerance = 1e-8 * (1.0 + candidate.space().diameter());
  out.is_stationary = out.potential_deviation <= out.stationarity_tolerance;
  out.is_global = out.is_stationary && report.is_qhm;
  return out;
}

StrengthenedQhmReport strengthened_qhm_check(const MetricSpace& space, const MResult& m,
                                             std::uint64_t seed, int trials,
                                             std::optional<OperatorConstants> constants) {
  if (!m.is_finite()) throw Error(ErrorCode::NotFinite, "strengthened check needs a finite M(X)");
  if (!constants) constants = operator_constants(space, m, seed);
  const Eigen::Index n = space.size();
  const Eigen::MatrixXd& d = space.dist();
  const double diam = std::max(space.diameter(), std::numeric_limits<double>::min());

  StrengthenedQhmReport out;
  out.samples = trials;
  out.c_lip = constants->c_lip;
  out.l_sqrt_infimum = std::numeric_limits<double>::infinity();
  out.l_squared_infimum = std::numeric_limits<double>::infinity();
  out.squared_form_worst = -std::numeric_limits<double>::infinity();
  // I(mu_1) - I(mu_2) = I(mu_1, nu) + I(mu_2, nu) with each term at most
  // K |nu|, so 2K is a proven Lipschitz constant. The sampled c_lip only
  // bounds the best one from below, so the squared form is asserted with 2K.
  const double lip = 2.0 * constants->k;
  out.squared_form_holds = true;

  Sampler sampler(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int t = 0; t < trials; ++t) {
    const auto [mu1, mu2] = probability_pair(sampler, n, t);
    const Eigen::VectorXd nu = mu1 - mu2;
    const double tv = nu.cwiseAbs().sum();
    const double i_nu = nu.dot(d * nu);
    const double di = std::abs(mu1.dot(d * mu1) - mu2.dot(d * mu2));
    const double slack = 1e-9 * diam * std::max(tv * tv, 1e-300);
    if (lip > 0.0) {
      const double sq = i_nu + di * di / (lip * lip);
      out.squared_form_worst = std::max(out.squared_form_worst, sq);
      if (sq > slack) out.squared_form_holds = false;
    }
    if (di > 1e-12 * diam) {
      ++out.informative_samples;
      out.l_sqrt_infimum = std::min(out.l_sqrt_infimum, -i_nu / std::sqrt(di));
      out.l_squared_infimum = std::min(out.l_squared_infimum, -i_nu / (di * di));
    }
  }
  if (trials == 0) out.squared_form_worst = 0.0;
  return out;
}

}  // namespace metric_energy
