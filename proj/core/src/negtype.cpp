#include "metric_energy/negtype.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "metric_energy/energy.hpp"
#include "metric_energy/error.hpp"
#include "metric_energy/sampling.hpp"

namespace metric_energy {

namespace {

void normalise_sign(Eigen::VectorXd& v) {
  const double tiny = 1e-12 * v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > tiny) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

}  // namespace

double NegativeTypeReport::max_projected_eigenvalue() const {
  return projected_eigenvalues.size() == 0 ? -std::numeric_limits<double>::infinity()
                                           : projected_eigenvalues[0];
}

NegativeTypeReport classify_negative_type(const MetricSpace& space, const ToleranceConfig& tol) {
  tol.validate();
  const Eigen::Index n = space.size();
  NegativeTypeReport report;
  report.mass_zero_basis = mass_zero_basis(n);

  if (n == 1) {
    // M_0 is {0}: trivially (strictly) quasihypermetric.
    report.is_qhm = true;
    report.is_strict = true;
    report.f_basis = Eigen::MatrixXd::Zero(1, 0);
    report.zero_threshold = tol.abs_floor;
    report.projected_form.zero_threshold = tol.abs_floor;
    return report;
  }

  const Eigen::MatrixXd& q = report.mass_zero_basis;
  Eigen::MatrixXd r = q.transpose() * space.dist() * q;
  r = 0.5 * (r + r.transpose()).eval();
  report.projected_form = sym_eig(r, tol);
  const SpectralDecomposition& dec = report.projected_form;

  report.zero_threshold = dec.zero_threshold;
  report.projected_eigenvalues = dec.eigenvalues;
  report.is_qhm = dec.eigenvalues[0] <= dec.zero_threshold;

  if (!report.is_qhm) {
    Eigen::VectorXd w = q * dec.eigenvectors.col(0);
    w.array() -= w.mean();
    w.normalize();
    normalise_sign(w);
    report.violation_witness = std::move(w);
  }

  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index i = 0; i < dec.dim; ++i) {
    if (std::abs(dec.eigenvalues[i]) <= dec.zero_threshold) null_cols.push_back(i);
  }
  report.f_dim = static_cast<Eigen::Index>(null_cols.size());
  report.f_basis.resize(n, report.f_dim);
  for (Eigen::Index k = 0; k < report.f_dim; ++k) {
    report.f_basis.col(k) = q * dec.eigenvectors.col(null_cols[static_cast<std::size_t>(k)]);
    const Eigen::VectorXd dv = space.dist() * report.f_basis.col(k);
    ConstantPotential cp;
    cp.value = dv.mean();
    cp.residual = (dv.array() - cp.value).abs().maxCoeff();
    report.constant_potentials.push_back(cp);
  }
  if (report.is_qhm) report.is_strict = report.f_dim == 0;
  return report;
}

Embedding schoenberg_embed(const MetricSpace& space, const ToleranceConfig& tol) {
  return schoenberg_embed(space, classify_negative_type(space, tol));
}

Embedding schoenberg_embed(const MetricSpace& space, const NegativeTypeReport& report) {
  if (!report.is_qhm) {
    // Largest eigenvalue of the form restricted to mass zero is positive, so
    // the centred Gram matrix -1/2 P D P has a negative eigenvalue.
    const double gram_negative = -0.5 * report.max_projected_eigenvalue();
    throw Error(ErrorCode::NotQuasihypermetric,
                "centred Gram form has eigenvalue " + std::to_string(gram_negative), {},
                {gram_negative});
  }
  const Eigen::Index n = space.size();
  const SpectralDecomposition& dec = report.projected_form;
  Embedding out;
  out.zero_threshold = 0.5 * dec.zero_threshold;

  // Gram eigenvalue -l/2 is kept when it exceeds half the form threshold;
  // most negative l first gives descending Gram eigenvalues.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = dec.dim - 1; i >= 0; --i) {
    if (-0.5 * dec.eigenvalues[i] > out.zero_threshold) keep.push_back(i);
  }
  out.r = static_cast<Eigen::Index>(keep.size());
  out.coords.resize(n, out.r);
  for (Eigen::Index k = 0; k < out.r; ++k) {
    const Eigen::Index i = keep[static_cast<std::size_t>(k)];
    out.coords.col(k) =
        report.mass_zero_basis * dec.eigenvectors.col(i) * std::sqrt(-0.5 * dec.eigenvalues[i]);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double sq = (out.coords.row(i) - out.coords.row(j)).squaredNorm();
      out.max_roundtrip_error = std::max(out.max_roundtrip_error, std::abs(sq - space.dist(i, j)));
    }
  }
  return out;
}

TOperatorReport t_operator_report(const MetricSpace& space, const ToleranceConfig& tol) {
  const SpectralDecomposition dec = sym_eig(space.dist(), tol);
  const Eigen::Index n = space.size();
  TOperatorReport out;
  out.rank_d = dec.rank();
  out.t_injective = out.rank_d == n;
  out.im_t_dense = out.t_injective;
  out.zero_threshold = dec.zero_threshold;
  out.d_eigenvalues = dec.eigenvalues;
  const Eigen::MatrixXd& d = space.dist();
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = x + 1; y < n; ++y) {
      const double sup = (d.col(x) - d.col(y)).cwiseAbs().maxCoeff();
      out.embedding_max_deviation = std::max(out.embedding_max_deviation, std::abs(sup - d(x, y)));
    }
  }
  return out;
}

std::string condition_label(QhmCondition c) {
  switch (c) {
    case QhmCondition::tuples: return "2";
    case QhmCondition::energy_nonpos: return "3";
    case QhmCondition::cauchy_schwarz: return "4";
    case QhmCondition::midpoint_signed: return "5";
    case QhmCondition::midpoint_prob: return "6";
    case QhmCondition::concave_signed: return "7";
    case QhmCondition::concave_prob: return "8";
    case QhmCondition::convex_signed: return "7'";
    case QhmCondition::convex_prob: return "8'";
  }
  return "?";
}

double tuple_condition_margin(const MetricSpace& space, const std::vector<Eigen::Index>& xs,
                              const std::vector<Eigen::Index>& ys) {
  if (xs.size() != ys.size()) throw Error(ErrorCode::BadParameter, "tuples must have equal length");
  double xx = 0.0, yy = 0.0, xy = 0.0;
  for (const auto i : xs) {
    for (const auto j : xs) xx += space.dist(i, j);
    for (const auto j : ys) xy += space.dist(i, j);
  }
  for (const auto i : ys) {
    for (const auto j : ys) yy += space.dist(i, j);
  }
  return 2.0 * xy - (xx + yy);
}

BatteryReport qhm_equivalence_battery(const MetricSpace& space, std::uint64_t seed, int trials,
                                      const std::optional<Eigen::VectorXd>& witness,
                                      double relative_tolerance) {
  const Eigen::Index n = space.size();
  const double diam = space.diameter() > 0.0 ? space.diameter() : 1.0;
  const Eigen::MatrixXd& d = space.dist();
  Sampler sampler(seed);

  auto e = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a.dot(d * b); };
  auto tv = [](const Eigen::VectorXd& a) { return a.cwiseAbs().sum(); };

  BatteryReport report;
  report.relative_tolerance = relative_tolerance;
  report.all_pass = true;

  for (int ci = 0; ci < kQhmConditionCount; ++ci) {
    const auto cond = static_cast<QhmCondition>(ci);
    ConditionResult res;
    res.condition = cond;
    res.trials = trials;
    res.worst_margin = std::numeric_limits<double>::infinity();
    res.worst_normalized_margin = std::numeric_limits<double>::infinity();

    for (int t = 0; t < trials; ++t) {
      double margin = 0.0;
      double scale = 1.0;
      switch (cond) {
        case QhmCondition::tuples: {
          const Eigen::Index m = 1 + sampler.index(2 * n);
          std::vector<Eigen::Index> xs, ys;
          for (Eigen::Index k = 0; k < m; ++k) xs.push_back(sampler.index(n));
          for (Eigen::Index k = 0; k < m; ++k) ys.push_back(sampler.index(n));
          margin = tuple_condition_margin(space, xs, ys);
          scale = diam * static_cast<double>(m * m);
          break;
        }
        case QhmCondition::energy_nonpos: {
          const Eigen::VectorXd mu = sampler.mass_zero(n);
          margin = -e(mu, mu);
          scale = diam * tv(mu) * tv(mu);
          break;
        }
        case QhmCondition::cauchy_schwarz: {
          const Eigen::VectorXd mu = sampler.mass_zero(n);
          const Eigen::VectorXd nu = sampler.mass_zero(n);
          const double cross = e(mu, nu);
          margin = e(mu, mu) * e(nu, nu) - cross * cross;
          scale = diam * diam * tv(mu) * tv(mu) * tv(nu) * tv(nu);
          break;
        }
        case QhmCondition::midpoint_signed:
        case QhmCondition::midpoint_prob: {
          const bool prob = cond == QhmCondition::midpoint_prob;
          const Eigen::VectorXd mu = prob ? sampler.probability(n) : sampler.mass_one(n);
          const Eigen::VectorXd nu = prob ? sampler.probability(n) : sampler.mass_one(n);
          margin = 2.0 * e(mu, nu) - e(mu, mu) - e(nu, nu);
          scale = diam * (tv(mu) + tv(nu)) * (tv(mu) + tv(nu));
          break;
        }
        case QhmCondition::concave_signed:
        case QhmCondition::concave_prob:
        case QhmCondition::convex_signed:
        case QhmCondition::convex_prob: {
          const bool prob =
              cond == QhmCondition::concave_prob || cond == QhmCondition::convex_prob;
          const bool half =
              cond == QhmCondition::concave_signed || cond == QhmCondition::concave_prob;
          const Eigen::VectorXd mu = prob ? sampler.probability(n) : sampler.mass_one(n);
          const Eigen::VectorXd nu = prob ? sampler.probability(n) : sampler.mass_one(n);
          const double alpha = half ? 0.5 : sampler.uniform();
          const double beta = 1.0 - alpha;
          const Eigen::VectorXd mix = alpha * mu + beta * nu;
          margin = e(mix, mix) - alpha * e(mu, mu) - beta * e(nu, nu);
          scale = diam * (tv(mu) + tv(nu)) * (tv(mu) + tv(nu));
          break;
        }
      }
      if (!(scale > 0.0)) scale = 1.0;
      const double normalized = margin / scale;
      res.worst_margin = std::min(res.worst_margin, margin);
      res.worst_normalized_margin = std::min(res.worst_normalized_margin, normalized);
      if (normalized >= -relative_tolerance) ++res.passes;
    }
    if (trials == 0) {
      res.worst_margin = 0.0;
      res.worst_normalized_margin = 0.0;
    }
    if (res.passes != res.trials) {
      report.all_pass = false;
      report.failed_conditions.push_back(condition_label(cond));
    }
    report.conditions.push_back(res);
  }

  if (witness) {
    if (witness->size() != n) throw Error(ErrorCode::BadParameter, "witness length mismatch");
    const double we = e(*witness, *witness);
    report.witness_energy = we;
    report.witness_fails_condition3 =
        -we < -relative_tolerance * diam * tv(*witness) * tv(*witness);
    if (*report.witness_fails_condition3) {
      report.all_pass = false;
      if (std::find(report.failed_conditions.begin(), report.failed_conditions.end(), "3") ==
          report.failed_conditions.end()) {
        report.failed_conditions.push_back("3");
      }
    }
  }
  return report;
}

}  // namespace metric_energy
