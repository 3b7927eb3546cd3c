#include "metric_energy/experiments.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "metric_energy/energy.hpp"
#include "metric_energy/error.hpp"
#include "metric_energy/mconst.hpp"
#include "metric_energy/negtype.hpp"
#include "metric_energy/sampling.hpp"
#include "metric_energy/spaces.hpp"

namespace metric_energy::cli {

using io::json;

namespace {

class Csv {
 public:
  explicit Csv(const std::string& header) { os_ << std::setprecision(17) << header << '\n'; }

  template <typename... T>
  void row(const T&... cells) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cells, first = false), ...);
    os_ << '\n';
  }

  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

struct Verdicts {
  json list = json::array();
  bool all = true;

  void add(const std::string& check, bool pass, double observed, double expected,
           double tolerance) {
    list.push_back({{"check", check},
                    {"observed", observed},
                    {"expected", expected},
                    {"tolerance", tolerance},
                    {"pass", pass}});
    all = all && pass;
  }

  void add_flag(const std::string& check, bool pass) {
    list.push_back({{"check", check}, {"pass", pass}});
    all = all && pass;
  }
};

ExperimentOutput finish(const std::string& id, json inputs, json outputs, Verdicts v,
                        const Csv& csv) {
  ExperimentOutput out;
  out.report["experiment"] = id;
  out.report["inputs"] = std::move(inputs);
  out.report["outputs"] = std::move(outputs);
  out.report["verdicts"] = std::move(v.list);
  out.report["all_pass"] = v.all;
  out.csv = csv.str();
  out.all_pass = v.all;
  return out;
}

json base_inputs(std::uint64_t seed, const ToleranceConfig& tol) {
  json j;
  j["seed"] = seed;
  j["tolerance"] = io::to_json(tol);
  return j;
}

std::string fmt_p(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

// M = (b - a) / 2 on grids of [0, 1], attained by the endpoint measure.
ExperimentOutput interval_demo(std::uint64_t seed, const ToleranceConfig& tol) {
  const std::vector<int> sizes{11, 51, 101, 501};
  json inputs = base_inputs(seed, tol);
  json descriptors = json::array();
  json rows = json::array();
  Verdicts v;
  Csv csv("n,m,m_plus,w_first,w_last,lambda,interior_max");

  for (const int n : sizes) {
    const MetricSpace space = interval_grid(0.0, 1.0, n);
    descriptors.push_back(io::to_json(space.provenance()));
    const MResult m = compute_M(space, tol);
    if (!m.is_finite()) {
      v.add_flag("n=" + std::to_string(n) + " finite", false);
      continue;
    }
    const Eigen::VectorXd& w = m.maximizer->weights();
    const double interior = n > 2 ? w.segment(1, n - 2).cwiseAbs().maxCoeff() : 0.0;
    const MPlusResult mp = compute_M_plus(space);

    rows.push_back({{"n", n},
                    {"m", *m.value},
                    {"m_plus", mp.value},
                    {"m_plus_gap", mp.gap},
                    {"w_first", w[0]},
                    {"w_last", w[n - 1]},
                    {"lambda", *m.lambda},
                    {"interior_max", interior}});
    csv.row(n, *m.value, mp.value, w[0], w[n - 1], *m.lambda, interior);

    const std::string tag = "n=" + std::to_string(n);
    v.add(tag + " M", std::abs(*m.value - 0.5) <= 1e-9, *m.value, 0.5, 1e-9);
    v.add(tag + " w_first", std::abs(w[0] - 0.5) <= 1e-8, w[0], 0.5, 1e-8);
    v.add(tag + " w_last", std::abs(w[n - 1] - 0.5) <= 1e-8, w[n - 1], 0.5, 1e-8);
    v.add(tag + " potential", std::abs(*m.lambda - 0.5) <= 1e-8, *m.lambda, 0.5, 1e-8);
    v.add(tag + " M_plus", std::abs(mp.value - 0.5) <= 1e-6, mp.value, 0.5, 1e-6);
  }
  inputs["spaces"] = std::move(descriptors);
  json outputs;
  outputs["grids"] = std::move(rows);
  return finish("interval", std::move(inputs), std::move(outputs), std::move(v), csv);
}

// Even circle grids: quasihypermetric, not strictly, with an antipodal
// zero-energy measure and rank-deficient D.
ExperimentOutput circle_demo(std::uint64_t seed, const ToleranceConfig& tol) {
  const std::vector<int> sizes{4, 8, 16, 64};
  json inputs = base_inputs(seed, tol);
  json descriptors = json::array();
  json rows = json::array();
  Verdicts v;
  Csv csv("n,f_dim,rank_d,alternating_energy,max_projected_eigenvalue,m");

  for (const int n : sizes) {
    const MetricSpace space = circle_grid(n);
    descriptors.push_back(io::to_json(space.provenance()));
    auto report = std::make_shared<const NegativeTypeReport>(classify_negative_type(space, tol));
    const TOperatorReport t = t_operator_report(space, tol);
    const MResult m = compute_M(space, report);

    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    w[0] = 1.0;
    w[n / 2] = 1.0;
    w[1] = -1.0;
    w[1 + n / 2] = -1.0;
    const double alt = energy(DiscreteSignedMeasure(space, w));

    json row{{"n", n},
             {"is_qhm", report->is_qhm},
             {"is_strict", report->is_strict.value_or(false)},
             {"f_dim", report->f_dim},
             {"rank_d", t.rank_d},
             {"alternating_energy", alt},
             {"max_projected_eigenvalue", report->max_projected_eigenvalue()},
             {"zero_threshold", report->zero_threshold},
             {"m_status", std::string(to_string(m.status))}};
    if (m.value) row["m"] = *m.value;
    rows.push_back(std::move(row));
    csv.row(n, report->f_dim, t.rank_d, alt, report->max_projected_eigenvalue(),
            m.value.value_or(0.0));

    const std::string tag = "n=" + std::to_string(n);
    v.add_flag(tag + " qhm", report->is_qhm);
    v.add_flag(tag + " not strict", report->is_qhm && !*report->is_strict);
    v.add(tag + " f_dim>=1", report->f_dim >= 1, static_cast<double>(report->f_dim), 1.0, 0.0);
    v.add(tag + " alternating energy", std::abs(alt) <= 1e-9, alt, 0.0, 1e-9);
    v.add(tag + " rank_d<=n/2+1", t.rank_d <= n / 2 + 1, static_cast<double>(t.rank_d),
          n / 2 + 1, 0.0);
  }
  inputs["spaces"] = std::move(descriptors);
  json outputs;
  outputs["grids"] = std::move(rows);
  return finish("circle", std::move(inputs), std::move(outputs), std::move(v), csv);
}

// Random clouds in R^3 under several p-norms. p <= 2 must always be
// quasihypermetric; the max-norm must fail somewhere.
ExperimentOutput lp_scan_demo(std::uint64_t seed, const ToleranceConfig& tol) {
  const std::vector<double> ps{1.0, 1.5, 2.0, 3.0, 4.0, kInfinity};
  constexpr int kClouds = 200;
  constexpr int kMinPoints = 4;
  constexpr int kMaxPoints = 12;

  Sampler sampler(seed);
  std::vector<std::vector<std::vector<double>>> clouds;
  for (int c = 0; c < kClouds; ++c) {
    const int k = kMinPoints + static_cast<int>(sampler.index(kMaxPoints - kMinPoints + 1));
    std::vector<std::vector<double>> pts(static_cast<std::size_t>(k), std::vector<double>(3));
    for (auto& p : pts) {
      for (auto& x : p) x = sampler.uniform(-1.0, 1.0);
    }
    clouds.push_back(std::move(pts));
  }

  json inputs = base_inputs(seed, tol);
  inputs["clouds"] = kClouds;
  inputs["points"] = {kMinPoints, kMaxPoints};
  inputs["dimension"] = 3;
  inputs["coordinates"] = "uniform on [-1, 1]";
  json ps_json = json::array();
  for (const double p : ps) ps_json.push_back(fmt_p(p));
  inputs["p"] = std::move(ps_json);

  json rows = json::array();
  json first_failure;
  Verdicts v;
  Csv csv("p,clouds,qhm,strict,max_top_ratio");

  for (const double p : ps) {
    int qhm = 0, strict = 0;
    double worst_ratio = -kInfinity;
    for (int c = 0; c < kClouds; ++c) {
      const MetricSpace space = lp_cloud(clouds[static_cast<std::size_t>(c)], p);
      const NegativeTypeReport r = classify_negative_type(space, tol);
      const double ratio = r.max_projected_eigenvalue() / r.projected_form.spectral_radius();
      worst_ratio = std::max(worst_ratio, ratio);
      if (r.is_qhm) {
        ++qhm;
        if (*r.is_strict) ++strict;
      } else if (first_failure.is_null()) {
        const MResult m = compute_M(space, tol);
        first_failure["p"] = fmt_p(p);
        first_failure["cloud"] = c;
        first_failure["space"] = io::to_json(space.provenance());
        first_failure["max_projected_eigenvalue"] = r.max_projected_eigenvalue();
        first_failure["witness"] = io::vector_to_json(*r.violation_witness);
        first_failure["m_status"] = std::string(to_string(m.status));
      }
    }
    rows.push_back({{"p", fmt_p(p)},
                    {"clouds", kClouds},
                    {"qhm", qhm},
                    {"strict", strict},
                    {"max_top_ratio", worst_ratio}});
    csv.row(fmt_p(p), kClouds, qhm, strict, worst_ratio);
    if (p <= 2.0) {
      v.add("p=" + fmt_p(p) + " all qhm", qhm == kClouds, qhm, kClouds, 0.0);
    }
    if (std::isinf(p)) {
      v.add("p=inf finds a non-qhm cloud", qhm < kClouds, qhm, kClouds - 1, 0.0);
    }
  }
  json outputs;
  outputs["scan"] = std::move(rows);
  outputs["first_non_qhm"] = std::move(first_failure);
  return finish("lp-scan", std::move(inputs), std::move(outputs), std::move(v), csv);
}

// mu_k = c^{-1/3} (delta_0 - delta_{c}) with c = 2^{-k} on a dyadic grid.
ExperimentOutput sequence_demo(std::uint64_t seed, const ToleranceConfig& tol) {
  constexpr int kGrid = 1025;
  constexpr int kSteps = 10;
  const MetricSpace space = interval_grid(0.0, 1.0, kGrid);
  std::vector<Eigen::Index> xn;
  for (int k = 0; k <= kSteps; ++k) xn.push_back((kGrid - 1) >> k);
  const auto seq = topology_sequence(space, 0, xn);

  json inputs = base_inputs(seed, tol);
  inputs["space"] = io::to_json(space.provenance());
  inputs["x"] = 0;

  json rows = json::array();
  Verdicts v;
  Csv csv("k,c,seminorm_sq,measure_norm,seminorm,expected_seminorm_sq,expected_measure_norm");
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const SequenceRow& r = seq[k];
    const double c = r.distance;
    const double want_sq = 2.0 * std::cbrt(c);
    const double want_norm = 2.0 / std::cbrt(c);
    rows.push_back({{"k", k},
                    {"c", c},
                    {"seminorm", r.seminorm},
                    {"seminorm_sq", r.seminorm_sq},
                    {"measure_norm", r.measure_norm},
                    {"expected_seminorm_sq", want_sq},
                    {"expected_measure_norm", want_norm}});
    csv.row(k, c, r.seminorm_sq, r.measure_norm, r.seminorm, want_sq, want_norm);
    const std::string tag = "k=" + std::to_string(k);
    v.add(tag + " seminorm_sq", std::abs(r.seminorm_sq - want_sq) <= 1e-12 * want_norm,
          r.seminorm_sq, want_sq, 1e-12 * want_norm);
    v.add(tag + " measure_norm", std::abs(r.measure_norm - want_norm) <= 1e-12 * want_norm,
          r.measure_norm, want_norm, 1e-12 * want_norm);
    if (c == 0.125) {
      v.add("c=1/8 seminorm_sq", std::abs(r.seminorm_sq - 1.0) <= 1e-12, r.seminorm_sq, 1.0,
            1e-12);
      v.add("c=1/8 measure_norm", std::abs(r.measure_norm - 4.0) <= 1e-12, r.measure_norm, 4.0,
            1e-12);
    }
  }
  v.add_flag("seminorm decreasing, measure norm increasing", [&] {
    for (std::size_t k = 1; k < seq.size(); ++k) {
      if (!(seq[k].seminorm < seq[k - 1].seminorm)) return false;
      if (!(seq[k].measure_norm > seq[k - 1].measure_norm)) return false;
    }
    return true;
  }());
  json outputs;
  outputs["rows"] = std::move(rows);
  return finish("sequence", std::move(inputs), std::move(outputs), std::move(v), csv);
}

MetricSpace k23_graph() {
  Eigen::MatrixXd d(5, 5);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const bool same = (i < 2) == (j < 2);
      d(i, j) = i == j ? 0.0 : (same ? 2.0 : 1.0);
    }
  }
  return validate_metric(d, {"a1", "a2", "b1", "b2", "b3"});
}

// Every equivalent form of the quasihypermetric property, sampled on qhm
// spaces, plus the failure of I(mu) <= 0 on a non-qhm witness.
ExperimentOutput battery_demo(std::uint64_t seed, const ToleranceConfig& tol) {
  constexpr int kTrials = 500;
  Sampler sampler(seed);
  auto cloud = [&](int k) {
    std::vector<std::vector<double>> pts(static_cast<std::size_t>(k), std::vector<double>(3));
    for (auto& p : pts) {
      for (auto& x : p) x = sampler.uniform(-1.0, 1.0);
    }
    return pts;
  };

  std::vector<std::pair<std::string, MetricSpace>> spaces{
      {"interval-12", interval_grid(0.0, 1.0, 12)},
      {"circle-8", circle_grid(8)},
      {"sphere-24", sphere_grid(24)},
      {"random-5", random_metric(5, seed)},
      {"l1-cloud-8", lp_cloud(cloud(8), 1.0)},
      {"l2-cloud-10", lp_cloud(cloud(10), 2.0)},
      {"k23-graph", k23_graph()},
  };

  json inputs = base_inputs(seed, tol);
  inputs["trials"] = kTrials;
  json descriptors = json::object();
  for (const auto& [name, space] : spaces) descriptors[name] = io::to_json(space.provenance());
  inputs["spaces"] = std::move(descriptors);

  json results = json::array();
  Verdicts v;
  Csv csv("space,condition,trials,passes,worst_normalized_margin");
  std::uint64_t sub_seed = seed;
  for (const auto& [name, space] : spaces) {
    const NegativeTypeReport r = classify_negative_type(space, tol);
    const BatteryReport b =
        qhm_equivalence_battery(space, ++sub_seed, kTrials, r.violation_witness);
    json conds = json::array();
    for (const ConditionResult& c : b.conditions) {
      conds.push_back({{"condition", condition_label(c.condition)},
                       {"passes", c.passes},
                       {"trials", c.trials},
                       {"worst_margin", c.worst_margin},
                       {"worst_normalized_margin", c.worst_normalized_margin}});
      csv.row(name, condition_label(c.condition), c.trials, c.passes,
              c.worst_normalized_margin);
    }
    json entry{{"space", name}, {"is_qhm", r.is_qhm}, {"all_pass", b.all_pass},
               {"failed_conditions", b.failed_conditions}, {"conditions", std::move(conds)}};
    if (b.witness_energy) {
      entry["witness_energy"] = *b.witness_energy;
      entry["witness_fails_condition3"] = *b.witness_fails_condition3;
    }
    results.push_back(std::move(entry));

    if (r.is_qhm) {
      v.add_flag(name + " all conditions hold", b.all_pass);
    } else {
      v.add_flag(name + " witness violates condition 3", b.witness_fails_condition3.value_or(false));
    }
  }
  json outputs;
  outputs["spaces"] = std::move(results);
  return finish("battery", std::move(inputs), std::move(outputs), std::move(v), csv);
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"interval", "circle", "lp-scan", "sequence",
                                              "battery"};
  return names;
}

ExperimentOutput run_experiment(const std::string& name, std::uint64_t seed,
                                const ToleranceConfig& tol) {
  tol.validate();
  if (name == "interval") return interval_demo(seed, tol);
  if (name == "circle") return circle_demo(seed, tol);
  if (name == "lp-scan") return lp_scan_demo(seed, tol);
  if (name == "sequence") return sequence_demo(seed, tol);
  if (name == "battery") return battery_demo(seed, tol);
  throw Error(ErrorCode::UnknownExperiment, "no experiment named '" + name + "'");
}

}  // namespace metric_energy::cli
