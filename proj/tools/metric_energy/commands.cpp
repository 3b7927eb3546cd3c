#include "metric_energy/commands.hpp"

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>

#include "metric_energy/energy.hpp"
#include "metric_energy/error.hpp"
#include "metric_energy/experiments.hpp"
#include "metric_energy/mconst.hpp"
#include "metric_energy/negtype.hpp"

namespace metric_energy::cli {

using io::json;

namespace {

json error_json(const Error& e) {
  json j;
  j["error"] = std::string(to_string(e.code()));
  j["message"] = e.what();
  if (!e.indices().empty()) j["indices"] = e.indices();
  if (!e.values().empty()) j["values"] = e.values();
  return j;
}

// Runs `body`, turning library errors into a JSON diagnostic and exit code.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << error_json(e).dump(2) << '\n';
    return exit_code_for(e);
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot write " + path);
  return f;
}

// JSON report goes to --out when given, otherwise to `out`.
void emit(const json& j, const Options& opt, std::ostream& out) {
  if (opt.out.empty()) {
    out << j.dump(2) << '\n';
  } else {
    auto f = open_out(opt.out);
    f << j.dump(2) << '\n';
  }
}

MetricSpace load(const Options& opt) {
  if (opt.input.empty()) throw Error(ErrorCode::Io, "--input is required");
  return io::load_space(opt.input, opt.format);
}

}  // namespace

ToleranceConfig resolve_tolerance(std::optional<double> flag, const char* env) {
  ToleranceConfig tol;
  if (env != nullptr && *env != '\0') {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(env, &end);
    if (*end != '\0' || errno == ERANGE) {
      throw Error(ErrorCode::Parse, std::string("METRIC_ENERGY_TOL: cannot parse '") + env + "'");
    }
    tol.rel_eig_zero = v;
  }
  if (flag) tol.rel_eig_zero = *flag;
  tol.validate();
  return tol;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::NotQuasihypermetric:
      return kNegativeResult;
    case ErrorCode::NoConvergence:
    case ErrorCode::InconsistentClassification:
      return kToleranceBreakdown;
    default:
      return kInvalidInput;
  }
}

int cmd_validate(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    json j;
    try {
      const MetricSpace space = load(opt);
      j["valid"] = true;
      j["n"] = space.size();
      j["diameter"] = space.diameter();
      j["hash"] = space.hash();
      j["space"] = io::to_json(space.provenance());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Io) throw;
      j["valid"] = false;
      j.update(error_json(e));
      emit(j, opt, out);
      return int{kInvalidInput};
    }
    emit(j, opt, out);
    return int{kSuccess};
  });
}

int cmd_classify(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const MetricSpace space = load(opt);
    const NegativeTypeReport report = classify_negative_type(space, opt.tol);
    std::optional<Eigen::Index> dim;
    if (report.is_qhm) dim = schoenberg_embed(space, report).r;
    json j = io::to_json(report, opt.tol, dim);
    const TOperatorReport t = t_operator_report(space, opt.tol);
    j["rank_d"] = t.rank_d;
    j["t_injective"] = t.t_injective;
    emit(j, opt, out);
    return report.is_qhm ? int{kSuccess} : int{kNegativeResult};
  });
}

int cmd_mconst(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.witness_steps < 0) throw Error(ErrorCode::BadParameter, "--witness-steps must be >= 0");
    const MetricSpace space = load(opt);
    const MResult m = compute_M(space, opt.tol);
    json j = io::to_json(m, opt.tol);
    if (m.is_finite()) {
      const MPlusResult mp = compute_M_plus(space);
      j["m_plus"] = {{"value", mp.value}, {"gap", mp.gap}, {"iterations", mp.iterations}};
      const MaximizerCertificate cert = certify_maximizer(*m.maximizer, *m.classification);
      j["certificate"] = {{"is_stationary", cert.is_stationary},
                          {"is_global", cert.is_global},
                          {"potential_deviation", cert.potential_deviation},
                          {"stationarity_tolerance", cert.stationarity_tolerance}};
    } else {
      json steps = json::array();
      for (const WitnessStep& s : divergence_witness(space, m, opt.witness_steps)) {
        steps.push_back({{"n", s.n}, {"energy", s.energy}, {"predicted", s.predicted}});
      }
      j["divergence"] = std::move(steps);
    }
    emit(j, opt, out);
    return m.status == MStatus::InfiniteNotQhm ? int{kNegativeResult} : int{kSuccess};
  });
}

int cmd_embed(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const MetricSpace space = load(opt);
    const Embedding e = schoenberg_embed(space, opt.tol);
    json summary{{"n", space.size()},
                 {"r", e.r},
                 {"max_roundtrip_error", e.max_roundtrip_error},
                 {"zero_threshold", e.zero_threshold},
                 {"tolerance", io::to_json(opt.tol)}};
    if (opt.out.empty()) {
      io::write_csv_matrix(out, e.coords);
      err << summary.dump(2) << '\n';
    } else {
      auto f = open_out(opt.out);
      io::write_csv_matrix(f, e.coords);
      out << summary.dump(2) << '\n';
    }
    return int{kSuccess};
  });
}

int cmd_potential(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.measure.empty()) throw Error(ErrorCode::Io, "--measure is required");
    const MetricSpace space = load(opt);
    const DiscreteSignedMeasure mu = io::measure_from_json(io::read_json_file(opt.measure), space);
    const Eigen::VectorXd d = potential(mu);
    if (opt.out.empty()) {
      io::write_csv_matrix(out, d);
    } else {
      auto f = open_out(opt.out);
      io::write_csv_matrix(f, d);
    }
    return int{kSuccess};
  });
}

int cmd_demo(const std::string& name, const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto start = std::chrono::steady_clock::now();
    const ExperimentOutput result = run_experiment(name, opt.seed, opt.tol);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::filesystem::path dir = opt.out.empty() ? "." : opt.out;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
    {
      auto f = open_out((dir / (name + ".json")).string());
      f << result.report.dump(2) << '\n';
    }
    {
      auto f = open_out((dir / (name + ".csv")).string());
      f << result.csv;
    }
    // Wall time lives beside the report so the report itself stays byte-stable.
    {
      auto f = open_out((dir / (name + ".timing.json")).string());
      f << json{{"experiment", name}, {"wall_time_seconds", seconds}}.dump(2) << '\n';
    }
    int failed = 0;
    for (const auto& v : result.report["verdicts"]) failed += v["pass"].get<bool>() ? 0 : 1;
    out << name << ": " << (result.all_pass ? "PASS" : "FAIL") << " ("
        << result.report["verdicts"].size() - static_cast<std::size_t>(failed) << "/"
        << result.report["verdicts"].size() << " checks, " << std::fixed << std::setprecision(2)
        << seconds << " s)\n";
    return result.all_pass ? int{kSuccess} : int{kToleranceBreakdown};
  });
}

}  // namespace metric_energy::cli
