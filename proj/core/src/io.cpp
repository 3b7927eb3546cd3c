#include "metric_energy/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "metric_energy/error.hpp"

namespace metric_energy::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& cell, std::size_t line) {
  const std::string t = trim(cell);
  if (t.empty()) throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ": empty field");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE) {
    throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ": cannot parse '" + t + "'");
  }
  return v;
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::Parse, std::string("descriptor is missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("descriptor field '") + key + "': " + e.what());
  }
}

double parse_p(const json& j) {
  if (!j.contains("p")) throw Error(ErrorCode::Parse, "lp_cloud descriptor is missing 'p'");
  const json& p = j.at("p");
  if (p.is_string()) {
    const auto s = p.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return kInfinity;
    throw Error(ErrorCode::Parse, "p must be a number or \"inf\"");
  }
  if (!p.is_number()) throw Error(ErrorCode::Parse, "p must be a number or \"inf\"");
  return p.get<double>();
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  if (name == "auto" || name.empty()) return Format::automatic;
  throw Error(ErrorCode::Parse, "unknown format '" + name + "'");
}

Eigen::MatrixXd read_csv_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_real(cell, lineno));
    if (!line.empty() && trim(line).back() == ',') {
      throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": trailing comma");
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": expected " +
                                        std::to_string(rows.front().size()) + " fields, got " +
                                        std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::Parse, "empty matrix");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

void write_csv_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

SpaceDescriptor descriptor_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "descriptor must be a JSON object");
  const auto kind = field<std::string>(j, "kind");
  if (kind == "matrix") {
    MatrixParams p;
    p.rows = field<std::vector<std::vector<double>>>(j, "matrix");
    if (j.contains("labels")) p.labels = field<std::vector<std::string>>(j, "labels");
    return {p};
  }
  if (kind == "interval") {
    return {IntervalParams{field<double>(j, "a"), field<double>(j, "b"), field<int>(j, "n")}};
  }
  if (kind == "circle") return {CircleParams{field<int>(j, "n")}};
  if (kind == "sphere") {
    return {SphereParams{field<int>(j, "n"), j.contains("dim") ? field<int>(j, "dim") : 2}};
  }
  if (kind == "lp_cloud") {
    return {LpCloudParams{field<std::vector<std::vector<double>>>(j, "coords"), parse_p(j)}};
  }
  if (kind == "random") {
    return {RandomParams{field<int>(j, "n"), field<std::uint64_t>(j, "seed")}};
  }
  throw Error(ErrorCode::Parse, "unknown space kind '" + kind + "'");
}

json to_json(const SpaceDescriptor& descriptor) {
  json j;
  j["kind"] = std::string(to_string(descriptor.kind()));
  std::visit(
      [&j](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, MatrixParams>) {
          j["matrix"] = p.rows;
          if (!p.labels.empty()) j["labels"] = p.labels;
        } else if constexpr (std::is_same_v<T, IntervalParams>) {
          j["a"] = p.a;
          j["b"] = p.b;
          j["n"] = p.n;
        } else if constexpr (std::is_same_v<T, CircleParams>) {
          j["n"] = p.n;
        } else if constexpr (std::is_same_v<T, SphereParams>) {
          j["n"] = p.n;
          j["dim"] = p.dim;
        } else if constexpr (std::is_same_v<T, LpCloudParams>) {
          if (std::isinf(p.p)) {
            j["p"] = "inf";
          } else {
            j["p"] = p.p;
          }
          j["coords"] = p.coords;
        } else if constexpr (std::is_same_v<T, RandomParams>) {
          j["n"] = p.n;
          j["seed"] = p.seed;
        }
      },
      descriptor.params);
  return j;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
}

MetricSpace load_space(const std::filesystem::path& path, Format format) {
  if (format == Format::automatic) {
    format = path.extension() == ".json" ? Format::json : Format::csv;
  }
  if (format == Format::json) return build_space(descriptor_from_json(read_json_file(path)));
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return validate_metric(read_csv_matrix(in));
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json measure_to_json(const DiscreteSignedMeasure& mu) {
  json j;
  j["space_hash"] = mu.space().hash();
  j["weights"] = vector_to_json(mu.weights());
  return j;
}

DiscreteSignedMeasure measure_from_json(const json& j, const MetricSpace& space) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "measure must be a JSON object");
  const auto weights = field<std::vector<double>>(j, "weights");
  if (j.contains("space_hash")) {
    const auto h = field<std::string>(j, "space_hash");
    if (h != space.hash()) {
      throw Error(ErrorCode::SpaceMismatch,
                  "measure was written for space " + h + ", not " + space.hash());
    }
  }
  if (static_cast<Eigen::Index>(weights.size()) != space.size()) {
    throw Error(ErrorCode::SpaceMismatch, "measure has " + std::to_string(weights.size()) +
                                              " weights for " + std::to_string(space.size()) +
                                              " points");
  }
  return {space, Eigen::Map<const Eigen::VectorXd>(weights.data(), space.size())};
}

json to_json(const ToleranceConfig& tol) {
  json j;
  j["rel_eig_zero"] = tol.rel_eig_zero;
  j["abs_floor"] = tol.abs_floor;
  j["max_jacobi_sweeps"] = tol.max_jacobi_sweeps;
  return j;
}

json to_json(const NegativeTypeReport& report, const ToleranceConfig& tol,
             std::optional<Eigen::Index> embedding_dim) {
  json j;
  j["n"] = report.mass_zero_basis.rows();
  j["is_qhm"] = report.is_qhm;
  j["is_strict"] = report.is_strict ? json(*report.is_strict) : json(nullptr);
  j["f_dim"] = report.f_dim;
  j["zero_threshold"] = report.zero_threshold;
  j["projected_eigenvalues"] = vector_to_json(report.projected_eigenvalues);
  json cps = json::array();
  for (const auto& cp : report.constant_potentials) {
    cps.push_back({{"value", cp.value}, {"residual", cp.residual}});
  }
  j["constant_potentials"] = cps;
  if (report.violation_witness) j["witness"] = vector_to_json(*report.violation_witness);
  if (embedding_dim) j["embedding_dim"] = *embedding_dim;
  j["tolerance"] = to_json(tol);
  return j;
}

json to_json(const MResult& m, const ToleranceConfig& tol) {
  json j;
  j["status"] = std::string(to_string(m.status));
  if (m.value) j["value"] = *m.value;
  if (m.lambda) j["lambda"] = *m.lambda;
  if (m.maximizer) j["maximizer_weights"] = vector_to_json(m.maximizer->weights());
  if (m.witness) j["witness_weights"] = vector_to_json(m.witness->weights());
  if (m.witness_constant) j["witness_constant"] = *m.witness_constant;
  json th;
  th["zero_threshold"] = m.zero_threshold;
  th["f_dim"] = m.f_dim;
  th["pinv_residual"] = m.pinv_residual;
  th["tolerance"] = to_json(tol);
  j["thresholds"] = th;
  return j;
}

}  // namespace metric_energy::io
