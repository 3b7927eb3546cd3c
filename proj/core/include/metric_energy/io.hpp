#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "metric_energy/energy.hpp"
#include "metric_energy/mconst.hpp"
#include "metric_energy/negtype.hpp"
#include "metric_energy/spaces.hpp"

namespace metric_energy::io {

using json = nlohmann::ordered_json;

enum class Format { automatic, csv, json };

/// Parses "csv" / "json" / "auto"; throws Error(Parse) otherwise.
Format parse_format(const std::string& name);

/// Comma-separated reals, one row per line, no header. Blank lines are
/// skipped. Throws Error(Parse) naming the 1-based line on bad input.
Eigen::MatrixXd read_csv_matrix(std::istream& in);
void write_csv_matrix(std::ostream& out, const Eigen::MatrixXd& m);

SpaceDescriptor descriptor_from_json(const json& j);
json to_json(const SpaceDescriptor& descriptor);

/// Loads a CSV distance matrix or a JSON descriptor and validates it.
/// `automatic` picks by file extension (.json, otherwise CSV).
MetricSpace load_space(const std::filesystem::path& path, Format format = Format::automatic);

/// {space_hash, weights}. Reading checks the hash against `space` and
/// throws Error(SpaceMismatch) on disagreement.
json measure_to_json(const DiscreteSignedMeasure& mu);
DiscreteSignedMeasure measure_from_json(const json& j, const MetricSpace& space);

json to_json(const ToleranceConfig& tol);

json to_json(const NegativeTypeReport& report, const ToleranceConfig& tol,
             std::optional<Eigen::Index> embedding_dim = std::nullopt);

json to_json(const MResult& m, const ToleranceConfig& tol);

json vector_to_json(const Eigen::VectorXd& v);

json read_json_file(const std::filesystem::path& path);

}  // namespace metric_energy::io
