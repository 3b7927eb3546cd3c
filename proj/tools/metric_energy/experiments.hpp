#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metric_energy/io.hpp"
#include "metric_energy/numkernel.hpp"

namespace metric_energy::cli {

struct ExperimentOutput {
  io::json report;  // id, inputs, outputs, verdicts, all_pass
  std::string csv;  // plot data with a header row
  bool all_pass = false;
};

/// interval, circle, lp-scan, sequence, battery.
const std::vector<std::string>& experiment_names();

/// Runs one experiment. The report is a pure function of (name, seed, tol);
/// timing is left to the caller. Throws Error(UnknownExperiment).
ExperimentOutput run_experiment(const std::string& name, std::uint64_t seed,
                                const ToleranceConfig& tol);

}  // namespace metric_energy::cli
