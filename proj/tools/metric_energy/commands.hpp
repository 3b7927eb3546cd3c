#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "metric_energy/error.hpp"
#include "metric_energy/io.hpp"
#include "metric_energy/numkernel.hpp"

namespace metric_energy::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInvalidInput = 1,
  kNegativeResult = 2,   // not quasihypermetric / not embeddable
  kToleranceBreakdown = 3,
};

struct Options {
  std::string input;
  io::Format format = io::Format::automatic;
  ToleranceConfig tol;
  std::uint64_t seed = 0;
  std::string out;  // file for single-output commands, directory for demo
  int witness_steps = 8;
  std::string measure;
};

/// Default tolerance, overridden by METRIC_ENERGY_TOL (`env`), overridden
/// in turn by --tol. Throws Error(Parse) on an unparsable env value.
ToleranceConfig resolve_tolerance(std::optional<double> flag, const char* env);

/// Exit code for a library error: NotQuasihypermetric maps to 2, numerical
/// breakdowns (no convergence, inconsistent classification) to 3, the rest to 1.
int exit_code_for(const Error& e);

// Each command writes its report to `out` (or to --out when that is the
// command's payload file) and diagnostics to `err`; the return value is the
// process exit code. Library errors are caught and reported here.
int cmd_validate(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_classify(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_mconst(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_embed(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_potential(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_demo(const std::string& name, const Options& opt, std::ostream& out, std::ostream& err);

}  // namespace metric_energy::cli
