#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "metric_energy/commands.hpp"
#include "metric_energy/error.hpp"
#include "metric_energy/experiments.hpp"

namespace cli = metric_energy::cli;

int main(int argc, char** argv) {
  CLI::App app{"Energy and negative-type analysis of finite metric spaces"};
  app.require_subcommand(1);

  std::string input;
  std::string format = "auto";
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::string out;
  int witness_steps = 8;
  std::string measure;
  std::string demo_name;

  auto add_common = [&](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("--input", input, "CSV distance matrix or JSON descriptor");
    if (needs_input) in->required();
    sub->add_option("--format", format, "csv, json or auto (by extension)")
        ->check(CLI::IsMember({"csv", "json", "auto"}));
    sub->add_option("--tol", tol, "relative eigenvalue-zero tolerance (overrides METRIC_ENERGY_TOL)");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--out", out, "output file (demo: output directory)");
  };

  auto* validate = app.add_subcommand("validate", "check the metric axioms");
  add_common(validate, true);
  auto* classify = app.add_subcommand("classify", "negative-type classification report");
  add_common(classify, true);
  auto* mconst = app.add_subcommand("mconst", "compute M(X) and M+(X)");
  add_common(mconst, true);
  mconst->add_option("--witness-steps", witness_steps, "length of the divergence table");
  auto* embed = app.add_subcommand("embed", "coordinates with |phi_i - phi_j|^2 = d_ij");
  add_common(embed, true);
  auto* pot = app.add_subcommand("potential", "potential d_mu of a measure as CSV");
  add_common(pot, true);
  pot->add_option("--measure", measure, "measure JSON {space_hash, weights}")->required();
  auto* demo = app.add_subcommand("demo", "run a built-in experiment");
  add_common(demo, false);
  demo->add_option("name", demo_name, "experiment")
      ->required()
      ->check(CLI::IsMember(cli::experiment_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kInvalidInput;
  }

  cli::Options opt;
  try {
    opt.input = input;
    opt.format = metric_energy::io::parse_format(format);
    opt.tol = cli::resolve_tolerance(tol, std::getenv("METRIC_ENERGY_TOL"));
    opt.seed = seed;
    opt.out = out;
    opt.witness_steps = witness_steps;
    opt.measure = measure;
  } catch (const metric_energy::Error& e) {
    std::cerr << e.what() << '\n';
    return cli::kInvalidInput;
  }

  if (*validate) return cli::cmd_validate(opt, std::cout, std::cerr);
  if (*classify) return cli::cmd_classify(opt, std::cout, std::cerr);
  if (*mconst) return cli::cmd_mconst(opt, std::cout, std::cerr);
  if (*embed) return cli::cmd_embed(opt, std::cout, std::cerr);
  if (*pot) return cli::cmd_potential(opt, std::cout, std::cerr);
  return cli::cmd_demo(demo_name, opt, std::cout, std::cerr);
}
