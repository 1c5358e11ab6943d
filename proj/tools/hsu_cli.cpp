#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hsu/cli.hpp"

namespace {

int parse_failure(const CLI::App& app, const CLI::ParseError& e) {
  if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
    std::cout << app.help();
    return 0;
  }
  hsu::cli::print_error(std::cerr, e.what());
  return hsu::cli::kBadInput;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uncertainty products of functions on the n-sphere"};
  app.require_subcommand(1);

  std::string coeff_path;
  auto* report = app.add_subcommand("report", "uncertainty report for a JSON coefficient file");
  report->add_option("file", coeff_path, "coefficient file")->required();

  double lambda = 0.0, rho = 0.0;
  bool exact = false, asym = false, both = false;
  auto* poisson = app.add_subcommand("poisson", "directional Poisson wavelet G at (lambda, rho)");
  poisson->add_option("--lambda", lambda, "half-integer lambda = (n-1)/2")->required();
  poisson->add_option("--rho", rho, "scale rho > 0")->required();
  auto* g_exact = poisson->add_flag("--exact", exact, "exact series (default)");
  auto* g_asym = poisson->add_flag("--asymptotic", asym, "small-rho expansions");
  auto* g_both = poisson->add_flag("--both", both, "exact, expansions and their gaps");
  g_exact->excludes(g_asym)->excludes(g_both);
  g_asym->excludes(g_both);

  std::string lambdas, rhos, output, columns;
  bool ratio = false;
  auto* sweep = app.add_subcommand("sweep", "CSV table over a lambda/rho grid");
  sweep->add_option("--lambda", lambdas, "list a,b,c or range start:stop:step")->required();
  sweep->add_option("--rho", rhos, "list a,b,c or geometric range start:stop:count");
  sweep->add_flag("--ratio", ratio, "rho -> 0 limits and the ratio to the zonal minimum");
  sweep->add_option("-o,--output", output, "CSV path")->required();
  sweep->add_option("--columns", columns, "comma-separated subset of columns");

  std::uint64_t seed = hsu::VerifyOptions{}.seed;
  std::string level = "full";
  std::int64_t max_nodes = 0;
  auto* verify = app.add_subcommand("verify", "run the oracle checks");
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--max-nodes", max_nodes, "quadrature node cap (overrides UNCERT_MAX_NODES)")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return parse_failure(app, e);
  }

  if (report->parsed()) return hsu::cli::cmd_report(coeff_path, std::cout, std::cerr);

  if (poisson->parsed()) {
    auto mode = hsu::cli::PoissonMode::Exact;
    if (asym) mode = hsu::cli::PoissonMode::Asymptotic;
    if (both) mode = hsu::cli::PoissonMode::Both;
    return hsu::cli::cmd_poisson(lambda, rho, mode, std::cout, std::cerr);
  }

  if (sweep->parsed()) {
    hsu::cli::SweepSpec spec;
    spec.ratio = ratio;
    spec.output = output;
    const int rc = hsu::cli::guarded(std::cerr, [&] {
      spec.lambdas = hsu::cli::parse_lambda_list(lambdas);
      if (!ratio) {
        if (rhos.empty()) throw hsu::InputError("sweep needs --rho unless --ratio is given");
        spec.rhos = hsu::cli::parse_rho_list(rhos);
      }
      if (!columns.empty()) spec.columns = hsu::cli::split(columns, ',');
      return 0;
    });
    if (rc != 0) return rc;
    return hsu::cli::cmd_sweep(spec, std::cout, std::cerr);
  }

  hsu::VerifyOptions opts;
  opts.seed = seed;
  opts.level = level == "quick" ? hsu::VerifyLevel::Quick : hsu::VerifyLevel::Full;
  opts.max_nodes = hsu::cli::resolve_max_nodes(max_nodes);
  return hsu::cli::cmd_verify(opts, std::cout, std::cerr);
}
