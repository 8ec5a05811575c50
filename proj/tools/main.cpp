// Command-line entry point: construct, compose, and certify fixed-width
// networks built on the saw-tooth/rational activation.

#include "CLI11.hpp"

#include <cstddef>
#include <exception>
#include <iostream>
#include <string>

#include "cli_commands.hpp"
#include "euafnet/fit.hpp"

namespace {

// Parses "a:b" into an interval with a < b.
bool parse_domain(const std::string& text, double& a, double& b) {
  const std::size_t pos = text.find(':');
  if (pos == std::string::npos || pos == 0 || pos + 1 >= text.size()) {
    return false;
  }
  try {
    std::size_t used = 0;
    const std::string left = text.substr(0, pos);
    a = std::stod(left, &used);
    if (used != left.size()) return false;
    const std::string right = text.substr(pos + 1);
    b = std::stod(right, &used);
    if (used != right.size()) return false;
  } catch (const std::exception&) {
    return false;
  }
  return a < b;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace euafnet;
  using namespace euafnet::cli;

  CLI::App app{"Fixed-architecture network fitting and certification tool"};
  app.require_subcommand(1);

  FitConfig fit_cfg;
  std::string fit_domain;
  CLI::App* fit = app.add_subcommand(
      "fit", "Fit a univariate target with the fixed-size network template");
  fit->add_option("--target", fit_cfg.target,
                  "Built-in target id (const, linear, abshalf, sin2pi)")
      ->capture_default_str();
  fit->add_option("--domain", fit_domain,
                  "Interval as a:b (default: the target's own interval)");
  fit->add_option("--eps", fit_cfg.eps_list,
                  "Sup-norm accuracy target; repeat for several runs")
      ->check(CLI::PositiveNumber);
  fit->add_option("--seed", fit_cfg.seed, "Random seed")->capture_default_str();
  fit->add_option("--budget", fit_cfg.budget, "Search evaluation budget")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit->add_option("--grid", fit_cfg.grid, "Sample count for the error table")
      ->check(CLI::Range(2, 10000001))
      ->capture_default_str();
  fit->add_option("--out", fit_cfg.out_dir,
                  "Output directory (default: $EUAFNET_OUT_DIR or ./out)");

  ComposeConfig compose_cfg;
  std::string compose_domain;
  CLI::App* compose = app.add_subcommand(
      "compose",
      "Approximate a multivariate target via a superposition of univariate fits");
  compose->add_option("--triple", compose_cfg.triple,
                      "Built-in target decomposition id (d1, d2)")
      ->capture_default_str();
  compose->add_option("--domain", compose_domain, "Interval as a:b per axis");
  compose->add_option("--eps", compose_cfg.eps_list,
                      "Sup-norm accuracy target; repeat for several runs")
      ->check(CLI::PositiveNumber);
  compose->add_option("--seed", compose_cfg.seed, "Random seed")
      ->capture_default_str();
  compose->add_option("--budget", compose_cfg.budget,
                      "Search evaluation budget per sub-fit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  compose->add_option("--grid", compose_cfg.grid,
                      "Verification grid points per axis (0 = default)")
      ->check(CLI::Range(0, 10000001));
  compose->add_option("--out", compose_cfg.out_dir,
                      "Output directory (default: $EUAFNET_OUT_DIR or ./out)");

  WitnessConfig witness_cfg;
  CLI::App* witness = app.add_subcommand(
      "witness",
      "Certify the two-point gap for width-(d-1) first layers via exact "
      "rational witnesses");
  witness->add_option("--d", witness_cfg.d, "Input dimension (>= 2)")
      ->check(CLI::Range(2, 64))
      ->capture_default_str();
  witness->add_option("--count", witness_cfg.count,
                      "Number of random networks to certify")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  witness->add_option("--seed", witness_cfg.seed, "Random seed")
      ->capture_default_str();
  witness->add_option("--nets", witness_cfg.nets_dir,
                      "Directory of stored network .json files to certify");
  witness->add_option("--out", witness_cfg.out_dir,
                      "Output directory (default: $EUAFNET_OUT_DIR or ./out)");

  CLI::App* selftest = app.add_subcommand(
      "selftest", "Run built-in exactness and counting checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (fit->parsed()) {
      if (!fit_domain.empty()) {
        if (!parse_domain(fit_domain, fit_cfg.a, fit_cfg.b)) {
          std::cerr << "error: --domain expects a:b with a < b\n";
          return kExitUsage;
        }
        fit_cfg.domain_set = true;
      }
      return cmd_fit(fit_cfg);
    }
    if (compose->parsed()) {
      if (!compose_domain.empty() &&
          !parse_domain(compose_domain, compose_cfg.a, compose_cfg.b)) {
        std::cerr << "error: --domain expects a:b with a < b\n";
        return kExitUsage;
      }
      return cmd_compose(compose_cfg);
    }
    if (witness->parsed()) {
      return cmd_witness(witness_cfg);
    }
    if (selftest->parsed()) {
      return cmd_selftest();
    }
  } catch (const ToleranceInfeasible& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnmet;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
