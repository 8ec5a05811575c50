#include "cli_commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "euafnet/activation.hpp"
#include "euafnet/kst.hpp"
#include "euafnet/lower_bound.hpp"
#include "euafnet/rng.hpp"
#include "euafnet/serialize.hpp"
#include "euafnet/tables.hpp"
#include "euafnet/targets.hpp"
#include "euafnet/witness.hpp"
#include "json.hpp"

namespace euafnet::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

json network_json(const FeedforwardNetwork& net) {
  return json::parse(serialize_network(net));
}

json fit_report_json(const FitReport& rep) {
  json j;
  j["sup_error"] = rep.sup_error;
  j["n"] = rep.n;
  j["budget_used"] = rep.budget_used;
  j["architecture_fingerprint"] = rep.architecture_fingerprint;
  j["seed"] = rep.seed;
  j["tolerance_met"] = rep.tolerance_met;
  j["max_abs_parameter"] = rep.max_abs_parameter;
  return j;
}

std::string csv_for_fit(const FitReport& rep, const ScalarFn& fn, double a,
                        double b, int grid_points) {
  const std::vector<double> grid = uniform_grid(a, b, grid_points);
  std::ostringstream os;
  os << "x,f,phi,abs_err\n";
  for (double x : grid) {
    const double f = fn(x);
    const double phi = evaluate_scalar(rep.network, x);
    os << format_double(x) << "," << format_double(f) << ","
       << format_double(phi) << "," << format_double(std::abs(phi - f))
       << "\n";
  }
  return os.str();
}

}  // namespace

std::string resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("EUAFNET_OUT_DIR");
      env != nullptr && env[0] != '\0') {
    return env;
  }
  return "out";
}

int cmd_fit(const FitConfig& cfg) {
  const TargetFunction& target = lookup_target(cfg.target);
  const double a = cfg.domain_set ? cfg.a : target.a;
  const double b = cfg.domain_set ? cfg.b : target.b;
  const std::string out_dir = resolve_out_dir(cfg.out_dir);

  json manifest;
  manifest["command"] = "fit";
  manifest["target"] = target.id;
  manifest["domain"] = {{"a", a}, {"b", b}};
  manifest["eps"] = cfg.eps_list;
  manifest["seed"] = cfg.seed;
  manifest["budget"] = cfg.budget;
  manifest["grid"] = cfg.grid;
  json results = json::array();
  json outputs = json::array();

  bool all_met = true;
  for (double eps : cfg.eps_list) {
    const FitReport rep = fit_univariate(target.fn, a, b, eps,
                                         SearchBudget{cfg.budget}, cfg.seed);
    all_met = all_met && rep.tolerance_met;

    const std::string stem =
        "fit_" + target.id + "_eps" + format_double(eps);
    json report = fit_report_json(rep);
    report["target"] = target.id;
    report["eps"] = eps;
    report["domain"] = {{"a", a}, {"b", b}};
    report["network"] = network_json(rep.network);

    const std::string report_name = stem + ".report.json";
    const std::string csv_name = stem + ".errors.csv";
    write_file_atomic(join_path(out_dir, report_name), report.dump(2) + "\n");
    write_file_atomic(join_path(out_dir, csv_name),
                      csv_for_fit(rep, target.fn, a, b, cfg.grid));
    outputs.push_back(report_name);
    outputs.push_back(csv_name);

    json summary = fit_report_json(rep);
    summary["eps"] = eps;
    results.push_back(std::move(summary));

    std::cout << "fit " << target.id << " eps=" << format_double(eps)
              << ": sup_error=" << format_double(rep.sup_error) << " n="
              << rep.n << (rep.tolerance_met ? " (met)" : " (NOT met)")
              << "\n";
  }
  manifest["results"] = std::move(results);
  manifest["outputs"] = std::move(outputs);
  write_file_atomic(join_path(out_dir, "fit_" + target.id + ".manifest.json"),
                    manifest.dump(2) + "\n");
  return all_met ? kExitOk : kExitUnmet;
}

int cmd_compose(const ComposeConfig& cfg) {
  const SyntheticKstTriple triple = builtin_triple(cfg.triple);
  const std::string out_dir = resolve_out_dir(cfg.out_dir);

  json manifest;
  manifest["command"] = "compose";
  manifest["triple"] = triple.id;
  manifest["d"] = triple.d();
  manifest["domain"] = {{"a", cfg.a}, {"b", cfg.b}};
  manifest["eps"] = cfg.eps_list;
  manifest["seed"] = cfg.seed;
  manifest["budget"] = cfg.budget;
  manifest["grid"] = cfg.grid;
  json results = json::array();
  json outputs = json::array();

  bool all_met = true;
  for (double eps : cfg.eps_list) {
    std::optional<MultivariateApproximation> maybe;
    try {
      maybe = approximate_multivariate(triple, cfg.a, cfg.b, eps,
                                       SearchBudget{cfg.budget}, cfg.seed,
                                       cfg.grid);
    } catch (const ToleranceInfeasible& e) {
      std::cerr << "compose " << triple.id << " eps=" << format_double(eps)
                << ": " << e.what() << "\n";
      json r;
      r["eps"] = eps;
      r["tolerance_met"] = false;
      r["infeasible"] = std::string(e.what());
      results.push_back(std::move(r));
      all_met = false;
      continue;
    }
    const MultivariateApproximation& approx = *maybe;
    const NeuronCountBreakdown counts =
        count_intrinsic_neurons(approx.composition);
    const bool met = approx.table.sup_error < eps;
    all_met = all_met && met;

    const std::string stem =
        "compose_" + triple.id + "_eps" + format_double(eps);
    write_file_atomic(join_path(out_dir, stem + ".composition.json"),
                      serialize_composition(approx.composition) + "\n");
    {
      std::ostringstream csv;
      approx.table.write_csv(csv);
      write_file_atomic(join_path(out_dir, stem + ".errors.csv"), csv.str());
    }

    json summary;
    summary["triple"] = triple.id;
    summary["d"] = triple.d();
    summary["eps"] = eps;
    summary["domain"] = {{"a", cfg.a}, {"b", cfg.b}};
    summary["seed"] = cfg.seed;
    summary["budget"] = {{"eps", approx.budget.eps},
                         {"per_term_outer_tol", approx.budget.per_term_outer_tol},
                         {"delta", approx.budget.delta}};
    summary["sup_error"] = approx.table.sup_error;
    summary["mean_error"] = approx.table.mean_error;
    summary["argmax_point"] = approx.table.argmax_point;
    summary["outer_arg_min"] = approx.table.outer_arg_min;
    summary["outer_arg_max"] = approx.table.outer_arg_max;
    summary["tolerance_met"] = met;
    json branches = json::array();
    for (const BranchDiagnostic& diag : approx.table.branches) {
      branches.push_back({{"max_argument_gap", diag.max_argument_gap},
                          {"max_outer_mismatch", diag.max_outer_mismatch}});
    }
    summary["branches"] = std::move(branches);
    json inner_fits = json::array();
    for (const FitReport& rep : approx.inner_reports) {
      inner_fits.push_back(fit_report_json(rep));
    }
    summary["inner_fits"] = std::move(inner_fits);
    summary["outer_fit"] = fit_report_json(approx.outer_report);
    summary["neuron_count"] = {{"total", counts.total},
                               {"per_inner", counts.per_inner},
                               {"lambda_combination", counts.lambda_combination},
                               {"outer", counts.outer},
                               {"final_summation", counts.final_summation},
                               {"formula", counts.formula_line()}};
    write_file_atomic(join_path(out_dir, stem + ".summary.json"),
                      summary.dump(2) + "\n");
    outputs.push_back(stem + ".composition.json");
    outputs.push_back(stem + ".errors.csv");
    outputs.push_back(stem + ".summary.json");

    json r;
    r["eps"] = eps;
    r["sup_error"] = approx.table.sup_error;
    r["tolerance_met"] = met;
    r["neuron_total"] = counts.total;
    results.push_back(std::move(r));

    std::cout << counts.formula_line() << "\n";
    std::cout << "compose " << triple.id << " eps=" << format_double(eps)
              << ": sup_error=" << format_double(approx.table.sup_error)
              << (met ? " (met)" : " (NOT met)") << "\n";
  }
  manifest["results"] = std::move(results);
  manifest["outputs"] = std::move(outputs);
  write_file_atomic(
      join_path(out_dir, "compose_" + triple.id + ".manifest.json"),
      manifest.dump(2) + "\n");
  return all_met ? kExitOk : kExitUnmet;
}

namespace {

FeedforwardNetwork random_narrow_net(int d, Rng& rng) {
  AffineLayer hidden;
  hidden.in = d;
  hidden.out = d - 1;
  hidden.activated = true;
  hidden.weights.resize(static_cast<std::size_t>(d) * (d - 1));
  hidden.bias.resize(d - 1);
  for (double& w : hidden.weights) w = rng.uniform(-2.0, 2.0);
  for (double& b : hidden.bias) b = rng.uniform(-1.0, 1.0);

  AffineLayer out;
  out.in = d - 1;
  out.out = 1;
  out.activated = false;
  out.weights.resize(d - 1);
  out.bias.resize(1);
  for (double& w : out.weights) w = rng.uniform(-2.0, 2.0);
  out.bias[0] = rng.uniform(-1.0, 1.0);

  return FeedforwardNetwork(d, {std::move(hidden), std::move(out)});
}

}  // namespace

int cmd_witness(const WitnessConfig& cfg) {
  if (cfg.d < 2) {
    throw std::invalid_argument("witness: --d must be >= 2");
  }
  if (cfg.count < 0) {
    throw std::invalid_argument("witness: --count must be >= 0");
  }
  const ExampleFamily family = builtin_family(cfg.d);
  const std::string out_dir = resolve_out_dir(cfg.out_dir);

  struct Entry {
    std::string id;
    GapCertificate cert;
  };
  std::vector<Entry> certified;
  std::vector<std::string> skipped;

  Rng rng(Rng::mix(cfg.seed, 0x817));
  for (int i = 0; i < cfg.count; ++i) {
    FeedforwardNetwork net = random_narrow_net(cfg.d, rng);
    certified.push_back(
        {"random_" + std::to_string(i), two_point_gap(family, net)});
  }

  if (!cfg.nets_dir.empty()) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(cfg.nets_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& p : files) {
      const FeedforwardNetwork net = deserialize_network(read_file(p.string()));
      try {
        certified.push_back({p.filename().string(), two_point_gap(family, net)});
      } catch (const std::invalid_argument& e) {
        std::cerr << "witness: skipping " << p.filename().string() << ": "
                  << e.what() << "\n";
        skipped.push_back(p.filename().string());
      }
    }
  }

  std::ostringstream csv;
  csv << "id,gap,value_at_origin,value_at_witness,certified_floor,holds\n";
  bool all_hold = true;
  double min_gap = std::numeric_limits<double>::infinity();
  json reports = json::array();
  for (const Entry& e : certified) {
    all_hold = all_hold && e.cert.holds;
    min_gap = std::min(min_gap, e.cert.gap);
    csv << e.id << "," << format_double(e.cert.gap) << ","
        << format_double(e.cert.value_at_origin) << ","
        << format_double(e.cert.value_at_witness) << ","
        << format_double(e.cert.certified_floor) << ","
        << (e.cert.holds ? 1 : 0) << "\n";
    json r;
    r["id"] = e.id;
    r["gap"] = e.cert.gap;
    r["certified_floor"] = e.cert.certified_floor;
    r["holds"] = e.cert.holds;
    r["witness_point"] = e.cert.witness_point;
    r["witness"] = json::parse(witness_report_json(e.cert.witness));
    reports.push_back(std::move(r));
  }

  json manifest;
  manifest["command"] = "witness";
  manifest["d"] = cfg.d;
  manifest["count"] = cfg.count;
  manifest["seed"] = cfg.seed;
  manifest["c_star"] = family.c_star;
  manifest["certified"] = certified.size();
  manifest["skipped"] = skipped;
  manifest["all_hold"] = all_hold;
  manifest["outputs"] = {"witness_gaps.csv", "witness_reports.json"};

  write_file_atomic(join_path(out_dir, "witness_gaps.csv"), csv.str());
  write_file_atomic(join_path(out_dir, "witness_reports.json"),
                    reports.dump(2) + "\n");
  write_file_atomic(
      join_path(out_dir, "witness_d" + std::to_string(cfg.d) + ".manifest.json"),
      manifest.dump(2) + "\n");

  std::cout << "witness d=" << cfg.d << ": certified " << certified.size()
            << " networks";
  if (!certified.empty()) {
    std::cout << ", min gap " << format_double(min_gap) << " vs floor "
              << format_double(family.c_star / 2.0);
  }
  if (!skipped.empty()) {
    std::cout << ", skipped " << skipped.size();
  }
  std::cout << (all_hold ? " (all hold)" : " (VIOLATION)") << "\n";
  return all_hold ? kExitOk : kExitUnmet;
}

int cmd_selftest() {
  int failures = 0;
  const auto check = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "[ok]   " : "[fail] ") << name << "\n";
    if (!ok) ++failures;
  };

  check("activation fixed points",
        euaf(0.5) == 0.5 && euaf(1.5) == 0.5 && euaf(2.0) == 0.0 &&
            euaf(-1.0) == -0.5 && euaf(7.25) == 0.75);

  {
    const FeedforwardNetwork clip = clip01_fragment();
    double worst = 0.0;
    for (int i = 0; i <= 10000; ++i) {
      const double t = -1.0 + 3.0 * (i / 10000.0);
      const double want = std::min(std::max(t, 0.0), 1.0);
      worst = std::max(worst, std::abs(evaluate_scalar(clip, t) - want));
    }
    check("clip identity on [-1,2]", worst <= 1e-12);
  }

  {
    bool ok = true;
    for (int d = 1; d <= 8; ++d) {
      const NeuronCountBreakdown counts =
          count_intrinsic_neurons(full_width_composition(d));
      ok = ok && counts.total == 366LL * d + 365;
    }
    check("full-width unit totals", ok);
  }

  {
    const FeedforwardNetwork net = template_affine_network(0.0, 1.0, 0.25, 0.75);
    const std::string text = serialize_network(net);
    const FeedforwardNetwork back = deserialize_network(text);
    check("network serialization round trip",
          serialize_network(back) == text);
  }

  {
    const RationalMatrix w =
        RationalMatrix::from_doubles(2, 3, std::vector<double>{1, 0, -2, 0, 1, 3});
    const WitnessReport rep = construct_witness(w);
    check("witness frozen example",
          rep.x[0] == Rational(-1, 3) && rep.x[1] == Rational(1, 2) &&
              rep.x[2] == Rational(-1, 6));
  }

  {
    const std::vector<double> values = {0.0, 1.0};
    const DecoderFit fit = fit_point_values(values, 0.01);
    check("two-point decoder", fit.tolerance_met);
  }

  std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
  return failures == 0 ? kExitOk : kExitUnmet;
}

}  // namespace euafnet::cli
