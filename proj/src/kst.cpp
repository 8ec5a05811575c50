#include "euafnet/kst.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "euafnet/rng.hpp"
#include "euafnet/tables.hpp"
#include "json.hpp"
#include "euafnet/serialize.hpp"

namespace euafnet {

namespace {

// The clip stage appended by append_clip01: two activated units whose first
// row is one third of the second, followed by the 1.5 / -0.5 combiner.
void require_clip_tail(const FeedforwardNetwork& net, const std::string& who) {
  const auto& layers = net.layers();
  bool ok = layers.size() >= 2;
  if (ok) {
    const AffineLayer& comb = layers.back();
    ok = !comb.activated && comb.in == 2 && comb.out == 1 &&
         comb.weights.size() == 2 && comb.weights[0] == 1.5 &&
         comb.weights[1] == -0.5 && comb.bias[0] == 0.0;
  }
  if (ok) {
    const AffineLayer& units = layers[layers.size() - 2];
    ok = units.activated && units.out == 2;
    if (ok) {
      for (int c = 0; c < units.in && ok; ++c) {
        ok = units.weights[c] == units.weights[units.in + c] / 3.0;
      }
      ok = ok && units.bias[0] == units.bias[1] / 3.0;
    }
  }
  if (!ok) {
    throw std::invalid_argument(who + " lacks the clip output stage");
  }
}

}  // namespace

RescaleMaps rescale_maps(double a, double b) {
  if (!(std::isfinite(a) && std::isfinite(b) && a < b)) {
    throw std::invalid_argument("rescale_maps: need a < b");
  }
  return RescaleMaps{a, b};
}

ErrorBudget compute_budget(const ScalarFn& g, int d, double eps) {
  if (d < 1) {
    throw std::invalid_argument("compute_budget: d must be >= 1");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("compute_budget: eps must be positive");
  }
  ErrorBudget out;
  out.eps = eps;
  out.per_term_outer_tol = eps / (2.0 * (2 * d + 1));

  // The sampling grid refines as the probed delta shrinks, so the bisection
  // can resolve requirements well below the default grid spacing; otherwise
  // a fixed grid would report every delta under one step as feasible.
  const auto measured = [&](double delta) {
    int samples = 2001;
    const double needed = 4.0 / delta;
    if (needed > 2001.0) {
      samples = needed > 2000001.0 ? 2000001 : static_cast<int>(needed) + 1;
    }
    return estimate_modulus(g, 0.0, 1.0, delta, samples);
  };
  if (measured(1.0) < out.per_term_outer_tol) {
    out.delta = 1.0;  // capped at the full interval
    return out;
  }
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (measured(mid) < out.per_term_outer_tol) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.delta = lo;
  if (out.delta < 1e-6) {
    throw ToleranceInfeasible(
        "compute_budget: required inner tolerance " + format_double(out.delta) +
        " is below 1e-06; eps = " + format_double(eps) +
        " is too tight for this outer function");
  }
  return out;
}

FeedforwardNetwork clip_inner(const FeedforwardNetwork& raw, double a,
                              double b, int check_points) {
  if (raw.input_dim() != 1 || raw.output_dim() != 1) {
    throw std::invalid_argument("clip_inner: network is not 1-in/1-out");
  }
  const std::vector<double> grid = uniform_grid(a, b, check_points);
  for (double x : grid) {
    const double v = evaluate_scalar(raw, x);
    if (v < -1.0 - 1e-9 || v > 2.0 + 1e-9) {
      throw std::domain_error("clip_inner: raw output " + format_double(v) +
                              " at x = " + format_double(x) +
                              " is outside [-1, 2]");
    }
  }
  return append_clip01(raw);
}

KstComposition::KstComposition(std::vector<double> lambda,
                               std::vector<FeedforwardNetwork> inner,
                               FeedforwardNetwork outer, double a, double b)
    : lambda_(std::move(lambda)),
      inner_(std::move(inner)),
      outer_(std::move(outer)),
      a_(a),
      b_(b) {}

KstComposition KstComposition::compose(std::vector<double> lambda,
                                       std::vector<FeedforwardNetwork> inner,
                                       FeedforwardNetwork outer, double a,
                                       double b) {
  if (!(std::isfinite(a) && std::isfinite(b) && a < b)) {
    throw std::invalid_argument("KstComposition: need a < b");
  }
  const int d = static_cast<int>(lambda.size());
  if (d < 1) {
    throw std::invalid_argument("KstComposition: need at least one weight");
  }
  double sum = 0.0;
  for (double l : lambda) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw std::invalid_argument("KstComposition: weights must be positive");
    }
    sum += l;
  }
  if (sum > 1.0 + 1e-12) {
    throw std::invalid_argument(
        "KstComposition: weight sum " + format_double(sum) + " exceeds 1");
  }
  if (inner.size() != static_cast<std::size_t>(2 * d + 1)) {
    throw std::invalid_argument(
        "KstComposition: expected " + std::to_string(2 * d + 1) +
        " inner networks, got " + std::to_string(inner.size()));
  }
  for (std::size_t i = 0; i < inner.size(); ++i) {
    if (inner[i].input_dim() != 1 || inner[i].output_dim() != 1) {
      throw std::invalid_argument("KstComposition: inner network " +
                                  std::to_string(i) + " is not 1-in/1-out");
    }
    require_clip_tail(inner[i],
                      "KstComposition: inner network " + std::to_string(i));
  }
  if (outer.input_dim() != 1 || outer.output_dim() != 1) {
    throw std::invalid_argument("KstComposition: outer network is not 1-in/1-out");
  }
  return KstComposition(std::move(lambda), std::move(inner), std::move(outer),
                        a, b);
}

double KstComposition::outer_argument(int branch,
                                      std::span<const double> x) const {
  if (branch < 0 || branch >= branch_count()) {
    throw std::invalid_argument("KstComposition: branch index out of range");
  }
  if (static_cast<int>(x.size()) != d()) {
    throw std::invalid_argument("KstComposition: input has size " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(d()));
  }
  double acc = 0.0;
  for (int j = 0; j < d(); ++j) {
    acc += lambda_[j] * evaluate_scalar(inner_[branch], x[j]);
  }
  // Clipped branch values and a sub-unit weight sum keep acc in [0, 1]
  // analytically, but the float summation can stray by an ulp.  Snap it
  // back (same guard width as the activation's seam snap) so the range
  // guarantee holds exactly.
  if (acc < 0.0 && acc >= -1e-12) {
    acc = 0.0;
  } else if (acc > 1.0 && acc <= 1.0 + 1e-12) {
    acc = 1.0;
  }
  return acc;
}

double KstComposition::evaluate(std::span<const double> x) const {
  std::vector<double> outs(inner_.size());
  for (int i = 0; i < branch_count(); ++i) {
    outs[i] = evaluate_scalar(outer_, outer_argument(i, x));
  }
  // Summing in sorted order makes the result independent of branch order,
  // bit for bit.
  std::sort(outs.begin(), outs.end());
  double total = 0.0;
  for (double v : outs) total += v;
  return total;
}

std::string serialize_composition(const KstComposition& comp) {
  nlohmann::json doc;
  doc["format_version"] = 1;
  doc["domain"] = {{"a", comp.domain_lo()}, {"b", comp.domain_hi()}};
  doc["lambda"] = comp.lambda();
  nlohmann::json inners = nlohmann::json::array();
  for (const FeedforwardNetwork& net : comp.inner()) {
    inners.push_back(nlohmann::json::parse(serialize_network(net)));
  }
  doc["inner"] = std::move(inners);
  doc["outer"] = nlohmann::json::parse(serialize_network(comp.outer()));
  return doc.dump(2);
}

KstComposition deserialize_composition(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("composition parse error: ") +
                             e.what());
  }
  try {
    const double a = doc.at("domain").at("a").get<double>();
    const double b = doc.at("domain").at("b").get<double>();
    std::vector<double> lambda =
        doc.at("lambda").get<std::vector<double>>();
    std::vector<FeedforwardNetwork> inner;
    for (const auto& el : doc.at("inner")) {
      inner.push_back(deserialize_network(el.dump()));
    }
    FeedforwardNetwork outer = deserialize_network(doc.at("outer").dump());
    return KstComposition::compose(std::move(lambda), std::move(inner),
                                   std::move(outer), a, b);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("composition parse error: ") +
                             e.what());
  }
}

bool NeuronCountBreakdown::uniform_inner() const {
  return !per_inner.empty() &&
         std::all_of(per_inner.begin(), per_inner.end(),
                     [&](long long v) { return v == per_inner.front(); });
}

std::string NeuronCountBreakdown::formula_line() const {
  std::string line = std::to_string(total) + " = ";
  if (uniform_inner()) {
    line += std::to_string(per_inner.front()) + "\xC3\x97" +
            std::to_string(per_inner.size());
  } else {
    line += "(";
    for (std::size_t i = 0; i < per_inner.size(); ++i) {
      if (i) line += " + ";
      line += std::to_string(per_inner[i]);
    }
    line += ")";
  }
  line += " + " + std::to_string(lambda_combination) + " + " +
          std::to_string(outer) + " + " + std::to_string(final_summation);
  return line;
}

NeuronCountBreakdown count_intrinsic_neurons(const KstComposition& comp) {
  NeuronCountBreakdown b;
  for (const FeedforwardNetwork& net : comp.inner()) {
    // Activated units plus the one row that folds this branch's output into
    // the weighted combination.
    b.per_inner.push_back(net.activated_unit_count() + 1);
  }
  b.lambda_combination = 1;
  b.outer = comp.outer().activated_unit_count();
  b.final_summation = 1;
  b.total = b.lambda_combination + b.outer + b.final_summation;
  for (long long v : b.per_inner) b.total += v;
  return b;
}

KstComposition full_width_composition(int d, double a, double b) {
  if (d < 1) {
    throw std::invalid_argument("full_width_composition: d must be >= 1");
  }
  const FeedforwardNetwork ramp = template_affine_network(a, b, 0.0, 1.0);
  std::vector<FeedforwardNetwork> inners;
  inners.reserve(2 * d + 1);
  for (int i = 0; i < 2 * d + 1; ++i) {
    inners.push_back(append_clip01(ramp));
  }
  const FeedforwardNetwork outer = template_affine_network(0.0, 1.0, 0.0, 1.0);
  std::vector<double> lambda(d, 1.0 / d);
  return KstComposition::compose(std::move(lambda), std::move(inners), outer,
                                 a, b);
}

double SyntheticKstTriple::induced(std::span<const double> unit_x) const {
  const int dd = d();
  if (static_cast<int>(unit_x.size()) != dd) {
    throw std::invalid_argument("SyntheticKstTriple: input has size " +
                                std::to_string(unit_x.size()) + ", expected " +
                                std::to_string(dd));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    double arg = 0.0;
    for (int j = 0; j < dd; ++j) {
      arg += lambda[j] * h[i](unit_x[j]);
    }
    total += g(arg);
  }
  return total;
}

void validate_triple(const SyntheticKstTriple& t) {
  const std::string who = "triple '" + t.id + "'";
  const int d = t.d();
  if (d < 1) {
    throw std::invalid_argument(who + ": needs at least one weight");
  }
  if (!t.g) {
    throw std::invalid_argument(who + ": outer function is empty");
  }
  if (t.h.size() != static_cast<std::size_t>(2 * d + 1)) {
    throw std::invalid_argument(who + ": expected " +
                                std::to_string(2 * d + 1) +
                                " inner functions, got " +
                                std::to_string(t.h.size()));
  }
  double sum = 0.0;
  for (double l : t.lambda) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw std::invalid_argument(who + ": weights must be positive");
    }
    sum += l;
  }
  if (sum > 1.0 + 1e-12) {
    throw std::invalid_argument(who + ": weight sum " + format_double(sum) +
                                " exceeds 1");
  }
  for (std::size_t i = 0; i < t.h.size(); ++i) {
    if (!t.h[i]) {
      throw std::invalid_argument(who + ": inner function " +
                                  std::to_string(i) + " is empty");
    }
    double prev = 0.0;
    for (int k = 0; k <= 100; ++k) {
      const double x = k / 100.0;
      const double v = t.h[i](x);
      if (!std::isfinite(v) || v < -1e-9 || v > 1.0 + 1e-9) {
        throw std::invalid_argument(who + ": inner function " +
                                    std::to_string(i) +
                                    " leaves [0, 1] at x = " +
                                    format_double(x));
      }
      if (k > 0 && !(v > prev)) {
        throw std::invalid_argument(who + ": inner function " +
                                    std::to_string(i) +
                                    " is not strictly increasing near x = " +
                                    format_double(x));
      }
      prev = v;
    }
  }
  for (int k = 0; k <= 100; ++k) {
    const double v = t.g(k / 100.0);
    if (!std::isfinite(v)) {
      throw std::invalid_argument(who + ": outer function non-finite at " +
                                  format_double(k / 100.0));
    }
  }
}

void ErrorTable::write_csv(std::ostream& os) const {
  for (int j = 0; j < dims; ++j) {
    os << "x" << (j + 1) << ",";
  }
  os << "f,phi,abs_err\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (int j = 0; j < dims; ++j) {
      os << format_double(points[i][j]) << ",";
    }
    os << format_double(target_values[i]) << ","
       << format_double(network_values[i]) << ","
       << format_double(abs_errors[i]) << "\n";
  }
}

std::vector<std::vector<double>> tensor_grid(double a, double b, int per_axis,
                                             int dims) {
  if (dims < 1) {
    throw std::invalid_argument("tensor_grid: dims must be >= 1");
  }
  if (per_axis < 2) {
    throw std::invalid_argument("tensor_grid: need at least 2 points per axis");
  }
  double count_check = 1.0;
  for (int j = 0; j < dims; ++j) count_check *= per_axis;
  if (count_check > 1e7) {
    throw std::invalid_argument("tensor_grid: grid would exceed 1e7 points");
  }
  const std::vector<double> axis = uniform_grid(a, b, per_axis);
  const std::size_t total = static_cast<std::size_t>(count_check);
  std::vector<std::vector<double>> pts;
  pts.reserve(total);
  std::vector<int> digit(dims, 0);
  for (std::size_t i = 0; i < total; ++i) {
    std::vector<double> p(dims);
    for (int j = 0; j < dims; ++j) p[j] = axis[digit[j]];
    pts.push_back(std::move(p));
    // Odometer increment, last coordinate fastest.
    for (int j = dims - 1; j >= 0; --j) {
      if (++digit[j] < per_axis) break;
      digit[j] = 0;
    }
  }
  return pts;
}

ErrorTable verify_error(const KstComposition& comp,
                        const SyntheticKstTriple& triple,
                        const std::vector<std::vector<double>>& pts) {
  if (triple.d() != comp.d()) {
    throw std::invalid_argument("verify_error: triple dimension " +
                                std::to_string(triple.d()) +
                                " does not match composition dimension " +
                                std::to_string(comp.d()));
  }
  if (pts.empty()) {
    throw std::invalid_argument("verify_error: empty grid");
  }
  const int d = comp.d();
  const int branches = comp.branch_count();
  const RescaleMaps maps = rescale_maps(comp.domain_lo(), comp.domain_hi());

  ErrorTable t;
  t.dims = d;
  t.branches.assign(branches, BranchDiagnostic{});
  t.outer_arg_min = std::numeric_limits<double>::infinity();
  t.outer_arg_max = -std::numeric_limits<double>::infinity();
  t.points.reserve(pts.size());
  double err_sum = 0.0;
  std::vector<double> unit(d);

  for (const std::vector<double>& pt : pts) {
    if (static_cast<int>(pt.size()) != d) {
      throw std::invalid_argument("verify_error: grid point has wrong size");
    }
    for (int j = 0; j < d; ++j) unit[j] = maps.forward(pt[j]);
    const double fval = triple.induced(unit);
    const double phi = comp.evaluate(pt);
    const double err = std::abs(phi - fval);

    t.points.push_back(pt);
    t.target_values.push_back(fval);
    t.network_values.push_back(phi);
    t.abs_errors.push_back(err);
    err_sum += err;
    if (t.argmax_point.empty() || err > t.sup_error) {
      t.sup_error = err;
      t.argmax_point = pt;
    }

    for (int i = 0; i < branches; ++i) {
      const double arg_net = comp.outer_argument(i, pt);
      t.outer_arg_min = std::min(t.outer_arg_min, arg_net);
      t.outer_arg_max = std::max(t.outer_arg_max, arg_net);
      double arg_exact = 0.0;
      for (int j = 0; j < d; ++j) {
        arg_exact += comp.lambda()[j] * triple.h[i](unit[j]);
      }
      BranchDiagnostic& diag = t.branches[i];
      diag.max_argument_gap =
          std::max(diag.max_argument_gap, std::abs(arg_net - arg_exact));
      const double arg_eval = std::clamp(arg_net, 0.0, 1.0);
      diag.max_outer_mismatch = std::max(
          diag.max_outer_mismatch,
          std::abs(triple.g(arg_eval) -
                   evaluate_scalar(comp.outer(), arg_eval)));
    }
  }
  t.mean_error = err_sum / static_cast<double>(pts.size());
  return t;
}

MultivariateApproximation approximate_multivariate(
    const SyntheticKstTriple& triple, double a, double b, double eps,
    const SearchBudget& budget, std::uint64_t seed, int grid_per_axis) {
  validate_triple(triple);
  if (!(std::isfinite(a) && std::isfinite(b) && a < b)) {
    throw std::invalid_argument("approximate_multivariate: need a < b");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("approximate_multivariate: eps must be positive");
  }
  const int d = triple.d();
  const RescaleMaps maps = rescale_maps(a, b);
  const ErrorBudget eb = compute_budget(triple.g, d, eps);
  const int branches = 2 * d + 1;

  std::vector<FitReport> inner_reports;
  std::vector<FeedforwardNetwork> clipped;
  inner_reports.reserve(branches);
  clipped.reserve(branches);
  for (int i = 0; i < branches; ++i) {
    const ScalarFn target = [fn = triple.h[i], maps](double z) {
      return fn(maps.forward(z));
    };
    FitReport rep = fit_univariate(target, a, b, eb.delta, budget,
                                   Rng::mix(seed, 100 + i));
    if (!rep.tolerance_met) {
      throw ToleranceInfeasible(
          "approximate_multivariate: inner branch " + std::to_string(i) +
          " missed tolerance " + format_double(eb.delta) + " (best sup " +
          format_double(rep.sup_error) + ")");
    }
    clipped.push_back(clip_inner(rep.network, a, b));
    inner_reports.push_back(std::move(rep));
  }

  FitReport outer_report = fit_univariate(triple.g, 0.0, 1.0,
                                          eb.per_term_outer_tol, budget,
                                          Rng::mix(seed, 7));
  if (!outer_report.tolerance_met) {
    throw ToleranceInfeasible(
        "approximate_multivariate: outer fit missed tolerance " +
        format_double(eb.per_term_outer_tol) + " (best sup " +
        format_double(outer_report.sup_error) + ")");
  }

  KstComposition comp = KstComposition::compose(
      triple.lambda, std::move(clipped), outer_report.network, a, b);

  int per_axis = grid_per_axis;
  if (per_axis <= 0) {
    per_axis = (d == 1) ? 2001 : (d == 2 ? 41 : 11);
  }
  ErrorTable table = verify_error(comp, triple, tensor_grid(a, b, per_axis, d));

  return MultivariateApproximation{std::move(comp), eb,
                                   std::move(inner_reports),
                                   std::move(outer_report), std::move(table)};
}

}  // namespace euafnet
