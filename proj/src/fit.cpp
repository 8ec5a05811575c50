#include "euafnet/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace euafnet {

namespace {

constexpr int kHarmonics = 16;
constexpr int kFeatureCount = 2 * kHarmonics + 1;  // pass + two phases per m

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// Layer builders.
//
// The fitted network is a staircase indexer followed by a value decoder.
// With t' = (x - a)/(b - a) and y = 2n t' + 1.5:
//
//   P  = euaf(y / (2n+2))            linear pass-through of y (argument in (0,1))
//   Q  = euaf(y)                     triangle wave
//   u  = (y - Q)/2 - 1 = (n+1) P - Q/2 - 1
//
// u is a staircase over the cells: constant u = k on the middle half of cell
// k and linear across a riser of width 1/(2n) centred on each breakpoint.
// A second stage snaps u to the nearest integer wherever |u - k| <= 1/4:
//
//   P2 = euaf((u+1)/(n+1))           pass-through of u
//   Z2 = euaf(2u + 0.5)              equals 2(u-k) + 0.5 near integer k
//   index(u) = (n+1) P2 - Z2/2 - 3/4 = k exactly when |u - k| <= 1/4
//
// The decoder re-applies the same snap to its own input, maps the snapped
// index w to s = (w+1)/(n+1) in (0,1), and feeds s through a bank of
// triangle harmonics euaf(2m s), euaf(2m s + 1/2) whose linear combination
// carries the cell values.
// ---------------------------------------------------------------------------

AffineLayer staircase_entry_layer(int n, double a, double b) {
  const double alpha = 1.0 / (b - a);
  const double beta = -a / (b - a);
  const double wy = 2.0 * n * alpha;
  const double by = 2.0 * n * beta + 1.5;
  AffineLayer L;
  L.in = 1;
  L.out = 2;
  L.activated = true;
  L.weights = {wy / (2.0 * n + 2.0), wy};
  L.bias = {by / (2.0 * n + 2.0), by};
  return L;
}

AffineLayer staircase_snap_layer(int n) {
  AffineLayer L;
  L.in = 2;
  L.out = 2;
  L.activated = true;
  L.weights = {1.0, -0.5 / (n + 1.0),  // (u+1)/(n+1) from (P, Q)
               2.0 * n + 2.0, -1.0};   // 2u + 0.5
  L.bias = {0.0, -1.5};
  return L;
}

AffineLayer indexer_output_layer(int n) {
  AffineLayer L;
  L.in = 2;
  L.out = 1;
  L.activated = false;
  L.weights = {n + 1.0, -0.5};
  L.bias = {-0.75};
  return L;
}

// From (P2, Z2) to the decoder's own snap pair (Pd, Zd), folding the index
// output affine into the decoder entry affine.
AffineLayer bridge_layer(int n) {
  AffineLayer L;
  L.in = 2;
  L.out = 2;
  L.activated = true;
  L.weights = {1.0, -0.5 / (n + 1.0),  // (index + 1)/(n + 1)
               2.0 * n + 2.0, -1.0};   // 2 * index + 0.5
  L.bias = {0.25 / (n + 1.0), -1.0};
  return L;
}

AffineLayer decoder_entry_layer(int n) {
  AffineLayer L;
  L.in = 1;
  L.out = 2;
  L.activated = true;
  L.weights = {1.0 / (n + 1.0), 2.0};
  L.bias = {1.0 / (n + 1.0), 0.5};
  return L;
}

AffineLayer feature_layer(int n) {
  AffineLayer L;
  L.in = 2;
  L.out = kFeatureCount;
  L.activated = true;
  L.weights.assign(2 * kFeatureCount, 0.0);
  L.bias.assign(kFeatureCount, 0.0);
  // s = Pd - Zd / (2(n+1)) + 1/(4(n+1)); row r computes its feature's
  // argument as a multiple of s plus a phase.
  const double zc = -0.5 / (n + 1.0);
  const double sc = 0.25 / (n + 1.0);
  L.weights[0] = 1.0;
  L.weights[1] = zc;
  L.bias[0] = sc;
  for (int m = 1; m <= kHarmonics; ++m) {
    const int r0 = m;                // phase 0
    const int r1 = kHarmonics + m;   // phase 1/2
    L.weights[2 * r0] = 2.0 * m;
    L.weights[2 * r0 + 1] = 2.0 * m * zc;
    L.bias[r0] = 2.0 * m * sc;
    L.weights[2 * r1] = 2.0 * m;
    L.weights[2 * r1 + 1] = 2.0 * m * zc;
    L.bias[r1] = 2.0 * m * sc + 0.5;
  }
  return L;
}

// coeffs = [c0, c1, ..., c33]; output = shift + scale * (c0 + sum c_j f_j).
AffineLayer coefficient_layer(std::span<const double> coeffs, double scale,
                              double shift) {
  AffineLayer L;
  L.in = kFeatureCount;
  L.out = 1;
  L.activated = false;
  L.weights.resize(kFeatureCount);
  for (int j = 0; j < kFeatureCount; ++j) {
    L.weights[j] = scale * coeffs[j + 1];
  }
  L.bias = {shift + scale * coeffs[0]};
  return L;
}

// Analytic feature values at index position s; row[0] is the constant 1.
void feature_row(double s, double* row) {
  row[0] = 1.0;
  row[1] = euaf(s);
  for (int m = 1; m <= kHarmonics; ++m) {
    row[1 + m] = euaf(2.0 * m * s);
    row[1 + kHarmonics + m] = euaf(2.0 * m * s + 0.5);
  }
}

std::vector<AffineLayer> compact_fit_layers(int n, double a, double b,
                                            std::span<const double> coeffs,
                                            double scale, double shift) {
  return {staircase_entry_layer(n, a, b), staircase_snap_layer(n),
          bridge_layer(n), feature_layer(n),
          coefficient_layer(coeffs, scale, shift)};
}

// Exact route for affine targets: the staircase and harmonics are silenced
// and the pass-through chain carries t' untouched to the output row.
std::vector<AffineLayer> compact_affine_layers(double a, double b,
                                               double value_at_a,
                                               double value_at_b) {
  const double alpha = 1.0 / (b - a);
  const double beta = -a / (b - a);
  AffineLayer L0;
  L0.in = 1;
  L0.out = 2;
  L0.activated = true;
  L0.weights = {alpha, 0.0};
  L0.bias = {beta, 0.0};

  AffineLayer pass2;
  pass2.in = 2;
  pass2.out = 2;
  pass2.activated = true;
  pass2.weights = {1.0, 0.0, 0.0, 0.0};
  pass2.bias = {0.0, 0.0};

  AffineLayer L3;
  L3.in = 2;
  L3.out = kFeatureCount;
  L3.activated = true;
  L3.weights.assign(2 * kFeatureCount, 0.0);
  L3.bias.assign(kFeatureCount, 0.0);
  L3.weights[0] = 1.0;

  AffineLayer L4;
  L4.in = kFeatureCount;
  L4.out = 1;
  L4.activated = false;
  L4.weights.assign(kFeatureCount, 0.0);
  L4.weights[0] = value_at_b - value_at_a;
  L4.bias = {value_at_a};

  return {L0, pass2, pass2, L3, L4};
}

// Folds the trailing affine row into one more activated unit whose argument
// stays inside the activation's linear window, then widens every activated
// layer to the template width with inert zero units.  The numeric function
// is unchanged up to roundoff.
FeedforwardNetwork pad_to_template(std::vector<AffineLayer> compact,
                                   std::map<std::string, std::string> md) {
  AffineLayer last = compact.back();
  compact.pop_back();
  double sum_abs = 0.0;
  for (double w : last.weights) sum_abs += std::abs(w);
  const double center = last.bias[0];
  const double halfspan = sum_abs + 0.5;
  const double kappa = 0.5 / halfspan;

  AffineLayer squeeze = last;
  squeeze.activated = true;
  for (double& w : squeeze.weights) w *= kappa;
  squeeze.bias[0] = 0.5;  // kappa * (v - center) + 0.5, and center is the bias
  compact.push_back(std::move(squeeze));

  AffineLayer unsqueeze;
  unsqueeze.in = 1;
  unsqueeze.out = 1;
  unsqueeze.activated = false;
  unsqueeze.weights = {1.0 / kappa};
  unsqueeze.bias = {center - halfspan};  // center - 0.5/kappa
  compact.push_back(std::move(unsqueeze));

  std::vector<AffineLayer> padded;
  padded.reserve(compact.size());
  int cur_in = 1;
  for (const AffineLayer& L : compact) {
    AffineLayer P;
    P.in = cur_in;
    P.out = L.activated ? kTemplateWidth : L.out;
    P.activated = L.activated;
    P.weights.assign(static_cast<std::size_t>(P.in) * P.out, 0.0);
    P.bias.assign(P.out, 0.0);
    for (int r = 0; r < L.out; ++r) {
      P.bias[r] = L.bias[r];
      for (int c = 0; c < L.in; ++c) {
        P.weights[static_cast<std::size_t>(r) * P.in + c] =
            L.weights[static_cast<std::size_t>(r) * L.in + c];
      }
    }
    cur_in = P.out;
    padded.push_back(std::move(P));
  }
  return FeedforwardNetwork(1, std::move(padded), std::move(md));
}

PartitionPlan make_uniform_plan(const ScalarFn& f, double a, double b, int n) {
  PartitionPlan plan;
  plan.a = a;
  plan.b = b;
  plan.n = n;
  plan.breakpoints.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    plan.breakpoints[i] = a + (b - a) * (static_cast<double>(i) / n);
  }
  plan.representative_values.resize(n);
  for (int k = 0; k < n; ++k) {
    const double mid = a + (b - a) * ((k + 0.5) / n);
    const double v = f(mid);
    if (!std::isfinite(v)) {
      throw std::runtime_error("choose_partition: target non-finite at x = " +
                               fmt_double(mid));
    }
    plan.representative_values[k] = v;
  }
  return plan;
}

struct ValueFitCore {
  std::vector<double> coeffs;  // 34 entries, bias first
  double max_deviation = 0.0;
  std::int64_t evaluations = 0;
  bool met = false;
};

FeedforwardNetwork build_decoder_net(int n, std::span<const double> coeffs) {
  return FeedforwardNetwork(
      1,
      {decoder_entry_layer(n), feature_layer(n),
       coefficient_layer(coeffs, 1.0, 0.0)},
      {{"kind", "value_decoder"}, {"cells", std::to_string(n)}});
}

// Worst deviation of the decoder over nominal and perturbed index inputs.
double measure_decoder(const FeedforwardNetwork& net,
                       std::span<const double> values, std::int64_t* evals) {
  static constexpr double kOffsets[] = {0.0, 0.25, -0.25, 0.1, -0.1};
  double worst = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    for (double off : kOffsets) {
      const double got = evaluate_scalar(net, static_cast<double>(k) + off);
      worst = std::max(worst, std::abs(got - values[k]));
      ++*evals;
    }
  }
  return worst;
}

ValueFitCore fit_values_core(std::span<const double> values, double tol,
                             std::int64_t max_evaluations, std::uint64_t seed) {
  const int n = static_cast<int>(values.size());
  ValueFitCore out;
  out.coeffs.assign(kFeatureCount + 1, 0.0);

  const bool all_equal =
      std::all_of(values.begin(), values.end(),
                  [&](double v) { return v == values[0]; });
  if (all_equal) {
    out.coeffs[0] = values[0];
    FeedforwardNetwork net = build_decoder_net(n, out.coeffs);
    out.max_deviation = measure_decoder(net, values, &out.evaluations);
    out.met = out.max_deviation < tol;
    return out;
  }

  Eigen::MatrixXd A(n, kFeatureCount + 1);
  Eigen::VectorXd y(n);
  std::vector<double> row(kFeatureCount + 1);
  for (int k = 0; k < n; ++k) {
    const double s = (k + 1.0) / (n + 1.0);
    feature_row(s, row.data());
    for (int j = 0; j <= kFeatureCount; ++j) A(k, j) = row[j];
    y(k) = values[k];
  }

  // Between plateaus the composed network sweeps the surrogate across every
  // intermediate index position, so grid agreement alone is not enough: with
  // more parameters than grid points the surrogate is free to oscillate
  // between samples.  Track a dense piecewise-linear target over the whole
  // swept range as well, with the grid rows weighted to dominate.
  const auto sweep_target = [&](double s) {
    const double t = s * (n + 1.0) - 1.0;  // t = k exactly at s_k
    if (t <= 0.0) return values[0];
    if (t >= n - 1.0) return values[static_cast<std::size_t>(n) - 1];
    const int k = static_cast<int>(t);
    const double frac = t - k;
    return values[k] + frac * (values[k + 1] - values[k]);
  };
  const double s_lo = 0.75 / (n + 1.0);
  const double s_hi = (n + 0.5) / (n + 1.0);
  const int dense_rows = std::max(8 * (n + 1), 1024) + 1;
  Eigen::MatrixXd Ad(dense_rows, kFeatureCount + 1);
  Eigen::VectorXd yd(dense_rows);
  for (int i = 0; i < dense_rows; ++i) {
    const double s =
        s_lo + (s_hi - s_lo) * (static_cast<double>(i) / (dense_rows - 1));
    feature_row(s, row.data());
    for (int j = 0; j <= kFeatureCount; ++j) Ad(i, j) = row[j];
    yd(i) = sweep_target(s);
  }

  const double grid_weight = 16.0 * dense_rows / n;
  Eigen::MatrixXd AtA =
      grid_weight * (A.transpose() * A) + Ad.transpose() * Ad;
  Eigen::VectorXd Aty =
      grid_weight * (A.transpose() * y) + Ad.transpose() * yd;
  const double ridge = 1e-10 * (AtA.trace() / (kFeatureCount + 1)) + 1e-30;
  AtA.diagonal().array() += ridge;
  Eigen::VectorXd c = AtA.ldlt().solve(Aty);
  for (int j = 0; j <= kFeatureCount; ++j) out.coeffs[j] = c(j);

  {
    FeedforwardNetwork net = build_decoder_net(n, out.coeffs);
    out.max_deviation = measure_decoder(net, values, &out.evaluations);
  }

  if (out.max_deviation >= tol) {
    // Subsampled sweep rows keep each candidate evaluation cheap; they are
    // discounted slightly so exact grid agreement wins ties.
    const int stride = std::max(1, dense_rows / 2048);
    std::vector<int> sub;
    for (int i = 0; i < dense_rows; i += stride) sub.push_back(i);
    const std::int64_t cost_per_candidate =
        n + static_cast<std::int64_t>(sub.size());
    const std::int64_t candidates =
        (max_evaluations - out.evaluations) / cost_per_candidate;
    if (candidates > 16) {
      // Refine against the analytic feature rows; the decoder reproduces
      // these values at integer inputs up to roundoff.
      Objective objective = [&](std::span<const double> theta) {
        double worst = 0.0;
        for (int k = 0; k < n; ++k) {
          double pred = theta[0];
          for (int j = 1; j <= kFeatureCount; ++j) pred += theta[j] * A(k, j);
          worst = std::max(worst, std::abs(pred - y(k)));
        }
        for (int i : sub) {
          double pred = theta[0];
          for (int j = 1; j <= kFeatureCount; ++j) pred += theta[j] * Ad(i, j);
          worst = std::max(worst, 0.95 * std::abs(pred - yd(i)));
        }
        return worst;
      };
      std::vector<double> step(out.coeffs.size());
      for (std::size_t i = 0; i < step.size(); ++i) {
        step[i] = 0.02 * (1.0 + std::abs(out.coeffs[i]));
      }
      Rng rng(Rng::mix(seed, 0xDECD));
      SearchOutcome best = multi_start_search(objective, out.coeffs, step,
                                              candidates, 2, rng);
      out.evaluations += best.candidates_tried * cost_per_candidate;
      out.coeffs = best.point;
      FeedforwardNetwork net = build_decoder_net(n, out.coeffs);
      out.max_deviation = measure_decoder(net, values, &out.evaluations);
    }
  }
  out.met = out.max_deviation < tol;
  return out;
}

}  // namespace

double estimate_modulus(const ScalarFn& f, double a, double b, double delta,
                        int samples) {
  if (!(std::isfinite(a) && std::isfinite(b) && a < b)) {
    throw std::invalid_argument("estimate_modulus: invalid interval");
  }
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("estimate_modulus: delta must be positive");
  }
  if (samples < 2) {
    throw std::invalid_argument("estimate_modulus: need at least 2 samples");
  }
  const int m = samples;
  std::vector<double> vals(m);
  for (int i = 0; i < m; ++i) {
    const double x = a + (b - a) * (static_cast<double>(i) / (m - 1));
    vals[i] = f(x);
    if (!std::isfinite(vals[i])) {
      throw std::runtime_error("estimate_modulus: target non-finite at x = " +
                               fmt_double(x));
    }
  }
  const double h = (b - a) / (m - 1);
  // Largest grid offset still within delta; the small absolute slack keeps
  // exact integer ratios from falling to the next lower offset.
  std::int64_t K = static_cast<std::int64_t>(std::floor(delta / h + 1e-9));
  K = std::clamp<std::int64_t>(K, 0, m - 1);
  double worst = 0.0;
  for (std::int64_t k = 1; k <= K; ++k) {
    for (int i = 0; i + k < m; ++i) {
      worst = std::max(worst, std::abs(vals[i] - vals[i + k]));
    }
  }
  return worst;
}

int partition_check_samples(int n) { return std::max(1001, 4 * n + 1); }

PartitionPlan choose_partition(const ScalarFn& f, double a, double b,
                               double eps, int n_max) {
  if (!(std::isfinite(a) && std::isfinite(b) && a < b)) {
    throw std::invalid_argument("choose_partition: invalid interval");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("choose_partition: eps must be positive");
  }
  if (n_max < 1) {
    throw std::invalid_argument("choose_partition: n_max must be >= 1");
  }
  for (int n = 1; n <= n_max; ++n) {
    const double delta = (b - a) / n;
    const double mod =
        estimate_modulus(f, a, b, delta, partition_check_samples(n));
    if (mod < eps / 2.0) {
      return make_uniform_plan(f, a, b, n);
    }
  }
  throw ToleranceInfeasible(
      "choose_partition: no partition of size <= " + std::to_string(n_max) +
      " has measured modulus below eps/2 = " + fmt_double(eps / 2.0));
}

IndexerBuild build_indexer(const PartitionPlan& plan,
                           const SearchBudget& budget) {
  if (plan.n < 1 || plan.breakpoints.size() != static_cast<std::size_t>(plan.n) + 1) {
    throw std::invalid_argument("build_indexer: malformed partition plan");
  }
  if (!(plan.a < plan.b)) {
    throw std::invalid_argument("build_indexer: malformed interval");
  }
  const int n = plan.n;
  const double a = plan.a;
  const double b = plan.b;

  std::vector<AffineLayer> layers = {staircase_entry_layer(n, a, b),
                                     staircase_snap_layer(n),
                                     indexer_output_layer(n)};
  if (n == 1) {
    // A single cell needs the constant index 0.
    layers[2].weights = {0.0, 0.0};
    layers[2].bias = {0.0};
  }
  FeedforwardNetwork net(1, std::move(layers),
                         {{"kind", "cell_indexer"}, {"cells", std::to_string(n)}});

  IndexerBuild out{net, 0.0, true, 0};
  const double h = (b - a) / n;
  const std::int64_t cap = std::max<std::int64_t>(budget.max_evaluations, 1);

  // Middle 80% of each cell: the index must stay within 0.25 of k.
  for (int k = 0; k < n && out.evaluations_used < cap; ++k) {
    const double left = a + k * h;
    for (int t = 0; t <= 16; ++t) {
      const double x = left + h * (0.1 + 0.8 * (t / 16.0));
      const double I = evaluate_scalar(out.network, x);
      ++out.evaluations_used;
      out.interior_deviation =
          std::max(out.interior_deviation, std::abs(I - k));
    }
  }
  // Collars: within 10% of a breakpoint the rounded index may only be one of
  // the two adjacent cells (or their immediate neighbours).
  static constexpr double kCollarOffsets[] = {-0.1, -0.05, -0.02, 0.0,
                                              0.02, 0.05,  0.1};
  for (int j = 0; j <= n && out.evaluations_used < cap; ++j) {
    for (double c : kCollarOffsets) {
      const double x = std::clamp(a + (j + c) * h, a, b);
      const double I = evaluate_scalar(out.network, x);
      ++out.evaluations_used;
      const int cell = std::clamp(static_cast<int>((x - a) / h), 0, n - 1);
      const double r = std::round(I);
      if (r < cell - 1 || r > cell + 1) {
        out.collar_ok = false;
      }
    }
  }
  return out;
}

DecoderFit fit_point_values(std::span<const double> values, double tol,
                            const SearchBudget& budget, std::uint64_t seed) {
  if (values.empty()) {
    throw std::invalid_argument("fit_point_values: empty value list");
  }
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw std::invalid_argument("fit_point_values: tol must be positive");
  }
  for (double v : values) {
    if (!(v >= -1e-9 && v <= 1.0 + 1e-9)) {
      throw std::invalid_argument(
          "fit_point_values: values must lie in [0, 1], got " + fmt_double(v));
    }
  }
  ValueFitCore core =
      fit_values_core(values, tol, budget.max_evaluations, seed);
  return DecoderFit{build_decoder_net(static_cast<int>(values.size()),
                                      core.coeffs),
                    core.max_deviation, core.evaluations, core.met};
}

FeedforwardNetwork template_affine_network(double a, double b,
                                           double value_at_a,
                                           double value_at_b) {
  if (!(std::isfinite(a) && std::isfinite(b) && a < b)) {
    throw std::invalid_argument("template_affine_network: invalid interval");
  }
  if (!std::isfinite(value_at_a) || !std::isfinite(value_at_b)) {
    throw std::invalid_argument("template_affine_network: non-finite value");
  }
  return pad_to_template(
      compact_affine_layers(a, b, value_at_a, value_at_b),
      {{"kind", "affine_template"},
       {"domain", fmt_double(a) + ":" + fmt_double(b)}});
}

std::vector<double> uniform_grid(double a, double b, int count) {
  if (count < 2) {
    throw std::invalid_argument("uniform_grid: need at least 2 points");
  }
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) {
    g[i] = a + (b - a) * (static_cast<double>(i) / (count - 1));
  }
  return g;
}

double sup_error(const FeedforwardNetwork& net, const ScalarFn& f,
                 std::span<const double> grid) {
  if (grid.empty()) {
    throw std::invalid_argument("sup_error: empty grid");
  }
  double worst = 0.0;
  for (double x : grid) {
    const double target = f(x);
    if (!std::isfinite(target)) {
      throw std::runtime_error("sup_error: target non-finite at x = " +
                               fmt_double(x));
    }
    worst = std::max(worst, std::abs(evaluate_scalar(net, x) - target));
  }
  return worst;
}

FitReport fit_univariate(const ScalarFn& f, double a, double b, double eps,
                         const SearchBudget& budget, std::uint64_t seed) {
  if (!(std::isfinite(a) && std::isfinite(b) && a < b)) {
    throw std::invalid_argument("fit_univariate: invalid interval");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("fit_univariate: eps must be positive");
  }

  std::int64_t used = 0;
  const std::vector<double> grid = uniform_grid(a, b, 2001);
  std::vector<double> fv(grid.size());
  double fmax = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    fv[i] = f(grid[i]);
    if (!std::isfinite(fv[i])) {
      throw std::runtime_error("fit_univariate: target non-finite at x = " +
                               fmt_double(grid[i]));
    }
    fmax = std::max(fmax, std::abs(fv[i]));
  }

  // Affine targets (including constants) have an exact realization in the
  // template, so detect them up front.
  const double va = fv.front();
  const double vb = fv.back();
  bool affine = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double line = va + (vb - va) * ((grid[i] - a) / (b - a));
    if (std::abs(fv[i] - line) > 1e-12 * (1.0 + fmax)) {
      affine = false;
      break;
    }
  }

  std::vector<AffineLayer> compact;
  int n_cells = 1;
  if (affine) {
    compact = compact_affine_layers(a, b, va, vb);
  } else {
    const double eps_int = 0.9 * eps;
    PartitionPlan plan;
    try {
      plan = choose_partition(f, a, b, eps_int);
    } catch (const ToleranceInfeasible&) {
      // Best effort at the size cap; the report will carry the honest error.
      plan = make_uniform_plan(f, a, b, 4096);
    }
    n_cells = plan.n;
    const auto [lo_it, hi_it] =
        std::minmax_element(plan.representative_values.begin(),
                            plan.representative_values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    const double range = hi - lo;
    if (range <= 1e-14 * (1.0 + std::abs(hi))) {
      const double mid = 0.5 * (lo + hi);
      compact = compact_affine_layers(a, b, mid, mid);
    } else {
      std::vector<double> vnorm(plan.representative_values.size());
      for (std::size_t k = 0; k < vnorm.size(); ++k) {
        vnorm[k] = (plan.representative_values[k] - lo) / range;
      }
      const double tol_dec =
          std::clamp(0.5 * eps_int / range, 1e-9, 0.45);
      ValueFitCore core = fit_values_core(vnorm, tol_dec,
                                          budget.max_evaluations / 2,
                                          Rng::mix(seed, 1));
      used += core.evaluations;
      compact = compact_fit_layers(plan.n, a, b, core.coeffs, range, lo);
    }
  }

  FeedforwardNetwork compact_net(1, compact);
  double sup = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    sup = std::max(sup, std::abs(evaluate_scalar(compact_net, grid[i]) - fv[i]));
  }
  used += static_cast<std::int64_t>(grid.size());

  if (!affine && sup >= eps) {
    // Fall back to refining the output coefficients against the target
    // directly, on a coarser grid to keep candidates affordable.
    const std::vector<double> cgrid = uniform_grid(a, b, 401);
    std::vector<double> cfv(cgrid.size());
    for (std::size_t i = 0; i < cgrid.size(); ++i) cfv[i] = f(cgrid[i]);

    FeedforwardNetwork trunk(
        1, std::vector<AffineLayer>(compact.begin(), compact.end() - 1));
    std::vector<std::array<double, kFeatureCount>> F(cgrid.size());
    for (std::size_t i = 0; i < cgrid.size(); ++i) {
      const double in[1] = {cgrid[i]};
      const std::vector<double> feats = evaluate_network(trunk, in);
      std::copy(feats.begin(), feats.end(), F[i].begin());
    }
    used += static_cast<std::int64_t>(cgrid.size());

    const std::int64_t candidates =
        (budget.max_evaluations - used) / static_cast<std::int64_t>(cgrid.size());
    if (candidates > 16) {
      Objective objective = [&](std::span<const double> theta) {
        double worst = 0.0;
        for (std::size_t i = 0; i < cgrid.size(); ++i) {
          double pred = theta[0];
          for (int j = 0; j < kFeatureCount; ++j) {
            pred += theta[j + 1] * F[i][j];
          }
          worst = std::max(worst, std::abs(pred - cfv[i]));
        }
        return worst;
      };
      std::vector<double> theta(kFeatureCount + 1);
      theta[0] = compact.back().bias[0];
      for (int j = 0; j < kFeatureCount; ++j) {
        theta[j + 1] = compact.back().weights[j];
      }
      std::vector<double> step(theta.size());
      for (std::size_t i = 0; i < step.size(); ++i) {
        step[i] = 0.05 * (1.0 + std::abs(theta[i])) * eps;
      }
      Rng rng(Rng::mix(seed, 2));
      SearchOutcome best =
          multi_start_search(objective, theta, step, candidates, 2, rng);
      used += best.candidates_tried * static_cast<std::int64_t>(cgrid.size());
      compact.back().bias[0] = best.point[0];
      for (int j = 0; j < kFeatureCount; ++j) {
        compact.back().weights[j] = best.point[j + 1];
      }
    }
  }

  FeedforwardNetwork padded = pad_to_template(
      std::move(compact),
      {{"kind", "univariate_fit"},
       {"cells", std::to_string(n_cells)},
       {"domain", fmt_double(a) + ":" + fmt_double(b)}});
  const double sup_final = sup_error(padded, f, grid);
  used += static_cast<std::int64_t>(grid.size());

  FitReport report{padded,
                   sup_final,
                   n_cells,
                   used,
                   padded.widths(),
                   seed,
                   sup_final < eps,
                   padded.max_abs_parameter()};
  return report;
}

}  // namespace euafnet
