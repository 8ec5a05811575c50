#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "euafnet/fit.hpp"
#include "euafnet/network.hpp"

namespace euafnet {

// Affine bijections between [a, b] and [0, 1].
struct RescaleMaps {
  double a = 0.0;
  double b = 1.0;
  double forward(double x) const { return (x - a) / (b - a); }
  double inverse(double t) const { return a + (b - a) * t; }
};

RescaleMaps rescale_maps(double a, double b);

// Error split for a superposition with 2d+1 branches: each outer term may
// deviate by eps / (2(2d+1)), and delta is the largest inner deviation the
// outer function's measured continuity absorbs within that bound.
struct ErrorBudget {
  double eps = 0.0;
  double per_term_outer_tol = 0.0;
  double delta = 0.0;
};

// Raises ToleranceInfeasible when the required delta falls below 1e-6.
ErrorBudget compute_budget(const ScalarFn& g, int d, double eps);

// Range-checks a raw inner network on a grid over [a, b] (outputs must stay
// in [-1, 2], the window where the appended clip stage is exact), then
// appends the clip stage.  Violations raise std::domain_error.
FeedforwardNetwork clip_inner(const FeedforwardNetwork& raw, double a,
                              double b, int check_points = 2001);

// A fixed superposition: phi(x) = sum over 2d+1 branches of
// outer(sum_j lambda_j * inner_i(x_j)).  Branch outputs are summed in sorted
// order, so permuting the branches changes nothing, bit for bit.
class KstComposition {
 public:
  static KstComposition compose(std::vector<double> lambda,
                                std::vector<FeedforwardNetwork> inner,
                                FeedforwardNetwork outer, double a, double b);

  int d() const { return static_cast<int>(lambda_.size()); }
  int branch_count() const { return static_cast<int>(inner_.size()); }
  double domain_lo() const { return a_; }
  double domain_hi() const { return b_; }
  const std::vector<double>& lambda() const { return lambda_; }
  const std::vector<FeedforwardNetwork>& inner() const { return inner_; }
  const FeedforwardNetwork& outer() const { return outer_; }

  // The argument handed to the outer network on one branch.
  double outer_argument(int branch, std::span<const double> x) const;
  double evaluate(std::span<const double> x) const;

 private:
  KstComposition(std::vector<double> lambda,
                 std::vector<FeedforwardNetwork> inner,
                 FeedforwardNetwork outer, double a, double b);

  std::vector<double> lambda_;
  std::vector<FeedforwardNetwork> inner_;
  FeedforwardNetwork outer_;
  double a_ = 0.0;
  double b_ = 1.0;
};

std::string serialize_composition(const KstComposition& comp);
KstComposition deserialize_composition(const std::string& text);

// Unit accounting for a composition.  Each inner branch contributes its
// activated units plus one summing row; the lambda mixing rows count once;
// the outer contributes its activated units; the final summation counts one.
struct NeuronCountBreakdown {
  std::vector<long long> per_inner;
  long long lambda_combination = 1;
  long long outer = 0;
  long long final_summation = 1;
  long long total = 0;
  bool uniform_inner() const;
  // e.g. "1097 = 183×5 + 1 + 180 + 1"
  std::string formula_line() const;
};

NeuronCountBreakdown count_intrinsic_neurons(const KstComposition& comp);

// Composition built entirely from full-width template networks; its unit
// total is 366 d + 365.
KstComposition full_width_composition(int d, double a = 0.0, double b = 1.0);

// A target with known superposition structure, used to exercise the
// pipeline: g outer on [0,1], 2d+1 strictly increasing inner functions
// mapping [0,1] into [0,1], and d positive weights with sum at most 1.
struct SyntheticKstTriple {
  std::string id;
  ScalarFn g;
  std::vector<ScalarFn> h;
  std::vector<double> lambda;

  int d() const { return static_cast<int>(lambda.size()); }
  // The induced target on the unit cube.
  double induced(std::span<const double> unit_x) const;
};

void validate_triple(const SyntheticKstTriple& t);

struct BranchDiagnostic {
  // Worst |network argument - exact argument| for this branch.
  double max_argument_gap = 0.0;
  // Worst |g(arg) - outer_net(arg)| at this branch's realized arguments.
  double max_outer_mismatch = 0.0;
};

struct ErrorTable {
  int dims = 1;
  std::vector<std::vector<double>> points;
  std::vector<double> target_values;
  std::vector<double> network_values;
  std::vector<double> abs_errors;
  double sup_error = 0.0;
  double mean_error = 0.0;
  std::vector<double> argmax_point;
  double outer_arg_min = 0.0;
  double outer_arg_max = 0.0;
  std::vector<BranchDiagnostic> branches;

  // Columns x1..xd, f, phi, abs_err; deterministic shortest-round-trip
  // number formatting.
  void write_csv(std::ostream& os) const;
};

// All points of the tensor grid with `per_axis` points per axis.
std::vector<std::vector<double>> tensor_grid(double a, double b, int per_axis,
                                             int dims);

// Compares the composition against the triple's induced target (transported
// to [a, b]^d) on the given points, with per-branch diagnostics.
ErrorTable verify_error(const KstComposition& comp,
                        const SyntheticKstTriple& triple,
                        const std::vector<std::vector<double>>& pts);

struct MultivariateApproximation {
  KstComposition composition;
  ErrorBudget budget;
  std::vector<FitReport> inner_reports;
  FitReport outer_report;
  ErrorTable table;
};

// End-to-end pipeline: split the budget, fit every inner branch to delta and
// the outer to the per-term tolerance, clip, compose, and verify on a tensor
// grid (2001 points for d=1, 41 per axis for d=2, 11 otherwise, unless
// overridden).  Sub-fit failures raise std::runtime_error naming the branch.
MultivariateApproximation approximate_multivariate(
    const SyntheticKstTriple& triple, double a, double b, double eps,
    const SearchBudget& budget = {}, std::uint64_t seed = 1,
    int grid_per_axis = 0);

}  // namespace euafnet
