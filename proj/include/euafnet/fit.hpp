#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "euafnet/network.hpp"
#include "euafnet/search.hpp"

namespace euafnet {

using ScalarFn = std::function<double(double)>;

// Raised when no partition up to the size cap meets the tolerance.
struct ToleranceInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fixed architecture every univariate fit is delivered in: five activated
// layers of 36 units between scalar input and output.
inline constexpr int kTemplateWidth = 36;
inline constexpr int kTemplateDepth = 5;

// Measured uniform-continuity surrogate: the largest |f(u) - f(v)| over
// grid pairs with |u - v| <= delta, on a uniform grid of `samples` points
// spanning [a, b].  Monotone nondecreasing in delta for a fixed grid;
// 0 when delta is below the grid spacing.
double estimate_modulus(const ScalarFn& f, double a, double b, double delta,
                        int samples = 1001);

// Grid size used by choose_partition when checking candidate n.
int partition_check_samples(int n);

struct PartitionPlan {
  double a = 0.0;
  double b = 1.0;
  int n = 1;
  std::vector<double> breakpoints;            // n + 1 uniform points
  std::vector<double> representative_values;  // f at sub-interval midpoints
};

// Smallest n <= n_max whose measured modulus at spacing (b-a)/n is strictly
// below eps / 2; raises ToleranceInfeasible when no such n exists.
PartitionPlan choose_partition(const ScalarFn& f, double a, double b,
                               double eps, int n_max = 4096);

struct IndexerBuild {
  FeedforwardNetwork network;
  // Largest |I(x) - k| observed over the middle 80% of each sub-interval.
  double interior_deviation = 0.0;
  // Whether every collar sample rounded to {k-1, k, k+1}.
  bool collar_ok = false;
  std::int64_t evaluations_used = 0;
};

// Builds the sub-interval indexer: a 1-in/1-out network of width 2 and two
// activation layers whose output is within 0.25 of the cell index k across
// the middle 80% of cell k, verified on a sample grid.  The construction is
// closed-form (staircase plus an integer-snapping stage), so the search
// budget is consumed only by verification.
IndexerBuild build_indexer(const PartitionPlan& plan,
                           const SearchBudget& budget = {});

struct DecoderFit {
  FeedforwardNetwork network;
  double max_deviation = 0.0;
  std::int64_t evaluations_used = 0;
  bool tolerance_met = false;
};

// Builds a scalar network mapping each index k in {0, ..., n-1} to
// values[k] within tol, robust to index perturbations up to 0.25.  Values
// must lie in [0, 1].  Width 33, two activation layers: an integer-snapping
// stage feeding a bank of triangle-harmonic features whose coefficients are
// chosen by least squares and, if needed, refined by pattern search.
DecoderFit fit_point_values(std::span<const double> values, double tol,
                            const SearchBudget& budget = {},
                            std::uint64_t seed = 0);

struct FitReport {
  FeedforwardNetwork network;
  double sup_error = 0.0;
  int n = 1;
  std::int64_t budget_used = 0;
  std::vector<int> architecture_fingerprint;
  std::uint64_t seed = 0;
  bool tolerance_met = false;
  double max_abs_parameter = 0.0;
};

// Fits f on [a, b] to uniform error below eps with the fixed architecture
// (width 36, depth 5).  Deterministic for a fixed seed.  Never claims an
// unverified tolerance: sup_error is always measured on a 2001-point grid
// over the returned network, and tolerance_met reflects that measurement.
FitReport fit_univariate(const ScalarFn& f, double a, double b, double eps,
                         const SearchBudget& budget = {},
                         std::uint64_t seed = 1);

// Exact realization of the affine map sending a to value_at_a and b to
// value_at_b, delivered in the fixed template architecture.
FeedforwardNetwork template_affine_network(double a, double b,
                                           double value_at_a,
                                           double value_at_b);

// Largest |net(x) - f(x)| over the grid.
double sup_error(const FeedforwardNetwork& net, const ScalarFn& f,
                 std::span<const double> grid);

std::vector<double> uniform_grid(double a, double b, int count);

}  // namespace euafnet
