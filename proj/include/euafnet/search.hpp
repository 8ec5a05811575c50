#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "euafnet/rng.hpp"

namespace euafnet {

// Budget for derivative-free parameter searches, measured in network
// evaluations.  Callers translate candidate counts into evaluations using the
// cost of one objective call.
struct SearchBudget {
  std::int64_t max_evaluations = 200000;
};

using Objective = std::function<double(std::span<const double>)>;

struct SearchOutcome {
  std::vector<double> point;
  double value = 0.0;
  std::int64_t candidates_tried = 0;
};

// Greedy coordinate pattern search: probes +/- step along each coordinate,
// accepts improvements immediately (growing that coordinate's step), and
// halves all steps after a sweep with no improvement.  Deterministic.
SearchOutcome coordinate_pattern_search(const Objective& objective,
                                        std::span<const double> start,
                                        std::span<const double> initial_step,
                                        std::int64_t max_candidates);

// Multi-start wrapper: one run from `start`, then `restarts` runs from
// perturbed copies of the best point so far; the candidate budget is split
// evenly.  Deterministic for a fixed rng state.
SearchOutcome multi_start_search(const Objective& objective,
                                 std::span<const double> start,
                                 std::span<const double> initial_step,
                                 std::int64_t max_candidates, int restarts,
                                 Rng& rng);

}  // namespace euafnet
