#include "euafnet/search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace euafnet {

SearchOutcome coordinate_pattern_search(const Objective& objective,
                                        std::span<const double> start,
                                        std::span<const double> initial_step,
                                        std::int64_t max_candidates) {
  if (start.empty()) {
    throw std::invalid_argument("coordinate_pattern_search: empty start point");
  }
  if (initial_step.size() != start.size()) {
    throw std::invalid_argument(
        "coordinate_pattern_search: step size count mismatch");
  }

  SearchOutcome out;
  out.point.assign(start.begin(), start.end());
  out.value = objective(out.point);
  out.candidates_tried = 1;

  std::vector<double> step(initial_step.begin(), initial_step.end());
  std::vector<double> trial = out.point;
  const double min_step = 1e-12;

  while (out.candidates_tried < max_candidates) {
    bool improved = false;
    for (std::size_t i = 0;
         i < out.point.size() && out.candidates_tried < max_candidates; ++i) {
      if (step[i] < min_step) continue;
      for (double dir : {1.0, -1.0}) {
        if (out.candidates_tried >= max_candidates) break;
        trial = out.point;
        trial[i] += dir * step[i];
        const double v = objective(trial);
        ++out.candidates_tried;
        if (v < out.value) {
          out.point = trial;
          out.value = v;
          step[i] *= 1.6;
          improved = true;
          break;
        }
      }
    }
    if (!improved) {
      double largest = 0.0;
      for (double& s : step) {
        s *= 0.5;
        largest = std::max(largest, s);
      }
      if (largest < min_step) break;
    }
  }
  return out;
}

SearchOutcome multi_start_search(const Objective& objective,
                                 std::span<const double> start,
                                 std::span<const double> initial_step,
                                 std::int64_t max_candidates, int restarts,
                                 Rng& rng) {
  const int runs = std::max(1, restarts + 1);
  const std::int64_t share = std::max<std::int64_t>(1, max_candidates / runs);

  SearchOutcome best = coordinate_pattern_search(objective, start,
                                                 initial_step, share);
  std::vector<double> perturbed(start.size());
  for (int r = 1; r < runs; ++r) {
    if (best.candidates_tried >= max_candidates) break;
    for (std::size_t i = 0; i < perturbed.size(); ++i) {
      perturbed[i] = best.point[i] + rng.jitter(4.0 * initial_step[i]);
    }
    const std::int64_t remaining = max_candidates - best.candidates_tried;
    SearchOutcome run = coordinate_pattern_search(
        objective, perturbed, initial_step, std::min(share, remaining));
    const std::int64_t total = best.candidates_tried + run.candidates_tried;
    if (run.value < best.value) {
      best = std::move(run);
    }
    best.candidates_tried = total;
  }
  return best;
}

}  // namespace euafnet
