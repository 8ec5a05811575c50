#pragma once

#include <cstdint>
#include <random>

namespace euafnet {

// Seeded generator with explicitly specified output mapping, so results are
// reproducible across platforms and standard-library versions.  Substreams
// derived via split() are independent of draw order in the parent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

  // Symmetric triangular-ish perturbation in [-scale, scale].
  double jitter(double scale) { return scale * (2.0 * uniform() - 1.0); }

  // Deterministic substream keyed by (seed, stream).
  Rng split(std::uint64_t stream) const {
    return Rng(mix(seed_of(engine_) ^ 0x9e3779b97f4a7c15ull, stream));
  }

  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  // mt19937_64 does not expose its seed; remember it alongside the engine.
  struct SeededEngine : std::mt19937_64 {
    explicit SeededEngine(std::uint64_t s) : std::mt19937_64(s), seed(s) {}
    std::uint64_t seed;
  };
  static std::uint64_t seed_of(const SeededEngine& e) { return e.seed; }

  SeededEngine engine_;
};

}  // namespace euafnet
