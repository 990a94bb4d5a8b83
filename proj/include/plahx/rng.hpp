#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace plahx {

// Deterministic RNG wrapper. All draws go through hand-rolled conversions so
// results do not depend on the standard library's distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // [0, 1)
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform in [0, n); n must be > 0
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  // uniform integer in [lo, hi] inclusive
  int range(int lo, int hi) {
    if (hi <= lo) return lo;
    return lo + static_cast<int>(index(static_cast<std::size_t>(hi - lo) + 1));
  }

  // index drawn proportionally to weights; caller guarantees some weight > 0
  std::size_t weighted(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double r = uniform01() * total;
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] > 0.0) last_positive = i;
      acc += weights[i];
      if (r < acc) return i;
    }
    return last_positive;  // guards against rounding at r == total
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace plahx
