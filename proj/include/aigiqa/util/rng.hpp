#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace aigiqa::util {

// Stable 64-bit FNV-1a. Used wherever a seed or an artifact name must be
// derived from a string and stay identical across platforms.
std::uint64_t fnv1a64(std::string_view text);

// SplitMix64 finalizer over (a, b); combines seed components.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

// Portable random source. std::uniform_*_distribution and std::shuffle are
// implementation-defined, so bounded draws and shuffles are done here on top
// of the fully specified mt19937_64 engine.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);

  // Uniform double in [0, 1).
  double uniform();

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace aigiqa::util
