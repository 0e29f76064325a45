#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace csq {

// Derives an independent seed for a named sub-stream ("centers", "ties",
// "init", "shuffle", ...) from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::string_view stream);

// Seeded generator with portable conversions. std::mt19937_64 output is fixed
// by the standard; the distribution helpers below are implemented here rather
// than taken from <random> because the standard distributions are not
// reproducible across library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform();

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal (Box-Muller, one value per call).
  double normal();

  bool fair_bit() { return (next() >> 63) != 0; }

  // Uniform integer in [0, bound), bound > 0; unbiased by rejection.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

// Fisher-Yates shuffle driven by Rng::below.
template <typename T>
void shuffle(std::span<T> values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace csq
