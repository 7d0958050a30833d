#ifndef HARDLABEL_RNG_H_
#define HARDLABEL_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace hardlabel {

// Seeded generator with distribution helpers whose output is fixed by this
// code rather than by the standard library's distribution implementations,
// so traces are reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n);

  // Uniform integer in [lo, hi].
  std::size_t uniform_between(std::size_t lo, std::size_t hi) {
    return lo + uniform_index(hi - lo + 1);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Index drawn proportionally to non-negative weights. Falls back to a
  // uniform draw when every weight is zero.
  std::size_t weighted_index(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

// Seed for stream `stream` under root seed `root` (SplitMix64 of the pair).
// Independent of evaluation order, so per-sample streams do not depend on
// worker scheduling.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);

}  // namespace hardlabel

#endif  // HARDLABEL_RNG_H_
