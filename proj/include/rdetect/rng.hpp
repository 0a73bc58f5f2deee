#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rdetect {

/// SplitMix64 finalizer; used to derive independent engine seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Random stream for one run. The engine is std::mt19937_64 seeded with
/// SplitMix64(seed) mixed with SplitMix64(stream), so run i of a batch with
/// base seed S always sees the same sequence.
class Rng {
 public:
  static constexpr std::string_view algorithm = "mt19937_64+splitmix64";

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(splitmix64(seed) ^ splitmix64(splitmix64(stream + 0x5851f42d4c957f2dULL))) {}

  /// Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
  }

  /// Uniform real in [0, 1).
  double uniform() { return std::generate_canonical<double, 64>(engine_); }

  bool bernoulli(double p) { return p > 0.0 && uniform() < p; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rdetect
