#pragma once

#include <cstdint>
#include <random>

namespace firmrecon {

// splitmix64 finalizer, used for all seed derivation.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

// Seed for an independent stream: mix(mix(seed ^ tag * golden) ^ index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) noexcept;

// Seed of replicate r: mix(seed ^ r).
std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t replicate) noexcept;

namespace stream {
inline constexpr std::uint64_t kDegrees = 1;
inline constexpr std::uint64_t kFitness = 2;
inline constexpr std::uint64_t kAttach = 3;
inline constexpr std::uint64_t kWeights = 4;
inline constexpr std::uint64_t kSectors = 5;
inline constexpr std::uint64_t kRatios = 6;
inline constexpr std::uint64_t kTrim = 7;
inline constexpr std::uint64_t kEnsemble = 8;
inline constexpr std::uint64_t kShocks = 9;
inline constexpr std::uint64_t kPanel = 10;
}  // namespace stream

// mt19937_64 with distribution transforms written out here so draws do not
// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

  std::uint64_t next_u64() { return engine_(); }
  // [0, 1) with 53 random bits.
  double uniform();
  // (0, 1), never an endpoint.
  double uniform_open();
  // Unbiased integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  double exponential();
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  // CCDF (x / xmin)^(-tail_index) for x >= xmin.
  double pareto(double xmin, double tail_index);
  double lognormal(double mu, double sigma);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace firmrecon
