#ifndef TREECOVER_RNG_HPP
#define TREECOVER_RNG_HPP

// Keyed random streams: every (global seed, stream index) pair names an
// independent xoshiro256++ sequence, so a Monte Carlo sample depends only on
// its own index and never on how samples are distributed over workers.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace treecover {

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class Stream {
 public:
  using result_type = std::uint64_t;

  Stream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t a = seed;
    std::uint64_t key = splitmix64(a);
    std::uint64_t b = index ^ 0xD1B54A32D192ED03ull;
    key ^= splitmix64(b);
    for (auto& w : s_) w = splitmix64(key);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = std::rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_positive() { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log(uniform_positive()) / rate; }

  /// Failures before the first success in Bernoulli(p_success) trials.
  std::uint64_t geometric(double p_success) {
    if (p_success >= 1.0) return 0;
    const double g = std::floor(std::log(uniform_positive()) / std::log1p(-p_success));
    return static_cast<std::uint64_t>(g);
  }

  /// Gamma(shape, rate); shape 0 gives 0.
  double gamma(double shape, double rate) {
    if (shape <= 0.0) return 0.0;
    std::gamma_distribution<double> dist(shape, 1.0 / rate);
    return dist(*this);
  }

  double normal(double mean, double sd) {
    std::normal_distribution<double> dist(mean, sd);
    return dist(*this);
  }

 private:
  std::uint64_t s_[4];
};

}  // namespace treecover

#endif  // TREECOVER_RNG_HPP
