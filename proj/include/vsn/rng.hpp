#pragma once
// Deterministic, splittable pseudo-random source.
//
// Every stochastic subsystem of a run (mobility spawn, hello losses, packet
// generation, scheduler draws, privacy noise, network init) owns a child
// stream derived from the run seed and a fixed stream tag.  Children are
// derived from the parent's seed, not from its draw position, so adding or
// removing draws in one subsystem never perturbs another.  All distributions
// are implemented by hand on top of the raw 64-bit stream; nothing here
// depends on implementation-defined std::distribution behaviour.

#include <cstdint>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace vsn {

namespace detail {
// SplitMix64, used only to expand seeds into engine state.
inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
inline std::uint64_t rotl(std::uint64_t v, int k) {
  return (v << k) | (v >> (64 - k));
}
}  // namespace detail

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& w : s_) w = detail::splitmix64(x);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  // Child stream; stable under any number of draws on the parent.
  Rng child(std::uint64_t stream_tag) const {
    std::uint64_t x = seed_ ^ (0xa0761d6478bd642fULL * (stream_tag + 1));
    return Rng(detail::splitmix64(x));
  }

  std::uint64_t seed() const { return seed_; }

  // xoshiro256++
  std::uint64_t next_u64() {
    const std::uint64_t result = detail::rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = detail::rotl(s_[3], 45);
    return result;
  }

  // Uniform on the open interval (0, 1); never returns an exact endpoint, so
  // log/ratio transforms downstream stay finite.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_int: n must be positive");
    const std::uint64_t threshold = (-n) % n;  // 2^64 mod n
    std::uint64_t x = next_u64();
    while (x < threshold) x = next_u64();
    return x % n;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Laplace(0, scale) via inverse CDF; uniform01 is endpoint-free so the
  // result is always finite.
  double laplace(double scale) {
    const double u = uniform01() - 0.5;
    const double sgn = (u < 0.0) ? -1.0 : 1.0;
    return -scale * sgn * std::log(1.0 - 2.0 * std::fabs(u));
  }

  // Knuth's product method; intended for small means (per-tick arrival
  // counts), where it is exact and fast.
  int poisson(double mean) {
    if (mean < 0.0) throw std::invalid_argument("poisson: mean must be >= 0");
    if (mean == 0.0) return 0;
    const double limit = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform01();
    } while (p > limit);
    return k - 1;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
};

// Stream tags for the per-subsystem children of a run's root Rng.
enum class RngStream : std::uint64_t {
  MobilityInit = 1,
  HelloLoss = 2,
  PacketGen = 3,
  Scheduler = 4,
  PrivacyReward = 5,
  PrivacyAction = 6,
  NetInit = 7,
  NetShuffle = 8,
  Training = 9,
};

inline Rng child(const Rng& parent, RngStream s) {
  return parent.child(static_cast<std::uint64_t>(s));
}

}  // namespace vsn
