#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace chaincluster {

// Independent substream labels. Every randomized pipeline stage draws from
// mt19937_64 seeded by hashing (base seed, purpose, instance), so the graph
// draw, lead-node draw, excitations and noise never share a stream and any
// stage can be regenerated in isolation.
enum class StreamPurpose : std::uint64_t {
  kGraph = 1,
  kLeads = 2,
  kLeadPattern = 3,
  kExcitation = 4,
  kNoise = 5,
  kKmeans = 6,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 make_stream(std::uint64_t seed, StreamPurpose purpose,
                                   std::uint64_t instance = 0) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ static_cast<std::uint64_t>(purpose));
  s = splitmix64(s ^ instance);
  return std::mt19937_64(s);
}

// Uniform in [0, 1) with 53 random mantissa bits.
inline double uniform_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased uniform integer in [0, n). std::uniform_int_distribution is not
// portable across standard libraries, this is.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  std::uint64_t x;
  do {
    x = rng();
  } while (x < threshold);
  return x % n;
}

// Box-Muller standard normals; keeps the spare sample so consecutive draws
// cost one transcendental pair per two values.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::mt19937_64& rng) : rng_(rng) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite
    const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform_double(rng_);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64& rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace chaincluster
