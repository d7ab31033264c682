#ifndef STDPG_RNG_HPP
#define STDPG_RNG_HPP

#include <cstdint>
#include <limits>
#include <random>

namespace stdpg {

using Rng = std::mt19937_64;

// Blocks of the sampler draw from disjoint substreams so that results do not
// depend on thread scheduling.
enum class RngStream : std::uint64_t {
  memberships = 1,
  centers = 2,
  sticks = 3,
  concentration = 4,
  ranges = 5,
  init = 6,
  synth = 7,
  window = 8,
};

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64(s);
  s ^= a + 0x9e3779b97f4a7c15ULL;
  h ^= splitmix64(s);
  s ^= b + 0xc2b2ae3d27d4eb4fULL;
  h ^= splitmix64(s);
  s ^= c + 0x165667b19e3779f9ULL;
  h ^= splitmix64(s);
  return h;
}

// Hands out per-(stream, index) engines for one Gibbs sweep.
struct SweepRng {
  std::uint64_t master = 0;
  std::uint64_t sweep = 0;

  Rng stream(RngStream tag, std::uint64_t index = 0) const {
    return Rng(derive_seed(master, static_cast<std::uint64_t>(tag), sweep, index));
  }
};

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline double normal(Rng& rng, double mean = 0.0, double sd = 1.0) {
  return std::normal_distribution<double>(mean, sd)(rng);
}

// Shape-rate parameterization (mean = shape / rate).
inline double gamma_shape_rate(Rng& rng, double shape, double rate) {
  return std::gamma_distribution<double>(shape, 1.0 / rate)(rng);
}

// Clamped into (0, 1) so both log(u) and log(1-u) stay finite downstream.
inline double beta(Rng& rng, double a, double b) {
  const double x = std::gamma_distribution<double>(a, 1.0)(rng);
  const double y = std::gamma_distribution<double>(b, 1.0)(rng);
  double u = x / (x + y);
  const double lo = std::numeric_limits<double>::min();
  const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  if (!(u > lo)) u = lo;
  if (u > hi) u = hi;
  return u;
}

}  // namespace stdpg

#endif  // STDPG_RNG_HPP
