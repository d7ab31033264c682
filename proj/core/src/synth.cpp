#include "stdpg/synth.hpp"

#include <cassert>
#include <cmath>
#include <numeric>

#include "stdpg/errors.hpp"
#include "stdpg/rng.hpp"

namespace stdpg {

namespace {

constexpr double kMinAcceptRate = 1e-4;
// Acceptance-rate check kicks in only after this many candidates.
constexpr std::uint64_t kStallCheckAfter = 100000;

}  // namespace

void SynthSpec::validate() const {
  if (n < 1) throw ConfigError("sample size must be >= 1");
  if (m_star < 1) throw ConfigError("m_star must be >= 1");
  if (!theta.valid()) throw ConfigError("true ranges must exceed the floor");
  if (!(concentration > 0.0)) throw ConfigError("concentration must be > 0");
  if (!domain.is_valid()) throw ConfigError("invalid domain");
  if (mode == Mode::full_with_landmarks) {
    if (!catalog.has_value() || catalog->empty())
      throw ConfigError("full mode requires a landmark catalog");
    if (theta.landmark.size() != catalog->n_types())
      throw ConfigError("landmark range count must match catalog types");
  }
}

SynthResult simulate(const SynthSpec& spec) {
  spec.validate();
  const bool full = spec.mode == SynthSpec::Mode::full_with_landmarks;
  const std::size_t p = full ? spec.catalog->n_types() : 0;

  SynthResult out;
  Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(RngStream::synth)));

  // True centers, uniform over the space-time domain.
  out.centers.spatial.resize(spec.m_star);
  out.centers.time.resize(spec.m_star);
  for (std::uint32_t j = 0; j < spec.m_star; ++j) {
    out.centers.spatial[j] = {
        spec.domain.lon_min + uniform01(rng) * spec.domain.lon_span(),
        spec.domain.lat_min + uniform01(rng) * spec.domain.lat_span()};
    out.centers.time[j] = uniform01(rng);
  }

  // Stick-breaking weights truncated to m_star components, renormalized.
  std::vector<double> sticks(spec.m_star);
  for (auto& u : sticks) u = beta(rng, 1.0, spec.concentration);
  out.weights = stick_weights(sticks);
  const double total = std::accumulate(out.weights.begin(), out.weights.end(), 0.0);
  for (auto& q : out.weights) q /= total;

  // Memberships.
  out.labels.resize(spec.n);
  for (std::uint32_t i = 0; i < spec.n; ++i) {
    const double u = uniform01(rng);
    double cum = 0.0;
    std::uint32_t pick = spec.m_star - 1;
    for (std::uint32_t j = 0; j < spec.m_star; ++j) {
      cum += out.weights[j];
      if (u < cum) {
        pick = j;
        break;
      }
    }
    out.labels[i] = pick;
  }

  // Points: Gaussian around the assigned center, truncated to the domain by
  // resampling; full mode thins candidates by the landmark factor.
  out.data.points.resize(spec.n);
  out.data.times.resize(spec.n);
  out.data.domain = spec.domain;
  out.data.n_landmark_types = p;
  if (p > 0) out.data.nearest.resize(static_cast<std::size_t>(spec.n) * p);

  std::uint64_t candidates = 0, accepted = 0;
  std::vector<GeoPoint> z(p);
  for (std::uint32_t i = 0; i < spec.n; ++i) {
    const std::uint32_t j = out.labels[i];
    const GeoPoint& c = out.centers.spatial[j];
    const double ct = out.centers.time[j];
    while (true) {
      ++candidates;
      const GeoPoint x{normal(rng, c.lon, spec.theta.spatial),
                       normal(rng, c.lat, spec.theta.spatial)};
      const double t = normal(rng, ct, spec.theta.temporal);
      if (!spec.domain.contains(x, t)) continue;
      if (full) {
        const auto row = nearest_landmarks(std::span<const GeoPoint>(&x, 1),
                                           *spec.catalog);
        double log_acc = 0.0;
        for (std::size_t l = 0; l < p; ++l) {
          const double dx = row[l].lon - c.lon;
          const double dy = row[l].lat - c.lat;
          const double wl = spec.theta.landmark[l];
          log_acc -= (dx * dx + dy * dy) / (2.0 * wl * wl);
        }
        assert(log_acc <= 0.0);  // each factor is <= 1
        if (candidates > kStallCheckAfter &&
            static_cast<double>(accepted) / static_cast<double>(candidates) <
                kMinAcceptRate)
          throw RejectionStall("full-mode acceptance rate below 1e-4");
        if (std::log(uniform01(rng)) >= log_acc) continue;
        for (std::size_t l = 0; l < p; ++l)
          out.data.nearest[static_cast<std::size_t>(i) * p + l] = row[l];
      }
      ++accepted;
      out.data.points[i] = x;
      out.data.times[i] = t;
      break;
    }
  }
  return out;
}

}  // namespace stdpg
