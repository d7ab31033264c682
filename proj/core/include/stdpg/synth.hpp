#ifndef STDPG_SYNTH_HPP
#define STDPG_SYNTH_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "stdpg/data.hpp"
#include "stdpg/model.hpp"

namespace stdpg {

// Forward read of the generative model, for parameter-recovery and
// distributional tests.
struct SynthSpec {
  std::uint32_t m_star = 3;      // true cluster count
  RangeParams theta;             // true ranges
  double concentration = 4.0;    // true b_u
  std::uint32_t n = 100;         // sample size
  Domain domain;
  std::optional<LandmarkCatalog> catalog;  // required in full mode
  enum class Mode { space_time_only, full_with_landmarks };
  Mode mode = Mode::space_time_only;
  std::uint64_t seed = 1;

  void validate() const;  // throws ConfigError
};

struct SynthResult {
  Dataset data;
  ClusterCenters centers;             // true centers, m_star entries
  std::vector<std::uint32_t> labels;  // true memberships
  std::vector<double> weights;        // true mixture weights, renormalized
};

// Centers uniform over Domain x [0,1]; weights from a b_u stick-breaking
// draw truncated to m_star components and renormalized; points Gaussian
// around their assigned center, truncated to the domain by resampling. In
// full mode candidates are additionally thinned by the landmark factor
// (each factor is <= 1, so it is a valid rejection bound).
// Throws RejectionStall if the full-mode acceptance rate drops below 1e-4.
SynthResult simulate(const SynthSpec& spec);

}  // namespace stdpg

#endif  // STDPG_SYNTH_HPP
