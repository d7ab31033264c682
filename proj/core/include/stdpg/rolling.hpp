#ifndef STDPG_ROLLING_HPP
#define STDPG_ROLLING_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stdpg/data.hpp"
#include "stdpg/prior.hpp"
#include "stdpg/sampler.hpp"

namespace stdpg {

// Truncated-normal prior for the next window: means from the previous
// posterior, variances inflated by c_mult. Zero variances are floored at
// 1e-10 with a warning.
WindowPrior build_prior(const PosteriorSummary& prev, double c_mult = 2.0,
                        std::vector<std::string>* warnings = nullptr);

struct InitOptions {
  std::uint32_t max_clusters = 120;
  std::uint64_t seed = 1;
  bool carry_time = false;  // windows re-normalize time, so off by default
  double site_jitter = 1e-3;  // degrees, for window-1 centers
};

// Window 1 (prev_centers == nullptr): spatial centers drawn from the
// landmark sites (or from observed points when no catalog) with jitter,
// time centers uniform. Later windows copy the previous final spatial
// centers. Sticks and concentration start from their priors and the
// memberships from one categorical draw.
ChainState init_window_state(const ClusterCenters* prev_centers,
                             const Dataset& data, const LandmarkCatalog& catalog,
                             const RangeParams& theta_init, const InitOptions& opts);

// Method-of-moments starting ranges for a flat-prior window: spatial range
// from half the RMS nearest-landmark distance (nearest initial center when
// there is no catalog), temporal fixed at 0.25.
RangeParams initial_ranges(const Dataset& data, const LandmarkCatalog& catalog,
                           std::span<const GeoPoint> init_centers);

struct WindowResult {
  int index = 0;  // 0-based
  Date start;
  Date end;          // exclusive; windows are labeled by this date
  std::size_t n_cases = 0;
  bool skipped_empty = false;
  PosteriorSummary summary;
};

struct RollingOptions {
  double c_mult = 2.0;
  bool use_sequential_prior = true;  // off = independent flat-prior fits
  bool carry_centers = true;
  bool carry_time = false;
};

// Called after each fitted window with its dataset, trace and final state,
// so callers can persist artifacts.
using WindowSink = std::function<void(const WindowResult&, const Dataset&,
                                      const Trace&, const ChainState&)>;

// Returns the stored summary for an already-completed window, or nullopt to
// fit it; lets an interrupted study resume.
using ResumeProvider = std::function<std::optional<PosteriorSummary>(int)>;

// Fits consecutive disjoint windows of window_days over
// [study_start, study_end), each window's prior and initial centers taken
// from its predecessor. Trailing days short of a full window are not
// fitted. Empty windows are skipped and reported with skipped_empty set.
std::vector<WindowResult> run_rolling(std::span<const CaseRecord> cases,
                                      const LandmarkCatalog& catalog,
                                      Date study_start, Date study_end,
                                      int window_days, const SamplerConfig& config,
                                      const RollingOptions& options = {},
                                      const WindowSink& sink = nullptr,
                                      const ResumeProvider& resume = nullptr);

}  // namespace stdpg

#endif  // STDPG_ROLLING_HPP
