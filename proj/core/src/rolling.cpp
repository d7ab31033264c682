#include "stdpg/rolling.hpp"

#include <algorithm>
#include <cmath>

#include "stdpg/errors.hpp"
#include "stdpg/rng.hpp"

namespace stdpg {

namespace {
constexpr double kVarianceFloor = 1e-10;
}

WindowPrior build_prior(const PosteriorSummary& prev, double c_mult,
                        std::vector<std::string>* warnings) {
  const std::size_t dim = prev.theta_dim();
  std::vector<double> mu(dim), sigma2(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const ParamSummary s = prev.component(k);
    mu[k] = s.mean;
    double v = c_mult * s.var;
    if (!(v > 0.0)) {
      v = kVarianceFloor;
      if (warnings != nullptr)
        warnings->push_back("prior variance floored for component " +
                            std::to_string(k));
    }
    sigma2[k] = v;
  }
  return WindowPrior::truncated_normal(std::move(mu), std::move(sigma2));
}

RangeParams initial_ranges(const Dataset& data, const LandmarkCatalog& catalog,
                           std::span<const GeoPoint> init_centers) {
  // RMS distance from each point to its nearest landmark; without a catalog,
  // to its nearest initial center.
  double ss = 0.0;
  if (!catalog.empty()) {
    for (std::size_t i = 0; i < data.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t l = 0; l < data.n_landmark_types; ++l) {
        const GeoPoint& z = data.nearest_of(i, l);
        const double dx = data.points[i].lon - z.lon;
        const double dy = data.points[i].lat - z.lat;
        best = std::min(best, dx * dx + dy * dy);
      }
      ss += best;
    }
  } else {
    for (std::size_t i = 0; i < data.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : init_centers) {
        const double dx = data.points[i].lon - c.lon;
        const double dy = data.points[i].lat - c.lat;
        best = std::min(best, dx * dx + dy * dy);
      }
      ss += best;
    }
  }
  const double rms = std::sqrt(ss / static_cast<double>(data.size()));
  RangeParams theta;
  theta.spatial = std::max(0.5 * rms, 10.0 * kOmegaFloor);
  theta.temporal = 0.25;
  theta.landmark.assign(catalog.n_types(), theta.spatial);
  return theta;
}

ChainState init_window_state(const ClusterCenters* prev_centers,
                             const Dataset& data, const LandmarkCatalog& catalog,
                             const RangeParams& theta_init, const InitOptions& opts) {
  const std::uint32_t m = opts.max_clusters;
  ChainState state;
  state.theta = theta_init;
  state.centers.spatial.resize(m);
  state.centers.time.resize(m);

  Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(RngStream::init)));

  if (prev_centers != nullptr) {
    if (prev_centers->size() != m)
      throw ConfigError("carried centers do not match the truncation level");
    state.centers.spatial = prev_centers->spatial;
    if (opts.carry_time) {
      state.centers.time = prev_centers->time;
    } else {
      for (auto& t : state.centers.time) t = uniform01(rng);
    }
    // Carried centers can sit outside the new window's box; clamp them in.
    for (auto& c : state.centers.spatial) {
      c.lon = std::clamp(c.lon, data.domain.lon_min, data.domain.lon_max);
      c.lat = std::clamp(c.lat, data.domain.lat_min, data.domain.lat_max);
    }
  } else {
    const std::vector<GeoPoint> pool =
        catalog.empty() ? data.points : catalog.all_sites();
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (std::uint32_t j = 0; j < m; ++j) {
      GeoPoint c = pool[pick(rng)];
      c.lon += normal(rng, 0.0, opts.site_jitter);
      c.lat += normal(rng, 0.0, opts.site_jitter);
      c.lon = std::clamp(c.lon, data.domain.lon_min, data.domain.lon_max);
      c.lat = std::clamp(c.lat, data.domain.lat_min, data.domain.lat_max);
      state.centers.spatial[j] = c;
      state.centers.time[j] = uniform01(rng);
    }
  }

  // Sticks and concentration from their priors.
  state.stick.concentration = gamma_shape_rate(rng, 1.0, 0.25);
  state.stick.sticks.resize(m);
  for (std::uint32_t j = 0; j + 1 < m; ++j)
    state.stick.sticks[j] = beta(rng, 1.0, state.stick.concentration);
  state.stick.sticks[m - 1] = 1.0;
  state.stick.weights = stick_weights(state.stick.sticks);

  // One categorical membership draw given the initial blocks.
  state.membership.labels.assign(data.size(), 0);
  state.recount_sizes();
  const SweepRng sweep_rng{opts.seed, 0};
  sample_memberships(state, data, sweep_rng, LandmarkNormalizer::linear);
  return state;
}

std::vector<WindowResult> run_rolling(std::span<const CaseRecord> cases,
                                      const LandmarkCatalog& catalog,
                                      Date study_start, Date study_end,
                                      int window_days, const SamplerConfig& config,
                                      const RollingOptions& options,
                                      const WindowSink& sink,
                                      const ResumeProvider& resume) {
  if (window_days < 1) throw ConfigError("window length must be >= 1 day");
  const int study_days = study_end - study_start;
  if (study_days < window_days)
    throw ConfigError("study period shorter than one window");
  const int n_windows = study_days / window_days;

  std::vector<WindowResult> results;
  results.reserve(static_cast<std::size_t>(n_windows));
  const PosteriorSummary* prev_summary = nullptr;
  const ClusterCenters* prev_centers = nullptr;

  for (int w = 0; w < n_windows; ++w) {
    WindowResult res;
    res.index = w;
    res.start = study_start + w * window_days;
    res.end = res.start + window_days;

    std::vector<CaseRecord> in_window;
    try {
      in_window = window_slice(cases, res.start, window_days);
    } catch (const EmptyWindow&) {
      res.skipped_empty = true;
      results.push_back(std::move(res));
      continue;
    }
    res.n_cases = in_window.size();

    if (resume != nullptr) {
      if (auto stored = resume(w)) {
        res.summary = std::move(*stored);
        results.push_back(std::move(res));
        prev_summary = &results.back().summary;
        prev_centers = &results.back().summary.final_centers;
        continue;
      }
    }

    const Dataset data = normalize(in_window, res.start, window_days, catalog);

    SamplerConfig window_config = config;
    window_config.seed = derive_seed(
        config.seed, static_cast<std::uint64_t>(RngStream::window), w);

    InitOptions init_opts;
    init_opts.max_clusters = config.max_clusters;
    init_opts.seed = window_config.seed;
    init_opts.carry_time = options.carry_time;

    const ClusterCenters* carried =
        options.carry_centers ? prev_centers : nullptr;
    WindowPrior prior = WindowPrior::flat_positive();
    RangeParams theta0;
    std::vector<std::string> prior_warnings;
    if (prev_summary != nullptr && options.use_sequential_prior) {
      prior = build_prior(*prev_summary, options.c_mult, &prior_warnings);
      theta0 = prev_summary->final_theta;
    } else {
      ChainState probe = init_window_state(carried, data, catalog,
                                           RangeParams{}, init_opts);
      theta0 = initial_ranges(data, catalog, probe.centers.spatial);
    }
    ChainState init = init_window_state(carried, data, catalog, theta0, init_opts);

    ChainState final_state;
    const Trace trace = run_chain(window_config, data, prior, init, &final_state);
    res.summary = summarize(trace);
    res.summary.warnings.insert(res.summary.warnings.end(),
                                prior_warnings.begin(), prior_warnings.end());
    res.summary.final_centers = final_state.centers;
    res.summary.final_sizes = final_state.cluster_sizes;
    res.summary.final_theta = final_state.theta;

    if (sink != nullptr) sink(res, data, trace, final_state);
    results.push_back(std::move(res));
    prev_summary = &results.back().summary;
    prev_centers = &results.back().summary.final_centers;
  }
  return results;
}

}  // namespace stdpg
