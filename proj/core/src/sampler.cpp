#include "stdpg/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stdpg/errors.hpp"
#include "stdpg/threading.hpp"

namespace stdpg {

namespace {

constexpr int kTruncationAttempts = 100;
constexpr std::uint32_t kAdaptInterval = 50;
constexpr double kAdaptFactor = 1.25;
constexpr double kAcceptLow = 0.2;
constexpr double kAcceptHigh = 0.5;

double draw_truncated_normal(Rng& rng, double mean, double sd, double lo, double hi) {
  double v = 0.0;
  for (int attempt = 0; attempt < kTruncationAttempts; ++attempt) {
    v = normal(rng, mean, sd);
    if (v >= lo && v <= hi) return v;
  }
  return std::clamp(v, lo, hi);
}

}  // namespace

void SamplerConfig::validate() const {
  if (max_clusters < 2) throw ConfigError("max_clusters must be >= 2");
  if (n_burn >= n_iter) throw ConfigError("n_burn must be < n_iter");
  if (thin < 1) throw ConfigError("thin must be >= 1");
  if (!(mh_step > 0.0)) throw ConfigError("mh_step must be > 0");
  if (!(hyper_a > 0.0) || !(hyper_b > 0.0))
    throw ConfigError("concentration hyperparameters must be > 0");
}

std::uint32_t ChainState::n_nonempty() const {
  std::uint32_t n = 0;
  for (auto c : cluster_sizes) n += c > 0 ? 1 : 0;
  return n;
}

std::vector<std::uint32_t> ChainState::nonempty_clusters() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t j = 0; j < cluster_sizes.size(); ++j)
    if (cluster_sizes[j] > 0) out.push_back(j);
  return out;
}

void ChainState::recount_sizes() {
  cluster_sizes.assign(truncation(), 0);
  for (auto g : membership.labels) ++cluster_sizes[g];
}

void MhState::reset_counts() {
  std::fill(accepted.begin(), accepted.end(), 0);
  std::fill(proposed.begin(), proposed.end(), 0);
}

void sample_memberships(ChainState& state, const Dataset& data,
                        const SweepRng& rng, LandmarkNormalizer normalizer) {
  const std::size_t m = state.truncation();
  std::vector<double> log_weights(m);
  for (std::size_t j = 0; j < m; ++j)
    log_weights[j] = std::log(state.stick.weights[j]);

  auto& labels = state.membership.labels;
  parallel_blocks(data.size(), [&](std::size_t block, std::size_t lo, std::size_t hi) {
    Rng block_rng = rng.stream(RngStream::memberships, block);
    std::vector<double> probs(m);
    for (std::size_t i = lo; i < hi; ++i) {
      membership_probs_into(data, i, state.centers, log_weights, state.theta,
                            normalizer, probs);
      const double u = uniform01(block_rng);
      double cum = 0.0;
      std::uint32_t pick = 0;
      bool picked = false;
      for (std::size_t j = 0; j < m; ++j) {
        if (probs[j] <= 0.0) continue;
        pick = static_cast<std::uint32_t>(j);  // last positive, the fallback
        cum += probs[j];
        if (u < cum) {
          picked = true;
          break;
        }
      }
      (void)picked;  // cum can fall a few ulp short of 1; fallback covers it
      labels[i] = pick;
    }
  });
  state.recount_sizes();
}

void sample_centers(ChainState& state, const Dataset& data, const SweepRng& rng) {
  const std::size_t m = state.truncation();
  const Domain& dom = data.domain;
  const std::size_t p = data.n_landmark_types;
  const double inv_ws2 = 1.0 / (state.theta.spatial * state.theta.spatial);
  std::vector<double> inv_wl2(p);
  double inv_wl2_sum = 0.0;
  for (std::size_t l = 0; l < p; ++l) {
    inv_wl2[l] = 1.0 / (state.theta.landmark[l] * state.theta.landmark[l]);
    inv_wl2_sum += inv_wl2[l];
  }

  // Member lists per cluster, in observation order.
  std::vector<std::vector<std::uint32_t>> members(m);
  for (std::uint32_t i = 0; i < data.size(); ++i)
    members[state.membership.labels[i]].push_back(i);

  parallel_blocks(m, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t j = lo; j < hi; ++j) {
      Rng jrng = rng.stream(RngStream::centers, j);
      const auto& idx = members[j];
      if (idx.empty()) {
        // Refresh dormant clusters from the uniform prior over S x [0,1].
        state.centers.spatial[j] = {
            dom.lon_min + uniform01(jrng) * dom.lon_span(),
            dom.lat_min + uniform01(jrng) * dom.lat_span()};
        state.centers.time[j] = uniform01(jrng);
        continue;
      }
      const double n_j = static_cast<double>(idx.size());
      const double precision = n_j * (inv_ws2 + inv_wl2_sum);
      double mx = 0.0, my = 0.0, mt = 0.0;
      for (auto i : idx) {
        mx += data.points[i].lon * inv_ws2;
        my += data.points[i].lat * inv_ws2;
        for (std::size_t l = 0; l < p; ++l) {
          const GeoPoint& z = data.nearest_of(i, l);
          mx += z.lon * inv_wl2[l];
          my += z.lat * inv_wl2[l];
        }
        mt += data.times[i];
      }
      const double sd_s = 1.0 / std::sqrt(precision);
      state.centers.spatial[j] = {
          draw_truncated_normal(jrng, mx / precision, sd_s, dom.lon_min, dom.lon_max),
          draw_truncated_normal(jrng, my / precision, sd_s, dom.lat_min, dom.lat_max)};
      const double sd_t = state.theta.temporal / std::sqrt(n_j);
      state.centers.time[j] =
          draw_truncated_normal(jrng, mt / n_j, sd_t, 0.0, 1.0);
    }
  });
}

void sample_sticks(ChainState& state, const SweepRng& rng) {
  const std::size_t m = state.truncation();
  const std::size_t n = state.membership.labels.size();
  Rng srng = rng.stream(RngStream::sticks);

  // Suffix counts: beyond[j] = #{g_i > j}.
  std::vector<double> beyond(m, 0.0);
  double above = static_cast<double>(n);
  for (std::size_t j = 0; j < m; ++j) {
    above -= static_cast<double>(state.cluster_sizes[j]);
    beyond[j] = above;
  }

  for (std::size_t j = 0; j + 1 < m; ++j) {
    state.stick.sticks[j] =
        beta(srng, 1.0 + static_cast<double>(state.cluster_sizes[j]),
             state.stick.concentration + beyond[j]);
  }
  state.stick.sticks[m - 1] = 1.0;
  state.stick.weights = stick_weights(state.stick.sticks);
}

void sample_concentration(ChainState& state, double hyper_a, double hyper_b,
                          const SweepRng& rng) {
  const std::size_t m = state.truncation();
  Rng crng = rng.stream(RngStream::concentration);
  double log1m_sum = 0.0;
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const double u = state.stick.sticks[j];
    if (u >= 1.0) throw DegenerateError("stick at 1 before the last index");
    log1m_sum += std::log1p(-u);
  }
  const double shape = static_cast<double>(m) - 1.0 + hyper_a;
  const double rate = hyper_b - log1m_sum;
  state.stick.concentration = gamma_shape_rate(crng, shape, rate);
}

namespace {

// Sums of squared distances from each observation to its assigned cluster,
// split by kernel factor. These are the sufficient statistics of the
// membership-conditional range likelihood.
struct RangeStats {
  double spatial = 0.0;   // sum_i |x_i - c_{g_i}|^2
  double temporal = 0.0;  // sum_i (t_i - c_{g_i}^t)^2
  std::vector<double> landmark;  // per type, sum_i |z_i^l - c_{g_i}|^2
};

RangeStats accumulate_range_stats(const ChainState& state, const Dataset& data) {
  RangeStats stats;
  const std::size_t p = data.n_landmark_types;
  stats.spatial = parallel_block_sum(data.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const GeoPoint& c = state.centers.spatial[state.membership.labels[i]];
      const double dx = data.points[i].lon - c.lon;
      const double dy = data.points[i].lat - c.lat;
      s += dx * dx + dy * dy;
    }
    return s;
  });
  stats.temporal = parallel_block_sum(data.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double dt = data.times[i] - state.centers.time[state.membership.labels[i]];
      s += dt * dt;
    }
    return s;
  });
  stats.landmark.resize(p);
  for (std::size_t l = 0; l < p; ++l) {
    stats.landmark[l] = parallel_block_sum(data.size(), [&](std::size_t lo, std::size_t hi) {
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) {
        const GeoPoint& c = state.centers.spatial[state.membership.labels[i]];
        const GeoPoint& z = data.nearest_of(i, l);
        const double dx = z.lon - c.lon;
        const double dy = z.lat - c.lat;
        s += dx * dx + dy * dy;
      }
      return s;
    });
  }
  return stats;
}

// Log of the conditional target for one range component: the assigned-kernel
// likelihood factor plus the window prior. norm_count is the multiplicity of
// the 1/omega normalizer (2N spatial, N temporal, N or 2N per landmark).
double range_log_target(double omega, double norm_count, double sq_sum,
                        const WindowPrior& prior, std::size_t k) {
  return -norm_count * std::log(omega) - sq_sum / (2.0 * omega * omega) +
         prior.log_density_component(k, omega);
}

}  // namespace

void sample_ranges(ChainState& state, const Dataset& data, const WindowPrior& prior,
                   MhState& mh, const SweepRng& rng, LandmarkNormalizer normalizer) {
  const RangeStats stats = accumulate_range_stats(state, data);
  const double n = static_cast<double>(data.size());
  const double lnorm = normalizer == LandmarkNormalizer::linear ? 1.0 : 2.0;
  Rng rrng = rng.stream(RngStream::ranges);

  const std::size_t dim = state.theta.dim();
  for (std::size_t k = 0; k < dim; ++k) {
    const double norm_count = k == 0 ? 2.0 * n : (k == 1 ? n : lnorm * n);
    const double sq_sum =
        k == 0 ? stats.spatial : (k == 1 ? stats.temporal : stats.landmark[k - 2]);

    const double cur = state.theta.component(k);
    const double proposal = cur * std::exp(mh.log_step[k] * normal(rrng));
    const double u = uniform01(rrng);
    ++mh.proposed[k];
    if (proposal < kOmegaFloor) continue;

    // log-scale random walk: the omega'/omega factor is the Jacobian.
    const double log_accept =
        range_log_target(proposal, norm_count, sq_sum, prior, k) -
        range_log_target(cur, norm_count, sq_sum, prior, k) +
        std::log(proposal) - std::log(cur);
    if (std::log(u) < log_accept) {
      state.theta.set_component(k, proposal);
      ++mh.accepted[k];
    }
  }
}

void gibbs_sweep(ChainState& state, const Dataset& data, const WindowPrior& prior,
                 MhState& mh, const SweepRng& rng, LandmarkNormalizer normalizer,
                 double hyper_a, double hyper_b) {
  sample_memberships(state, data, rng, normalizer);
  sample_centers(state, data, rng);
  sample_sticks(state, rng);
  sample_concentration(state, hyper_a, hyper_b, rng);
  sample_ranges(state, data, prior, mh, rng, normalizer);
}

Trace run_chain(const SamplerConfig& config, const Dataset& data,
                const WindowPrior& prior, const ChainState& init,
                ChainState* final_state) {
  config.validate();
  ChainState state = init;
  state.recount_sizes();
  MhState mh(state.theta.dim(), config.mh_step);

  Trace trace;
  trace.n_landmarks = data.n_landmark_types;
  trace.domain = data.domain;
  const std::size_t retained = (config.n_iter - config.n_burn) / config.thin;
  trace.rows.reserve(retained);
  if (config.store_draw_states) trace.draw_states.reserve(retained);

  for (std::uint32_t iter = 1; iter <= config.n_iter; ++iter) {
    const SweepRng rng{config.seed, iter};
    gibbs_sweep(state, data, prior, mh, rng, config.normalizer, config.hyper_a,
                config.hyper_b);

    const bool in_burn = iter <= config.n_burn;
    if (config.adapt && in_burn && iter % kAdaptInterval == 0) {
      for (std::size_t k = 0; k < mh.log_step.size(); ++k) {
        if (mh.proposed[k] == 0) continue;
        const double rate =
            static_cast<double>(mh.accepted[k]) / static_cast<double>(mh.proposed[k]);
        if (rate > kAcceptHigh) mh.log_step[k] *= kAdaptFactor;
        if (rate < kAcceptLow) mh.log_step[k] /= kAdaptFactor;
      }
      mh.reset_counts();
    }

    if (!in_burn && (iter - config.n_burn) % config.thin == 0) {
      const auto nonempty = state.nonempty_clusters();
      const double ll = log_likelihood(data, state.centers, state.stick, state.theta,
                                       nonempty, config.normalizer);
      if (!std::isfinite(ll))
        throw ChainDiverged("non-finite log likelihood at iteration " +
                            std::to_string(iter));
      trace.rows.push_back(TraceRow{iter, state.theta, state.stick.concentration,
                                    state.n_nonempty(), ll});
      if (config.store_draw_states) {
        DrawState ds;
        ds.theta = state.theta;
        ds.weights.reserve(nonempty.size());
        ds.centers_s.reserve(nonempty.size());
        ds.centers_t.reserve(nonempty.size());
        for (auto j : nonempty) {
          ds.weights.push_back(state.stick.weights[j]);
          ds.centers_s.push_back(state.centers.spatial[j]);
          ds.centers_t.push_back(state.centers.time[j]);
        }
        trace.draw_states.push_back(std::move(ds));
      }
    }
  }
  if (final_state != nullptr) *final_state = std::move(state);
  return trace;
}

Hpd hpd_interval(std::span<const double> draws, double confidence) {
  if (draws.empty()) throw EmptyTrace("hpd_interval on empty draws");
  std::vector<double> sorted(draws.begin(), draws.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::size_t window = static_cast<std::size_t>(
      std::ceil(confidence * static_cast<double>(n)));
  window = std::clamp<std::size_t>(window, 1, n);
  std::size_t best = 0;
  double best_width = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + window <= n; ++i) {
    const double width = sorted[i + window - 1] - sorted[i];
    if (width < best_width) {
      best_width = width;
      best = i;
    }
  }
  return Hpd{sorted[best], sorted[best + window - 1]};
}

namespace {

ParamSummary summarize_scalar(std::span<const double> draws, double confidence,
                              const char* name, std::vector<std::string>& warnings) {
  ParamSummary s;
  const double n = static_cast<double>(draws.size());
  s.mean = std::accumulate(draws.begin(), draws.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : draws) ss += (v - s.mean) * (v - s.mean);
  s.var = draws.size() > 1 ? ss / (n - 1.0) : 0.0;
  s.hpd = hpd_interval(draws, confidence);
  const double tol = 1e-9 * std::max(1.0, std::abs(s.mean));
  if (s.mean < s.hpd.lo - tol || s.mean > s.hpd.hi + tol)
    warnings.push_back(std::string(name) +
                       ": posterior mean outside HPD interval (multimodal trace?)");
  return s;
}

}  // namespace

PosteriorSummary summarize(const Trace& trace, double confidence) {
  if (trace.rows.empty()) throw EmptyTrace("summarize on empty trace");
  const std::size_t k = trace.rows.size();
  PosteriorSummary out;

  std::vector<double> buf(k);
  auto fill = [&](auto&& get) {
    for (std::size_t i = 0; i < k; ++i) buf[i] = get(trace.rows[i]);
    return std::span<const double>(buf);
  };

  out.spatial = summarize_scalar(
      fill([](const TraceRow& r) { return r.theta.spatial; }), confidence,
      "spatial range", out.warnings);
  out.temporal = summarize_scalar(
      fill([](const TraceRow& r) { return r.theta.temporal; }), confidence,
      "temporal range", out.warnings);
  out.landmark.resize(trace.n_landmarks);
  for (std::size_t l = 0; l < trace.n_landmarks; ++l) {
    out.landmark[l] = summarize_scalar(
        fill([l](const TraceRow& r) { return r.theta.landmark[l]; }), confidence,
        "landmark range", out.warnings);
  }
  out.concentration = summarize_scalar(
      fill([](const TraceRow& r) { return r.concentration; }), confidence,
      "concentration", out.warnings);
  out.mean_m_star =
      std::accumulate(trace.rows.begin(), trace.rows.end(), 0.0,
                      [](double acc, const TraceRow& r) {
                        return acc + static_cast<double>(r.m_star);
                      }) /
      static_cast<double>(k);
  return out;
}

}  // namespace stdpg
