#ifndef STDPG_SAMPLER_HPP
#define STDPG_SAMPLER_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stdpg/data.hpp"
#include "stdpg/model.hpp"
#include "stdpg/prior.hpp"
#include "stdpg/rng.hpp"

namespace stdpg {

struct SamplerConfig {
  std::uint32_t max_clusters = 120;  // truncation level M
  std::uint32_t n_iter = 20000;
  std::uint32_t n_burn = 10000;
  std::uint32_t thin = 10;
  std::uint64_t seed = 1;
  double mh_step = 0.1;  // initial log-scale random-walk step
  bool adapt = true;     // adapt mh_step during burn-in only
  double hyper_a = 1.0;  // Gamma hyperprior shape for b_u
  double hyper_b = 0.25; // Gamma hyperprior rate for b_u
  bool store_draw_states = true;  // keep q/centers per retained draw
  LandmarkNormalizer normalizer = LandmarkNormalizer::linear;

  void validate() const;  // throws ConfigError
};

// One full MCMC state. cluster_sizes is maintained alongside the labels.
struct ChainState {
  ClusterCenters centers;
  Membership membership;
  StickState stick;
  RangeParams theta;
  std::vector<std::uint32_t> cluster_sizes;

  std::size_t truncation() const { return centers.size(); }
  std::uint32_t n_nonempty() const;
  std::vector<std::uint32_t> nonempty_clusters() const;
  void recount_sizes();
};

// Non-empty-cluster snapshot of one retained draw, for densities and
// grid proportions.
struct DrawState {
  std::vector<double> weights;      // q_j of non-empty clusters
  std::vector<GeoPoint> centers_s;
  std::vector<double> centers_t;
  RangeParams theta;
};

struct TraceRow {
  std::uint32_t iteration;  // 1-based sweep index
  RangeParams theta;
  double concentration;
  std::uint32_t m_star;
  double log_lik;
};

struct Trace {
  std::vector<TraceRow> rows;
  std::vector<DrawState> draw_states;  // empty unless store_draw_states
  std::size_t n_landmarks = 0;
  Domain domain;
};

struct Hpd {
  double lo = 0.0, hi = 0.0;
};

struct ParamSummary {
  double mean = 0.0;
  double var = 0.0;
  Hpd hpd;
};

// Posterior moments and intervals plus the final chain snapshot that seeds
// the next window.
struct PosteriorSummary {
  ParamSummary spatial;
  ParamSummary temporal;
  std::vector<ParamSummary> landmark;
  ParamSummary concentration;
  double mean_m_star = 0.0;
  ClusterCenters final_centers;
  std::vector<std::uint32_t> final_sizes;
  RangeParams final_theta;
  std::vector<std::string> warnings;

  ParamSummary component(std::size_t k) const {
    return k == 0 ? spatial : (k == 1 ? temporal : landmark[k - 2]);
  }
  std::size_t theta_dim() const { return 2 + landmark.size(); }
};

// Metropolis bookkeeping for the range-parameter updates.
struct MhState {
  std::vector<double> log_step;
  std::vector<std::uint64_t> accepted;
  std::vector<std::uint64_t> proposed;

  explicit MhState(std::size_t dim = 0, double step = 0.1)
      : log_step(dim, step), accepted(dim, 0), proposed(dim, 0) {}
  void reset_counts();
};

// --- Full-conditional block updates (exposed for distributional tests) ---

// g_i ~ Categorical over all M clusters, prob proportional to
// q_j exp(log_kernel(i, j)).
void sample_memberships(ChainState& state, const Dataset& data,
                        const SweepRng& rng, LandmarkNormalizer normalizer);

// Non-empty clusters draw from the conjugate Gaussian conditional truncated
// to the domain (rejection, then per-coordinate clamp); empty clusters
// refresh from the uniform prior over Domain x [0,1].
void sample_centers(ChainState& state, const Dataset& data, const SweepRng& rng);

// U_j ~ Beta(1 + n_j, b_u + #{g_i > j}) for the first M-1 sticks; the last
// stick stays pinned at 1.
void sample_sticks(ChainState& state, const SweepRng& rng);

// b_u ~ Gamma(M - 1 + a, b - sum_{j<M-1} log(1 - U_j)), shape-rate.
void sample_concentration(ChainState& state, double hyper_a, double hyper_b,
                          const SweepRng& rng);

// Componentwise log-scale random-walk Metropolis on the range parameters,
// using the membership-conditional likelihood factorization.
void sample_ranges(ChainState& state, const Dataset& data, const WindowPrior& prior,
                   MhState& mh, const SweepRng& rng, LandmarkNormalizer normalizer);

// One blocked-Gibbs sweep: memberships, centers, sticks, concentration,
// ranges, in that order.
void gibbs_sweep(ChainState& state, const Dataset& data, const WindowPrior& prior,
                 MhState& mh, const SweepRng& rng, LandmarkNormalizer normalizer,
                 double hyper_a = 1.0, double hyper_b = 0.25);

// Runs the chain from `init`, adapting Metropolis steps during burn-in when
// configured and retaining every thin-th post-burn-in state. Throws
// ChainDiverged if the log likelihood becomes non-finite. If `final_state`
// is given, the last chain state is copied there.
Trace run_chain(const SamplerConfig& config, const Dataset& data,
                const WindowPrior& prior, const ChainState& init,
                ChainState* final_state = nullptr);

// Shortest-sorted-window HPD plus moments for every traced parameter.
PosteriorSummary summarize(const Trace& trace, double confidence = 0.95);

// Shortest contiguous interval containing ceil(confidence * n) sorted draws.
Hpd hpd_interval(std::span<const double> draws, double confidence);

}  // namespace stdpg

#endif  // STDPG_SAMPLER_HPP
