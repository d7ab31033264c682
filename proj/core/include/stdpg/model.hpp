#ifndef STDPG_MODEL_HPP
#define STDPG_MODEL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "stdpg/data.hpp"
#include "stdpg/geo.hpp"

namespace stdpg {

// Floor on every range parameter; Metropolis proposals below it are rejected
// so a cluster holding a single point cannot drive its kernel singular.
inline constexpr double kOmegaFloor = 1e-6;

// Power of the per-landmark normalizer 1/omega_l: `linear` is the model's
// printed form, `squared` matches the two-dimensional landmark coordinate.
enum class LandmarkNormalizer { linear, squared };

// Kernel bandwidths: spatial (degrees), temporal (normalized time), and one
// per landmark type (degrees). All strictly positive.
struct RangeParams {
  double spatial = 0.1;
  double temporal = 0.1;
  std::vector<double> landmark;

  std::size_t dim() const { return 2 + landmark.size(); }
  double component(std::size_t k) const {
    return k == 0 ? spatial : (k == 1 ? temporal : landmark[k - 2]);
  }
  void set_component(std::size_t k, double v) {
    if (k == 0)
      spatial = v;
    else if (k == 1)
      temporal = v;
    else
      landmark[k - 2] = v;
  }
  bool valid() const;
};

struct ClusterCenters {
  std::vector<GeoPoint> spatial;  // c_j^s
  std::vector<double> time;       // c_j^t in [0, 1]

  std::size_t size() const { return spatial.size(); }
};

// Truncated stick-breaking state. sticks[M-1] is pinned to 1 so the weights
// always form a probability vector; concentration is the Beta rate b_u.
struct StickState {
  std::vector<double> sticks;   // U_j in (0, 1]
  std::vector<double> weights;  // q_j, sums to 1
  double concentration = 1.0;   // b_u > 0
};

struct Membership {
  std::vector<std::uint32_t> labels;  // g_i in [0, M)
};

// q_1 = U_1, q_j = U_j * prod_{k<j} (1 - U_k). Throws DomainError when any
// stick lies outside (0, 1].
std::vector<double> stick_weights(std::span<const double> sticks);

// Log of the unnormalized space-time-landmark kernel for observation i and
// cluster j:
//   -2 ln w_s - ln w_t - |x_i - c_j|^2 / (2 w_s^2) - (t_i - c_j^t)^2 / (2 w_t^2)
//   + sum_l [ -ln w_l - |z_i^l - c_j|^2 / (2 w_l^2) ]
double log_kernel(const Dataset& data, std::size_t i, const ClusterCenters& centers,
                  std::size_t j, const RangeParams& theta,
                  LandmarkNormalizer normalizer = LandmarkNormalizer::linear);

// Normalizes logits in place into probabilities via the max-shift pattern.
// Entries of -inf become exact zeros. Throws DegenerateError if all entries
// are -inf.
void softmax_in_place(std::span<double> logits);

// Probability that observation i belongs to each cluster, proportional to
// q_j * exp(log_kernel(i, j)).
std::vector<double> membership_probs(const Dataset& data, std::size_t i,
                                     const ClusterCenters& centers,
                                     const StickState& stick, const RangeParams& theta,
                                     LandmarkNormalizer normalizer = LandmarkNormalizer::linear);

// Same, writing into a caller-provided buffer of size M.
void membership_probs_into(const Dataset& data, std::size_t i,
                           const ClusterCenters& centers, std::span<const double> log_weights,
                           const RangeParams& theta, LandmarkNormalizer normalizer,
                           std::span<double> out);

// Mixture log likelihood restricted to the given cluster indices:
//   sum_i ln sum_{j in nonempty} q_j exp(log_kernel(i, j)).
// Throws DegenerateError when nonempty is empty.
double log_likelihood(const Dataset& data, const ClusterCenters& centers,
                      const StickState& stick, const RangeParams& theta,
                      std::span<const std::uint32_t> nonempty,
                      LandmarkNormalizer normalizer = LandmarkNormalizer::linear);

}  // namespace stdpg

#endif  // STDPG_MODEL_HPP
