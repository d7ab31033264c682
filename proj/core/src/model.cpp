#include "stdpg/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stdpg/errors.hpp"
#include "stdpg/threading.hpp"

namespace stdpg {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

bool RangeParams::valid() const {
  if (!(spatial > kOmegaFloor) || !(temporal > kOmegaFloor)) return false;
  return std::all_of(landmark.begin(), landmark.end(),
                     [](double w) { return w > kOmegaFloor; });
}

std::vector<double> stick_weights(std::span<const double> sticks) {
  std::vector<double> q(sticks.size());
  double remaining = 1.0;
  for (std::size_t j = 0; j < sticks.size(); ++j) {
    const double u = sticks[j];
    if (!(u > 0.0) || u > 1.0)
      throw DomainError("stick value outside (0, 1]");
    q[j] = u * remaining;
    remaining *= 1.0 - u;
  }
  return q;
}

double log_kernel(const Dataset& data, std::size_t i, const ClusterCenters& centers,
                  std::size_t j, const RangeParams& theta,
                  LandmarkNormalizer normalizer) {
  const GeoPoint& x = data.points[i];
  const GeoPoint& c = centers.spatial[j];
  const double dlon = x.lon - c.lon;
  const double dlat = x.lat - c.lat;
  const double dt = data.times[i] - centers.time[j];
  const double ws2 = theta.spatial * theta.spatial;
  const double wt2 = theta.temporal * theta.temporal;

  double lk = -2.0 * std::log(theta.spatial) - std::log(theta.temporal) -
              (dlon * dlon + dlat * dlat) / (2.0 * ws2) - dt * dt / (2.0 * wt2);

  const double norm_pow = normalizer == LandmarkNormalizer::linear ? 1.0 : 2.0;
  for (std::size_t l = 0; l < data.n_landmark_types; ++l) {
    const GeoPoint& z = data.nearest_of(i, l);
    const double zlon = z.lon - c.lon;
    const double zlat = z.lat - c.lat;
    const double wl = theta.landmark[l];
    lk += -norm_pow * std::log(wl) - (zlon * zlon + zlat * zlat) / (2.0 * wl * wl);
  }
  return lk;
}

void softmax_in_place(std::span<double> logits) {
  double max_logit = kNegInf;
  for (double v : logits) max_logit = std::max(max_logit, v);
  if (max_logit == kNegInf)
    throw DegenerateError("all membership logits are -inf");
  double total = 0.0;
  for (double& v : logits) {
    v = std::exp(v - max_logit);
    total += v;
  }
  for (double& v : logits) v /= total;
}

void membership_probs_into(const Dataset& data, std::size_t i,
                           const ClusterCenters& centers, std::span<const double> log_weights,
                           const RangeParams& theta, LandmarkNormalizer normalizer,
                           std::span<double> out) {
  const std::size_t m = centers.size();
  for (std::size_t j = 0; j < m; ++j) {
    out[j] = log_weights[j] == kNegInf
                 ? kNegInf
                 : log_weights[j] + log_kernel(data, i, centers, j, theta, normalizer);
  }
  softmax_in_place(out);
}

std::vector<double> membership_probs(const Dataset& data, std::size_t i,
                                     const ClusterCenters& centers,
                                     const StickState& stick, const RangeParams& theta,
                                     LandmarkNormalizer normalizer) {
  std::vector<double> log_weights(stick.weights.size());
  for (std::size_t j = 0; j < log_weights.size(); ++j)
    log_weights[j] = std::log(stick.weights[j]);
  std::vector<double> probs(centers.size());
  membership_probs_into(data, i, centers, log_weights, theta, normalizer, probs);
  return probs;
}

double log_likelihood(const Dataset& data, const ClusterCenters& centers,
                      const StickState& stick, const RangeParams& theta,
                      std::span<const std::uint32_t> nonempty,
                      LandmarkNormalizer normalizer) {
  if (nonempty.empty())
    throw DegenerateError("log_likelihood over an empty cluster set");
  std::vector<double> log_q(nonempty.size());
  for (std::size_t k = 0; k < nonempty.size(); ++k)
    log_q[k] = std::log(stick.weights[nonempty[k]]);

  return parallel_block_sum(data.size(), [&](std::size_t lo, std::size_t hi) {
    std::vector<double> terms(nonempty.size());
    double sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      double max_term = kNegInf;
      for (std::size_t k = 0; k < nonempty.size(); ++k) {
        terms[k] = log_q[k] == kNegInf
                       ? kNegInf
                       : log_q[k] + log_kernel(data, i, centers, nonempty[k], theta, normalizer);
        max_term = std::max(max_term, terms[k]);
      }
      if (max_term == kNegInf) {
        sum += kNegInf;
        continue;
      }
      double acc = 0.0;
      for (double t : terms) acc += std::exp(t - max_term);
      sum += max_term + std::log(acc);
    }
    return sum;
  });
}

}  // namespace stdpg
