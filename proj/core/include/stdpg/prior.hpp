#ifndef STDPG_PRIOR_HPP
#define STDPG_PRIOR_HPP

#include <cstddef>
#include <vector>

#include "stdpg/errors.hpp"

namespace stdpg {

// Prior over the range-parameter vector for one window: either the flat
// positive prior (window 1) or a positive-truncated normal built from the
// previous window's posterior moments. Log densities are up to an additive
// constant; the truncation renormalizer cancels in Metropolis ratios.
struct WindowPrior {
  bool flat = true;
  std::vector<double> mu;      // per component, when not flat
  std::vector<double> sigma2;  // per component, > 0

  static WindowPrior flat_positive() { return WindowPrior{}; }

  static WindowPrior truncated_normal(std::vector<double> mu,
                                      std::vector<double> sigma2) {
    if (mu.size() != sigma2.size())
      throw LengthMismatch("prior mean/variance dimension mismatch");
    for (double v : sigma2)
      if (!(v > 0.0)) throw DegenerateError("prior variance must be > 0");
    WindowPrior p;
    p.flat = false;
    p.mu = std::move(mu);
    p.sigma2 = std::move(sigma2);
    return p;
  }

  // Unnormalized log density of component k at value v (> 0 assumed; range
  // positivity is enforced by the sampler's proposal floor).
  double log_density_component(std::size_t k, double v) const {
    if (flat) return 0.0;
    const double d = v - mu[k];
    return -d * d / (2.0 * sigma2[k]);
  }
};

}  // namespace stdpg

#endif  // STDPG_PRIOR_HPP
