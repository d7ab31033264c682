#ifndef STDPG_ASSESS_HPP
#define STDPG_ASSESS_HPP

#include <span>
#include <string>
#include <vector>

#include "stdpg/data.hpp"
#include "stdpg/sampler.hpp"

namespace stdpg {

// Rectangular boxes partitioning Domain x [0,1]. Cell index runs
// lon-fastest, then lat, then time.
struct AssessmentGrid {
  int n_lon = 8;
  int n_lat = 13;
  int n_t = 3;
  Domain domain;

  int size() const { return n_lon * n_lat * n_t; }

  struct Cube {
    double lon_lo, lon_hi, lat_lo, lat_hi, t_lo, t_hi;
  };
  Cube cube(int g) const;

  // Points exactly on a shared face go to the lower-indexed cube; the
  // domain's first face is closed.
  int cube_index(const GeoPoint& p, double t) const;
};

// Fraction of observations per cube; sums to 1.
std::vector<double> observed_proportions(const Dataset& data,
                                         const AssessmentGrid& grid);

struct TheoreticalProportions {
  std::vector<double> renormalized;  // per-draw masses normalized over the grid
  std::vector<double> raw;           // untruncated masses, sum < 1
};

// Mixture mass per cube averaged over retained draws; the diagonal
// covariance factorizes each cube integral into per-axis normal CDF
// differences. Requires a trace with stored draw states.
TheoreticalProportions theoretical_proportions(const Trace& trace,
                                               const AssessmentGrid& grid);

// (1/G) * sum_g (p_theo - p_obs)^2; throws LengthMismatch.
double assessment_mse(std::span<const double> p_theo, std::span<const double> p_obs);

// Writes sorted paired quantile columns "p_obs,p_theo" and returns the row
// count G.
std::size_t qq_export(std::span<const double> p_theo, std::span<const double> p_obs,
                      const std::string& path);

// Posterior-mean space-time density on a lon/lat raster for one time slice.
struct DensityRaster {
  int n_lon = 0;
  int n_lat = 0;
  double t_lo = 0.0, t_hi = 1.0;
  Domain domain;
  std::vector<double> values;  // lon-fastest, >= 0

  double t_mid() const { return 0.5 * (t_lo + t_hi); }
};

// Space-time mixture density (landmark factors excluded) at cell centers and
// slice midpoints, normalized per draw over the raster and averaged over
// draws.
std::vector<DensityRaster> density_raster(const Trace& trace, int n_lon, int n_lat,
                                          int n_time_slices);

// Circle of radius 2 * spatial range (km) around each non-empty cluster.
struct RiskBoundary {
  GeoPoint center;
  double t = 0.0;
  double radius_km = 0.0;
};

std::vector<RiskBoundary> risk_boundaries(const ChainState& final_state,
                                          double km_per_deg);

}  // namespace stdpg

#endif  // STDPG_ASSESS_HPP
