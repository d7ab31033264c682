#include "stdpg/assess.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "stdpg/errors.hpp"
#include "stdpg/threading.hpp"

namespace stdpg {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Axis binning with boundary points pushed to the lower cell and both outer
// faces clamped in.
int axis_index(double v, double lo, double hi, int n) {
  const double u = (v - lo) / (hi - lo) * n;
  int idx = static_cast<int>(std::floor(u));
  if (idx > 0 && u == std::floor(u)) --idx;
  return std::clamp(idx, 0, n - 1);
}

}  // namespace

AssessmentGrid::Cube AssessmentGrid::cube(int g) const {
  const int ilon = g % n_lon;
  const int ilat = (g / n_lon) % n_lat;
  const int it = g / (n_lon * n_lat);
  const double wlon = domain.lon_span() / n_lon;
  const double wlat = domain.lat_span() / n_lat;
  const double wt = 1.0 / n_t;
  return Cube{domain.lon_min + ilon * wlon, domain.lon_min + (ilon + 1) * wlon,
              domain.lat_min + ilat * wlat, domain.lat_min + (ilat + 1) * wlat,
              it * wt, (it + 1) * wt};
}

int AssessmentGrid::cube_index(const GeoPoint& p, double t) const {
  const int ilon = axis_index(p.lon, domain.lon_min, domain.lon_max, n_lon);
  const int ilat = axis_index(p.lat, domain.lat_min, domain.lat_max, n_lat);
  const int it = axis_index(t, 0.0, 1.0, n_t);
  return (it * n_lat + ilat) * n_lon + ilon;
}

std::vector<double> observed_proportions(const Dataset& data,
                                         const AssessmentGrid& grid) {
  if (data.size() == 0) throw DomainError("observed_proportions: empty dataset");
  std::vector<double> p(grid.size(), 0.0);
  for (std::size_t i = 0; i < data.size(); ++i)
    p[grid.cube_index(data.points[i], data.times[i])] += 1.0;
  for (auto& v : p) v /= static_cast<double>(data.size());
  return p;
}

TheoreticalProportions theoretical_proportions(const Trace& trace,
                                               const AssessmentGrid& grid) {
  if (trace.draw_states.empty())
    throw EmptyTrace("theoretical_proportions needs stored draw states");
  const int g_total = grid.size();
  std::vector<double> renorm(g_total, 0.0), raw(g_total, 0.0);
  std::vector<double> mass(g_total);

  for (const DrawState& draw : trace.draw_states) {
    const double ws = draw.theta.spatial;
    const double wt = draw.theta.temporal;
    parallel_blocks(static_cast<std::size_t>(g_total),
                    [&](std::size_t, std::size_t lo, std::size_t hi) {
      for (std::size_t g = lo; g < hi; ++g) {
        const auto cube = grid.cube(static_cast<int>(g));
        double m = 0.0;
        for (std::size_t j = 0; j < draw.weights.size(); ++j) {
          const GeoPoint& c = draw.centers_s[j];
          const double ct = draw.centers_t[j];
          m += draw.weights[j] *
               (normal_cdf((cube.lon_hi - c.lon) / ws) -
                normal_cdf((cube.lon_lo - c.lon) / ws)) *
               (normal_cdf((cube.lat_hi - c.lat) / ws) -
                normal_cdf((cube.lat_lo - c.lat) / ws)) *
               (normal_cdf((cube.t_hi - ct) / wt) -
                normal_cdf((cube.t_lo - ct) / wt));
        }
        mass[g] = m;
      }
    });
    double total = 0.0;
    for (double m : mass) total += m;
    for (int g = 0; g < g_total; ++g) {
      raw[g] += mass[g];
      if (total > 0.0) renorm[g] += mass[g] / total;
    }
  }
  const double n_draws = static_cast<double>(trace.draw_states.size());
  for (auto& v : renorm) v /= n_draws;
  for (auto& v : raw) v /= n_draws;
  return TheoreticalProportions{std::move(renorm), std::move(raw)};
}

double assessment_mse(std::span<const double> p_theo, std::span<const double> p_obs) {
  if (p_theo.size() != p_obs.size())
    throw LengthMismatch("proportion vectors differ in length");
  double ss = 0.0;
  for (std::size_t g = 0; g < p_theo.size(); ++g) {
    const double d = p_theo[g] - p_obs[g];
    ss += d * d;
  }
  return ss / static_cast<double>(p_theo.size());
}

std::size_t qq_export(std::span<const double> p_theo, std::span<const double> p_obs,
                      const std::string& path) {
  if (p_theo.size() != p_obs.size())
    throw LengthMismatch("proportion vectors differ in length");
  std::vector<double> obs(p_obs.begin(), p_obs.end());
  std::vector<double> theo(p_theo.begin(), p_theo.end());
  std::sort(obs.begin(), obs.end());
  std::sort(theo.begin(), theo.end());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "p_obs,p_theo\n";
  char buf[64];
  for (std::size_t g = 0; g < obs.size(); ++g) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", obs[g], theo[g]);
    out << buf;
  }
  return obs.size();
}

std::vector<DensityRaster> density_raster(const Trace& trace, int n_lon, int n_lat,
                                          int n_time_slices) {
  if (trace.draw_states.empty())
    throw EmptyTrace("density_raster needs stored draw states");
  const Domain& dom = trace.domain;
  const double wlon = dom.lon_span() / n_lon;
  const double wlat = dom.lat_span() / n_lat;
  const double wt = 1.0 / n_time_slices;
  const double cell_volume = wlon * wlat * wt;

  std::vector<DensityRaster> rasters(n_time_slices);
  for (int s = 0; s < n_time_slices; ++s) {
    rasters[s].n_lon = n_lon;
    rasters[s].n_lat = n_lat;
    rasters[s].t_lo = s * wt;
    rasters[s].t_hi = (s + 1) * wt;
    rasters[s].domain = dom;
    rasters[s].values.assign(static_cast<std::size_t>(n_lon) * n_lat, 0.0);
  }

  const std::size_t cells_per_slice = static_cast<std::size_t>(n_lon) * n_lat;
  std::vector<double> draw_values(cells_per_slice * n_time_slices);
  for (const DrawState& draw : trace.draw_states) {
    const double ws2 = draw.theta.spatial * draw.theta.spatial;
    const double wt2 = draw.theta.temporal * draw.theta.temporal;
    const double norm = 1.0 / (ws2 * draw.theta.temporal);
    parallel_blocks(draw_values.size(), [&](std::size_t, std::size_t lo, std::size_t hi) {
      for (std::size_t cell = lo; cell < hi; ++cell) {
        const int s = static_cast<int>(cell / cells_per_slice);
        const std::size_t rc = cell % cells_per_slice;
        const int ilat = static_cast<int>(rc / n_lon);
        const int ilon = static_cast<int>(rc % n_lon);
        const double lon = dom.lon_min + (ilon + 0.5) * wlon;
        const double lat = dom.lat_min + (ilat + 0.5) * wlat;
        const double t = (s + 0.5) * wt;
        double v = 0.0;
        for (std::size_t j = 0; j < draw.weights.size(); ++j) {
          const double dx = lon - draw.centers_s[j].lon;
          const double dy = lat - draw.centers_s[j].lat;
          const double dt = t - draw.centers_t[j];
          v += draw.weights[j] * norm *
               std::exp(-(dx * dx + dy * dy) / (2.0 * ws2) - dt * dt / (2.0 * wt2));
        }
        draw_values[cell] = v;
      }
    });
    double integral = 0.0;
    for (double v : draw_values) integral += v * cell_volume;
    if (integral > 0.0) {
      for (int s = 0; s < n_time_slices; ++s)
        for (std::size_t rc = 0; rc < cells_per_slice; ++rc)
          rasters[s].values[rc] += draw_values[s * cells_per_slice + rc] / integral;
    }
  }
  const double n_draws = static_cast<double>(trace.draw_states.size());
  for (auto& r : rasters)
    for (auto& v : r.values) v /= n_draws;
  return rasters;
}

std::vector<RiskBoundary> risk_boundaries(const ChainState& final_state,
                                          double km_per_deg) {
  std::vector<RiskBoundary> out;
  const double radius_km = 2.0 * final_state.theta.spatial * km_per_deg;
  for (std::uint32_t j = 0; j < final_state.truncation(); ++j) {
    if (final_state.cluster_sizes[j] == 0) continue;
    out.push_back(RiskBoundary{final_state.centers.spatial[j],
                               final_state.centers.time[j], radius_km});
  }
  return out;
}

}  // namespace stdpg
