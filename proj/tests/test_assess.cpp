#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <doctest.h>

#include "stdpg/assess.hpp"
#include "stdpg/errors.hpp"
#include "test_support.hpp"

using namespace stdpg;

namespace {

Trace one_draw_trace(const Domain& dom, std::vector<double> weights,
                     std::vector<GeoPoint> centers_s, std::vector<double> centers_t,
                     const RangeParams& theta) {
  Trace trace;
  trace.domain = dom;
  trace.n_landmarks = 0;
  trace.rows.push_back(TraceRow{1, theta, 1.0,
                                static_cast<std::uint32_t>(weights.size()), 0.0});
  DrawState ds;
  ds.weights = std::move(weights);
  ds.centers_s = std::move(centers_s);
  ds.centers_t = std::move(centers_t);
  ds.theta = theta;
  trace.draw_states.push_back(std::move(ds));
  return trace;
}

}  // namespace

TEST_SUITE("assess") {

TEST_CASE("cube indexing: boundaries fall to the lower cube, faces clamp in") {
  AssessmentGrid grid{2, 2, 2, Domain{0.0, 1.0, 0.0, 1.0}};
  CHECK(grid.size() == 8);

  // interior of the first cube
  CHECK(grid.cube_index({0.25, 0.25}, 0.25) == 0);
  // shared face between lon cells 0 and 1 goes low
  CHECK(grid.cube_index({0.5, 0.25}, 0.25) == 0);
  CHECK(grid.cube_index({0.500001, 0.25}, 0.25) == 1);
  // domain's first and final faces stay inside
  CHECK(grid.cube_index({0.0, 0.0}, 0.0) == 0);
  CHECK(grid.cube_index({1.0, 1.0}, 1.0) == 7);

  // cube() bounds partition the domain
  double covered = 0.0;
  for (int g = 0; g < grid.size(); ++g) {
    const auto c = grid.cube(g);
    covered += (c.lon_hi - c.lon_lo) * (c.lat_hi - c.lat_lo) * (c.t_hi - c.t_lo);
  }
  CHECK(covered == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("observed proportions: point mass and normalization") {
  auto data = test_support::make_dataset(
      {{0.1, 0.1}, {0.12, 0.11}, {0.09, 0.13}}, {0.1, 0.12, 0.14});
  AssessmentGrid grid{4, 4, 2, data.domain};
  const auto p = observed_proportions(data, grid);
  double total = 0.0;
  int nonzero = 0;
  for (double v : p) {
    total += v;
    nonzero += v > 0.0 ? 1 : 0;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(nonzero == 1);
  CHECK(p[grid.cube_index({0.1, 0.1}, 0.1)] == 1.0);
}

TEST_CASE("observed proportions match an explicit containment oracle") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<GeoPoint> pts(400);
  std::vector<double> times(400);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    pts[i] = {u01(rng), u01(rng)};
    times[i] = u01(rng);
  }
  auto data = test_support::make_dataset(pts, times);
  AssessmentGrid grid{8, 13, 3, data.domain};
  const auto p = observed_proportions(data, grid);

  // oracle: each axis uses (lo, hi] cells with the first cell closed at lo
  auto axis_oracle = [](double v, double lo, double hi, int n) {
    for (int k = 0; k < n; ++k) {
      const double a = lo + (hi - lo) * k / n;
      const double b = lo + (hi - lo) * (k + 1) / n;
      const bool in = (v > a || (k == 0 && v >= a)) && v <= b;
      if (in) return k;
    }
    return n - 1;
  };
  std::vector<double> expect(grid.size(), 0.0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const int ilon = axis_oracle(pts[i].lon, 0.0, 1.0, 8);
    const int ilat = axis_oracle(pts[i].lat, 0.0, 1.0, 13);
    const int it = axis_oracle(times[i], 0.0, 1.0, 3);
    expect[(it * 13 + ilat) * 8 + ilon] += 1.0 / 400.0;
  }
  for (int g = 0; g < grid.size(); ++g)
    CHECK(p[g] == doctest::Approx(expect[g]).epsilon(1e-12));
}

TEST_CASE("a concentrated cluster puts its whole mass in one cube") {
  const Domain dom{0.0, 1.0, 0.0, 1.0};
  AssessmentGrid grid{4, 4, 2, dom};
  // center well inside cube (1,1,0); range 1e-4 of the cube width
  const auto trace = one_draw_trace(dom, {1.0}, {{0.375, 0.375}}, {0.25},
                                    RangeParams{0.25e-4, 0.5e-4, {}});
  const auto p = theoretical_proportions(trace, grid);
  const int target = grid.cube_index({0.375, 0.375}, 0.25);
  CHECK(p.renormalized[target] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(p.raw[target] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("a cluster on a shared face splits evenly") {
  const Domain dom{0.0, 1.0, 0.0, 1.0};
  AssessmentGrid grid{2, 1, 1, dom};
  const auto trace = one_draw_trace(dom, {1.0}, {{0.5, 0.5}}, {0.5},
                                    RangeParams{0.05, 0.1, {}});
  const auto p = theoretical_proportions(trace, grid);
  CHECK(p.renormalized[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(p.renormalized[1] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("theoretical proportions match a Monte Carlo mixture oracle") {
  const Domain dom{0.0, 1.0, 0.0, 1.0};
  AssessmentGrid grid{4, 5, 2, dom};
  const std::vector<double> q{0.5, 0.3, 0.2};
  const std::vector<GeoPoint> cs{{0.3, 0.4}, {0.7, 0.6}, {0.5, 0.2}};
  const std::vector<double> ct{0.3, 0.7, 0.5};
  const RangeParams theta{0.08, 0.15, {}};
  const auto trace = one_draw_trace(dom, q, cs, ct, theta);
  const auto p = theoretical_proportions(trace, grid);

  // sample the untruncated mixture, keep in-domain points: that conditional
  // law is exactly the renormalized-over-grid proportion vector
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const int total_draws = 1000000;
  std::vector<double> counts(grid.size(), 0.0);
  int kept = 0;
  for (int s = 0; s < total_draws; ++s) {
    const double u = u01(rng);
    const int j = u < q[0] ? 0 : (u < q[0] + q[1] ? 1 : 2);
    const GeoPoint x{cs[j].lon + theta.spatial * nd(rng),
                     cs[j].lat + theta.spatial * nd(rng)};
    const double t = ct[j] + theta.temporal * nd(rng);
    if (!dom.contains(x, t)) continue;
    ++kept;
    counts[grid.cube_index(x, t)] += 1.0;
  }
  for (int g = 0; g < grid.size(); ++g) {
    const double phat = counts[g] / kept;
    const double sigma = std::sqrt(std::max(p.renormalized[g] *
                                            (1.0 - p.renormalized[g]) / kept,
                                            1e-12));
    CHECK(std::abs(phat - p.renormalized[g]) < 3.5 * sigma + 1e-6);
  }
  // raw mass compares against the unconditional landing probability
  const double keep_rate = static_cast<double>(kept) / total_draws;
  double raw_total = 0.0;
  for (double v : p.raw) raw_total += v;
  CHECK(raw_total == doctest::Approx(keep_rate).epsilon(0.005));
}

TEST_CASE("mse arithmetic and errors") {
  std::vector<double> a(312, 0.0), b(312, 0.0);
  CHECK(assessment_mse(a, b) == 0.0);
  b[100] = 0.1;
  CHECK(assessment_mse(a, b) == doctest::Approx(0.01 / 312.0).epsilon(1e-12));
  CHECK(assessment_mse(a, b) == assessment_mse(b, a));
  std::vector<double> c(311, 0.0);
  CHECK_THROWS_AS(assessment_mse(a, c), LengthMismatch);
}

TEST_CASE("qq export writes sorted paired columns") {
  namespace fs = std::filesystem;
  const auto path = (fs::temp_directory_path() / "stdpg_qq_test.csv").string();
  const std::vector<double> theo{0.3, 0.1, 0.6}, obs{0.5, 0.2, 0.3};
  CHECK(qq_export(theo, obs, path) == 3);

  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "p_obs,p_theo");
  std::vector<double> col_obs, col_theo;
  while (std::getline(in, line)) {
    double o, t;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &o, &t) == 2);
    col_obs.push_back(o);
    col_theo.push_back(t);
  }
  REQUIRE(col_obs.size() == 3);
  CHECK(std::is_sorted(col_obs.begin(), col_obs.end()));
  CHECK(std::is_sorted(col_theo.begin(), col_theo.end()));
  CHECK(col_theo[0] == 0.1);
  CHECK(col_obs[2] == 0.5);
  fs::remove(path);

  // identical inputs give two identical sorted columns
  const auto path2 = (fs::temp_directory_path() / "stdpg_qq_test2.csv").string();
  qq_export(obs, obs, path2);
  std::ifstream in2(path2);
  std::getline(in2, line);
  while (std::getline(in2, line)) {
    double o, t;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &o, &t) == 2);
    CHECK(o == t);
  }
  fs::remove(path2);
}

TEST_CASE("single-cluster raster is a discretized Gaussian") {
  const Domain dom{0.0, 1.0, 0.0, 1.0};
  const GeoPoint center{0.62, 0.38};
  const RangeParams theta{0.07, 0.2, {}};
  const auto trace = one_draw_trace(dom, {1.0}, {center}, {0.5}, theta);

  const auto rasters = density_raster(trace, 40, 40, 2);
  REQUIRE(rasters.size() == 2);
  const auto& r = rasters[0];

  // argmax at the cell nearest the center
  std::size_t argmax = 0;
  for (std::size_t c = 0; c < r.values.size(); ++c) {
    CHECK(r.values[c] >= 0.0);
    if (r.values[c] > r.values[argmax]) argmax = c;
  }
  const double wcell = 1.0 / 40.0;
  const double max_lon = r.domain.lon_min + (argmax % 40 + 0.5) * wcell;
  const double max_lat = r.domain.lat_min + (argmax / 40 + 0.5) * wcell;
  CHECK(std::abs(max_lon - center.lon) <= wcell);
  CHECK(std::abs(max_lat - center.lat) <= wcell);

  // proportionality to the Gaussian kernel at two probe cells
  auto value_at = [&](int ilon, int ilat, const DensityRaster& rr) {
    return rr.values[static_cast<std::size_t>(ilat) * 40 + ilon];
  };
  auto gauss = [&](double lon, double lat, double t) {
    const double dx = lon - center.lon, dy = lat - center.lat, dt = t - 0.5;
    return std::exp(-(dx * dx + dy * dy) / (2.0 * theta.spatial * theta.spatial) -
                    dt * dt / (2.0 * theta.temporal * theta.temporal));
  };
  const double lon_a = dom.lon_min + 24.5 * wcell, lat_a = dom.lat_min + 15.5 * wcell;
  const double lon_b = dom.lon_min + 20.5 * wcell, lat_b = dom.lat_min + 12.5 * wcell;
  const double ratio_raster = value_at(24, 15, r) / value_at(20, 12, r);
  const double ratio_gauss =
      gauss(lon_a, lat_a, r.t_mid()) / gauss(lon_b, lat_b, r.t_mid());
  CHECK(ratio_raster == doctest::Approx(ratio_gauss).epsilon(1e-9));

  // normalized: cell sums times cell volume integrate to one
  double integral = 0.0;
  for (const auto& rr : rasters)
    for (double v : rr.values) integral += v * wcell * wcell * 0.5;
  CHECK(integral == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("risk boundaries cover exactly the non-empty clusters") {
  ChainState state;
  state.centers.spatial = {{0.2, 0.3}, {0.6, 0.7}, {0.9, 0.1}};
  state.centers.time = {0.1, 0.5, 0.9};
  state.cluster_sizes = {5, 0, 2};
  state.theta = RangeParams{0.25, 0.1, {}};

  const auto boundaries = risk_boundaries(state, 1.0);
  REQUIRE(boundaries.size() == 2);  // equals M*
  CHECK(boundaries[0].center == GeoPoint{0.2, 0.3});
  CHECK(boundaries[0].radius_km == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(boundaries[1].center == GeoPoint{0.9, 0.1});

  // km conversion scales the radius
  const auto scaled = risk_boundaries(state, 111.0);
  CHECK(scaled[0].radius_km == doctest::Approx(2.0 * 0.25 * 111.0).epsilon(1e-12));

  state.cluster_sizes = {0, 0, 0};
  CHECK(risk_boundaries(state, 1.0).empty());
}

TEST_CASE("proportion routines reject empty traces") {
  Trace trace;
  trace.domain = Domain{0.0, 1.0, 0.0, 1.0};
  AssessmentGrid grid{2, 2, 1, trace.domain};
  CHECK_THROWS_AS(theoretical_proportions(trace, grid), EmptyTrace);
  CHECK_THROWS_AS(density_raster(trace, 8, 8, 2), EmptyTrace);
}

}  // TEST_SUITE
