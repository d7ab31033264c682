#include <cmath>

#include <doctest.h>

#include "stdpg/errors.hpp"
#include "stdpg/synth.hpp"
#include "test_support.hpp"

using namespace stdpg;

namespace {

SynthSpec base_spec() {
  SynthSpec spec;
  spec.domain = Domain{0.0, 1.0, 0.0, 1.0};
  spec.theta = RangeParams{0.02, 0.1, {}};
  spec.concentration = 4.0;
  spec.seed = 5;
  return spec;
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("a vanishing spatial range pins points to their centers") {
  auto spec = base_spec();
  spec.m_star = 4;
  spec.n = 300;
  spec.theta.spatial = 1e-5;
  spec.theta.temporal = 1e-5;
  const auto truth = simulate(spec);
  for (std::uint32_t i = 0; i < spec.n; ++i) {
    const auto& c = truth.centers.spatial[truth.labels[i]];
    CHECK(std::abs(truth.data.points[i].lon - c.lon) < 1e-4);
    CHECK(std::abs(truth.data.points[i].lat - c.lat) < 1e-4);
  }
}

TEST_CASE("a single cluster absorbs every label") {
  auto spec = base_spec();
  spec.m_star = 1;
  spec.n = 50;
  const auto truth = simulate(spec);
  for (auto g : truth.labels) CHECK(g == 0);
  CHECK(truth.weights.size() == 1);
  CHECK(truth.weights[0] == doctest::Approx(1.0));
}

TEST_CASE("per-cluster sample moments approach the truth") {
  auto spec = base_spec();
  spec.m_star = 3;
  spec.n = 6000;
  spec.seed = 11;
  // keep centers away from the boundary so truncation cannot bias moments:
  // a wide domain with ranges much smaller than the box
  spec.theta = RangeParams{0.01, 0.01, {}};
  const auto truth = simulate(spec);

  for (std::uint32_t j = 0; j < spec.m_star; ++j) {
    std::vector<double> lon, t;
    for (std::uint32_t i = 0; i < spec.n; ++i) {
      if (truth.labels[i] != j) continue;
      lon.push_back(truth.data.points[i].lon);
      t.push_back(truth.data.times[i]);
    }
    if (lon.size() < 100) continue;  // tiny stick, no moment power
    const double n_j = static_cast<double>(lon.size());
    const auto& c = truth.centers.spatial[j];
    CHECK(std::abs(test_support::mean(lon) - c.lon) <
          3.0 * spec.theta.spatial / std::sqrt(n_j));
    const double sd_lon = std::sqrt(test_support::variance(lon));
    CHECK(sd_lon == doctest::Approx(spec.theta.spatial).epsilon(0.05));
    // time truncation at [0,1] is negligible for interior centers
    if (truth.centers.time[j] > 0.05 && truth.centers.time[j] < 0.95) {
      const double sd_t = std::sqrt(test_support::variance(t));
      CHECK(sd_t == doctest::Approx(spec.theta.temporal).epsilon(0.05));
    }
  }
}

TEST_CASE("generated datasets satisfy the dataset invariants") {
  auto spec = base_spec();
  spec.m_star = 5;
  spec.n = 500;
  const auto truth = simulate(spec);
  CHECK(truth.data.size() == spec.n);
  for (std::uint32_t i = 0; i < spec.n; ++i) {
    CHECK(truth.data.domain.contains(truth.data.points[i], truth.data.times[i]));
    CHECK(truth.labels[i] < spec.m_star);
  }
  double qsum = 0.0;
  for (double q : truth.weights) {
    CHECK(q >= 0.0);
    qsum += q;
  }
  CHECK(qsum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("identical specs give identical datasets") {
  auto spec = base_spec();
  spec.m_star = 3;
  spec.n = 200;
  const auto a = simulate(spec);
  const auto b = simulate(spec);
  CHECK(a.data.points == b.data.points);
  CHECK(a.data.times == b.data.times);
  CHECK(a.labels == b.labels);
  CHECK(a.weights == b.weights);
}

TEST_CASE("full mode fills the nearest table and respects landmark pull") {
  LandmarkCatalog catalog;
  catalog.types = {"church"};
  catalog.sites = {{{0.3, 0.3}, {0.7, 0.7}, {0.2, 0.8}}};

  auto spec = base_spec();
  spec.mode = SynthSpec::Mode::full_with_landmarks;
  spec.catalog = catalog;
  spec.m_star = 2;
  spec.n = 400;
  spec.theta = RangeParams{0.05, 0.2, {0.4}};
  spec.seed = 17;

  const auto truth = simulate(spec);
  CHECK(truth.data.n_landmark_types == 1);
  REQUIRE(truth.data.nearest.size() == spec.n);
  // every nearest entry is an actual catalog site
  for (std::uint32_t i = 0; i < spec.n; ++i) {
    const auto& z = truth.data.nearest_of(i, 0);
    bool found = false;
    for (const auto& s : catalog.sites[0]) found = found || s == z;
    CHECK(found);
  }
}

TEST_CASE("full mode without a catalog is a config error") {
  auto spec = base_spec();
  spec.mode = SynthSpec::Mode::full_with_landmarks;
  CHECK_THROWS_AS(simulate(spec), ConfigError);
}

TEST_CASE("an infeasible landmark range stalls the rejection sampler") {
  LandmarkCatalog catalog;
  catalog.types = {"church"};
  catalog.sites = {{{0.05, 0.05}}};  // far from both cluster centers

  auto spec = base_spec();
  spec.mode = SynthSpec::Mode::full_with_landmarks;
  spec.catalog = catalog;
  spec.m_star = 1;
  spec.n = 5;
  // center anywhere, landmark factor ~ exp(-d^2 / 2e-8): acceptance ~ 0
  spec.theta = RangeParams{0.01, 0.1, {1e-4}};
  spec.seed = 23;
  CHECK_THROWS_AS(simulate(spec), RejectionStall);
}

}  // TEST_SUITE
