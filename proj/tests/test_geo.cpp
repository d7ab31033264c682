#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "stdpg/geo.hpp"
#include "test_support.hpp"

using namespace stdpg;

namespace {

// Independent great-circle oracle: spherical law of cosines.
double law_of_cosines_km(const GeoPoint& a, const GeoPoint& b) {
  constexpr double rad = std::numbers::pi / 180.0;
  const double central =
      std::sin(a.lat * rad) * std::sin(b.lat * rad) +
      std::cos(a.lat * rad) * std::cos(b.lat * rad) * std::cos((b.lon - a.lon) * rad);
  return kEarthRadiusKm * std::acos(std::clamp(central, -1.0, 1.0));
}

GeoPoint random_point(std::mt19937_64& rng, double lon_lo, double lon_hi,
                      double lat_lo, double lat_hi) {
  std::uniform_real_distribution<double> ulon(lon_lo, lon_hi), ulat(lat_lo, lat_hi);
  return GeoPoint{ulon(rng), ulat(rng)};
}

}  // namespace

TEST_SUITE("geo") {

TEST_CASE("haversine of a point with itself is zero") {
  CHECK(haversine_km({-76.53, 3.42}, {-76.53, 3.42}) == 0.0);
  CHECK(haversine_km({0.0, 0.0}, {0.0, 0.0}) == 0.0);
}

TEST_CASE("antipodal equatorial points give half the circumference") {
  const double d = haversine_km({0.0, 0.0}, {180.0, 0.0});
  CHECK(d == doctest::Approx(std::numbers::pi * kEarthRadiusKm).epsilon(1e-12));
  CHECK(d == doctest::Approx(20015.086).epsilon(1e-6));
}

TEST_CASE("matches the law-of-cosines oracle near Cali") {
  const GeoPoint a{-76.54, 3.40}, b{-76.49, 3.47};
  const double d = haversine_km(a, b);
  CHECK(d == doctest::Approx(law_of_cosines_km(a, b)).epsilon(1e-6));

  std::mt19937_64 rng(42);
  for (int k = 0; k < 200; ++k) {
    const GeoPoint p = random_point(rng, -77.0, -76.0, 3.0, 4.0);
    const GeoPoint q = random_point(rng, -77.0, -76.0, 3.0, 4.0);
    if (haversine_km(p, q) < 1.0) continue;  // oracle loses accuracy near zero
    CHECK(haversine_km(p, q) ==
          doctest::Approx(law_of_cosines_km(p, q)).epsilon(1e-6));
  }
}

TEST_CASE("haversine is exactly symmetric") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 500; ++k) {
    const GeoPoint p = random_point(rng, -180.0, 180.0, -90.0, 90.0);
    const GeoPoint q = random_point(rng, -180.0, 180.0, -90.0, 90.0);
    CHECK(haversine_km(p, q) == haversine_km(q, p));
  }
}

TEST_CASE("triangle inequality holds for random triples") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 500; ++k) {
    const GeoPoint a = random_point(rng, -180.0, 180.0, -90.0, 90.0);
    const GeoPoint b = random_point(rng, -180.0, 180.0, -90.0, 90.0);
    const GeoPoint c = random_point(rng, -180.0, 180.0, -90.0, 90.0);
    CHECK(haversine_km(a, c) <= haversine_km(a, b) + haversine_km(b, c) + 1e-9);
  }
}

TEST_CASE("km_per_degree at the equator") {
  const Domain dom{-0.5, 0.5, -0.5, 0.5};
  const double scale = km_per_degree(dom);
  // one degree of a great circle: 2 pi R / 360
  const double arc = 2.0 * std::numbers::pi * kEarthRadiusKm / 360.0;
  CHECK(scale == doctest::Approx(arc).epsilon(1e-4));
  CHECK(scale == doctest::Approx(111.19).epsilon(1e-3));

  // both axis components agree at the equator
  const double lat_comp = haversine_km({0.0, -0.5}, {0.0, 0.5});
  const double lon_comp = haversine_km({-0.5, 0.0}, {0.5, 0.0});
  CHECK(lat_comp == doctest::Approx(lon_comp).epsilon(1e-9));
}

TEST_CASE("longitude shrinks to half the latitude scale at 60 degrees") {
  const double lat_comp = haversine_km({10.0, 59.5}, {10.0, 60.5});
  const double lon_comp = haversine_km({9.5, 60.0}, {10.5, 60.0});
  CHECK(lon_comp / lat_comp == doctest::Approx(0.5).epsilon(2e-4));

  const Domain dom{9.0, 11.0, 59.0, 61.0};
  CHECK(km_per_degree(dom) == doctest::Approx(0.5 * (lat_comp + lon_comp)).epsilon(1e-12));
}

TEST_CASE("km_per_degree is monotone non-increasing in centroid latitude") {
  double prev = std::numeric_limits<double>::infinity();
  for (int lat = 0; lat <= 89; ++lat) {
    const Domain dom{-1.0, 1.0, lat - 0.25, lat + 0.25};
    const double scale = km_per_degree(dom);
    CHECK(scale <= prev + 1e-12);
    CHECK(scale > 0.0);
    prev = scale;
  }
}

TEST_CASE("domain containment is closed on the boundary") {
  const Domain dom{-76.6, -76.4, 3.3, 3.5};
  CHECK(dom.contains({-76.6, 3.3}, 0.0));      // corner
  CHECK(dom.contains({-76.5, 3.4}, 0.5));      // centroid
  CHECK(dom.contains(dom.centroid(), 0.5));
  CHECK_FALSE(dom.contains({-76.5, 3.4}, 1.5));  // time out of range
  CHECK_FALSE(dom.contains({-76.7, 3.4}, 0.5));
  CHECK(dom.area() == doctest::Approx(0.04).epsilon(1e-9));
}

TEST_CASE("bounding_domain pads the box and keeps points inside") {
  const std::vector<GeoPoint> pts{{-76.55, 3.40}, {-76.45, 3.48}, {-76.50, 3.35}};
  const Domain dom = bounding_domain(pts);
  for (const auto& p : pts) CHECK(dom.contains_spatial(p));
  CHECK(dom.lon_min < -76.55);
  CHECK(dom.lon_max > -76.45);
  CHECK(dom.lon_span() == doctest::Approx(0.1 * 1.04).epsilon(1e-9));
}

}  // TEST_SUITE
