#include "stdpg/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stdpg/errors.hpp"

namespace stdpg {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

bool valid_geo_point(const GeoPoint& p) {
  return std::isfinite(p.lon) && std::isfinite(p.lat) && p.lon >= -180.0 &&
         p.lon <= 180.0 && p.lat >= -90.0 && p.lat <= 90.0;
}

bool Domain::contains(const GeoPoint& p, double t) const {
  return contains_spatial(p) && t >= t_min && t <= t_max;
}

bool Domain::contains_spatial(const GeoPoint& p) const {
  return p.lon >= lon_min && p.lon <= lon_max && p.lat >= lat_min &&
         p.lat <= lat_max;
}

Domain bounding_domain(std::span<const GeoPoint> points, double pad_frac) {
  if (points.empty()) throw DomainError("bounding_domain: no points");
  double lon_lo = points[0].lon, lon_hi = points[0].lon;
  double lat_lo = points[0].lat, lat_hi = points[0].lat;
  for (const auto& p : points) {
    lon_lo = std::min(lon_lo, p.lon);
    lon_hi = std::max(lon_hi, p.lon);
    lat_lo = std::min(lat_lo, p.lat);
    lat_hi = std::max(lat_hi, p.lat);
  }
  // Degenerate extents (single point or collinear input) get a small fixed pad
  // so the box always has positive area.
  double lon_pad = (lon_hi - lon_lo) * pad_frac;
  double lat_pad = (lat_hi - lat_lo) * pad_frac;
  if (lon_pad <= 0.0) lon_pad = 1e-3;
  if (lat_pad <= 0.0) lat_pad = 1e-3;
  return Domain{lon_lo - lon_pad, lon_hi + lon_pad, lat_lo - lat_pad,
                lat_hi + lat_pad};
}

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
  const double dlat = (b.lat - a.lat) * kDegToRad;
  const double dlon = (b.lon - a.lon) * kDegToRad;
  const double s_lat = std::sin(0.5 * dlat);
  const double s_lon = std::sin(0.5 * dlon);
  const double h = s_lat * s_lat + std::cos(a.lat * kDegToRad) *
                                       std::cos(b.lat * kDegToRad) * s_lon * s_lon;
  return kEarthRadiusKm * 2.0 *
         std::atan2(std::sqrt(h), std::sqrt(std::max(0.0, 1.0 - h)));
}

double km_per_degree(const Domain& domain) {
  GeoPoint c = domain.centroid();
  // Keep the 1-degree probes inside the valid latitude band.
  c.lat = std::clamp(c.lat, -89.5, 89.5);
  const GeoPoint lat_lo{c.lon, c.lat - 0.5}, lat_hi{c.lon, c.lat + 0.5};
  const GeoPoint lon_lo{c.lon - 0.5, c.lat}, lon_hi{c.lon + 0.5, c.lat};
  return 0.5 * (haversine_km(lat_lo, lat_hi) + haversine_km(lon_lo, lon_hi));
}

}  // namespace stdpg
