#ifndef STDPG_GEO_HPP
#define STDPG_GEO_HPP

#include <span>

namespace stdpg {

inline constexpr double kEarthRadiusKm = 6371.0;

struct GeoPoint {
  double lon = 0.0;  // degrees, [-180, 180]
  double lat = 0.0;  // degrees, [-90, 90]

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

bool valid_geo_point(const GeoPoint& p);

// Axis-aligned study region in degree coordinates, paired with the
// normalized time interval [0, 1].
struct Domain {
  double lon_min = 0.0;
  double lon_max = 1.0;
  double lat_min = 0.0;
  double lat_max = 1.0;
  static constexpr double t_min = 0.0;
  static constexpr double t_max = 1.0;

  double area() const { return (lon_max - lon_min) * (lat_max - lat_min); }
  double lon_span() const { return lon_max - lon_min; }
  double lat_span() const { return lat_max - lat_min; }
  GeoPoint centroid() const {
    return {0.5 * (lon_min + lon_max), 0.5 * (lat_min + lat_max)};
  }
  // Closed bounding box; t must lie in [0, 1].
  bool contains(const GeoPoint& p, double t) const;
  bool contains_spatial(const GeoPoint& p) const;
  bool is_valid() const { return lon_min < lon_max && lat_min < lat_max; }
};

// Bounding box of the points expanded by pad_frac per side.
Domain bounding_domain(std::span<const GeoPoint> points, double pad_frac = 0.02);

// Great-circle distance in km, spherical earth of radius 6371 km.
double haversine_km(const GeoPoint& a, const GeoPoint& b);

// Isotropic degree-to-kilometer scale at the domain centroid: mean of the
// great-circle lengths of a 1-degree latitude and a 1-degree longitude
// displacement centered on the centroid.
double km_per_degree(const Domain& domain);

}  // namespace stdpg

#endif  // STDPG_GEO_HPP
