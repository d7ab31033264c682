#ifndef STDPG_DATA_HPP
#define STDPG_DATA_HPP

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stdpg/geo.hpp"

namespace stdpg {

// Calendar date at day resolution.
struct Date {
  std::chrono::sys_days day{};

  static Date parse(std::string_view iso);  // "YYYY-MM-DD", throws Error
  std::string to_string() const;

  Date operator+(int days) const {
    return Date{day + std::chrono::days(days)};
  }
  // Difference in days.
  friend int operator-(const Date& a, const Date& b) {
    return static_cast<int>((a.day - b.day).count());
  }
  friend auto operator<=>(const Date&, const Date&) = default;
};

struct CaseRecord {
  GeoPoint location;
  Date date;
};

struct LandmarkCatalog {
  std::vector<std::string> types;               // ordered, unique labels
  std::vector<std::vector<GeoPoint>> sites;     // one non-empty list per type

  std::size_t n_types() const { return types.size(); }
  std::size_t total_sites() const;
  std::vector<GeoPoint> all_sites() const;
  bool empty() const { return types.empty(); }
};

// Window of cases mapped to model coordinates: normalized time, spatial
// domain, and the per-observation nearest-landmark table.
struct Dataset {
  std::vector<GeoPoint> points;          // x_i
  std::vector<double> times;             // t_i in [0, 1]
  std::vector<GeoPoint> nearest;         // row-major N x p, entry (i, l)
  std::size_t n_landmark_types = 0;      // p
  Domain domain;

  std::size_t size() const { return points.size(); }
  const GeoPoint& nearest_of(std::size_t i, std::size_t l) const {
    return nearest[i * n_landmark_types + l];
  }
};

// CSV with header "lon,lat,date"; throws MalformedRow / EmptyFile.
std::vector<CaseRecord> load_cases(const std::string& path);

// CSV with header "type,lon,lat"; duplicate (type, lon, lat) rows are dropped
// and counted into *duplicates_dropped when given.
LandmarkCatalog load_landmarks(const std::string& path,
                               std::size_t* duplicates_dropped = nullptr);

// Cases with window_start <= date < window_start + len_days, order preserved.
// Throws EmptyWindow when no case falls inside.
std::vector<CaseRecord> window_slice(std::span<const CaseRecord> cases,
                                     Date window_start, int len_days);

// Maps a window of cases to normalized time. Day d of the window occupies
// [d/len, (d+1)/len); within a day, the k-th case of that day (in input
// order, 0-based, n cases total) sits at offset (k + 0.5)/n of the day, so
// ties never occur and the ordering is deterministic.
Dataset normalize(std::span<const CaseRecord> in_window, Date window_start,
                  int len_days, const LandmarkCatalog& catalog);

// Inverse of the time mapping at day resolution.
Date denormalize(double t, Date window_start, int len_days);

// Entry (i, l) is the type-l site closest to points[i] in Euclidean degree
// coordinates; ties resolved to the lowest site index. Row-major N x p.
std::vector<GeoPoint> nearest_landmarks(std::span<const GeoPoint> points,
                                        const LandmarkCatalog& catalog);

}  // namespace stdpg

#endif  // STDPG_DATA_HPP
