#include "stdpg/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "stdpg/errors.hpp"
#include "stdpg/threading.hpp"

namespace stdpg {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, std::size_t line, const char* what) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto* end = t.data() + t.size();
  auto res = std::from_chars(t.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw MalformedRow(line, std::string("bad ") + what + " '" + s + "'");
  return v;
}

GeoPoint parse_point(const std::string& lon_s, const std::string& lat_s,
                     std::size_t line) {
  GeoPoint p{parse_double(lon_s, line, "lon"), parse_double(lat_s, line, "lat")};
  if (!valid_geo_point(p))
    throw MalformedRow(line, "coordinates out of range (" + lon_s + ", " + lat_s + ")");
  return p;
}

}  // namespace

Date Date::parse(std::string_view iso) {
  int y = 0;
  unsigned m = 0, d = 0;
  char dash1 = 0, dash2 = 0;
  std::stringstream ss{std::string(iso)};
  ss >> y >> dash1 >> m >> dash2 >> d;
  if (ss.fail() || !(ss >> std::ws).eof() || dash1 != '-' || dash2 != '-')
    throw Error("bad date '" + std::string(iso) + "' (expected YYYY-MM-DD)");
  const std::chrono::year_month_day ymd{std::chrono::year(y),
                                        std::chrono::month(m),
                                        std::chrono::day(d)};
  if (!ymd.ok()) throw Error("invalid calendar date '" + std::string(iso) + "'");
  return Date{std::chrono::sys_days(ymd)};
}

std::string Date::to_string() const {
  const std::chrono::year_month_day ymd{day};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::size_t LandmarkCatalog::total_sites() const {
  std::size_t n = 0;
  for (const auto& s : sites) n += s.size();
  return n;
}

std::vector<GeoPoint> LandmarkCatalog::all_sites() const {
  std::vector<GeoPoint> out;
  out.reserve(total_sites());
  for (const auto& s : sites) out.insert(out.end(), s.begin(), s.end());
  return out;
}

std::vector<CaseRecord> load_cases(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open cases file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw EmptyFile("cases file '" + path + "' is empty");
  std::vector<CaseRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 3)
      throw MalformedRow(line_no, "expected 3 fields lon,lat,date");
    CaseRecord rec;
    rec.location = parse_point(fields[0], fields[1], line_no);
    try {
      rec.date = Date::parse(trim(fields[2]));
    } catch (const Error& e) {
      throw MalformedRow(line_no, e.what());
    }
    out.push_back(rec);
  }
  if (out.empty()) throw EmptyFile("cases file '" + path + "' has no data rows");
  return out;
}

LandmarkCatalog load_landmarks(const std::string& path,
                               std::size_t* duplicates_dropped) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open landmarks file '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw EmptyFile("landmarks file '" + path + "' is empty");

  LandmarkCatalog catalog;
  std::map<std::string, std::size_t> type_index;
  std::size_t dropped = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 3)
      throw MalformedRow(line_no, "expected 3 fields type,lon,lat");
    const std::string type = trim(fields[0]);
    if (type.empty()) throw MalformedRow(line_no, "empty landmark type");
    const GeoPoint p = parse_point(fields[1], fields[2], line_no);

    auto [it, inserted] = type_index.try_emplace(type, catalog.types.size());
    if (inserted) {
      catalog.types.push_back(type);
      catalog.sites.emplace_back();
    }
    auto& sites = catalog.sites[it->second];
    if (std::find(sites.begin(), sites.end(), p) != sites.end()) {
      ++dropped;
      continue;
    }
    sites.push_back(p);
  }
  if (catalog.empty())
    throw EmptyFile("landmarks file '" + path + "' has no data rows");
  if (duplicates_dropped != nullptr) *duplicates_dropped = dropped;
  return catalog;
}

std::vector<CaseRecord> window_slice(std::span<const CaseRecord> cases,
                                     Date window_start, int len_days) {
  const Date window_end = window_start + len_days;
  std::vector<CaseRecord> out;
  for (const auto& c : cases) {
    if (c.date >= window_start && c.date < window_end) out.push_back(c);
  }
  if (out.empty())
    throw EmptyWindow("no cases in window starting " + window_start.to_string());
  return out;
}

Dataset normalize(std::span<const CaseRecord> in_window, Date window_start,
                  int len_days, const LandmarkCatalog& catalog) {
  if (in_window.empty()) throw EmptyWindow("normalize: empty window");
  const std::size_t n = in_window.size();

  std::vector<std::size_t> day_of(n), rank_in_day(n);
  std::vector<std::size_t> day_count(static_cast<std::size_t>(len_days), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const int d = in_window[i].date - window_start;
    if (d < 0 || d >= len_days)
      throw DomainError("normalize: case outside window");
    day_of[i] = static_cast<std::size_t>(d);
    rank_in_day[i] = day_count[day_of[i]]++;
  }

  Dataset ds;
  ds.points.reserve(n);
  ds.times.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ds.points.push_back(in_window[i].location);
    const double within_day =
        (static_cast<double>(rank_in_day[i]) + 0.5) / static_cast<double>(day_count[day_of[i]]);
    ds.times.push_back((static_cast<double>(day_of[i]) + within_day) /
                       static_cast<double>(len_days));
  }
  ds.domain = bounding_domain(ds.points);
  ds.n_landmark_types = catalog.n_types();
  if (!catalog.empty()) ds.nearest = nearest_landmarks(ds.points, catalog);
  return ds;
}

Date denormalize(double t, Date window_start, int len_days) {
  int d = static_cast<int>(std::floor(t * len_days));
  d = std::clamp(d, 0, len_days - 1);
  return window_start + d;
}

std::vector<GeoPoint> nearest_landmarks(std::span<const GeoPoint> points,
                                        const LandmarkCatalog& catalog) {
  const std::size_t n = points.size();
  const std::size_t p = catalog.n_types();
  std::vector<GeoPoint> table(n * p);
  parallel_blocks(n, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t l = 0; l < p; ++l) {
        const auto& sites = catalog.sites[l];
        std::size_t best = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < sites.size(); ++s) {
          const double dx = points[i].lon - sites[s].lon;
          const double dy = points[i].lat - sites[s].lat;
          const double d2 = dx * dx + dy * dy;
          if (d2 < best_d2) {
            best_d2 = d2;
            best = s;
          }
        }
        table[i * p + l] = sites[best];
      }
    }
  });
  return table;
}

}  // namespace stdpg
