#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <doctest.h>

#include "stdpg/data.hpp"
#include "stdpg/errors.hpp"
#include "test_support.hpp"

using namespace stdpg;
namespace fs = std::filesystem;

namespace {

struct TempFile {
  fs::path path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("stdpg_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++) + ".csv");
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { fs::remove(path); }
};

}  // namespace

TEST_SUITE("data") {

TEST_CASE("date parsing round-trips and rejects junk") {
  const Date d = Date::parse("2020-03-02");
  CHECK(d.to_string() == "2020-03-02");
  CHECK((d + 14).to_string() == "2020-03-16");
  CHECK((d + 14) - d == 14);
  CHECK_THROWS_AS(Date::parse("2020-13-02"), Error);
  CHECK_THROWS_AS(Date::parse("2020-02-30"), Error);
  CHECK_THROWS_AS(Date::parse("02/03/2020"), Error);
  CHECK_THROWS_AS(Date::parse("2020-03-02x"), Error);
}

TEST_CASE("load_cases reads valid rows in order") {
  TempFile f("lon,lat,date\n-76.5,3.4,2020-03-02\n-76.4,3.5,2020-03-05\n-76.45,3.42,2020-03-02\n");
  const auto cases = load_cases(f.path.string());
  REQUIRE(cases.size() == 3);
  CHECK(cases[0].location.lon == -76.5);
  CHECK(cases[1].date.to_string() == "2020-03-05");
  CHECK(cases[2].location.lat == 3.42);
}

TEST_CASE("load_cases flags malformed rows with their line number") {
  TempFile f("lon,lat,date\n-76.5,3.4,2020-03-02\n-76.4,95.0,2020-03-05\n");
  try {
    load_cases(f.path.string());
    FAIL("expected MalformedRow");
  } catch (const MalformedRow& e) {
    CHECK(e.line == 3);
  }
  TempFile g("lon,lat,date\n-76.5,3.4\n");
  CHECK_THROWS_AS(load_cases(g.path.string()), MalformedRow);
  TempFile h("lon,lat,date\n");
  CHECK_THROWS_AS(load_cases(h.path.string()), EmptyFile);
  TempFile empty("");
  CHECK_THROWS_AS(load_cases(empty.path.string()), EmptyFile);
}

TEST_CASE("duplicate case rows are kept, duplicate landmarks dropped") {
  TempFile cases_f("lon,lat,date\n-76.5,3.4,2020-03-02\n-76.5,3.4,2020-03-02\n");
  CHECK(load_cases(cases_f.path.string()).size() == 2);

  TempFile lm_f(
      "type,lon,lat\nchurch,-76.5,3.4\nchurch,-76.5,3.4\nschool,-76.4,3.3\n"
      "church,-76.45,3.44\n");
  std::size_t dropped = 0;
  const auto catalog = load_landmarks(lm_f.path.string(), &dropped);
  CHECK(dropped == 1);
  REQUIRE(catalog.n_types() == 2);
  CHECK(catalog.types[0] == "church");
  CHECK(catalog.sites[0].size() == 2);
  CHECK(catalog.sites[1].size() == 1);
}

TEST_CASE("landmark catalog preserves type order of first appearance") {
  TempFile f("type,lon,lat\nb,-76.5,3.4\na,-76.4,3.3\nb,-76.3,3.2\n");
  const auto catalog = load_landmarks(f.path.string());
  REQUIRE(catalog.n_types() == 2);
  CHECK(catalog.types[0] == "b");
  CHECK(catalog.types[1] == "a");
  CHECK(catalog.total_sites() == 3);
}

TEST_CASE("window_slice is half-open and order preserving") {
  const Date start = Date::parse("2020-03-02");
  std::vector<CaseRecord> cases;
  for (int d : {0, 5, 13, 14, 20})
    cases.push_back(CaseRecord{{-76.5, 3.4}, start + d});

  const auto w = window_slice(cases, start, 14);
  REQUIRE(w.size() == 3);  // days 0, 5, 13; day 14 excluded
  CHECK(w[2].date - start == 13);

  CHECK_THROWS_AS(window_slice(cases, start + 30, 14), EmptyWindow);

  // all cases inside gives the identity
  const auto all = window_slice(cases, start, 30);
  CHECK(all.size() == cases.size());
}

TEST_CASE("consecutive windows partition the study period") {
  const Date start = Date::parse("2020-03-02");
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> day(0, 41);
  std::vector<CaseRecord> cases;
  for (int i = 0; i < 300; ++i)
    cases.push_back(CaseRecord{{-76.5, 3.4}, start + day(rng)});

  std::size_t total = 0;
  for (int w = 0; w < 3; ++w)
    total += window_slice(cases, start + w * 14, 14).size();
  CHECK(total == cases.size());
}

TEST_CASE("normalize maps days into [0,1) with deterministic within-day offsets") {
  const Date start = Date::parse("2020-03-02");
  std::vector<CaseRecord> cases{
      {{-76.50, 3.40}, start},       // day 0, rank 0 of 2
      {{-76.45, 3.42}, start},       // day 0, rank 1 of 2
      {{-76.40, 3.44}, start + 13},  // last day of a 14-day window
  };
  const auto ds = normalize(cases, start, 14, LandmarkCatalog{});
  REQUIRE(ds.size() == 3);
  CHECK(ds.times[0] == doctest::Approx((0.0 + 0.25) / 14.0));
  CHECK(ds.times[1] == doctest::Approx((0.0 + 0.75) / 14.0));
  CHECK(ds.times[2] == doctest::Approx((13.0 + 0.5) / 14.0));
  for (double t : ds.times) {
    CHECK(t >= 0.0);
    CHECK(t < 1.0);
  }
  // first-day offsets stay below one day's width
  CHECK(ds.times[1] < 1.0 / 14.0);

  // day recovery round-trip
  for (std::size_t i = 0; i < cases.size(); ++i)
    CHECK(denormalize(ds.times[i], start, 14) == cases[i].date);

  // case count preserved and domain contains all points
  CHECK(ds.points.size() == cases.size());
  for (std::size_t i = 0; i < ds.size(); ++i)
    CHECK(ds.domain.contains(ds.points[i], ds.times[i]));
}

TEST_CASE("normalize rejects an empty window") {
  CHECK_THROWS_AS(
      normalize(std::span<const CaseRecord>{}, Date::parse("2020-03-02"), 14,
                LandmarkCatalog{}),
      EmptyWindow);
}

TEST_CASE("nearest landmark picks the coincident site and breaks ties low") {
  LandmarkCatalog catalog;
  catalog.types = {"church"};
  catalog.sites = {{{0.2, 0.2}, {0.8, 0.2}, {0.2, 0.2}}};

  // coincident point maps to that site
  const std::vector<GeoPoint> pts{{0.8, 0.2}, {0.5, 0.2}};
  const auto table = nearest_landmarks(pts, catalog);
  CHECK(table[0] == GeoPoint{0.8, 0.2});
  // equidistant between sites 0 and 1: lowest index wins
  CHECK(table[1] == GeoPoint{0.2, 0.2});
}

TEST_CASE("nearest landmark matches an exhaustive scan on random instances") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  LandmarkCatalog catalog;
  catalog.types = {"a", "b"};
  catalog.sites.resize(2);
  for (int s = 0; s < 17; ++s) catalog.sites[0].push_back({u(rng), u(rng)});
  for (int s = 0; s < 5; ++s) catalog.sites[1].push_back({u(rng), u(rng)});

  std::vector<GeoPoint> pts;
  for (int i = 0; i < 60; ++i) pts.push_back({u(rng), u(rng)});

  const auto table = nearest_landmarks(pts, catalog);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t l = 0; l < 2; ++l) {
      // no site of this type is strictly closer than the table entry
      const GeoPoint& chosen = table[i * 2 + l];
      const double dc = (pts[i].lon - chosen.lon) * (pts[i].lon - chosen.lon) +
                        (pts[i].lat - chosen.lat) * (pts[i].lat - chosen.lat);
      for (const auto& s : catalog.sites[l]) {
        const double ds = (pts[i].lon - s.lon) * (pts[i].lon - s.lon) +
                          (pts[i].lat - s.lat) * (pts[i].lat - s.lat);
        CHECK(ds >= dc - 1e-15);
      }
    }
  }
}

}  // TEST_SUITE
