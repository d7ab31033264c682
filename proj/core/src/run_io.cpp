#include "stdpg/run_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stdpg/errors.hpp"

namespace stdpg {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return in;
}

json param_to_json(const ParamSummary& s, double scale = 1.0) {
  return json{{"mean", s.mean * scale},
              {"var", s.var * scale * scale},
              {"hpd_lo", s.hpd.lo * scale},
              {"hpd_hi", s.hpd.hi * scale}};
}

ParamSummary param_from_json(const json& j) {
  ParamSummary s;
  s.mean = j.at("mean");
  s.var = j.at("var");
  s.hpd.lo = j.at("hpd_lo");
  s.hpd.hi = j.at("hpd_hi");
  return s;
}

}  // namespace

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trace_csv(const std::string& path, const Trace& trace) {
  auto out = open_out(path);
  out << "iteration,omega_s,omega_t";
  for (std::size_t l = 0; l < trace.n_landmarks; ++l) out << ",omega_" << (l + 1);
  out << ",b_u,M_star,loglik\n";
  for (const auto& row : trace.rows) {
    out << row.iteration << ',' << fmt_double(row.theta.spatial) << ','
        << fmt_double(row.theta.temporal);
    for (double wl : row.theta.landmark) out << ',' << fmt_double(wl);
    out << ',' << fmt_double(row.concentration) << ',' << row.m_star << ','
        << fmt_double(row.log_lik) << '\n';
  }
}

void write_draws_csv(const std::string& path, const Trace& trace) {
  auto out = open_out(path);
  out << "draw,cluster,q,lon,lat,t\n";
  for (std::size_t d = 0; d < trace.draw_states.size(); ++d) {
    const auto& ds = trace.draw_states[d];
    for (std::size_t j = 0; j < ds.weights.size(); ++j) {
      out << d << ',' << j << ',' << fmt_double(ds.weights[j]) << ','
          << fmt_double(ds.centers_s[j].lon) << ',' << fmt_double(ds.centers_s[j].lat)
          << ',' << fmt_double(ds.centers_t[j]) << '\n';
    }
  }
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  auto out = open_out(path);
  out << "lon,lat,t\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << fmt_double(data.points[i].lon) << ',' << fmt_double(data.points[i].lat)
        << ',' << fmt_double(data.times[i]) << '\n';
  }
}

Dataset read_dataset_csv(const std::string& path, const Domain& domain) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw EmptyFile("dataset '" + path + "' is empty");
  Dataset ds;
  ds.domain = domain;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double lon, lat, t;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &lon, &lat, &t) != 3)
      throw IoError("bad dataset row '" + line + "'");
    ds.points.push_back(GeoPoint{lon, lat});
    ds.times.push_back(t);
  }
  if (ds.points.empty()) throw EmptyFile("dataset '" + path + "' has no rows");
  return ds;
}

Trace read_trace(const std::string& trace_path, const std::string& draws_path,
                 const Domain& domain) {
  Trace trace;
  trace.domain = domain;
  {
    auto in = open_in(trace_path);
    std::string header;
    if (!std::getline(in, header)) throw EmptyFile("empty trace file");
    std::size_t n_landmarks = 0;
    for (std::size_t pos = 0; (pos = header.find(",omega_", pos)) != std::string::npos;
         ++pos) {
      if (std::isdigit(static_cast<unsigned char>(header[pos + 7]))) ++n_landmarks;
    }
    trace.n_landmarks = n_landmarks;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string field;
      std::vector<double> fields;
      while (std::getline(ss, field, ',')) fields.push_back(std::stod(field));
      if (fields.size() != 6 + n_landmarks)
        throw IoError("bad trace row '" + line + "'");
      TraceRow row;
      row.iteration = static_cast<std::uint32_t>(fields[0]);
      row.theta.spatial = fields[1];
      row.theta.temporal = fields[2];
      row.theta.landmark.assign(fields.begin() + 3, fields.begin() + 3 + n_landmarks);
      row.concentration = fields[3 + n_landmarks];
      row.m_star = static_cast<std::uint32_t>(fields[4 + n_landmarks]);
      row.log_lik = fields.back();
      trace.rows.push_back(std::move(row));
    }
  }
  {
    auto in = open_in(draws_path);
    std::string line;
    std::getline(in, line);  // header
    trace.draw_states.resize(trace.rows.size());
    for (std::size_t d = 0; d < trace.rows.size(); ++d)
      trace.draw_states[d].theta = trace.rows[d].theta;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::size_t d, j;
      double q, lon, lat, t;
      if (std::sscanf(line.c_str(), "%zu,%zu,%lf,%lf,%lf,%lf", &d, &j, &q, &lon,
                      &lat, &t) != 6)
        throw IoError("bad draws row '" + line + "'");
      if (d >= trace.draw_states.size())
        throw IoError("draw index out of range in '" + draws_path + "'");
      auto& ds = trace.draw_states[d];
      ds.weights.push_back(q);
      ds.centers_s.push_back(GeoPoint{lon, lat});
      ds.centers_t.push_back(t);
    }
  }
  return trace;
}

void write_summary_json(const std::string& path, const PosteriorSummary& summary,
                        const Reporting& reporting) {
  json native{{"omega_s", param_to_json(summary.spatial)},
              {"omega_t", param_to_json(summary.temporal)},
              {"b_u", param_to_json(summary.concentration)}};
  json converted{{"omega_s_km", param_to_json(summary.spatial, reporting.km_per_deg)},
                 {"omega_t_days", param_to_json(summary.temporal, reporting.days_scale)}};
  json landmarks = json::array();
  json landmarks_km = json::array();
  for (std::size_t l = 0; l < summary.landmark.size(); ++l) {
    const std::string name = l < reporting.landmark_names.size()
                                 ? reporting.landmark_names[l]
                                 : "landmark_" + std::to_string(l + 1);
    json jl = param_to_json(summary.landmark[l]);
    jl["name"] = name;
    landmarks.push_back(jl);
    json jk = param_to_json(summary.landmark[l], reporting.km_per_deg);
    jk["name"] = name;
    landmarks_km.push_back(jk);
  }
  native["omega_l"] = landmarks;
  converted["omega_l_km"] = landmarks_km;

  json centers = json::array();
  for (std::size_t j = 0; j < summary.final_centers.size(); ++j) {
    centers.push_back(json{{"lon", summary.final_centers.spatial[j].lon},
                           {"lat", summary.final_centers.spatial[j].lat},
                           {"t", summary.final_centers.time[j]},
                           {"n_members", summary.final_sizes.empty()
                                             ? 0u
                                             : summary.final_sizes[j]}});
  }
  json final_theta{{"omega_s", summary.final_theta.spatial},
                   {"omega_t", summary.final_theta.temporal},
                   {"omega_l", summary.final_theta.landmark}};

  json doc{{"native", native},
           {"converted", converted},
           {"mean_m_star", summary.mean_m_star},
           {"final_state", json{{"theta", final_theta}, {"centers", centers}}},
           {"conversion",
            json{{"km_per_degree", reporting.km_per_deg},
                 {"days_scale", reporting.days_scale}}},
           {"warnings", summary.warnings}};
  open_out(path) << doc.dump(2) << '\n';
}

PosteriorSummary read_summary_json(const std::string& path) {
  json doc = json::parse(open_in(path));
  PosteriorSummary s;
  const json& native = doc.at("native");
  s.spatial = param_from_json(native.at("omega_s"));
  s.temporal = param_from_json(native.at("omega_t"));
  s.concentration = param_from_json(native.at("b_u"));
  for (const auto& jl : native.at("omega_l")) s.landmark.push_back(param_from_json(jl));
  s.mean_m_star = doc.at("mean_m_star");
  const json& fs = doc.at("final_state");
  s.final_theta.spatial = fs.at("theta").at("omega_s");
  s.final_theta.temporal = fs.at("theta").at("omega_t");
  s.final_theta.landmark = fs.at("theta").at("omega_l").get<std::vector<double>>();
  for (const auto& jc : fs.at("centers")) {
    s.final_centers.spatial.push_back(GeoPoint{jc.at("lon"), jc.at("lat")});
    s.final_centers.time.push_back(jc.at("t"));
    s.final_sizes.push_back(jc.at("n_members"));
  }
  if (doc.contains("warnings"))
    s.warnings = doc.at("warnings").get<std::vector<std::string>>();
  return s;
}

void write_assessment_csv(const std::string& path, const AssessmentGrid& grid,
                          std::span<const double> p_obs,
                          const TheoreticalProportions& p_theo) {
  auto out = open_out(path);
  out << "cube_index,lon_lo,lon_hi,lat_lo,lat_hi,t_lo,t_hi,p_obs,p_theo,p_theo_raw\n";
  for (int g = 0; g < grid.size(); ++g) {
    const auto c = grid.cube(g);
    out << g << ',' << fmt_double(c.lon_lo) << ',' << fmt_double(c.lon_hi) << ','
        << fmt_double(c.lat_lo) << ',' << fmt_double(c.lat_hi) << ','
        << fmt_double(c.t_lo) << ',' << fmt_double(c.t_hi) << ','
        << fmt_double(p_obs[g]) << ',' << fmt_double(p_theo.renormalized[g]) << ','
        << fmt_double(p_theo.raw[g]) << '\n';
  }
}

void write_raster_csv(const std::string& path,
                      std::span<const DensityRaster> rasters) {
  auto out = open_out(path);
  out << "lon,lat,t_slice,density\n";
  for (const auto& r : rasters) {
    const double wlon = r.domain.lon_span() / r.n_lon;
    const double wlat = r.domain.lat_span() / r.n_lat;
    for (int ilat = 0; ilat < r.n_lat; ++ilat) {
      for (int ilon = 0; ilon < r.n_lon; ++ilon) {
        out << fmt_double(r.domain.lon_min + (ilon + 0.5) * wlon) << ','
            << fmt_double(r.domain.lat_min + (ilat + 0.5) * wlat) << ','
            << fmt_double(r.t_mid()) << ','
            << fmt_double(r.values[static_cast<std::size_t>(ilat) * r.n_lon + ilon])
            << '\n';
      }
    }
  }
}

void write_boundaries_csv(const std::string& path,
                          std::span<const RiskBoundary> boundaries) {
  auto out = open_out(path);
  out << "lon,lat,t,radius_km\n";
  for (const auto& b : boundaries) {
    out << fmt_double(b.center.lon) << ',' << fmt_double(b.center.lat) << ','
        << fmt_double(b.t) << ',' << fmt_double(b.radius_km) << '\n';
  }
}

void write_cases_csv(const std::string& path, std::span<const CaseRecord> cases) {
  auto out = open_out(path);
  out << "lon,lat,date\n";
  for (const auto& c : cases) {
    out << fmt_double(c.location.lon) << ',' << fmt_double(c.location.lat) << ','
        << c.date.to_string() << '\n';
  }
}

void write_landmarks_csv(const std::string& path, const LandmarkCatalog& catalog) {
  auto out = open_out(path);
  out << "type,lon,lat\n";
  for (std::size_t l = 0; l < catalog.n_types(); ++l) {
    for (const auto& s : catalog.sites[l]) {
      out << catalog.types[l] << ',' << fmt_double(s.lon) << ',' << fmt_double(s.lat)
          << '\n';
    }
  }
}

void write_ground_truth_json(const std::string& path, const SynthResult& truth,
                             const SynthSpec& spec) {
  json centers = json::array();
  for (std::size_t j = 0; j < truth.centers.size(); ++j) {
    centers.push_back(json{{"lon", truth.centers.spatial[j].lon},
                           {"lat", truth.centers.spatial[j].lat},
                           {"t", truth.centers.time[j]}});
  }
  json doc{
      {"theta", json{{"omega_s", spec.theta.spatial},
                     {"omega_t", spec.theta.temporal},
                     {"omega_l", spec.theta.landmark}}},
      {"b_u", spec.concentration},
      {"m_star", spec.m_star},
      {"n", spec.n},
      {"seed", spec.seed},
      {"domain", json{{"lon_min", spec.domain.lon_min},
                      {"lon_max", spec.domain.lon_max},
                      {"lat_min", spec.domain.lat_min},
                      {"lat_max", spec.domain.lat_max}}},
      {"centers", centers},
      {"q", truth.weights},
      {"g", truth.labels},
      {"t", truth.data.times}};
  open_out(path) << doc.dump(2) << '\n';
}

}  // namespace stdpg
