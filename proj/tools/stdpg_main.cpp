// stdpg: fit and interrogate spatio-temporal Dirichlet process Gaussian
// mixtures on disease-case point patterns.
//
// Subcommands: fit, rolling-fit, simulate, assess, raster, boundaries,
// summary. Exit codes: 0 success, 1 runtime error, 2 usage/config error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "stdpg/assess.hpp"
#include "stdpg/data.hpp"
#include "stdpg/errors.hpp"
#include "stdpg/rolling.hpp"
#include "stdpg/run_io.hpp"
#include "stdpg/sampler.hpp"
#include "stdpg/synth.hpp"
#include "stdpg/threading.hpp"
#include "stdpg/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunOptions {
  std::string cases_path;
  std::string landmarks_path;
  std::string out_dir;
  std::string study_start;
  std::string study_end;
  int window_days = 14;

  // sampler
  unsigned max_clusters = 0;  // 0 = pick by window length (120 / 200)
  unsigned n_iter = 20000;
  unsigned n_burn = 10000;
  unsigned thin = 10;
  std::uint64_t seed = 1;
  double mh_step = 0.1;
  bool no_adapt = false;
  double hyper_a = 1.0;
  double hyper_b = 0.25;
  std::string landmark_normalizer = "linear";

  // rolling
  double c_mult = 2.0;
  bool carry_time = false;

  // reporting / assessment
  double days_scale = 28.0;
  int grid_lon = 8;
  int grid_lat = 13;
  int grid_t = 3;
  int raster_res = 60;
  int raster_slices = 4;

  unsigned threads = 0;  // 0 = all cores
};

void add_sampler_flags(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--max-clusters,-M", o.max_clusters,
                  "Truncation level M (default 120 for windows up to 14 days, 200 beyond)");
  cmd->add_option("--iters", o.n_iter, "Total MCMC iterations")->capture_default_str();
  cmd->add_option("--burnin", o.n_burn, "Burn-in iterations")->capture_default_str();
  cmd->add_option("--thin", o.thin, "Thinning stride")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Master RNG seed")->capture_default_str();
  cmd->add_option("--mh-step", o.mh_step, "Initial log-scale Metropolis step")
      ->capture_default_str();
  cmd->add_flag("--no-adapt", o.no_adapt, "Disable burn-in step adaptation");
  cmd->add_option("--hyper-a", o.hyper_a, "Gamma shape for b_u")->capture_default_str();
  cmd->add_option("--hyper-b", o.hyper_b, "Gamma rate for b_u")->capture_default_str();
  cmd->add_option("--landmark-normalizer", o.landmark_normalizer,
                  "Landmark kernel normalizer: linear or squared")
      ->check(CLI::IsMember({"linear", "squared"}))
      ->capture_default_str();
}

void add_reporting_flags(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--days-scale", o.days_scale,
                  "Factor converting the temporal range to days")
      ->capture_default_str();
  cmd->add_option("--grid-lon", o.grid_lon, "Assessment cubes along longitude")
      ->capture_default_str();
  cmd->add_option("--grid-lat", o.grid_lat, "Assessment cubes along latitude")
      ->capture_default_str();
  cmd->add_option("--grid-t", o.grid_t, "Assessment cubes along time")
      ->capture_default_str();
  cmd->add_option("--raster-res", o.raster_res, "Raster cells per spatial axis")
      ->capture_default_str();
  cmd->add_option("--raster-slices", o.raster_slices, "Raster time slices")
      ->capture_default_str();
}

void add_common_flags(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--threads", o.threads, "Worker threads (default: all cores)")
      ->envname("STDPG_THREADS");
  cmd->set_config("--config", "", "Flat key=value config file; CLI flags win");
}

stdpg::SamplerConfig sampler_config(const RunOptions& o, int window_days) {
  stdpg::SamplerConfig cfg;
  cfg.max_clusters = o.max_clusters != 0 ? o.max_clusters
                                         : (window_days <= 14 ? 120u : 200u);
  cfg.n_iter = o.n_iter;
  cfg.n_burn = o.n_burn;
  cfg.thin = o.thin;
  cfg.seed = o.seed;
  cfg.mh_step = o.mh_step;
  cfg.adapt = !o.no_adapt;
  cfg.hyper_a = o.hyper_a;
  cfg.hyper_b = o.hyper_b;
  cfg.normalizer = o.landmark_normalizer == "squared"
                       ? stdpg::LandmarkNormalizer::squared
                       : stdpg::LandmarkNormalizer::linear;
  return cfg;
}

json domain_to_json(const stdpg::Domain& d) {
  return json{{"lon_min", d.lon_min},
              {"lon_max", d.lon_max},
              {"lat_min", d.lat_min},
              {"lat_max", d.lat_max}};
}

stdpg::Domain domain_from_json(const json& j) {
  return stdpg::Domain{j.at("lon_min"), j.at("lon_max"), j.at("lat_min"),
                       j.at("lat_max")};
}

json metadata_json(const RunOptions& o, const stdpg::SamplerConfig& cfg,
                   const stdpg::Dataset& data, stdpg::Date start, stdpg::Date end,
                   double km_per_deg, const stdpg::LandmarkCatalog& catalog) {
  return json{
      {"version", stdpg::kVersion},
      {"seed", cfg.seed},
      {"inputs", json{{"cases", o.cases_path}, {"landmarks", o.landmarks_path}}},
      {"window", json{{"start", start.to_string()},
                      {"end", end.to_string()},
                      {"days", end - start}}},
      {"domain", domain_to_json(data.domain)},
      {"sampler", json{{"max_clusters", cfg.max_clusters},
                       {"n_iter", cfg.n_iter},
                       {"n_burn", cfg.n_burn},
                       {"thin", cfg.thin},
                       {"mh_step", cfg.mh_step},
                       {"adapt", cfg.adapt},
                       {"hyper_a", cfg.hyper_a},
                       {"hyper_b", cfg.hyper_b}}},
      {"assessment", json{{"grid_lon", o.grid_lon},
                          {"grid_lat", o.grid_lat},
                          {"grid_t", o.grid_t},
                          {"raster_res", o.raster_res},
                          {"raster_slices", o.raster_slices}}},
      {"conversion", json{{"km_per_degree", km_per_deg},
                          {"days_scale", o.days_scale}}},
      {"landmark_types", catalog.types},
      {"conventions", json{{"degree_to_km", "centroid-isotropic-mean"},
                           {"time_jitter", "within-day-rank"},
                           {"window_label", "end-date"},
                           {"landmark_normalizer", o.landmark_normalizer}}}};
}

// All per-window artifacts: trace, summary, assessment, raster, boundaries,
// metadata, plus the normalized dataset and retained draw states that the
// assess/raster/boundaries tools re-read.
void write_run_dir(const fs::path& dir, const RunOptions& o,
                   const stdpg::SamplerConfig& cfg, const stdpg::Dataset& data,
                   const stdpg::Trace& trace, const stdpg::PosteriorSummary& summary,
                   const stdpg::ChainState& final_state, stdpg::Date start,
                   stdpg::Date end, const stdpg::LandmarkCatalog& catalog) {
  fs::create_directories(dir);
  const double km_per_deg = stdpg::km_per_degree(data.domain);
  stdpg::Reporting reporting{km_per_deg, o.days_scale, catalog.types};

  stdpg::write_trace_csv((dir / "trace.csv").string(), trace);
  stdpg::write_draws_csv((dir / "draws.csv").string(), trace);
  stdpg::write_dataset_csv((dir / "dataset.csv").string(), data);
  stdpg::write_summary_json((dir / "summary.json").string(), summary, reporting);

  stdpg::AssessmentGrid grid{o.grid_lon, o.grid_lat, o.grid_t, data.domain};
  const auto p_obs = stdpg::observed_proportions(data, grid);
  const auto p_theo = stdpg::theoretical_proportions(trace, grid);
  stdpg::write_assessment_csv((dir / "assessment.csv").string(), grid, p_obs, p_theo);
  stdpg::qq_export(p_theo.renormalized, p_obs, (dir / "qq.csv").string());

  const auto rasters =
      stdpg::density_raster(trace, o.raster_res, o.raster_res, o.raster_slices);
  stdpg::write_raster_csv((dir / "raster.csv").string(), rasters);

  const auto boundaries = stdpg::risk_boundaries(final_state, km_per_deg);
  stdpg::write_boundaries_csv((dir / "boundaries.csv").string(), boundaries);

  std::ofstream meta(dir / "metadata.json");
  meta << metadata_json(o, cfg, data, start, end, km_per_deg, catalog).dump(2)
       << '\n';
}

void require_readable(const std::string& path, const char* flag) {
  if (!fs::exists(path))
    throw stdpg::ConfigError(std::string(flag) + ": file '" + path +
                             "' does not exist");
}

stdpg::LandmarkCatalog load_catalog_if_given(const RunOptions& o) {
  if (o.landmarks_path.empty()) return {};
  require_readable(o.landmarks_path, "--landmarks");
  std::size_t dropped = 0;
  auto catalog = stdpg::load_landmarks(o.landmarks_path, &dropped);
  if (dropped > 0)
    std::cerr << "warning: dropped " << dropped << " duplicate landmark rows\n";
  return catalog;
}

void study_period(const RunOptions& o, std::span<const stdpg::CaseRecord> cases,
                  stdpg::Date& start, stdpg::Date& end) {
  if (!o.study_start.empty()) {
    start = stdpg::Date::parse(o.study_start);
  } else {
    start = cases[0].date;
    for (const auto& c : cases) start = std::min(start, c.date);
  }
  if (!o.study_end.empty()) {
    end = stdpg::Date::parse(o.study_end);
  } else {
    end = cases[0].date;
    for (const auto& c : cases) end = std::max(end, c.date);
    end = end + 1;  // half-open period includes the last observed day
  }
  if (end - start < 1) throw stdpg::ConfigError("empty study period");
}

int run_fit(const RunOptions& o) {
  require_readable(o.cases_path, "--cases");
  const auto cases = stdpg::load_cases(o.cases_path);
  const auto catalog = load_catalog_if_given(o);
  stdpg::Date start, end;
  study_period(o, cases, start, end);
  const int days = end - start;

  const auto in_window = stdpg::window_slice(cases, start, days);
  const auto data = stdpg::normalize(in_window, start, days, catalog);
  const auto cfg = sampler_config(o, days);

  stdpg::InitOptions init_opts;
  init_opts.max_clusters = cfg.max_clusters;
  init_opts.seed = cfg.seed;
  stdpg::ChainState probe =
      stdpg::init_window_state(nullptr, data, catalog, stdpg::RangeParams{}, init_opts);
  const auto theta0 = stdpg::initial_ranges(data, catalog, probe.centers.spatial);
  stdpg::ChainState init =
      stdpg::init_window_state(nullptr, data, catalog, theta0, init_opts);

  stdpg::ChainState final_state;
  const auto trace = stdpg::run_chain(cfg, data, stdpg::WindowPrior::flat_positive(),
                                      init, &final_state);
  auto summary = stdpg::summarize(trace);
  summary.final_centers = final_state.centers;
  summary.final_sizes = final_state.cluster_sizes;
  summary.final_theta = final_state.theta;

  write_run_dir(o.out_dir, o, cfg, data, trace, summary, final_state, start, end,
                catalog);
  std::cout << "fit complete: " << data.size() << " cases, M*="
            << final_state.n_nonempty() << ", artifacts in " << o.out_dir << "\n";
  return 0;
}

int run_rolling_fit(const RunOptions& o) {
  require_readable(o.cases_path, "--cases");
  const auto cases = stdpg::load_cases(o.cases_path);
  const auto catalog = load_catalog_if_given(o);
  stdpg::Date start, end;
  study_period(o, cases, start, end);
  if (o.window_days < 1) throw stdpg::ConfigError("--window-days must be >= 1");
  const int n_windows = (end - start) / o.window_days;
  const int leftover = (end - start) - n_windows * o.window_days;
  if (leftover > 0)
    std::cerr << "note: trailing " << leftover
              << " day(s) do not fill a window and are not fitted\n";

  const auto cfg = sampler_config(o, o.window_days);
  const fs::path out(o.out_dir);
  fs::create_directories(out);

  auto window_dir = [&](int w, stdpg::Date wend) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "window_%03d_%s", w + 1,
                  wend.to_string().c_str());
    return out / buf;
  };

  stdpg::RollingOptions ropts;
  ropts.c_mult = o.c_mult;
  ropts.carry_time = o.carry_time;

  auto resume = [&](int w) -> std::optional<stdpg::PosteriorSummary> {
    const fs::path dir = window_dir(w, start + (w + 1) * o.window_days);
    if (!fs::exists(dir / "summary.json")) return std::nullopt;
    std::cout << "skipping completed window " << (w + 1) << " ("
              << dir.filename().string() << ")\n";
    return stdpg::read_summary_json((dir / "summary.json").string());
  };

  auto sink = [&](const stdpg::WindowResult& res, const stdpg::Dataset& data,
                  const stdpg::Trace& trace, const stdpg::ChainState& final_state) {
    write_run_dir(window_dir(res.index, res.end), o, cfg, data, trace, res.summary,
                  final_state, res.start, res.end, catalog);
    std::cout << "window " << (res.index + 1) << " [" << res.start.to_string()
              << ", " << res.end.to_string() << "): " << res.n_cases
              << " cases, M*=" << final_state.n_nonempty() << "\n";
  };

  const auto results = stdpg::run_rolling(cases, catalog, start, end, o.window_days,
                                          cfg, ropts, sink, resume);

  json windows = json::array();
  for (const auto& r : results) {
    json jw{{"index", r.index + 1},
            {"start", r.start.to_string()},
            {"end", r.end.to_string()},
            {"label", r.end.to_string()},
            {"n_cases", r.n_cases}};
    if (r.skipped_empty) {
      jw["status"] = "skipped-empty";
      std::cerr << "note: window " << (r.index + 1) << " has no cases, skipped\n";
    } else {
      jw["status"] = "done";
      jw["dir"] = window_dir(r.index, r.end).filename().string();
    }
    windows.push_back(jw);
  }
  json manifest{{"study_start", start.to_string()},
                {"study_end", end.to_string()},
                {"window_days", o.window_days},
                {"label_convention", "end-date"},
                {"version", stdpg::kVersion},
                {"seed", o.seed},
                {"windows", windows}};
  std::ofstream mf(out / "windows.json");
  mf << manifest.dump(2) << '\n';
  std::cout << "rolling fit complete: " << results.size() << " windows in "
            << o.out_dir << "\n";
  return 0;
}

int run_simulate(const std::string& spec_path, const std::string& out_dir) {
  require_readable(spec_path, "--spec");
  json sj = json::parse(std::ifstream(spec_path));
  stdpg::SynthSpec spec;
  spec.n = sj.at("n");
  spec.m_star = sj.at("m_star");
  spec.theta.spatial = sj.at("omega_s");
  spec.theta.temporal = sj.at("omega_t");
  if (sj.contains("omega_l"))
    spec.theta.landmark = sj.at("omega_l").get<std::vector<double>>();
  spec.concentration = sj.value("b_u", 4.0);
  spec.seed = sj.value("seed", 1);
  spec.domain = domain_from_json(sj.at("domain"));
  const std::string mode = sj.value("mode", "space-time-only");
  if (mode == "full") {
    spec.mode = stdpg::SynthSpec::Mode::full_with_landmarks;
    spec.catalog = stdpg::load_landmarks(sj.at("landmarks").get<std::string>());
  } else if (mode != "space-time-only") {
    throw stdpg::ConfigError("mode must be 'space-time-only' or 'full'");
  }

  const auto start = stdpg::Date::parse(sj.value("start_date", "2020-03-02"));
  const int n_days = sj.value("n_days", 14);
  if (n_days < 1) throw stdpg::ConfigError("n_days must be >= 1");

  const auto truth = stdpg::simulate(spec);

  fs::path out(out_dir);
  fs::create_directories(out);
  std::vector<stdpg::CaseRecord> cases(spec.n);
  for (std::uint32_t i = 0; i < spec.n; ++i) {
    cases[i].location = truth.data.points[i];
    cases[i].date = stdpg::denormalize(truth.data.times[i], start, n_days);
  }
  stdpg::write_cases_csv((out / "cases.csv").string(), cases);
  if (spec.catalog.has_value())
    stdpg::write_landmarks_csv((out / "landmarks.csv").string(), *spec.catalog);
  stdpg::write_ground_truth_json((out / "ground_truth.json").string(), truth, spec);
  std::cout << "simulated " << spec.n << " cases into " << out_dir << "\n";
  return 0;
}

// Pieces of a saved run directory needed by the post-hoc tools.
struct SavedRun {
  json metadata;
  stdpg::Domain domain;
  double km_per_deg = 1.0;
};

SavedRun load_saved_run(const fs::path& dir) {
  const fs::path meta_path = dir / "metadata.json";
  if (!fs::exists(meta_path))
    throw stdpg::Error("run directory '" + dir.string() +
                       "' is incomplete: missing metadata.json");
  SavedRun run;
  run.metadata = json::parse(std::ifstream(meta_path));
  run.domain = domain_from_json(run.metadata.at("domain"));
  run.km_per_deg = run.metadata.at("conversion").at("km_per_degree");
  return run;
}

int run_assess(const std::string& run_dir, int grid_lon, int grid_lat, int grid_t) {
  const fs::path dir(run_dir);
  const SavedRun run = load_saved_run(dir);
  if (grid_lon == 0) grid_lon = run.metadata.at("assessment").at("grid_lon");
  if (grid_lat == 0) grid_lat = run.metadata.at("assessment").at("grid_lat");
  if (grid_t == 0) grid_t = run.metadata.at("assessment").at("grid_t");

  const auto data = stdpg::read_dataset_csv((dir / "dataset.csv").string(), run.domain);
  const auto trace = stdpg::read_trace((dir / "trace.csv").string(),
                                       (dir / "draws.csv").string(), run.domain);
  stdpg::AssessmentGrid grid{grid_lon, grid_lat, grid_t, run.domain};
  const auto p_obs = stdpg::observed_proportions(data, grid);
  const auto p_theo = stdpg::theoretical_proportions(trace, grid);
  stdpg::write_assessment_csv((dir / "assessment.csv").string(), grid, p_obs, p_theo);
  stdpg::qq_export(p_theo.renormalized, p_obs, (dir / "qq.csv").string());
  std::cout << "assessment over " << grid.size()
            << " cubes: MSE=" << stdpg::assessment_mse(p_theo.renormalized, p_obs)
            << "\n";
  return 0;
}

int run_raster(const std::string& run_dir, int res, int slices) {
  const fs::path dir(run_dir);
  const SavedRun run = load_saved_run(dir);
  if (res == 0) res = run.metadata.at("assessment").at("raster_res");
  if (slices == 0) slices = run.metadata.at("assessment").at("raster_slices");
  const auto trace = stdpg::read_trace((dir / "trace.csv").string(),
                                       (dir / "draws.csv").string(), run.domain);
  const auto rasters = stdpg::density_raster(trace, res, res, slices);
  stdpg::write_raster_csv((dir / "raster.csv").string(), rasters);
  std::cout << "raster " << res << "x" << res << "x" << slices << " written\n";
  return 0;
}

int run_boundaries(const std::string& run_dir) {
  const fs::path dir(run_dir);
  const SavedRun run = load_saved_run(dir);
  const auto summary = stdpg::read_summary_json((dir / "summary.json").string());

  stdpg::ChainState state;
  state.centers = summary.final_centers;
  state.cluster_sizes = summary.final_sizes;
  state.theta = summary.final_theta;
  const auto boundaries = stdpg::risk_boundaries(state, run.km_per_deg);
  stdpg::write_boundaries_csv((dir / "boundaries.csv").string(), boundaries);
  std::cout << boundaries.size() << " risk boundaries written\n";
  return 0;
}

void print_summary_row(const std::string& label, const stdpg::PosteriorSummary& s,
                       double km_per_deg, double days_scale) {
  auto cell = [](const stdpg::ParamSummary& p, double scale) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.3g (%.3g, %.3g)", p.mean * scale,
                  p.hpd.lo * scale, p.hpd.hi * scale);
    return std::string(buf);
  };
  std::cout << label << "\t" << cell(s.spatial, km_per_deg) << "\t"
            << cell(s.temporal, days_scale);
  for (const auto& l : s.landmark) std::cout << "\t" << cell(l, km_per_deg);
  std::cout << "\n";
}

int run_summary(const std::string& run_dir) {
  const fs::path dir(run_dir);
  const fs::path manifest_path = dir / "windows.json";

  auto print_header = [](const json& meta) {
    std::cout << "window\tspace_km\ttime_days";
    if (meta.contains("landmark_types"))
      for (const auto& t : meta.at("landmark_types"))
        std::cout << "\t" << t.get<std::string>() << "_km";
    std::cout << "\n";
  };

  if (fs::exists(manifest_path)) {
    const json manifest = json::parse(std::ifstream(manifest_path));
    bool header_done = false;
    for (const auto& w : manifest.at("windows")) {
      if (w.at("status") != "done") continue;
      const fs::path wdir = dir / w.at("dir").get<std::string>();
      const SavedRun run = load_saved_run(wdir);
      if (!header_done) {
        print_header(run.metadata);
        header_done = true;
      }
      const auto s = stdpg::read_summary_json((wdir / "summary.json").string());
      print_summary_row(w.at("label"), s, run.km_per_deg,
                        run.metadata.at("conversion").at("days_scale"));
    }
    if (!header_done) throw stdpg::Error("no completed windows in manifest");
    return 0;
  }

  const SavedRun run = load_saved_run(dir);
  print_header(run.metadata);
  const auto s = stdpg::read_summary_json((dir / "summary.json").string());
  print_summary_row(run.metadata.at("window").at("end"), s, run.km_per_deg,
                    run.metadata.at("conversion").at("days_scale"));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatio-temporal Dirichlet process Gaussian mixture toolkit"};
  app.require_subcommand(1);

  RunOptions opt;
  std::string spec_path, run_dir;
  int grid_lon = 0, grid_lat = 0, grid_t = 0, raster_res = 0, raster_slices = 0;

  auto* fit = app.add_subcommand("fit", "Fit one window and write all artifacts");
  fit->add_option("--cases", opt.cases_path, "Case CSV (lon,lat,date)")->required();
  fit->add_option("--landmarks", opt.landmarks_path, "Landmark CSV (type,lon,lat)");
  fit->add_option("--study-start", opt.study_start, "ISO date, default: first case");
  fit->add_option("--study-end", opt.study_end, "ISO date (exclusive), default: last case + 1");
  fit->add_option("--out", opt.out_dir, "Output directory")->required();
  add_sampler_flags(fit, opt);
  add_reporting_flags(fit, opt);
  add_common_flags(fit, opt);

  auto* rolling = app.add_subcommand(
      "rolling-fit", "Sequential window-by-window fit over the study period");
  rolling->add_option("--cases", opt.cases_path, "Case CSV (lon,lat,date)")->required();
  rolling->add_option("--landmarks", opt.landmarks_path, "Landmark CSV (type,lon,lat)");
  rolling->add_option("--study-start", opt.study_start, "ISO date, default: first case");
  rolling->add_option("--study-end", opt.study_end, "ISO date (exclusive), default: last case + 1");
  rolling->add_option("--window-days", opt.window_days, "Window length in days")
      ->capture_default_str();
  rolling->add_option("--out", opt.out_dir, "Study output directory")->required();
  rolling->add_option("--c-mult", opt.c_mult, "Prior variance inflation")
      ->capture_default_str();
  rolling->add_flag("--carry-time", opt.carry_time,
                    "Carry previous time centers (windows re-normalize time)");
  add_sampler_flags(rolling, opt);
  add_reporting_flags(rolling, opt);
  add_common_flags(rolling, opt);

  auto* simulate = app.add_subcommand("simulate", "Draw a synthetic dataset");
  simulate->add_option("--spec", spec_path, "Simulation spec JSON")->required();
  simulate->add_option("--out", opt.out_dir, "Output directory")->required();

  auto* assess = app.add_subcommand("assess", "Recompute grid assessment for a run");
  assess->add_option("--run", run_dir, "Run directory")->required();
  assess->add_option("--grid-lon", grid_lon, "Cubes along longitude");
  assess->add_option("--grid-lat", grid_lat, "Cubes along latitude");
  assess->add_option("--grid-t", grid_t, "Cubes along time");
  add_common_flags(assess, opt);

  auto* raster = app.add_subcommand("raster", "Recompute the density raster for a run");
  raster->add_option("--run", run_dir, "Run directory")->required();
  raster->add_option("--raster-res", raster_res, "Cells per spatial axis");
  raster->add_option("--raster-slices", raster_slices, "Time slices");
  add_common_flags(raster, opt);

  auto* boundaries =
      app.add_subcommand("boundaries", "Recompute risk boundaries for a run");
  boundaries->add_option("--run", run_dir, "Run directory")->required();

  auto* summary = app.add_subcommand("summary", "Print the posterior table for a run");
  summary->add_option("--run", run_dir, "Run or study directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_name() == "CallForHelp" ? 0 : 2;
  }

  try {
    if (opt.threads > 0) stdpg::set_threads(opt.threads);
    if (fit->parsed()) return run_fit(opt);
    if (rolling->parsed()) return run_rolling_fit(opt);
    if (simulate->parsed()) return run_simulate(spec_path, opt.out_dir);
    if (assess->parsed()) return run_assess(run_dir, grid_lon, grid_lat, grid_t);
    if (raster->parsed()) return run_raster(run_dir, raster_res, raster_slices);
    if (boundaries->parsed()) return run_boundaries(run_dir);
    if (summary->parsed()) return run_summary(run_dir);
  } catch (const stdpg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const stdpg::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
