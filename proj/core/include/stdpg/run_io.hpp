#ifndef STDPG_RUN_IO_HPP
#define STDPG_RUN_IO_HPP

#include <string>
#include <vector>

#include "stdpg/assess.hpp"
#include "stdpg/data.hpp"
#include "stdpg/sampler.hpp"
#include "stdpg/synth.hpp"

namespace stdpg {

// Shortest round-trip-exact decimal rendering used by every CSV writer, so
// reruns are byte-comparable.
std::string fmt_double(double v);

// trace.csv: iteration,omega_s,omega_t,omega_1..p,b_u,M_star,loglik
void write_trace_csv(const std::string& path, const Trace& trace);

// draws.csv: draw,cluster,q,lon,lat,t (non-empty clusters per retained draw)
void write_draws_csv(const std::string& path, const Trace& trace);

// dataset.csv: lon,lat,t (normalized window coordinates)
void write_dataset_csv(const std::string& path, const Dataset& data);

// Reads trace.csv + draws.csv (+ domain) back for the assess/raster tools.
Trace read_trace(const std::string& trace_path, const std::string& draws_path,
                 const Domain& domain);
Dataset read_dataset_csv(const std::string& path, const Domain& domain);

// Conversion constants applied to reported summaries.
struct Reporting {
  double km_per_deg = 1.0;
  double days_scale = 28.0;
  std::vector<std::string> landmark_names;
};

void write_summary_json(const std::string& path, const PosteriorSummary& summary,
                        const Reporting& reporting);
PosteriorSummary read_summary_json(const std::string& path);

void write_assessment_csv(const std::string& path, const AssessmentGrid& grid,
                          std::span<const double> p_obs,
                          const TheoreticalProportions& p_theo);

void write_raster_csv(const std::string& path,
                      std::span<const DensityRaster> rasters);

void write_boundaries_csv(const std::string& path,
                          std::span<const RiskBoundary> boundaries);

void write_cases_csv(const std::string& path, std::span<const CaseRecord> cases);
void write_landmarks_csv(const std::string& path, const LandmarkCatalog& catalog);

void write_ground_truth_json(const std::string& path, const SynthResult& truth,
                             const SynthSpec& spec);

}  // namespace stdpg

#endif  // STDPG_RUN_IO_HPP
