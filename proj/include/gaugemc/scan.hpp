#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaugemc/disorder.hpp"
#include "gaugemc/observables.hpp"

namespace gaugemc {

struct SweepBudget {
  int thermalization = 1000;
  int measurement = 10000;
  int interval = 10;
};

struct AnnealParams {
  double t_start = 2.6;
  double cooling_factor = 0.95;
  int sweeps_per_step = 50;
};

// Auto engages the annealed start only for beta > 1, where a hot random
// start would take too long to equilibrate.
enum class AnnealMode { Auto, Always, Never };

struct GridPoint {
  double p = 0.0;
  double beta = 1.0;
};

struct ScanConfig {
  Model model = Model::gauge;  // gauge3d or ising2d
  int L = 4;
  std::vector<GridPoint> points;  // explicit grid, or:
  bool nishimori = false;         // beta derived from p for each p_values entry
  std::vector<double> p_values;
  int n_samples = 1;
  SweepBudget sweeps;
  AnnealParams anneal;
  AnnealMode anneal_mode = AnnealMode::Auto;
  int loop_r_max = 0;  // 0 disables loop measurements (gauge only)
  std::uint64_t master_seed = 1;
  std::string output_dir;

  int dim() const { return model == Model::gauge ? 3 : 2; }
};

std::vector<GridPoint> resolve_grid(const ScanConfig& cfg);
void validate_config(const ScanConfig& cfg);

std::string config_to_json(const ScanConfig& cfg);
ScanConfig config_from_json(const std::string& text);
ScanConfig load_config(const std::string& path);

// FNV-1a over the canonical JSON form, output_dir excluded: moving a scan
// directory does not invalidate a resume, changing any physics field does.
std::uint64_t config_hash(const ScanConfig& cfg);

struct ScanRecord {
  Model model = Model::gauge;
  int L = 0;
  double p = 0.0;
  double beta = 0.0;
  int point_index = 0;
  int sample_index = 0;
  std::uint64_t sample_seed = 0;
  double energy_mean = 0.0;
  double energy_stderr = 0.0;
  double specific_heat = 0.0;
  double specific_heat_err = 0.0;  // jackknife; in-memory only, not persisted
  std::string wilson_table;        // per-sample table file, empty when no loops
  std::vector<WilsonEstimate> wilson;
  double wall_time_s = 0.0;  // kept out of records.csv (see timings.csv)
};

struct PointSummary {
  double p = 0.0;
  double beta = 0.0;
  int n_samples = 0;
  double c_mean = 0.0;
  double c_fluctuation = 0.0;  // sample-to-sample, population convention
  double energy_mean = 0.0;
  bool has_wilson = false;
  DecayClassification ensemble;
  std::vector<DecayVerdict> sample_verdicts;
  std::vector<WilsonEstimate> ensemble_wilson;
};

struct ScanResult {
  std::vector<ScanRecord> records;
  std::vector<PointSummary> summaries;
};

struct ScanOptions {
  int n_workers = 0;  // 0: GAUGEMC_WORKERS env var, else hardware threads
};

// Runs every (grid point, sample) task and writes records.csv,
// summary.json, per-sample and per-point loop tables, scan_meta.json and
// timings.csv under output_dir. Records land in (point, sample) order and
// all persisted bytes except timings.csv are a pure function of the config,
// whatever the worker count. records.csv grows as a valid prefix while the
// scan runs, so an interrupted run can be resumed.
ScanResult run_scan(const ScanConfig& cfg, const ScanOptions& opts = {});

// Recomputes only the (point, sample) tasks missing from output_dir.
// Refuses to touch output produced by a different config (hash check).
ScanResult resume_scan(const ScanConfig& cfg, const ScanOptions& opts = {});

struct PeakPoint {
  double x = 0.0;  // scan coordinate (beta or p)
  double c = 0.0;
  double c_err = 0.0;
};

struct PeakResult {
  bool found = false;
  double location = 0.0;
  double error = 0.0;
};

// Quadratic through the maximum and its two neighbors; the location error
// propagates the c error bars through the vertex formula. Monotone data or
// a maximum at the edge of the cut reports no peak. Needs >= 5 points.
PeakResult locate_peak(std::vector<PeakPoint> points);

inline constexpr const char* kRecordsFile = "records.csv";
inline constexpr const char* kSummaryFile = "summary.json";
inline constexpr const char* kMetaFile = "scan_meta.json";
inline constexpr const char* kTimingsFile = "timings.csv";
inline constexpr const char* kRecordsHeader =
    "model,L,p,beta,sample_index,sample_seed,energy_mean,energy_stderr,"
    "specific_heat,wilson_table";
inline constexpr const char* kWorkersEnvVar = "GAUGEMC_WORKERS";

std::string wilson_table_name(double p, double beta);  // per-point ensemble
std::string wilson_table_name(double p, double beta, int sample_index);

}  // namespace gaugemc
