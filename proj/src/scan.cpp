#include "gaugemc/scan.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "gaugemc/rng.hpp"
#include "gaugemc/spins.hpp"
#include "gaugemc/text_format.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace gaugemc {

namespace {

const char* anneal_mode_name(AnnealMode mode) {
  switch (mode) {
    case AnnealMode::Always: return "always";
    case AnnealMode::Never: return "never";
    default: return "auto";
  }
}

AnnealMode anneal_mode_from_name(const std::string& name) {
  if (name == "always") return AnnealMode::Always;
  if (name == "never") return AnnealMode::Never;
  if (name == "auto") return AnnealMode::Auto;
  throw std::invalid_argument("unknown anneal mode '" + name + "'");
}

json config_json(const ScanConfig& cfg, bool with_output_dir) {
  json grid;
  grid["nishimori"] = cfg.nishimori;
  if (cfg.nishimori) {
    grid["p_values"] = cfg.p_values;
  } else {
    json pts = json::array();
    for (const auto& pt : cfg.points) pts.push_back({pt.p, pt.beta});
    grid["points"] = pts;
  }
  json j;
  j["model"] = model_name(cfg.model);
  j["L"] = cfg.L;
  j["grid"] = grid;
  j["n_samples"] = cfg.n_samples;
  j["sweeps"] = {{"thermalization", cfg.sweeps.thermalization},
                 {"measurement", cfg.sweeps.measurement},
                 {"interval", cfg.sweeps.interval}};
  j["anneal"] = {{"t_start", cfg.anneal.t_start},
                 {"cooling_factor", cfg.anneal.cooling_factor},
                 {"sweeps_per_step", cfg.anneal.sweeps_per_step},
                 {"mode", anneal_mode_name(cfg.anneal_mode)}};
  j["loop_r_max"] = cfg.loop_r_max;
  j["master_seed"] = cfg.master_seed;
  if (with_output_dir) j["output_dir"] = cfg.output_dir;
  return j;
}

}  // namespace

std::vector<GridPoint> resolve_grid(const ScanConfig& cfg) {
  if (!cfg.nishimori) return cfg.points;
  std::vector<GridPoint> grid;
  grid.reserve(cfg.p_values.size());
  for (double p : cfg.p_values) grid.push_back({p, nishimori_beta(p)});
  return grid;
}

void validate_config(const ScanConfig& cfg) {
  if (cfg.L < 2) throw std::invalid_argument("L must be >= 2");
  if (cfg.n_samples < 1) throw std::invalid_argument("n_samples must be positive");
  if (cfg.sweeps.thermalization < 0 || cfg.sweeps.measurement < 1 ||
      cfg.sweeps.interval < 1)
    throw std::invalid_argument("sweep budget fields must be positive");
  if (cfg.sweeps.interval > cfg.sweeps.measurement)
    throw std::invalid_argument("measurement interval exceeds the measurement budget");
  if (cfg.nishimori) {
    if (cfg.p_values.empty())
      throw std::invalid_argument("nishimori grid needs at least one p value");
    for (double p : cfg.p_values)
      if (!(p > 0.0 && p < 0.5))
        throw std::invalid_argument("nishimori grid requires 0 < p < 1/2");
  } else {
    if (cfg.points.empty()) throw std::invalid_argument("grid must be non-empty");
    for (const auto& pt : cfg.points) {
      if (!(pt.p >= 0.0 && pt.p <= 1.0))
        throw std::invalid_argument("grid p must be in [0, 1]");
      if (!(pt.beta >= 0.0)) throw std::invalid_argument("grid beta must be >= 0");
    }
  }
  if (cfg.loop_r_max < 0) throw std::invalid_argument("loop_r_max must be >= 0");
  if (cfg.loop_r_max > 0) {
    if (cfg.model != Model::gauge)
      throw std::invalid_argument("loop measurements are gauge-model only");
    if (cfg.loop_r_max > cfg.L - 1)
      throw std::invalid_argument("loop_r_max must be <= L-1");
  }
  if (!(cfg.anneal.t_start > 0.0))
    throw std::invalid_argument("anneal t_start must be positive");
  if (!(cfg.anneal.cooling_factor > 0.0 && cfg.anneal.cooling_factor < 1.0))
    throw std::invalid_argument("anneal cooling factor must be in (0, 1)");
  if (cfg.anneal.sweeps_per_step < 1)
    throw std::invalid_argument("anneal sweeps per step must be positive");
  if (cfg.output_dir.empty())
    throw std::invalid_argument("output directory must be set");
}

std::string config_to_json(const ScanConfig& cfg) {
  return config_json(cfg, true).dump(2);
}

ScanConfig config_from_json(const std::string& text) {
  json j = json::parse(text);
  ScanConfig cfg;
  cfg.model = model_from_name(j.at("model").get<std::string>());
  cfg.L = j.at("L").get<int>();
  const json& grid = j.at("grid");
  cfg.nishimori = grid.at("nishimori").get<bool>();
  if (cfg.nishimori) {
    cfg.p_values = grid.at("p_values").get<std::vector<double>>();
  } else {
    for (const auto& pt : grid.at("points"))
      cfg.points.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
  }
  cfg.n_samples = j.at("n_samples").get<int>();
  if (j.contains("sweeps")) {
    cfg.sweeps.thermalization = j["sweeps"].value("thermalization", 1000);
    cfg.sweeps.measurement = j["sweeps"].value("measurement", 10000);
    cfg.sweeps.interval = j["sweeps"].value("interval", 10);
  }
  if (j.contains("anneal")) {
    cfg.anneal.t_start = j["anneal"].value("t_start", 2.6);
    cfg.anneal.cooling_factor = j["anneal"].value("cooling_factor", 0.95);
    cfg.anneal.sweeps_per_step = j["anneal"].value("sweeps_per_step", 50);
    cfg.anneal_mode =
        anneal_mode_from_name(j["anneal"].value("mode", std::string("auto")));
  }
  cfg.loop_r_max = j.value("loop_r_max", 0);
  cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  cfg.output_dir = j.value("output_dir", std::string());
  return cfg;
}

ScanConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::uint64_t config_hash(const ScanConfig& cfg) {
  std::string canon = config_json(cfg, false).dump();
  std::uint64_t h = 0xCBF29CE484222325ull;  // FNV-1a 64
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::string wilson_table_name(double p, double beta) {
  return "wilson_p" + fmt_double(p) + "_b" + fmt_double(beta) + ".csv";
}

std::string wilson_table_name(double p, double beta, int sample_index) {
  return "wilson_p" + fmt_double(p) + "_b" + fmt_double(beta) + "_s" +
         std::to_string(sample_index) + ".csv";
}

namespace {

int default_workers() {
  if (const char* env = std::getenv(kWorkersEnvVar)) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

std::string record_row(const ScanRecord& rec) {
  std::string row = model_name(rec.model);
  row += ',';
  row += std::to_string(rec.L);
  row += ',';
  row += fmt_double(rec.p);
  row += ',';
  row += fmt_double(rec.beta);
  row += ',';
  row += std::to_string(rec.sample_index);
  row += ',';
  row += fmt_u64(rec.sample_seed);
  row += ',';
  row += fmt_double(rec.energy_mean);
  row += ',';
  row += fmt_double(rec.energy_stderr);
  row += ',';
  row += fmt_double(rec.specific_heat);
  row += ',';
  row += rec.wilson_table;
  return row;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

ScanRecord parse_record_row(const std::string& line) {
  auto fields = split_csv(line);
  if (fields.size() != 10) throw std::runtime_error("malformed record row");
  ScanRecord rec;
  rec.model = model_from_name(fields[0]);
  rec.L = static_cast<int>(parse_u64(fields[1]));
  rec.p = parse_double(fields[2]);
  rec.beta = parse_double(fields[3]);
  rec.sample_index = static_cast<int>(parse_u64(fields[4]));
  rec.sample_seed = parse_u64(fields[5]);
  rec.energy_mean = parse_double(fields[6]);
  rec.energy_stderr = parse_double(fields[7]);
  rec.specific_heat = parse_double(fields[8]);
  rec.wilson_table = fields[9];
  return rec;
}

ScanRecord compute_sample(const ScanConfig& cfg, const Lattice& lat,
                          const CouplingGraph& graph, int point_index,
                          const GridPoint& pt, int sample_index) {
  auto t0 = std::chrono::steady_clock::now();
  ScanRecord rec;
  rec.model = cfg.model;
  rec.L = cfg.L;
  rec.p = pt.p;
  rec.beta = pt.beta;
  rec.point_index = point_index;
  rec.sample_index = sample_index;
  rec.sample_seed = derive_seed(cfg.master_seed,
                                static_cast<std::uint64_t>(point_index),
                                static_cast<std::uint64_t>(sample_index));

  Disorder dis = sample_disorder(lat, cfg.model, pt.p, rec.sample_seed);
  Rng rng(derive_seed(rec.sample_seed, 1, 0));  // chain substream
  MetropolisSampler sampler(graph, dis, make_random_config(lat, cfg.model, rng));

  bool do_anneal = cfg.anneal_mode == AnnealMode::Always ||
                   (cfg.anneal_mode == AnnealMode::Auto && pt.beta > 1.0);
  if (do_anneal && pt.beta > 0.0) {
    AnnealSchedule sched;
    sched.t_target = 1.0 / pt.beta;
    sched.t_start = std::max(cfg.anneal.t_start, sched.t_target);
    sched.cooling_factor = cfg.anneal.cooling_factor;
    sched.sweeps_per_step = cfg.anneal.sweeps_per_step;
    sampler.anneal(sched, rng);
  }
  sampler.run(cfg.sweeps.thermalization, pt.beta, rng);

  EnergySeries series;
  series.beta = pt.beta;
  series.n_sites = lat.n_sites();
  std::optional<WilsonAccumulator> wilson;
  if (cfg.loop_r_max > 0)
    wilson.emplace(lat, rectangle_shapes(cfg.loop_r_max));
  const int n_meas = cfg.sweeps.measurement / cfg.sweeps.interval;
  series.samples.reserve(n_meas);
  for (int m = 0; m < n_meas; ++m) {
    sampler.run(cfg.sweeps.interval, pt.beta, rng);
    series.samples.push_back(sampler.current_energy());
    if (wilson) wilson->measure(sampler.config());
  }

  auto es = energy_stats(series);
  rec.energy_mean = es.mean;
  rec.energy_stderr = es.std_error;
  rec.specific_heat = specific_heat(series);
  rec.specific_heat_err = specific_heat_std_error(series);
  if (wilson) {
    rec.wilson = wilson->estimates();
    rec.wilson_table = wilson_table_name(pt.p, pt.beta, sample_index);
  }
  rec.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::vector<PointSummary> build_summaries(const ScanConfig& cfg,
                                          const std::vector<GridPoint>& grid,
                                          const std::vector<ScanRecord>& records) {
  std::vector<PointSummary> summaries;
  summaries.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    PointSummary ps;
    ps.p = grid[i].p;
    ps.beta = grid[i].beta;
    ps.n_samples = cfg.n_samples;
    const ScanRecord* first = &records[i * cfg.n_samples];
    std::vector<double> cs, es;
    for (int k = 0; k < cfg.n_samples; ++k) {
      cs.push_back(first[k].specific_heat);
      es.push_back(first[k].energy_mean);
    }
    auto ens_c = ensemble_average(cs);
    ps.c_mean = ens_c.mean;
    ps.c_fluctuation = ens_c.fluctuation;
    ps.energy_mean = ensemble_average(es).mean;
    ps.has_wilson = cfg.loop_r_max > 0;
    if (ps.has_wilson) {
      auto shapes = rectangle_shapes(cfg.loop_r_max);
      for (std::size_t si = 0; si < shapes.size(); ++si) {
        std::vector<double> vals;
        for (int k = 0; k < cfg.n_samples; ++k)
          vals.push_back(first[k].wilson.at(si).mean);
        auto ens = ensemble_average(vals);
        WilsonEstimate est;
        est.shape = shapes[si];
        est.mean = ens.mean;
        est.std_error = ens.fluctuation / std::sqrt(static_cast<double>(cfg.n_samples));
        est.n_measurements = cfg.n_samples;
        ps.ensemble_wilson.push_back(est);
      }
      ps.ensemble = classify_decay(ps.ensemble_wilson);
      for (int k = 0; k < cfg.n_samples; ++k)
        ps.sample_verdicts.push_back(classify_decay(first[k].wilson).verdict);
    }
    summaries.push_back(std::move(ps));
  }
  return summaries;
}

void write_summary_file(const ScanConfig& cfg, const std::vector<PointSummary>& summaries) {
  json points = json::array();
  for (const auto& ps : summaries) {
    json jp;
    jp["p"] = ps.p;
    jp["beta"] = ps.beta;
    jp["n_samples"] = ps.n_samples;
    jp["c_mean"] = ps.c_mean;
    jp["c_fluctuation"] = ps.c_fluctuation;
    jp["energy_mean"] = ps.energy_mean;
    if (ps.has_wilson) {
      json jw;
      jw["verdict"] = verdict_name(ps.ensemble.verdict);
      jw["alpha"] = ps.ensemble.alpha;
      jw["alpha_err"] = ps.ensemble.alpha_err;
      jw["gamma"] = ps.ensemble.gamma;
      jw["gamma_err"] = ps.ensemble.gamma_err;
      jw["offset"] = ps.ensemble.offset;
      jw["n_used"] = ps.ensemble.n_used;
      jw["insufficient"] = ps.ensemble.insufficient;
      json verdicts = json::array();
      for (auto v : ps.sample_verdicts) verdicts.push_back(verdict_name(v));
      jw["sample_verdicts"] = verdicts;
      jw["table"] = wilson_table_name(ps.p, ps.beta);
      jp["wilson"] = jw;
    }
    points.push_back(jp);
  }
  json j;
  j["config_hash"] = fmt_u64(config_hash(cfg));
  j["rng"] = kRngName;
  j["seed_mixer"] = kSeedMixerName;
  j["points"] = points;
  std::ofstream out(fs::path(cfg.output_dir) / kSummaryFile);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing summary.json");
}

ScanResult run_internal(const ScanConfig& cfg, const ScanOptions& opts, bool resume) {
  validate_config(cfg);
  const auto grid = resolve_grid(cfg);
  const Lattice lat(cfg.dim(), cfg.L);
  const CouplingGraph graph = build_coupling_graph(lat, cfg.model);
  const int n_tasks = static_cast<int>(grid.size()) * cfg.n_samples;
  const int n_meas = cfg.sweeps.measurement / cfg.sweeps.interval;
  const fs::path dir(cfg.output_dir);

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec && !fs::is_directory(dir))
    throw std::runtime_error("cannot create output directory '" + cfg.output_dir + "'");

  // Preload completed tasks when resuming; reject foreign output.
  std::vector<std::optional<ScanRecord>> preloaded(n_tasks);
  if (resume) {
    std::ifstream meta_in(dir / kMetaFile);
    if (!meta_in)
      throw std::runtime_error("no scan metadata in '" + cfg.output_dir + "'");
    std::stringstream ss;
    ss << meta_in.rdbuf();
    json meta = json::parse(ss.str());
    if (meta.value("config_hash", std::string()) != fmt_u64(config_hash(cfg)))
      throw std::runtime_error("config hash mismatch; refusing to resume");
    std::ifstream rec_in(dir / kRecordsFile);
    if (rec_in) {
      std::string line;
      std::getline(rec_in, line);  // header
      int task = 0;
      bool stop = false;
      while (!stop && task < n_tasks && std::getline(rec_in, line)) {
        if (line.empty()) continue;
        ScanRecord rec;
        try {
          rec = parse_record_row(line);
        } catch (const std::exception&) {
          break;  // torn tail from an interrupted write; recompute from here
        }
        int pi = task / cfg.n_samples;
        rec.point_index = pi;
        if (fmt_double(rec.p) != fmt_double(grid[pi].p) ||
            fmt_double(rec.beta) != fmt_double(grid[pi].beta) ||
            rec.sample_index != task % cfg.n_samples)
          throw std::runtime_error("records.csv does not match the config grid");
        if (!rec.wilson_table.empty()) {
          std::ifstream tab(dir / rec.wilson_table);
          if (!tab) {
            stop = true;  // row without its table; recompute from here
            break;
          }
          rec.wilson = read_wilson_table(tab, n_meas);
        }
        preloaded[task++] = std::move(rec);
      }
    }
  }

  // Metadata first: catches an unwritable destination before any work.
  {
    json meta;
    meta["config"] = config_json(cfg, true);
    meta["config_hash"] = fmt_u64(config_hash(cfg));
    meta["rng"] = kRngName;
    meta["seed_mixer"] = kSeedMixerName;
    std::ofstream out(dir / kMetaFile);
    out << meta.dump(2) << '\n';
    if (!out)
      throw std::runtime_error("output directory '" + cfg.output_dir +
                               "' is not writable");
  }

  int n_workers = opts.n_workers > 0 ? opts.n_workers : default_workers();
  n_workers = std::min(n_workers, std::max(n_tasks, 1));

  std::vector<std::unique_ptr<ScanRecord>> done(n_tasks);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<int> next_task{0};
  std::exception_ptr first_error;
  bool failed = false;

  auto worker = [&]() {
    for (;;) {
      int t = next_task.fetch_add(1);
      if (t >= n_tasks) return;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (failed) return;
      }
      try {
        std::unique_ptr<ScanRecord> rec;
        if (preloaded[t]) {
          rec = std::make_unique<ScanRecord>(*preloaded[t]);
        } else {
          int pi = t / cfg.n_samples;
          rec = std::make_unique<ScanRecord>(
              compute_sample(cfg, lat, graph, pi, grid[pi], t % cfg.n_samples));
        }
        std::lock_guard<std::mutex> lock(mu);
        done[t] = std::move(rec);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failed) {
          failed = true;
          first_error = std::current_exception();
        }
      }
      cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);

  // The writer emits rows strictly in task order as the completed prefix
  // grows, flushing per record, so an interrupted records.csv is always a
  // valid prefix of the full file.
  std::ofstream records_out(dir / kRecordsFile, std::ios::trunc);
  records_out << kRecordsHeader << '\n';
  records_out.flush();
  std::vector<ScanRecord> records;
  records.reserve(n_tasks);
  try {
    std::unique_lock<std::mutex> lock(mu);
    int cursor = 0;
    while (cursor < n_tasks) {
      cv.wait(lock, [&] { return failed || done[cursor] != nullptr; });
      if (failed) break;
      while (cursor < n_tasks && done[cursor]) {
        ScanRecord rec = std::move(*done[cursor]);
        done[cursor] = nullptr;
        lock.unlock();
        if (!rec.wilson_table.empty()) {
          std::ofstream tab(dir / rec.wilson_table, std::ios::trunc);
          write_wilson_table(tab, rec.wilson);
          if (!tab) throw std::runtime_error("failed writing " + rec.wilson_table);
        }
        records_out << record_row(rec) << '\n';
        records_out.flush();
        records.push_back(std::move(rec));
        lock.lock();
        ++cursor;
      }
    }
  } catch (...) {
    {
      std::lock_guard<std::mutex> lock(mu);
      if (!failed) {
        failed = true;
        first_error = std::current_exception();
      }
    }
    next_task.store(n_tasks);
  }
  for (auto& th : pool) th.join();
  if (failed) std::rethrow_exception(first_error);
  if (!records_out) throw std::runtime_error("failed writing records.csv");
  records_out.close();

  ScanResult result;
  result.records = std::move(records);
  result.summaries = build_summaries(cfg, grid, result.records);

  // Ensemble loop tables per grid point.
  for (const auto& ps : result.summaries) {
    if (!ps.has_wilson) continue;
    std::ofstream tab(dir / wilson_table_name(ps.p, ps.beta), std::ios::trunc);
    write_wilson_table(tab, ps.ensemble_wilson);
    if (!tab) throw std::runtime_error("failed writing ensemble loop table");
  }
  write_summary_file(cfg, result.summaries);

  // Wall times are the one non-reproducible output; they live in their own
  // sidecar so everything else is byte-stable.
  {
    std::ofstream out(dir / kTimingsFile, std::ios::trunc);
    out << "p,beta,sample_index,wall_time_s\n";
    for (const auto& rec : result.records)
      out << fmt_double(rec.p) << ',' << fmt_double(rec.beta) << ','
          << rec.sample_index << ',' << fmt_double(rec.wall_time_s) << '\n';
  }
  return result;
}

}  // namespace

ScanResult run_scan(const ScanConfig& cfg, const ScanOptions& opts) {
  return run_internal(cfg, opts, false);
}

ScanResult resume_scan(const ScanConfig& cfg, const ScanOptions& opts) {
  return run_internal(cfg, opts, true);
}

PeakResult locate_peak(std::vector<PeakPoint> points) {
  if (points.size() < 5)
    throw std::invalid_argument("peak location needs at least 5 points");
  std::sort(points.begin(), points.end(),
            [](const PeakPoint& a, const PeakPoint& b) { return a.x < b.x; });
  const int n = static_cast<int>(points.size());

  bool increasing = true, decreasing = true;
  for (int i = 1; i < n; ++i) {
    if (!(points[i].c > points[i - 1].c)) increasing = false;
    if (!(points[i].c < points[i - 1].c)) decreasing = false;
  }
  PeakResult res;
  if (increasing || decreasing) return res;  // monotone: no peak

  int imax = 0;
  for (int i = 1; i < n; ++i)
    if (points[i].c > points[imax].c) imax = i;
  if (imax == 0 || imax == n - 1) return res;  // peak not bracketed

  auto vertex = [&](double c1, double c2, double c3) {
    double x1 = points[imax - 1].x, x2 = points[imax].x, x3 = points[imax + 1].x;
    double denom = (x1 - x2) * (x1 - x3) * (x2 - x3);
    double a = (x3 * (c2 - c1) + x2 * (c1 - c3) + x1 * (c3 - c2)) / denom;
    double b =
        (x3 * x3 * (c1 - c2) + x2 * x2 * (c3 - c1) + x1 * x1 * (c2 - c3)) / denom;
    if (!(a < 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return -b / (2.0 * a);
  };

  double c1 = points[imax - 1].c, c2 = points[imax].c, c3 = points[imax + 1].c;
  double loc = vertex(c1, c2, c3);
  if (!std::isfinite(loc)) return res;

  double var = 0.0;
  const std::array<double, 3> errs{points[imax - 1].c_err, points[imax].c_err,
                                   points[imax + 1].c_err};
  for (int k = 0; k < 3; ++k) {
    if (errs[k] <= 0.0) continue;
    std::array<double, 3> hi{c1, c2, c3}, lo{c1, c2, c3};
    hi[k] += errs[k];
    lo[k] -= errs[k];
    double vh = vertex(hi[0], hi[1], hi[2]);
    double vl = vertex(lo[0], lo[1], lo[2]);
    if (std::isfinite(vh) && std::isfinite(vl)) {
      double d = 0.5 * (vh - vl);
      var += d * d;
    }
  }
  res.found = true;
  res.location = loc;
  res.error = std::sqrt(var);
  return res;
}

}  // namespace gaugemc
