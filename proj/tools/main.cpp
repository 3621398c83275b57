#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gaugemc/observables.hpp"
#include "gaugemc/scan.hpp"
#include "gaugemc/spins.hpp"
#include "gaugemc/text_format.hpp"
#include "gaugemc/toric.hpp"

using nlohmann::json;

namespace {

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(gaugemc::parse_double(item));
  return out;
}

std::vector<gaugemc::GridPoint> parse_points(const std::string& text) {
  std::vector<gaugemc::GridPoint> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("grid point must be p:beta, got '" + item + "'");
    out.push_back({gaugemc::parse_double(item.substr(0, colon)),
                   gaugemc::parse_double(item.substr(colon + 1))});
  }
  return out;
}

struct ScanFlags {
  std::string config_path;
  std::string model;
  int L = 0;
  int samples = 0;
  int therm = -1, meas = -1, interval = -1;
  int rmax = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;
  std::string points;
  bool nishimori = false;
  std::string p_list;
  std::string anneal_mode;
  int workers = 0;
};

void add_scan_flags(CLI::App* cmd, ScanFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON scan configuration file");
  cmd->add_option("--model", flags.model, "gauge3d or ising2d");
  cmd->add_option("--L", flags.L, "linear lattice size");
  cmd->add_option("--samples", flags.samples, "disorder samples per grid point");
  cmd->add_option("--therm", flags.therm, "thermalization sweeps");
  cmd->add_option("--meas", flags.meas, "measurement sweeps");
  cmd->add_option("--interval", flags.interval, "sweeps between measurements");
  cmd->add_option("--rmax", flags.rmax, "largest loop extent (0 disables loops)");
  cmd->add_option("--seed", flags.seed, "master seed")->each([&](const std::string&) {
    flags.seed_set = true;
  });
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--points", flags.points, "grid as p:beta[,p:beta...]");
  cmd->add_flag("--nishimori", flags.nishimori, "derive beta from p on the Nishimori line");
  cmd->add_option("--p-list", flags.p_list, "comma-separated p values (with --nishimori)");
  cmd->add_option("--anneal-mode", flags.anneal_mode, "auto, always or never");
  cmd->add_option("--workers", flags.workers, "worker threads (default: GAUGEMC_WORKERS or hardware)");
}

gaugemc::ScanConfig config_from_flags(const ScanFlags& flags) {
  gaugemc::ScanConfig cfg;
  if (!flags.config_path.empty()) cfg = gaugemc::load_config(flags.config_path);
  if (!flags.model.empty()) cfg.model = gaugemc::model_from_name(flags.model);
  if (flags.L > 0) cfg.L = flags.L;
  if (flags.samples > 0) cfg.n_samples = flags.samples;
  if (flags.therm >= 0) cfg.sweeps.thermalization = flags.therm;
  if (flags.meas > 0) cfg.sweeps.measurement = flags.meas;
  if (flags.interval > 0) cfg.sweeps.interval = flags.interval;
  if (flags.rmax >= 0) cfg.loop_r_max = flags.rmax;
  if (flags.seed_set) cfg.master_seed = flags.seed;
  if (!flags.out_dir.empty()) cfg.output_dir = flags.out_dir;
  if (!flags.points.empty()) {
    cfg.points = parse_points(flags.points);
    cfg.nishimori = false;
  }
  if (flags.nishimori) cfg.nishimori = true;
  if (!flags.p_list.empty()) cfg.p_values = parse_double_list(flags.p_list);
  if (!flags.anneal_mode.empty()) {
    if (flags.anneal_mode == "auto")
      cfg.anneal_mode = gaugemc::AnnealMode::Auto;
    else if (flags.anneal_mode == "always")
      cfg.anneal_mode = gaugemc::AnnealMode::Always;
    else if (flags.anneal_mode == "never")
      cfg.anneal_mode = gaugemc::AnnealMode::Never;
    else
      throw std::invalid_argument("anneal mode must be auto, always or never");
  }
  return cfg;
}

void print_scan_result(const gaugemc::ScanConfig& cfg, const gaugemc::ScanResult& result) {
  json j;
  j["output_dir"] = cfg.output_dir;
  j["n_records"] = result.records.size();
  json points = json::array();
  for (const auto& ps : result.summaries) {
    json jp{{"p", ps.p}, {"beta", ps.beta}, {"c_mean", ps.c_mean},
            {"c_fluctuation", ps.c_fluctuation}};
    if (ps.has_wilson) jp["verdict"] = gaugemc::verdict_name(ps.ensemble.verdict);
    points.push_back(jp);
  }
  j["points"] = points;
  std::cout << j.dump(2) << std::endl;
}

int cmd_exact(const std::string& model_name, int L, double p, double beta,
              std::uint64_t seed, int rmax) {
  gaugemc::Model model = gaugemc::model_from_name(model_name);
  gaugemc::Lattice lat(model == gaugemc::Model::gauge ? 3 : 2, L);
  gaugemc::Disorder dis = gaugemc::sample_disorder(lat, model, p, seed);

  std::vector<gaugemc::WilsonLoopSpec> specs;
  std::vector<gaugemc::LoopShape> shapes;
  if (rmax > 0) {
    shapes = gaugemc::rectangle_shapes(rmax);
    for (const auto& shape : shapes)
      for (const auto& spec : gaugemc::all_loop_specs(lat, shape))
        specs.push_back(spec);
  }
  auto exact = gaugemc::exact_enumerate(lat, dis, beta, specs);

  json j;
  j["model"] = model_name;
  j["L"] = L;
  j["p"] = p;
  j["beta"] = beta;
  j["seed"] = seed;
  j["log_z"] = exact.log_z;
  j["mean_energy"] = exact.mean_energy;
  j["energy_variance"] = exact.energy_variance;
  j["specific_heat"] = beta * beta * exact.energy_variance / lat.n_sites();
  if (rmax > 0) {
    // Average each shape over its (plane, corner) placements, matching the
    // translation-averaged Monte Carlo estimator.
    json loops = json::array();
    std::size_t cursor = 0;
    std::size_t per_shape =
        static_cast<std::size_t>(lat.n_planes()) * lat.n_sites();
    for (const auto& shape : shapes) {
      double sum = 0.0;
      for (std::size_t k = 0; k < per_shape; ++k) sum += exact.wilson[cursor++];
      loops.push_back({{"R", shape.r}, {"S", shape.s},
                       {"W", sum / static_cast<double>(per_shape)}});
    }
    j["wilson"] = loops;
  }
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int cmd_peak(const std::string& summary_path, const std::string& axis) {
  std::ifstream in(summary_path);
  if (!in) throw std::runtime_error("cannot open '" + summary_path + "'");
  json j = json::parse(in);
  std::vector<gaugemc::PeakPoint> points;
  for (const auto& jp : j.at("points")) {
    gaugemc::PeakPoint pt;
    pt.x = axis == "p" ? jp.at("p").get<double>() : jp.at("beta").get<double>();
    pt.c = jp.at("c_mean").get<double>();
    int n = jp.value("n_samples", 1);
    pt.c_err = jp.at("c_fluctuation").get<double>() / std::sqrt(static_cast<double>(n));
    points.push_back(pt);
  }
  auto peak = gaugemc::locate_peak(points);
  json out;
  out["axis"] = axis;
  out["found"] = peak.found;
  if (peak.found) {
    out["location"] = peak.location;
    out["error"] = peak.error;
  } else {
    out["note"] = "no peak (monotone or unbracketed maximum)";
  }
  std::cout << out.dump(2) << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo lab for the 3D random-plaquette Z2 gauge model, "
               "the 2D random-bond Ising model and toric-code chain algebra"};
  app.require_subcommand(1);

  ScanFlags scan_flags;
  auto* scan_cmd = app.add_subcommand("scan", "run a (p, beta) grid scan");
  add_scan_flags(scan_cmd, scan_flags);

  ScanFlags resume_flags;
  auto* resume_cmd =
      app.add_subcommand("resume", "complete an interrupted scan output");
  add_scan_flags(resume_cmd, resume_flags);

  std::string exact_model = "gauge3d";
  int exact_L = 2, exact_rmax = 0;
  double exact_p = 0.0, exact_beta = 1.0;
  std::uint64_t exact_seed = 1;
  auto* exact_cmd = app.add_subcommand(
      "exact", "exact thermodynamics of a tiny system by full enumeration");
  exact_cmd->add_option("--model", exact_model, "gauge3d or ising2d");
  exact_cmd->add_option("--L", exact_L, "linear lattice size")->required();
  exact_cmd->add_option("--p", exact_p, "wrong-sign concentration")->required();
  exact_cmd->add_option("--beta", exact_beta, "inverse temperature")->required();
  exact_cmd->add_option("--seed", exact_seed, "disorder seed");
  exact_cmd->add_option("--rmax", exact_rmax, "largest loop extent (0: none)");

  int oracle_L = 3;
  double oracle_p = 0.0;
  auto* oracle_cmd = app.add_subcommand(
      "toric-oracle", "exact toric-code success probability (L <= 3)");
  oracle_cmd->add_option("--L", oracle_L, "torus size")->required();
  oracle_cmd->add_option("--p", oracle_p, "per-link error probability")->required();

  std::string peak_summary, peak_axis = "beta";
  auto* peak_cmd =
      app.add_subcommand("peak", "locate the specific-heat peak along a cut");
  peak_cmd->add_option("--summary", peak_summary, "summary.json from a scan")
      ->required();
  peak_cmd->add_option("--axis", peak_axis, "cut coordinate: beta or p");

  CLI11_PARSE(app, argc, argv);

  try {
    if (scan_cmd->parsed()) {
      auto cfg = config_from_flags(scan_flags);
      gaugemc::ScanOptions opts;
      opts.n_workers = scan_flags.workers;
      auto result = gaugemc::run_scan(cfg, opts);
      print_scan_result(cfg, result);
      return 0;
    }
    if (resume_cmd->parsed()) {
      auto cfg = config_from_flags(resume_flags);
      gaugemc::ScanOptions opts;
      opts.n_workers = resume_flags.workers;
      auto result = gaugemc::resume_scan(cfg, opts);
      print_scan_result(cfg, result);
      return 0;
    }
    if (exact_cmd->parsed())
      return cmd_exact(exact_model, exact_L, exact_p, exact_beta, exact_seed,
                       exact_rmax);
    if (oracle_cmd->parsed()) {
      double prob = gaugemc::toric::exact_success_probability(oracle_L, oracle_p);
      json j{{"L", oracle_L}, {"p", oracle_p}, {"success_probability", prob}};
      std::cout << j.dump(2) << std::endl;
      return 0;
    }
    if (peak_cmd->parsed()) return cmd_peak(peak_summary, peak_axis);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 1;
}
