#include "gaugemc/spins.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace gaugemc {

namespace {

void check_pair(const SpinConfig& cfg, const Disorder& dis) {
  if (cfg.model != dis.model || cfg.dim != dis.dim || cfg.size != dis.size)
    throw std::invalid_argument("spin configuration and disorder disagree on model or lattice");
}

}  // namespace

CouplingGraph build_coupling_graph(const Lattice& lat, Model model) {
  CouplingGraph g;
  g.n_vars = n_variables(lat, model);
  int n_terms = n_couplings(lat, model);
  g.vars_per_term = model == Model::gauge ? 4 : 2;
  g.term_vars.reserve(static_cast<std::size_t>(n_terms) * g.vars_per_term);
  if (model == Model::gauge) {
    for (int p = 0; p < n_terms; ++p)
      for (int l : lat.links_of_plaquette(p)) g.term_vars.push_back(l);
  } else {
    for (int l = 0; l < n_terms; ++l) {
      int s = lat.link_site(l);
      g.term_vars.push_back(s);
      g.term_vars.push_back(lat.shift_site(s, lat.link_dir(l), 1));
    }
  }

  std::vector<int> degree(g.n_vars, 0);
  for (int v : g.term_vars) ++degree[v];
  g.var_term_offsets.assign(g.n_vars + 1, 0);
  for (int v = 0; v < g.n_vars; ++v)
    g.var_term_offsets[v + 1] = g.var_term_offsets[v] + degree[v];
  g.var_terms.resize(g.term_vars.size());
  std::vector<int> cursor(g.var_term_offsets.begin(), g.var_term_offsets.end() - 1);
  for (int t = 0; t < n_terms; ++t)
    for (int k = 0; k < g.vars_per_term; ++k) {
      int v = g.term_vars[static_cast<std::size_t>(t) * g.vars_per_term + k];
      g.var_terms[cursor[v]++] = t;
    }
  for (int v = 0; v < g.n_vars; ++v)
    g.max_terms_per_var = std::max(g.max_terms_per_var, degree[v]);
  return g;
}

SpinConfig make_uniform_config(const Lattice& lat, Model model) {
  SpinConfig cfg;
  cfg.model = model;
  cfg.dim = lat.dim();
  cfg.size = lat.size();
  cfg.bits.resize(n_variables(lat, model));
  return cfg;
}

SpinConfig make_random_config(const Lattice& lat, Model model, Rng& rng) {
  SpinConfig cfg = make_uniform_config(lat, model);
  for (int i = 0; i < cfg.n(); ++i) cfg.bits.set(i, rng.bit());
  return cfg;
}

std::int64_t energy(const SpinConfig& cfg, const Disorder& dis) {
  check_pair(cfg, dis);
  Lattice lat(cfg.dim, cfg.size);
  std::int64_t e = 0;
  if (cfg.model == Model::gauge) {
    for (int p = 0; p < lat.n_plaquettes(); ++p) {
      int parity = dis.signs.get(p);
      for (int l : lat.links_of_plaquette(p)) parity ^= cfg.bits.get(l);
      e += parity ? 1 : -1;
    }
  } else {
    for (int l = 0; l < lat.n_links(); ++l) {
      int s = lat.link_site(l);
      int parity = dis.signs.get(l) ^ cfg.bits.get(s) ^
                   cfg.bits.get(lat.shift_site(s, lat.link_dir(l), 1));
      e += parity ? 1 : -1;
    }
  }
  return e;
}

int delta_energy(const SpinConfig& cfg, const Disorder& dis, int v) {
  check_pair(cfg, dis);
  Lattice lat(cfg.dim, cfg.size);
  if (v < 0 || v >= cfg.n()) throw std::out_of_range("variable index out of range");
  int sum = 0;
  if (cfg.model == Model::gauge) {
    for (int p : lat.plaquettes_of_link(v)) {
      int parity = dis.signs.get(p);
      for (int l : lat.links_of_plaquette(p)) parity ^= cfg.bits.get(l);
      sum += parity ? -1 : 1;
    }
  } else {
    for (int dir = 0; dir < lat.dim(); ++dir)
      for (int step : {0, -1}) {
        int l = lat.link_id(step ? lat.shift_site(v, dir, -1) : v, dir);
        int s = lat.link_site(l);
        int parity = dis.signs.get(l) ^ cfg.bits.get(s) ^
                     cfg.bits.get(lat.shift_site(s, dir, 1));
        sum += parity ? -1 : 1;
      }
  }
  return 2 * sum;
}

MetropolisSampler::MetropolisSampler(const CouplingGraph& graph,
                                     const Disorder& dis, SpinConfig initial)
    : graph_(&graph), eta_(dis.signs), cfg_(std::move(initial)) {
  check_pair(cfg_, dis);
  if (cfg_.n() != graph.n_vars || dis.n() != graph.n_terms())
    throw std::invalid_argument("coupling graph does not match configuration/disorder");
  int n_terms = graph.n_terms();
  unsat_.resize(n_terms);
  for (int t = 0; t < n_terms; ++t) {
    int parity = eta_.get(t);
    for (int k = 0; k < graph.vars_per_term; ++k)
      parity ^= cfg_.bits.get(
          graph.term_vars[static_cast<std::size_t>(t) * graph.vars_per_term + k]);
    if (parity) {
      unsat_.set(t, 1);
      ++n_unsat_;
    }
  }
}

void MetropolisSampler::set_beta(double beta) {
  if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
  beta_ = beta;
  for (int s = 0; s < static_cast<int>(accept_.size()); ++s)
    accept_[s] = std::exp(-2.0 * beta * s);
}

int MetropolisSampler::sweep(double beta, Rng& rng) {
  if (beta != beta_) set_beta(beta);
  const std::int32_t* offsets = graph_->var_term_offsets.data();
  const std::int32_t* terms = graph_->var_terms.data();
  int accepted = 0;
  for (int v = 0; v < graph_->n_vars; ++v) {
    int sum = 0;
    int end = offsets[v + 1];
    for (int k = offsets[v]; k < end; ++k) sum += 1 - 2 * unsat_.get(terms[k]);
    // delta E = 2 * sum
    if (sum <= 0 || rng.uniform() < accept_[sum]) {
      cfg_.bits.flip(v);
      for (int k = offsets[v]; k < end; ++k) unsat_.flip(terms[k]);
      n_unsat_ += sum;
      ++accepted;
    }
  }
  return accepted;
}

void MetropolisSampler::run(int n_sweeps, double beta, Rng& rng) {
  for (int i = 0; i < n_sweeps; ++i) sweep(beta, rng);
}

void MetropolisSampler::anneal(const AnnealSchedule& sched, Rng& rng) {
  if (!(sched.t_target > 0.0) || sched.t_start < sched.t_target)
    throw std::invalid_argument("anneal schedule requires t_start >= t_target > 0");
  if (!(sched.cooling_factor > 0.0 && sched.cooling_factor < 1.0))
    throw std::invalid_argument("cooling factor must be in (0, 1)");
  if (sched.sweeps_per_step < 1)
    throw std::invalid_argument("sweeps per step must be positive");
  double t = sched.t_start;
  while (t > sched.t_target) {
    run(sched.sweeps_per_step, 1.0 / t, rng);
    t *= sched.cooling_factor;
  }
  run(sched.sweeps_per_step, 1.0 / sched.t_target, rng);
}

int metropolis_sweep(SpinConfig& cfg, const Disorder& dis, double beta, Rng& rng) {
  Lattice lat(cfg.dim, cfg.size);
  CouplingGraph graph = build_coupling_graph(lat, cfg.model);
  MetropolisSampler sampler(graph, dis, std::move(cfg));
  int accepted = sampler.sweep(beta, rng);
  cfg = sampler.config();
  return accepted;
}

SpinConfig anneal(SpinConfig cfg, const Disorder& dis, const AnnealSchedule& sched,
                  Rng& rng) {
  Lattice lat(cfg.dim, cfg.size);
  CouplingGraph graph = build_coupling_graph(lat, cfg.model);
  MetropolisSampler sampler(graph, dis, std::move(cfg));
  sampler.anneal(sched, rng);
  return sampler.config();
}

ExactResult exact_enumerate(const Lattice& lat, const Disorder& dis, double beta,
                            const std::vector<WilsonLoopSpec>& loops) {
  if (dis.dim != lat.dim() || dis.size != lat.size())
    throw std::invalid_argument("disorder does not match lattice");
  CouplingGraph graph = build_coupling_graph(lat, dis.model);
  if (graph.n_vars > 26)
    throw std::invalid_argument("exact enumeration capped at 26 variables");
  if (!loops.empty() && dis.model != Model::gauge)
    throw std::invalid_argument("loop observables are gauge-model only");
  if (loops.size() > 64) throw std::invalid_argument("at most 64 loops per enumeration");

  const int n_vars = graph.n_vars;
  const int n_terms = graph.n_terms();
  const int n_loops = static_cast<int>(loops.size());

  // Per-variable toggle masks for the tracked loop parities.
  std::vector<std::uint64_t> loop_mask(n_vars, 0);
  for (int j = 0; j < n_loops; ++j)
    for (int l : lat.loop_links(loops[j])) loop_mask[l] ^= std::uint64_t{1} << j;

  // State 0 is all sigma=+1: term parity equals the coupling sign bit.
  std::vector<std::uint8_t> parity(n_terms);
  int n_unsat = 0;
  for (int t = 0; t < n_terms; ++t) {
    parity[t] = static_cast<std::uint8_t>(dis.signs.get(t));
    n_unsat += parity[t];
  }

  std::vector<std::uint64_t> count(n_terms + 1, 0);
  std::vector<std::int64_t> loop_sum(static_cast<std::size_t>(n_terms + 1) *
                                         std::max(n_loops, 1),
                                     0);
  std::uint64_t lp = 0;  // packed loop parities

  auto record = [&](int k) {
    ++count[k];
    for (int j = 0; j < n_loops; ++j)
      loop_sum[static_cast<std::size_t>(k) * n_loops + j] +=
          1 - 2 * static_cast<int>((lp >> j) & 1);
  };

  const std::int32_t* offsets = graph.var_term_offsets.data();
  const std::int32_t* terms = graph.var_terms.data();
  record(n_unsat);
  const std::uint64_t total = std::uint64_t{1} << n_vars;
  for (std::uint64_t i = 1; i < total; ++i) {
    int v = std::countr_zero(i);  // Gray-code walk: state i^ (i>>1)
    for (int k = offsets[v]; k < offsets[v + 1]; ++k) {
      int t = terms[k];
      n_unsat += parity[t] ? -1 : 1;
      parity[t] ^= 1;
    }
    lp ^= loop_mask[v];
    record(n_unsat);
  }

  // Energies are E_k = -n_terms + 2k; combine bins with a log-sum-exp shift.
  long double best = -std::numeric_limits<long double>::infinity();
  std::vector<long double> log_weight(n_terms + 1, 0.0L);
  for (int k = 0; k <= n_terms; ++k) {
    if (!count[k]) continue;
    double e = -n_terms + 2.0 * k;
    log_weight[k] = std::log(static_cast<long double>(count[k])) -
                    static_cast<long double>(beta) * e;
    if (log_weight[k] > best) best = log_weight[k];
  }
  long double z = 0.0L, se = 0.0L, se2 = 0.0L;
  std::vector<long double> sw(std::max(n_loops, 1), 0.0L);
  for (int k = 0; k <= n_terms; ++k) {
    if (!count[k]) continue;
    long double w = std::exp(log_weight[k] - best);
    long double e = -n_terms + 2.0L * k;
    z += w;
    se += w * e;
    se2 += w * e * e;
    long double per_state = w / static_cast<long double>(count[k]);
    for (int j = 0; j < n_loops; ++j)
      sw[j] += per_state * loop_sum[static_cast<std::size_t>(k) * n_loops + j];
  }

  ExactResult res;
  res.log_z = static_cast<double>(best + std::log(z));
  res.mean_energy = static_cast<double>(se / z);
  long double mean = se / z;
  res.energy_variance = static_cast<double>(se2 / z - mean * mean);
  if (res.energy_variance < 0.0) res.energy_variance = 0.0;
  res.wilson.resize(n_loops);
  for (int j = 0; j < n_loops; ++j) res.wilson[j] = static_cast<double>(sw[j] / z);
  return res;
}

namespace {

constexpr char kCfgMagic[4] = {'G', 'M', 'C', 'S'};

}  // namespace

void write_config(std::ostream& out, const SpinConfig& cfg) {
  out.write(kCfgMagic, 4);
  std::uint8_t model = cfg.model == Model::gauge ? 0 : 1;
  std::uint8_t dim = static_cast<std::uint8_t>(cfg.dim);
  std::uint32_t size = static_cast<std::uint32_t>(cfg.size);
  std::uint32_t n = static_cast<std::uint32_t>(cfg.n());
  out.write(reinterpret_cast<const char*>(&model), 1);
  out.write(reinterpret_cast<const char*>(&dim), 1);
  out.write(reinterpret_cast<const char*>(&size), 4);
  out.write(reinterpret_cast<const char*>(&n), 4);
  for (int b = 0; b < (cfg.n() + 7) / 8; ++b) {
    std::uint8_t byte =
        static_cast<std::uint8_t>(cfg.bits.words()[b / 8] >> (8 * (b % 8)));
    out.write(reinterpret_cast<const char*>(&byte), 1);
  }
}

SpinConfig read_config(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kCfgMagic, 4) != 0)
    throw std::runtime_error("not a spin configuration stream");
  std::uint8_t model = 0, dim = 0;
  std::uint32_t size = 0, n = 0;
  in.read(reinterpret_cast<char*>(&model), 1);
  in.read(reinterpret_cast<char*>(&dim), 1);
  in.read(reinterpret_cast<char*>(&size), 4);
  in.read(reinterpret_cast<char*>(&n), 4);
  if (!in) throw std::runtime_error("truncated spin configuration stream");
  SpinConfig cfg;
  cfg.model = model == 0 ? Model::gauge : Model::ising;
  cfg.dim = dim;
  cfg.size = static_cast<int>(size);
  Lattice lat(cfg.dim, cfg.size);
  if (static_cast<int>(n) != n_variables(lat, cfg.model))
    throw std::runtime_error("spin configuration has inconsistent variable count");
  cfg.bits.resize(static_cast<int>(n));
  for (int b = 0; b < (cfg.n() + 7) / 8; ++b) {
    std::uint8_t byte = 0;
    in.read(reinterpret_cast<char*>(&byte), 1);
    if (!in) throw std::runtime_error("truncated spin configuration stream");
    for (int k = 0; k < 8; ++k) {
      int i = 8 * b + k;
      if (i < cfg.n() && ((byte >> k) & 1)) cfg.bits.set(i, 1);
    }
  }
  return cfg;
}

}  // namespace gaugemc
