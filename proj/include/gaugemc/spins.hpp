#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gaugemc/disorder.hpp"
#include "gaugemc/lattice.hpp"
#include "gaugemc/packed_bits.hpp"
#include "gaugemc/rng.hpp"

namespace gaugemc {

// Interaction structure shared by both models: each term couples a fixed
// tuple of variables with one quenched sign. Gauge: variables are links,
// terms are plaquettes (4 variables each). Ising: variables are sites,
// terms are bonds (2 variables each). Built once per (lattice, model) and
// shared read-only across chains.
struct CouplingGraph {
  int n_vars = 0;
  int vars_per_term = 0;
  std::vector<std::int32_t> term_vars;         // n_terms * vars_per_term
  std::vector<std::int32_t> var_term_offsets;  // CSR over variables
  std::vector<std::int32_t> var_terms;
  int max_terms_per_var = 0;

  int n_terms() const {
    return vars_per_term ? static_cast<int>(term_vars.size()) / vars_per_term : 0;
  }
};

CouplingGraph build_coupling_graph(const Lattice& lat, Model model);

struct SpinConfig {
  Model model = Model::gauge;
  int dim = 3;
  int size = 2;
  PackedBits bits;  // bit=1 <=> sigma=-1

  int n() const { return bits.size(); }
  int value(int i) const { return bits.get(i) ? -1 : +1; }
};

SpinConfig make_uniform_config(const Lattice& lat, Model model);
SpinConfig make_random_config(const Lattice& lat, Model model, Rng& rng);

// Total energy -sum_t eta_t * prod(vars of t); always an exact integer.
std::int64_t energy(const SpinConfig& cfg, const Disorder& dis);

// energy(after flipping v) - energy(before); touches only incident terms.
int delta_energy(const SpinConfig& cfg, const Disorder& dis, int v);

struct AnnealSchedule {
  double t_start = 2.6;
  double t_target = 1.0;
  double cooling_factor = 0.95;
  int sweeps_per_step = 50;
};

// Single-flip Metropolis with a fixed sequential scan order. Keeps one
// satisfaction bit per term so a proposal costs a handful of bit reads;
// the tracked energy stays an exact integer. A sampler owns one chain and
// must not be shared across threads.
class MetropolisSampler {
 public:
  MetropolisSampler(const CouplingGraph& graph, const Disorder& dis,
                    SpinConfig initial);

  int sweep(double beta, Rng& rng);  // returns accepted flips
  void run(int n_sweeps, double beta, Rng& rng);
  void anneal(const AnnealSchedule& sched, Rng& rng);

  std::int64_t current_energy() const {
    return -static_cast<std::int64_t>(graph_->n_terms()) + 2 * n_unsat_;
  }
  const SpinConfig& config() const { return cfg_; }

 private:
  void set_beta(double beta);

  const CouplingGraph* graph_;
  PackedBits eta_;
  SpinConfig cfg_;
  PackedBits unsat_;  // per-term parity: 1 <=> term unsatisfied
  std::int64_t n_unsat_ = 0;
  double beta_ = -1.0;
  std::array<double, 16> accept_{};  // accept_[s] = exp(-2 beta s)
};

// Contract forms used by tests and small drivers; production code keeps a
// MetropolisSampler alive across sweeps instead.
int metropolis_sweep(SpinConfig& cfg, const Disorder& dis, double beta, Rng& rng);
SpinConfig anneal(SpinConfig cfg, const Disorder& dis, const AnnealSchedule& sched,
                  Rng& rng);

struct ExactResult {
  double log_z = 0.0;
  double mean_energy = 0.0;
  double energy_variance = 0.0;
  std::vector<double> wilson;  // one entry per requested loop
};

// Exact thermodynamics by full 2^n summation over spin states (Gray-code
// walk with integer energy updates). Capped at 26 variables; loop
// observables are gauge-model only.
ExactResult exact_enumerate(const Lattice& lat, const Disorder& dis, double beta,
                            const std::vector<WilsonLoopSpec>& loops = {});

void write_config(std::ostream& out, const SpinConfig& cfg);
SpinConfig read_config(std::istream& in);

}  // namespace gaugemc
