#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "gaugemc/lattice.hpp"
#include "gaugemc/packed_bits.hpp"

namespace gaugemc {

// gauge: +-1 variables on links, quenched signs on plaquettes (3D or 2D).
// ising: +-1 variables on sites, quenched signs on bonds (= links).
enum class Model { gauge, ising };

const char* model_name(Model model);
Model model_from_name(const std::string& name);

int n_couplings(const Lattice& lat, Model model);
int n_variables(const Lattice& lat, Model model);

// One quenched realization of the coupling signs at wrong-sign
// concentration p. Immutable after creation; regenerating with the same
// (lattice, p, sample_seed) reproduces identical signs bit for bit.
struct Disorder {
  Model model = Model::gauge;
  int dim = 3;
  int size = 2;
  double p = 0.0;
  std::uint64_t sample_seed = 0;
  PackedBits signs;  // bit=1 <=> coupling sign -1

  int n() const { return signs.size(); }
  int sign(int i) const { return signs.get(i) ? -1 : +1; }
  int n_minus() const { return signs.count(); }
  int sum_signs() const { return n() - 2 * n_minus(); }
};

Disorder sample_disorder(const Lattice& lat, Model model, double p,
                         std::uint64_t sample_seed);

// beta = (1/2) ln((1-p)/p); defined for 0 < p < 1/2, where disorder and
// thermal fluctuations balance. Equivalently exp(-2 beta) = p/(1-p).
double nishimori_beta(double p);

// Exact log-probability of a realization: K * sum(signs) - n * ln(2 cosh K),
// where exp(2K) = (1-p)/p ties K to the concentration.
double disorder_log_weight(const Disorder& dis, double coupling);

void write_disorder(std::ostream& out, const Disorder& dis);
Disorder read_disorder(std::istream& in);
void save_disorder(const std::string& path, const Disorder& dis);
Disorder load_disorder(const std::string& path);

}  // namespace gaugemc
