#include "gaugemc/disorder.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "gaugemc/rng.hpp"

namespace gaugemc {

const char* model_name(Model model) {
  return model == Model::gauge ? "gauge3d" : "ising2d";
}

Model model_from_name(const std::string& name) {
  if (name == "gauge3d" || name == "gauge") return Model::gauge;
  if (name == "ising2d" || name == "ising") return Model::ising;
  throw std::invalid_argument("unknown model '" + name + "'");
}

int n_couplings(const Lattice& lat, Model model) {
  return model == Model::gauge ? lat.n_plaquettes() : lat.n_links();
}

int n_variables(const Lattice& lat, Model model) {
  return model == Model::gauge ? lat.n_links() : lat.n_sites();
}

Disorder sample_disorder(const Lattice& lat, Model model, double p,
                         std::uint64_t sample_seed) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("concentration p must be in [0, 1]");
  Disorder dis;
  dis.model = model;
  dis.dim = lat.dim();
  dis.size = lat.size();
  dis.p = p;
  dis.sample_seed = sample_seed;
  int n = n_couplings(lat, model);
  dis.signs.resize(n);
  Rng rng(sample_seed);
  for (int i = 0; i < n; ++i)
    if (rng.uniform() < p) dis.signs.set(i, 1);
  return dis;
}

double nishimori_beta(double p) {
  if (!(p > 0.0 && p < 0.5))
    throw std::invalid_argument("nishimori_beta requires 0 < p < 1/2");
  return 0.5 * std::log((1.0 - p) / p);
}

double disorder_log_weight(const Disorder& dis, double coupling) {
  if (!std::isfinite(coupling))
    throw std::invalid_argument("coupling must be finite");
  double n = static_cast<double>(dis.n());
  return coupling * dis.sum_signs() -
         n * std::log(2.0 * std::cosh(coupling));
}

namespace {

constexpr char kMagic[4] = {'G', 'M', 'C', 'D'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("truncated disorder stream");
  return v;
}

void write_bits(std::ostream& out, const PackedBits& bits) {
  int n_bytes = (bits.size() + 7) / 8;
  for (int b = 0; b < n_bytes; ++b) {
    const std::uint64_t word = bits.words()[b / 8];
    put<std::uint8_t>(out, static_cast<std::uint8_t>(word >> (8 * (b % 8))));
  }
}

PackedBits read_bits(std::istream& in, int n) {
  PackedBits bits(n);
  int n_bytes = (n + 7) / 8;
  for (int b = 0; b < n_bytes; ++b) {
    auto byte = take<std::uint8_t>(in);
    for (int k = 0; k < 8; ++k) {
      int i = 8 * b + k;
      if (i < n && ((byte >> k) & 1)) bits.set(i, 1);
    }
  }
  return bits;
}

}  // namespace

void write_disorder(std::ostream& out, const Disorder& dis) {
  out.write(kMagic, 4);
  put(out, kVersion);
  put<std::uint8_t>(out, dis.model == Model::gauge ? 0 : 1);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(dis.dim));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(dis.size));
  put(out, dis.p);
  put(out, dis.sample_seed);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(dis.n()));
  write_bits(out, dis.signs);
}

Disorder read_disorder(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("not a disorder file");
  if (take<std::uint32_t>(in) != kVersion)
    throw std::runtime_error("unsupported disorder file version");
  Disorder dis;
  dis.model = take<std::uint8_t>(in) == 0 ? Model::gauge : Model::ising;
  dis.dim = take<std::uint8_t>(in);
  dis.size = static_cast<int>(take<std::uint32_t>(in));
  dis.p = take<double>(in);
  dis.sample_seed = take<std::uint64_t>(in);
  int n = static_cast<int>(take<std::uint32_t>(in));
  Lattice lat(dis.dim, dis.size);
  if (n != n_couplings(lat, dis.model))
    throw std::runtime_error("disorder file has inconsistent sign count");
  dis.signs = read_bits(in, n);
  return dis;
}

void save_disorder(const std::string& path, const Disorder& dis) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_disorder(out, dis);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

Disorder load_disorder(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_disorder(in);
}

}  // namespace gaugemc
