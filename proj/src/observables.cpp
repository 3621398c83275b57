#include "gaugemc/observables.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gaugemc/text_format.hpp"

namespace gaugemc {

namespace {

// Exact integer moment sums; the variance then only involves two divisions,
// so the estimator is bitwise reproducible and exactly invariant under
// reversing or duplicating the series.
struct MomentSums {
  std::int64_t n = 0;
  std::int64_t sum = 0;
  __int128 sum2 = 0;

  void add(std::int64_t e) {
    ++n;
    sum += e;
    sum2 += static_cast<__int128>(e) * e;
  }
  long double mean() const { return static_cast<long double>(sum) / n; }
  long double population_variance() const {
    long double m = mean();
    return static_cast<long double>(sum2) / n - m * m;
  }
};

double specific_heat_from_sums(const MomentSums& s, double beta, int n_sites) {
  long double var = s.population_variance();
  if (var < 0.0L) var = 0.0L;
  return static_cast<double>(beta * beta * var / n_sites);
}

}  // namespace

double specific_heat(const EnergySeries& series) {
  if (series.samples.size() < 2)
    throw std::invalid_argument("specific heat needs at least 2 measurements");
  MomentSums sums;
  for (auto e : series.samples) sums.add(e);
  return specific_heat_from_sums(sums, series.beta, series.n_sites);
}

BinnedStats binned_stats(const std::vector<double>& series, int n_bins) {
  if (series.empty()) throw std::invalid_argument("empty series");
  const int n = static_cast<int>(series.size());
  long double total = 0.0L;
  for (double v : series) total += v;
  BinnedStats out;
  out.mean = static_cast<double>(total / n);
  if (n < 2) return out;

  int nb = std::min(n_bins, n);
  int bsize = n / nb;
  std::vector<long double> bin_mean(nb, 0.0L);
  for (int b = 0; b < nb; ++b) {
    long double s = 0.0L;
    for (int i = b * bsize; i < (b + 1) * bsize; ++i) s += series[i];
    bin_mean[b] = s / bsize;
  }
  long double mbar = 0.0L;
  for (auto m : bin_mean) mbar += m;
  mbar /= nb;
  long double s2 = 0.0L;
  for (auto m : bin_mean) s2 += (m - mbar) * (m - mbar);
  s2 /= (nb - 1);
  out.std_error = static_cast<double>(std::sqrt(s2 / nb));
  return out;
}

BinnedStats energy_stats(const EnergySeries& series, int n_bins) {
  std::vector<double> values(series.samples.begin(), series.samples.end());
  return binned_stats(values, n_bins);
}

double specific_heat_std_error(const EnergySeries& series, int n_bins) {
  const int n = static_cast<int>(series.samples.size());
  if (n < 4) return 0.0;
  int nb = std::min(n_bins, n);
  int bsize = n / nb;
  std::vector<MomentSums> bins(nb);
  MomentSums total;
  for (int b = 0; b < nb; ++b)
    for (int i = b * bsize; i < (b + 1) * bsize; ++i) {
      bins[b].add(series.samples[i]);
      total.add(series.samples[i]);
    }
  if (nb < 2) return 0.0;
  std::vector<double> jk(nb);
  for (int b = 0; b < nb; ++b) {
    MomentSums rest;
    rest.n = total.n - bins[b].n;
    rest.sum = total.sum - bins[b].sum;
    rest.sum2 = total.sum2 - bins[b].sum2;
    jk[b] = specific_heat_from_sums(rest, series.beta, series.n_sites);
  }
  long double m = 0.0L;
  for (double v : jk) m += v;
  m /= nb;
  long double s2 = 0.0L;
  for (double v : jk) s2 += (v - m) * (v - m);
  return static_cast<double>(std::sqrt(s2 * (nb - 1) / nb));
}

std::vector<LoopShape> rectangle_shapes(int r_max) {
  if (r_max < 1) throw std::invalid_argument("r_max must be >= 1");
  std::vector<LoopShape> shapes;
  for (int r = 1; r <= r_max; ++r)
    for (int s = r; s <= r_max; ++s) shapes.push_back({r, s});
  return shapes;
}

std::vector<WilsonLoopSpec> all_loop_specs(const Lattice& lat, LoopShape shape) {
  std::vector<WilsonLoopSpec> specs;
  specs.reserve(static_cast<std::size_t>(lat.n_planes()) * lat.n_sites());
  for (int plane = 0; plane < lat.n_planes(); ++plane)
    for (int corner = 0; corner < lat.n_sites(); ++corner)
      specs.push_back({plane, corner, shape.r, shape.s});
  return specs;
}

WilsonAccumulator::WilsonAccumulator(const Lattice& lat,
                                     std::vector<LoopShape> shapes)
    : dim_(lat.dim()),
      size_(lat.size()),
      n_sites_(lat.n_sites()),
      shapes_(std::move(shapes)) {
  max_extent_ = 1;
  for (const auto& sh : shapes_) {
    if (sh.r < 1 || sh.s < 1 || sh.r > size_ - 1 || sh.s > size_ - 1)
      throw std::invalid_argument("loop shape extents must be in 1..L-1");
    max_extent_ = std::max({max_extent_, sh.r, sh.s});
  }
  shift_.resize(static_cast<std::size_t>(dim_) * max_extent_);
  for (int axis = 0; axis < dim_; ++axis)
    for (int dist = 1; dist <= max_extent_; ++dist) {
      auto& tab = shift_[static_cast<std::size_t>(axis) * max_extent_ + dist - 1];
      tab.resize(n_sites_);
      if (dist == 1) {
        for (int x = 0; x < n_sites_; ++x)
          tab[x] = static_cast<std::int32_t>(lat.shift_site(x, axis, 1));
      } else {
        const auto& prev =
            shift_[static_cast<std::size_t>(axis) * max_extent_ + dist - 2];
        const auto& one = shift_[static_cast<std::size_t>(axis) * max_extent_];
        for (int x = 0; x < n_sites_; ++x) tab[x] = one[prev[x]];
      }
    }
  line_.assign(static_cast<std::size_t>(dim_) * max_extent_,
               std::vector<std::uint8_t>(n_sites_));
  series_.resize(shapes_.size());
}

void WilsonAccumulator::measure(const SpinConfig& cfg) {
  if (cfg.model != Model::gauge)
    throw std::invalid_argument("loop products are gauge-model only");
  if (cfg.dim != dim_ || cfg.size != size_)
    throw std::invalid_argument("configuration does not match accumulator lattice");

  // line_[axis][len-1][x] = parity of the product of `len` consecutive
  // links starting at x along `axis`.
  for (int axis = 0; axis < dim_; ++axis) {
    auto* base = &line_[static_cast<std::size_t>(axis) * max_extent_];
    for (int x = 0; x < n_sites_; ++x)
      base[0][x] = static_cast<std::uint8_t>(cfg.bits.get(axis * n_sites_ + x));
    for (int len = 2; len <= max_extent_; ++len) {
      const auto& shift_prev =
          shift_[static_cast<std::size_t>(axis) * max_extent_ + len - 2];
      const std::uint8_t* one = base[0].data();
      const std::uint8_t* prev = base[len - 2].data();
      std::uint8_t* cur = base[len - 1].data();
      for (int x = 0; x < n_sites_; ++x) cur[x] = prev[x] ^ one[shift_prev[x]];
    }
  }

  const int n_planes = dim_ * (dim_ - 1) / 2;
  static constexpr std::array<std::array<int, 2>, 3> kPlanes = {
      {{0, 1}, {0, 2}, {1, 2}}};
  for (std::size_t si = 0; si < shapes_.size(); ++si) {
    const auto [r, s] = shapes_[si];
    std::int64_t acc = 0;
    for (int plane = 0; plane < n_planes; ++plane) {
      const auto [a, b] = kPlanes[plane];
      const std::uint8_t* la =
          line_[static_cast<std::size_t>(a) * max_extent_ + r - 1].data();
      const std::uint8_t* lb =
          line_[static_cast<std::size_t>(b) * max_extent_ + s - 1].data();
      const std::int32_t* sha =
          shift_[static_cast<std::size_t>(a) * max_extent_ + r - 1].data();
      const std::int32_t* shb =
          shift_[static_cast<std::size_t>(b) * max_extent_ + s - 1].data();
      for (int x = 0; x < n_sites_; ++x)
        acc += 1 - 2 * (la[x] ^ lb[sha[x]] ^ la[shb[x]] ^ lb[x]);
    }
    series_[si].push_back(static_cast<double>(acc) /
                          (static_cast<double>(n_planes) * n_sites_));
  }
  ++n_measurements_;
}

std::vector<WilsonEstimate> WilsonAccumulator::estimates(int n_bins) const {
  std::vector<WilsonEstimate> out;
  out.reserve(shapes_.size());
  for (std::size_t si = 0; si < shapes_.size(); ++si) {
    WilsonEstimate est;
    est.shape = shapes_[si];
    est.n_measurements = n_measurements_;
    if (n_measurements_ > 0) {
      auto stats = binned_stats(series_[si], n_bins);
      est.mean = stats.mean;
      est.std_error = stats.std_error;
    }
    out.push_back(est);
  }
  return out;
}

EnsembleSummary ensemble_average(const std::vector<double>& per_sample) {
  if (per_sample.empty())
    throw std::invalid_argument("ensemble average needs at least one sample");
  EnsembleSummary out;
  out.per_sample = per_sample;
  long double m = 0.0L;
  for (double v : per_sample) m += v;
  m /= per_sample.size();
  long double s2 = 0.0L;
  for (double v : per_sample) s2 += (v - m) * (v - m);
  s2 /= per_sample.size();  // population convention
  out.mean = static_cast<double>(m);
  out.fluctuation = static_cast<double>(std::sqrt(s2));
  return out;
}

const char* verdict_name(DecayVerdict verdict) {
  switch (verdict) {
    case DecayVerdict::AreaLaw: return "AreaLaw";
    case DecayVerdict::PerimeterLaw: return "PerimeterLaw";
    default: return "Ambiguous";
  }
}

DecayVerdict verdict_from_name(const std::string& name) {
  if (name == "AreaLaw") return DecayVerdict::AreaLaw;
  if (name == "PerimeterLaw") return DecayVerdict::PerimeterLaw;
  if (name == "Ambiguous") return DecayVerdict::Ambiguous;
  throw std::invalid_argument("unknown verdict '" + name + "'");
}

namespace {

// Solves the 3x3 normal equations and inverts them for the covariance.
// Returns false when the system is singular.
bool solve3(std::array<std::array<double, 3>, 3> n, std::array<double, 3> rhs,
            std::array<double, 3>& beta, std::array<std::array<double, 3>, 3>& cov) {
  std::array<std::array<double, 6>, 3> aug{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) aug[i][j] = n[i][j];
    aug[i][3 + i] = 1.0;
  }
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 3; ++row)
      if (std::fabs(aug[row][col]) > std::fabs(aug[pivot][col])) pivot = row;
    if (std::fabs(aug[pivot][col]) < 1e-300) return false;
    std::swap(aug[col], aug[pivot]);
    double inv = 1.0 / aug[col][col];
    for (int j = 0; j < 6; ++j) aug[col][j] *= inv;
    for (int row = 0; row < 3; ++row) {
      if (row == col) continue;
      double f = aug[row][col];
      for (int j = 0; j < 6; ++j) aug[row][j] -= f * aug[col][j];
    }
  }
  std::array<std::array<double, 3>, 3> inv_n;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) inv_n[i][j] = aug[i][3 + j];
  for (int i = 0; i < 3; ++i) {
    beta[i] = 0.0;
    for (int j = 0; j < 3; ++j) beta[i] += inv_n[i][j] * rhs[j];
  }
  cov = inv_n;
  return true;
}

}  // namespace

DecayClassification classify_decay(const std::vector<WilsonEstimate>& estimates) {
  DecayClassification out;
  struct Row {
    double a, p, y, w;
  };
  std::vector<Row> rows;
  for (const auto& est : estimates) {
    if (!(est.mean > 0.0) || !(est.mean - 2.0 * est.std_error > 0.0)) continue;
    double y = -std::log(est.mean);
    double sy = std::max(est.std_error / est.mean, 1e-12);
    rows.push_back({static_cast<double>(est.shape.area()),
                    static_cast<double>(est.shape.perimeter()), y, 1.0 / (sy * sy)});
  }
  out.n_used = static_cast<int>(rows.size());
  if (out.n_used < 6) {
    out.insufficient = true;
    return out;
  }

  std::array<std::array<double, 3>, 3> n{};
  std::array<double, 3> rhs{};
  for (const auto& r : rows) {
    const std::array<double, 3> x{r.a, r.p, 1.0};
    for (int i = 0; i < 3; ++i) {
      rhs[i] += r.w * x[i] * r.y;
      for (int j = 0; j < 3; ++j) n[i][j] += r.w * x[i] * x[j];
    }
  }
  std::array<double, 3> beta{};
  std::array<std::array<double, 3>, 3> cov{};
  if (!solve3(n, rhs, beta, cov)) {
    out.insufficient = true;
    return out;
  }
  double chi2 = 0.0;
  for (const auto& r : rows) {
    double pred = beta[0] * r.a + beta[1] * r.p + beta[2];
    chi2 += r.w * (r.y - pred) * (r.y - pred);
  }
  int dof = out.n_used - 3;
  double scale = 1.0;
  if (dof > 0 && chi2 / dof > 1.0) scale = chi2 / dof;

  out.alpha = beta[0];
  out.gamma = beta[1];
  out.offset = beta[2];
  out.alpha_err = std::sqrt(std::max(cov[0][0] * scale, 0.0));
  out.gamma_err = std::sqrt(std::max(cov[1][1] * scale, 0.0));
  if (out.alpha > 3.0 * out.alpha_err)
    out.verdict = DecayVerdict::AreaLaw;
  else if (out.gamma > 3.0 * out.gamma_err)
    out.verdict = DecayVerdict::PerimeterLaw;
  else
    out.verdict = DecayVerdict::Ambiguous;
  return out;
}

void write_wilson_table(std::ostream& out,
                        const std::vector<WilsonEstimate>& estimates) {
  out << "R,S,A,P,W,err,neglogW_A,neglogW_P\n";
  for (const auto& est : estimates) {
    double a = est.shape.area();
    double p = est.shape.perimeter();
    double nla = est.mean > 0.0 ? -std::log(est.mean) / a
                                : std::numeric_limits<double>::quiet_NaN();
    double nlp = est.mean > 0.0 ? -std::log(est.mean) / p
                                : std::numeric_limits<double>::quiet_NaN();
    out << est.shape.r << ',' << est.shape.s << ',' << est.shape.area() << ','
        << est.shape.perimeter() << ',' << fmt_double(est.mean) << ','
        << fmt_double(est.std_error) << ',' << fmt_double(nla) << ','
        << fmt_double(nlp) << '\n';
  }
}

std::vector<WilsonEstimate> read_wilson_table(std::istream& in, int n_measurements) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("R,S,A,P,W,err", 0) != 0)
    throw std::runtime_error("not a loop table");
  std::vector<WilsonEstimate> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() < 6) throw std::runtime_error("short row in loop table");
    WilsonEstimate est;
    est.shape.r = static_cast<int>(parse_u64(fields[0]));
    est.shape.s = static_cast<int>(parse_u64(fields[1]));
    est.mean = parse_double(fields[4]);
    est.std_error = parse_double(fields[5]);
    est.n_measurements = n_measurements;
    out.push_back(est);
  }
  return out;
}

}  // namespace gaugemc
