#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gaugemc/lattice.hpp"
#include "gaugemc/spins.hpp"

namespace gaugemc {

// One measured energy per measurement sweep, plus the context needed to
// normalize the specific heat per site.
struct EnergySeries {
  std::vector<std::int64_t> samples;
  double beta = 0.0;
  int n_sites = 1;
};

// c = beta^2 * (<E^2> - <E>^2) / n_sites with population moments, so the
// value is invariant under duplicating or reversing the series.
double specific_heat(const EnergySeries& series);

struct BinnedStats {
  double mean = 0.0;
  double std_error = 0.0;
};

// Mean over the full series; error bar from equal-size bin means (the
// remainder after n_bins * floor(n/n_bins) entries is ignored for the
// error, which absorbs autocorrelation up to the bin length).
BinnedStats binned_stats(const std::vector<double>& series, int n_bins = 20);
BinnedStats energy_stats(const EnergySeries& series, int n_bins = 20);

// Jackknife over the same bins for the (nonlinear) specific-heat estimator.
double specific_heat_std_error(const EnergySeries& series, int n_bins = 20);

struct LoopShape {
  int r = 1;
  int s = 1;
  int area() const { return r * s; }
  int perimeter() const { return 2 * (r + s); }
  bool operator==(const LoopShape&) const = default;
};

// All rectangles 1 <= r <= s <= r_max.
std::vector<LoopShape> rectangle_shapes(int r_max);

// Every (plane, corner) placement of one shape; used to average the exact
// enumerator over the same loop set the MC estimator uses.
std::vector<WilsonLoopSpec> all_loop_specs(const Lattice& lat, LoopShape shape);

struct WilsonEstimate {
  LoopShape shape;
  double mean = 0.0;
  double std_error = 0.0;
  int n_measurements = 0;
};

// Accumulates rectangular loop products from a stream of gauge
// configurations, averaged over all lattice translations and plane
// orientations per measurement. Line products along each axis are built
// once per measurement and reused by every rectangle, so a measurement
// costs O(planes * shapes * n_sites) bit operations.
class WilsonAccumulator {
 public:
  WilsonAccumulator(const Lattice& lat, std::vector<LoopShape> shapes);

  void measure(const SpinConfig& cfg);
  int n_measurements() const { return n_measurements_; }
  std::vector<WilsonEstimate> estimates(int n_bins = 20) const;
  const std::vector<LoopShape>& shapes() const { return shapes_; }

 private:
  int dim_, size_, n_sites_, max_extent_;
  std::vector<LoopShape> shapes_;
  std::vector<std::vector<std::int32_t>> shift_;  // [axis][dist-1] site maps
  std::vector<std::vector<std::uint8_t>> line_;   // scratch: [axis*maxext+len-1]
  std::vector<std::vector<double>> series_;       // per shape
  int n_measurements_ = 0;
};

// Unweighted mean over disorder samples; fluctuation is the population
// standard deviation across samples.
struct EnsembleSummary {
  std::vector<double> per_sample;
  double mean = 0.0;
  double fluctuation = 0.0;
};

EnsembleSummary ensemble_average(const std::vector<double>& per_sample);

enum class DecayVerdict { AreaLaw, PerimeterLaw, Ambiguous };

const char* verdict_name(DecayVerdict verdict);
DecayVerdict verdict_from_name(const std::string& name);

struct DecayClassification {
  DecayVerdict verdict = DecayVerdict::Ambiguous;
  double alpha = 0.0, alpha_err = 0.0;
  double gamma = 0.0, gamma_err = 0.0;
  double offset = 0.0;
  int n_used = 0;
  bool insufficient = false;  // fewer than 6 usable loops
};

// Weighted least-squares fit of -ln W = alpha*A + gamma*P + c0 over loops
// with W - 2*err > 0. AreaLaw if alpha > 3 sigma_alpha, else PerimeterLaw
// if gamma > 3 sigma_gamma, else Ambiguous. Parameter errors are scaled by
// sqrt(chi^2/dof) when the fit underestimates the scatter.
DecayClassification classify_decay(const std::vector<WilsonEstimate>& estimates);

// Columns: R,S,A,P,W,err,neglogW_A,neglogW_P (the two standard decay plots
// as a table; the last two are nan when W <= 0).
void write_wilson_table(std::ostream& out, const std::vector<WilsonEstimate>& estimates);
std::vector<WilsonEstimate> read_wilson_table(std::istream& in, int n_measurements);

}  // namespace gaugemc
