#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "gaugemc/observables.hpp"
#include "gaugemc/rng.hpp"
#include "gaugemc/spins.hpp"

using namespace gaugemc;

TEST_SUITE("observables") {

TEST_CASE("specific heat basics") {
  EnergySeries series;
  series.beta = 0.7;
  series.n_sites = 8;

  CHECK_THROWS(specific_heat(series));
  series.samples = {-20};
  CHECK_THROWS(specific_heat(series));

  series.samples = {-20, -20, -20, -20};
  CHECK(specific_heat(series) == 0.0);

  series.samples = {-20, -16, -18, -22};
  double c = specific_heat(series);
  CHECK(c > 0.0);

  SUBCASE("beta=0 kills the estimator") {
    series.beta = 0.0;
    CHECK(specific_heat(series) == 0.0);
  }

  SUBCASE("invariant under time reversal and duplication") {
    EnergySeries reversed = series;
    std::reverse(reversed.samples.begin(), reversed.samples.end());
    CHECK(specific_heat(reversed) == c);

    EnergySeries doubled = series;
    doubled.samples.insert(doubled.samples.end(), series.samples.begin(),
                           series.samples.end());
    CHECK(specific_heat(doubled) == c);
  }
}

TEST_CASE("binned errors shrink like 1/sqrt(n) for iid data") {
  Rng rng(404);
  std::vector<double> series(4000);
  for (auto& v : series) v = rng.uniform();
  auto stats = binned_stats(series);
  // iid uniform: sigma/sqrt(n) = sqrt(1/12)/sqrt(4000) ~ 0.00456
  CHECK(stats.mean == doctest::Approx(0.5).epsilon(0.05));
  CHECK(stats.std_error > 0.002);
  CHECK(stats.std_error < 0.008);
}

TEST_CASE("specific heat agrees with the enumeration oracle at L=2") {
  Lattice lat(3, 2);
  const double beta = 0.5;
  auto dis = sample_disorder(lat, Model::gauge, 0.0, 1);
  auto exact = exact_enumerate(lat, dis, beta);
  double exact_c = beta * beta * exact.energy_variance / lat.n_sites();

  auto graph = build_coupling_graph(lat, Model::gauge);
  Rng rng(2718);
  MetropolisSampler sampler(graph, dis, make_random_config(lat, Model::gauge, rng));
  sampler.run(2000, beta, rng);
  EnergySeries series;
  series.beta = beta;
  series.n_sites = lat.n_sites();
  for (int m = 0; m < 20000; ++m) {
    sampler.run(5, beta, rng);
    series.samples.push_back(sampler.current_energy());
  }
  double c = specific_heat(series);
  double c_err = specific_heat_std_error(series);
  CHECK(c_err > 0.0);
  CHECK(std::fabs(c - exact_c) < 3.0 * c_err);
}

TEST_CASE("loop estimates at the temperature extremes") {
  Lattice lat(3, 4);
  auto dis = sample_disorder(lat, Model::gauge, 0.0, 1);
  auto graph = build_coupling_graph(lat, Model::gauge);

  SUBCASE("frozen ordered configuration gives 1") {
    MetropolisSampler sampler(graph, dis, make_uniform_config(lat, Model::gauge));
    Rng rng(8);
    WilsonAccumulator acc(lat, rectangle_shapes(3));
    for (int m = 0; m < 50; ++m) {
      sampler.run(1, 60.0, rng);  // effectively frozen
      acc.measure(sampler.config());
    }
    for (const auto& est : acc.estimates()) {
      CHECK(est.mean == doctest::Approx(1.0));
      CHECK(est.std_error == doctest::Approx(0.0));
    }
  }

  SUBCASE("free links average to zero") {
    Rng rng(9);
    MetropolisSampler sampler(graph, dis, make_random_config(lat, Model::gauge, rng));
    WilsonAccumulator acc(lat, {{1, 1}});
    for (int m = 0; m < 2000; ++m) {
      sampler.run(1, 0.0, rng);
      acc.measure(sampler.config());
    }
    auto est = acc.estimates()[0];
    CHECK(std::fabs(est.mean) < 3.0 * est.std_error);
  }
}

TEST_CASE("loop estimate matches the enumeration oracle") {
  Lattice lat(3, 2);
  const double beta = 0.5;
  auto dis = sample_disorder(lat, Model::gauge, 0.0, 1);
  std::vector<WilsonLoopSpec> specs;
  for (const auto& spec : all_loop_specs(lat, {1, 1})) specs.push_back(spec);
  auto exact = exact_enumerate(lat, dis, beta, specs);
  double exact_w = 0.0;
  for (double w : exact.wilson) exact_w += w;
  exact_w /= static_cast<double>(exact.wilson.size());

  auto graph = build_coupling_graph(lat, Model::gauge);
  Rng rng(1123);
  MetropolisSampler sampler(graph, dis, make_random_config(lat, Model::gauge, rng));
  sampler.run(2000, beta, rng);
  WilsonAccumulator acc(lat, {{1, 1}});
  for (int m = 0; m < 8000; ++m) {
    sampler.run(5, beta, rng);
    acc.measure(sampler.config());
  }
  auto est = acc.estimates()[0];
  CHECK(std::fabs(est.mean - exact_w) < 3.0 * est.std_error);
}

TEST_CASE("ensemble averages") {
  CHECK_THROWS(ensemble_average({}));

  auto single = ensemble_average({0.37});
  CHECK(single.mean == 0.37);
  CHECK(single.fluctuation == 0.0);

  auto pair = ensemble_average({1.0, -1.0});
  CHECK(pair.mean == 0.0);
  CHECK(pair.fluctuation == 1.0);  // population convention
}

TEST_CASE("pure-system sample scatter shrinks with measurement length") {
  Lattice lat(3, 2);
  const double beta = 0.5;
  auto graph = build_coupling_graph(lat, Model::gauge);

  auto run_ensemble = [&](int n_meas) {
    std::vector<double> values;
    for (int k = 0; k < 4; ++k) {
      auto dis = sample_disorder(lat, Model::gauge, 0.0, 1);
      Rng rng(derive_seed(808, 3, k));
      MetropolisSampler sampler(graph, dis,
                                make_random_config(lat, Model::gauge, rng));
      sampler.run(500, beta, rng);
      WilsonAccumulator acc(lat, {{1, 1}});
      for (int m = 0; m < n_meas; ++m) {
        sampler.run(5, beta, rng);
        acc.measure(sampler.config());
      }
      values.push_back(acc.estimates()[0].mean);
    }
    return ensemble_average(values).fluctuation;
  };

  CHECK(run_ensemble(32000) < run_ensemble(2000));
}

TEST_CASE("decay classification on synthetic data") {
  auto shapes = rectangle_shapes(4);

  auto synth = [&](double alpha, double gamma, double rel_err) {
    std::vector<WilsonEstimate> est;
    for (auto sh : shapes) {
      double w = std::exp(-alpha * sh.area() - gamma * sh.perimeter());
      est.push_back({sh, w, rel_err * w, 100});
    }
    return est;
  };

  SUBCASE("pure area law") {
    auto cls = classify_decay(synth(0.5, 0.0, 1e-6));
    CHECK(cls.verdict == DecayVerdict::AreaLaw);
    CHECK(cls.alpha == doctest::Approx(0.5).epsilon(1e-3));
  }

  SUBCASE("pure perimeter law") {
    auto cls = classify_decay(synth(0.0, 0.2, 1e-6));
    CHECK(cls.verdict == DecayVerdict::PerimeterLaw);
    CHECK(cls.gamma == doctest::Approx(0.2).epsilon(1e-3));
  }

  SUBCASE("flat loops are ambiguous") {
    auto cls = classify_decay(synth(0.0, 0.0, 1e-6));
    CHECK(cls.verdict == DecayVerdict::Ambiguous);
  }

  SUBCASE("fewer than 6 usable loops") {
    auto est = synth(0.1, 0.05, 1e-6);
    est.resize(5);
    auto cls = classify_decay(est);
    CHECK(cls.verdict == DecayVerdict::Ambiguous);
    CHECK(cls.insufficient);

    // unusable rows drop out: large errors kill all but five loops
    auto noisy = synth(0.1, 0.05, 1e-6);
    for (std::size_t i = 5; i < noisy.size(); ++i) noisy[i].std_error = 1.0;
    auto cls2 = classify_decay(noisy);
    CHECK(cls2.insufficient);
  }
}

TEST_CASE("classification recovers known laws under noise") {
  Rng rng(5150);
  auto shapes = rectangle_shapes(5);
  int area_hits = 0, perim_hits = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    std::vector<WilsonEstimate> area_est, perim_est;
    for (auto sh : shapes) {
      const double rel = 0.02;
      // Box-Muller from the fixed stream
      double u1 = rng.uniform(), u2 = rng.uniform();
      double g1 = std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(6.283185307179586 * u2);
      double u3 = rng.uniform(), u4 = rng.uniform();
      double g2 = std::sqrt(-2.0 * std::log(1.0 - u3)) * std::cos(6.283185307179586 * u4);

      double wa = std::exp(-0.3 * sh.area()) * (1.0 + rel * g1);
      double wp = std::exp(-0.15 * sh.perimeter()) * (1.0 + rel * g2);
      area_est.push_back({sh, wa, rel * std::exp(-0.3 * sh.area()), 100});
      perim_est.push_back({sh, wp, rel * std::exp(-0.15 * sh.perimeter()), 100});
    }
    if (classify_decay(area_est).verdict == DecayVerdict::AreaLaw) ++area_hits;
    if (classify_decay(perim_est).verdict == DecayVerdict::PerimeterLaw) ++perim_hits;
  }
  CHECK(area_hits >= 95);
  CHECK(perim_hits >= 95);
}

TEST_CASE("string tension orders the pure-gauge phases") {
  // beta=0.5 sits deep in the confined phase, beta=1.0 in the ordered one.
  Lattice lat(3, 8);
  auto dis = sample_disorder(lat, Model::gauge, 0.0, 1);
  auto graph = build_coupling_graph(lat, Model::gauge);

  auto fit_at = [&](double beta, std::uint64_t seed) {
    Rng rng(seed);
    MetropolisSampler sampler(graph, dis, make_random_config(lat, Model::gauge, rng));
    sampler.run(500, beta, rng);
    WilsonAccumulator acc(lat, rectangle_shapes(4));
    for (int m = 0; m < 2000; ++m) {
      sampler.run(2, beta, rng);
      acc.measure(sampler.config());
    }
    return classify_decay(acc.estimates());
  };

  auto confined = fit_at(0.5, 600);
  auto ordered = fit_at(1.0, 601);
  CHECK(confined.verdict == DecayVerdict::AreaLaw);
  CHECK(ordered.verdict == DecayVerdict::PerimeterLaw);
  CHECK(confined.alpha > ordered.alpha);
  CHECK(ordered.alpha <= 3.0 * ordered.alpha_err);
}

TEST_CASE("loop tables round trip") {
  std::vector<WilsonEstimate> est;
  for (auto sh : rectangle_shapes(3))
    est.push_back({sh, 0.1 * sh.area(), 0.01 / sh.perimeter(), 500});
  est[0].mean = -0.25;  // negative mean: decay columns become nan

  std::stringstream ss;
  write_wilson_table(ss, est);
  auto back = read_wilson_table(ss, 500);
  REQUIRE(back.size() == est.size());
  for (std::size_t i = 0; i < est.size(); ++i) {
    CHECK(back[i].shape == est[i].shape);
    CHECK(back[i].mean == est[i].mean);
    CHECK(back[i].std_error == est[i].std_error);
    CHECK(back[i].n_measurements == 500);
  }
}

}  // TEST_SUITE
