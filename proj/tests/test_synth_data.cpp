#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "alperf/synth_data.hpp"

using namespace alperf;

namespace {

// Independent reference pdf, written out longhand.
double reference_gaussian(double x, double mean, double std) {
  const double z = (x - mean) / std;
  return std::exp(-z * z / 2.0) / (std * std::sqrt(2.0 * std::numbers::pi));
}

// Composite Simpson rule on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace

TEST_SUITE("synth-data") {
  TEST_CASE("task model rejects malformed inputs") {
    CHECK_THROWS_AS(TaskModel({1.0}, {{{1.0, 0.0, 1.0}}}), std::invalid_argument);
    CHECK_THROWS_AS(TaskModel({0.6, 0.6}, {{{1.0, 0.0, 1.0}}, {{1.0, 1.0, 1.0}}}), std::invalid_argument);
    CHECK_THROWS_AS(TaskModel({0.5, 0.5}, {{{1.0, 0.0, 0.0}}, {{1.0, 1.0, 1.0}}}), std::invalid_argument);
    CHECK_THROWS_AS(TaskModel({0.5, 0.5}, {{{0.4, 0.0, 1.0}}, {{1.0, 1.0, 1.0}}}), std::invalid_argument);
    CHECK_THROWS_AS(TaskModel({1.5, -0.5}, {{{1.0, 0.0, 1.0}}, {{1.0, 1.0, 1.0}}}), std::invalid_argument);
    CHECK_NOTHROW(TaskModel({0.3, 0.7}, {{{0.5, -1.0, 1.0}, {0.5, -2.0, 0.5}}, {{1.0, 1.0, 1.0}}}));
  }

  TEST_CASE("bayes posterior of the default task") {
    const auto task = TaskModel::default_task();
    const auto at0 = bayes_posterior(task, 0.0);
    CHECK(at0[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(at0[1] == doctest::Approx(0.5).epsilon(1e-15));

    // Closed-form log-odds 3x versus a direct density ratio.
    const double closed = 1.0 / (1.0 + std::exp(-3.0));
    const double ratio = reference_gaussian(1.0, 1.5, 1.0) /
                         (reference_gaussian(1.0, 1.5, 1.0) + reference_gaussian(1.0, -1.5, 1.0));
    CHECK(closed == doctest::Approx(0.9526).epsilon(1e-4));
    CHECK(bayes_posterior(task, 1.0)[1] == doctest::Approx(ratio).epsilon(1e-13));
    CHECK(bayes_posterior(task, 1.0)[1] == doctest::Approx(closed).epsilon(1e-13));
    CHECK(bayes_posterior(task, -1.0)[0] == doctest::Approx(closed).epsilon(1e-13));
  }

  TEST_CASE("bayes posterior falls back to the priors where densities underflow") {
    const TaskModel task({0.3, 0.7}, {{{1.0, -1.0, 0.1}}, {{1.0, 1.0, 0.1}}});
    const auto far = bayes_posterior(task, 1e4);
    CHECK(far[0] == 0.3);
    CHECK(far[1] == 0.7);
  }

  TEST_CASE("bayes posterior is a distribution, monotone for the default task") {
    const auto task = TaskModel::default_task();
    auto rng = derive_substream(5, {});
    double previous = -1.0;
    for (int i = -400; i <= 400; ++i) {
      const double x = i * 0.025;
      const auto p = bayes_posterior(task, x);
      CHECK(p[0] >= 0.0);
      CHECK(p[1] >= 0.0);
      CHECK(std::abs(p[0] + p[1] - 1.0) <= 1e-12);
      CHECK(p[1] >= previous);
      previous = p[1];
    }
    for (int i = 0; i < 1000; ++i) {
      const double x = (uniform01(rng) - 0.5) * 60.0;
      const auto p = bayes_posterior(task, x);
      CHECK(std::abs(p[0] + p[1] - 1.0) <= 1e-12);
    }
  }

  TEST_CASE("sampling density values") {
    const auto task = TaskModel::default_task();
    CHECK(sampling_density(SamplingDistribution::data_marginal(), task, 0.0) ==
          doctest::Approx(reference_gaussian(1.5, 0.0, 1.0)).epsilon(1e-14));
    CHECK(reference_gaussian(1.5, 0.0, 1.0) == doctest::Approx(0.1295).epsilon(1e-3));

    const auto near = SamplingDistribution::symmetric_mixture(0.9, 0.25);
    const double expected = 0.5 * reference_gaussian(0.9, 0.9, 0.25) + 0.5 * reference_gaussian(0.9, -0.9, 0.25);
    CHECK(sampling_density(near, task, 0.9) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(sampling_density(near, task, 0.9) == doctest::Approx(0.798).epsilon(1e-3));

    for (double d : {0.0, 0.3, 0.9, 2.0, 2.5}) {
      const auto s = SamplingDistribution::symmetric_mixture(d, 0.25);
      for (double x : {0.1, 0.5, 1.3, 4.0}) CHECK(sampling_density(s, task, x) == sampling_density(s, task, -x));
    }
  }

  TEST_CASE("sampling densities integrate to one") {
    const auto task = TaskModel::default_task();
    const SamplingDistribution samplers[] = {SamplingDistribution::data_marginal(),
                                             SamplingDistribution::symmetric_mixture(0.3),
                                             SamplingDistribution::symmetric_mixture(0.9),
                                             SamplingDistribution::symmetric_mixture(2.5, 0.25, 0.2)};
    for (const auto& s : samplers) {
      const double mass = simpson([&](double x) { return sampling_density(s, task, x); }, kSupportLow,
                                  kSupportHigh, 20000);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    }
  }

  TEST_CASE("sampler validation") {
    CHECK_THROWS_AS(SamplingDistribution::symmetric_mixture(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(SamplingDistribution::symmetric_mixture(1.0, 0.25, 1.5), std::invalid_argument);
  }

  TEST_CASE("draw_labeled") {
    const auto task = TaskModel::default_task();
    auto rng = derive_substream(11, {});
    CHECK(draw_labeled(task, SamplingDistribution::data_marginal(), 0, rng).empty());

    const auto unbiased = draw_labeled(task, SamplingDistribution::data_marginal(), 100000, rng);
    const auto class1 = std::count_if(unbiased.begin(), unbiased.end(), [](const auto& s) { return s.y == 1; });
    CHECK(static_cast<double>(class1) / 1e5 == doctest::Approx(0.5).epsilon(0.01));
    for (const auto& s : unbiased) {
      REQUIRE(std::isfinite(s.x));
      REQUIRE(s.sampling_density > 0.0);
      REQUIRE(s.sampling_density == task.marginal_density(s.x));
    }
  }

  TEST_CASE("far-biased draws rarely disagree with sign(x)") {
    const auto task = TaskModel::default_task();
    const auto far = SamplingDistribution::symmetric_mixture(2.5, 0.25);
    // Expected disagreement: integral of q(x) * posterior of the class opposite to sign(x).
    const double expected = simpson(
        [&](double x) {
          const auto p = bayes_posterior(task, x);
          return sampling_density(far, task, x) * (x >= 0.0 ? p[0] : p[1]);
        },
        kSupportLow, kSupportHigh, 40000);
    CHECK(expected < 0.001);

    auto rng = derive_substream(12, {});
    const auto samples = draw_labeled(task, far, 10000, rng);
    const auto wrong = std::count_if(samples.begin(), samples.end(),
                                     [](const auto& s) { return (s.x >= 0.0) != (s.y == 2); });
    const double rate = static_cast<double>(wrong) / 1e4;
    CHECK(std::abs(rate - expected) <= 4.0 * std::sqrt(expected / 1e4));
  }

  TEST_CASE("draw_unlabeled moments") {
    const auto task = TaskModel::default_task();
    auto rng = derive_substream(13, {});
    CHECK(draw_unlabeled(task, 0, rng).empty());
    const auto pool = draw_unlabeled(task, 100000, rng);
    double sum = 0.0;
    std::size_t central = 0;
    for (const auto& u : pool) {
      sum += u.x;
      central += std::abs(u.x) < 0.5;
    }
    CHECK(std::abs(sum / 1e5) < 0.02);
    const double central_mass = normal_cdf(2.0) - normal_cdf(1.0);
    CHECK(central_mass == doctest::Approx(0.1359).epsilon(1e-3));
    CHECK(std::abs(static_cast<double>(central) / 1e5 - central_mass) < 0.005);
  }

  TEST_CASE("draws are bit-reproducible") {
    const auto task = TaskModel::default_task();
    auto a = derive_substream(77, {1, 2});
    auto b = derive_substream(77, {1, 2});
    const auto s = SamplingDistribution::symmetric_mixture(0.9);
    const auto la = draw_labeled(task, s, 500, a);
    const auto lb = draw_labeled(task, s, 500, b);
    for (std::size_t i = 0; i < la.size(); ++i) {
      CHECK(la[i].x == lb[i].x);
      CHECK(la[i].y == lb[i].y);
      CHECK(la[i].sampling_density == lb[i].sampling_density);
    }
    const auto ua = draw_unlabeled(task, 500, a);
    const auto ub = draw_unlabeled(task, 500, b);
    for (std::size_t i = 0; i < ua.size(); ++i) CHECK(ua[i].x == ub[i].x);
  }

  TEST_CASE("empirical histograms match the analytic densities") {
    const auto task = TaskModel::default_task();
    auto check = [&](const std::vector<double>& xs, auto cdf) {
      constexpr int kBins = 100;
      std::vector<double> counts(kBins, 0.0);
      for (double x : xs) {
        if (x < -6.0 || x >= 6.0) continue;
        counts[static_cast<std::size_t>((x + 6.0) / 12.0 * kBins)] += 1.0;
      }
      double tv = 0.0;
      for (int b = 0; b < kBins; ++b) {
        const double lo = -6.0 + 12.0 * b / kBins;
        const double hi = -6.0 + 12.0 * (b + 1) / kBins;
        tv += std::abs(counts[b] / xs.size() - (cdf(hi) - cdf(lo)));
      }
      return tv / 2.0;
    };
    auto rng = derive_substream(14, {});
    std::vector<double> xs;
    for (const auto& u : draw_unlabeled(task, 100000, rng)) xs.push_back(u.x);
    CHECK(check(xs, [](double x) { return 0.5 * normal_cdf(x + 1.5) + 0.5 * normal_cdf(x - 1.5); }) < 0.02);

    xs.clear();
    const auto s = SamplingDistribution::symmetric_mixture(0.9, 0.25);
    for (const auto& l : draw_labeled(task, s, 100000, rng)) xs.push_back(l.x);
    CHECK(check(xs, [](double x) { return 0.5 * normal_cdf((x + 0.9) / 0.25) + 0.5 * normal_cdf((x - 0.9) / 0.25); }) <
          0.02);
  }

  TEST_CASE("bayes accuracy by quadrature") {
    CHECK(bayes_accuracy(TaskModel::default_task()) == doctest::Approx(normal_cdf(1.5)).epsilon(1e-9));
    CHECK(normal_cdf(1.5) == doctest::Approx(0.93319).epsilon(1e-5));
    CHECK(bayes_accuracy(TaskModel::symmetric_pair(0.0)) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(bayes_accuracy(TaskModel::symmetric_pair(3.0)) == doctest::Approx(normal_cdf(3.0)).epsilon(1e-9));
    CHECK(normal_cdf(3.0) == doctest::Approx(0.99865).epsilon(1e-5));
  }
}
