#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "alperf/harness.hpp"
#include "alperf/summary.hpp"

using namespace alperf;

namespace {

using M = EstimatorSpec::Method;

bool same_except_timing(const RunRecord& a, const RunRecord& b) {
  return a.scenario == b.scenario && a.repetition == b.repetition && a.sampler == b.sampler &&
         a.budget == b.budget && a.estimator == b.estimator && a.estimate.mean == b.estimate.mean &&
         a.estimate.median == b.estimate.median && a.estimate.q25 == b.estimate.q25 &&
         a.estimate.q75 == b.estimate.q75 && a.true_baseline == b.true_baseline;
}

ExperimentSpec small_comparison() {
  auto spec = builtin_spec("fig6");
  spec.repetitions = 4;
  spec.budgets = {10, 20};
  spec.pool_size = 150;
  spec.true_eval_size = 300;
  spec.subsample_reps = 20;
  spec.master_seed = 17;
  return spec;
}

void check_record_ranges(const std::vector<RunRecord>& records) {
  for (const auto& r : records) {
    CHECK(r.estimate.q25 <= r.estimate.median);
    CHECK(r.estimate.median <= r.estimate.q75);
    for (double v : {r.estimate.mean, r.estimate.median, r.estimate.q25, r.estimate.q75, r.true_baseline}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(r.wall_ms >= 0.0);
  }
}

}  // namespace

TEST_SUITE("summary") {
  TEST_CASE("boxplot statistics on small inputs") {
    const auto single = summarize(std::vector<double>{0.3});
    CHECK(single.mean == 0.3);
    CHECK(single.median == 0.3);
    CHECK(single.q25 == 0.3);
    CHECK(single.q75 == 0.3);
    CHECK(single.whisker_low == 0.3);
    CHECK(single.whisker_high == 0.3);

    const auto half = summarize(std::vector<double>{0.0, 0.0, 1.0, 1.0});
    CHECK(half.mean == 0.5);
    CHECK(half.median == 0.5);
    CHECK(half.q25 == 0.0);
    CHECK(half.q75 == 1.0);
    CHECK(half.n == 4);

    CHECK_THROWS_AS(summarize(std::vector<double>{}), std::invalid_argument);
  }

  TEST_CASE("linear interpolation quantiles") {
    const std::vector<double> sorted{1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK(quantile_sorted(sorted, 0.0) == 1.0);
    CHECK(quantile_sorted(sorted, 1.0) == 5.0);
    CHECK(quantile_sorted(sorted, 0.25) == 2.0);
    CHECK(quantile_sorted(sorted, 0.1) == doctest::Approx(1.4));
  }

  TEST_CASE("summaries are permutation invariant and ordered") {
    auto rng = derive_substream(5, {});
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 1 + rng() % 40;
      std::vector<double> values(n);
      for (double& v : values) v = std::round(uniform01(rng) * 20.0) / 20.0;
      if (trial % 7 == 0) values.push_back(5.0);
      const auto base = summarize(values);
      std::shuffle(values.begin(), values.end(), rng);
      CHECK(summarize(values) == base);

      const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
      CHECK(*lo <= base.whisker_low);
      CHECK(base.whisker_low <= base.q25);
      CHECK(base.q25 <= base.median);
      CHECK(base.median <= base.q75);
      CHECK(base.q75 <= base.whisker_high);
      CHECK(base.whisker_high <= *hi);
      const double iqr = base.q75 - base.q25;
      CHECK(base.whisker_high <= base.q75 + 1.5 * iqr + 1e-12);
      CHECK(base.whisker_low >= base.q25 - 1.5 * iqr - 1e-12);
    }
  }
}

TEST_SUITE("experiment-harness") {
  TEST_CASE("built-in catalog") {
    CHECK(builtin_names() == std::vector<std::string>{"fig2", "fig3", "fig5", "fig6"});
    for (const auto& name : builtin_names()) {
      CHECK_NOTHROW(builtin_spec(name).validate());
      CHECK_FALSE(builtin_description(name).empty());
    }
    CHECK_THROWS(builtin_spec("fig4"));
    CHECK(default_d_grid().size() == 12);
    CHECK(bias_sweep_samplers({1.0}).front().id == "d=1");
  }

  TEST_CASE("scenario and estimator names round-trip") {
    for (auto s : {Scenario::EvalSizeDistribution, Scenario::CvFolds, Scenario::BiasSweep,
                   Scenario::EstimatorComparison})
      CHECK(scenario_from_string(to_string(s)) == s);
    for (auto m : {M::SubsampleBaseline, M::GeneralizationError, M::Cv, M::ReweightedCv, M::SelfLabelCv,
                   M::Probabilistic})
      CHECK(method_from_string(method_name(m)) == m);
    CHECK(EstimatorSpec::of(M::Cv, 5).label() == "cv-k5");
    CHECK(EstimatorSpec::of(M::Probabilistic).label() == "probabilistic");
    CHECK_THROWS(scenario_from_string("nope"));
  }

  TEST_CASE("validation names the offending field") {
    auto spec = small_comparison();
    spec.classifier.bandwidth = -1.0;
    try {
      spec.validate();
      FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("bandwidth>0") != std::string::npos);
    }

    spec = small_comparison();
    spec.budgets = {20, 10};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = small_comparison();
    spec.repetitions = 0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = small_comparison();
    spec.estimators = {EstimatorSpec::of(M::Cv, 11)};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    auto folds = builtin_spec("fig3");
    folds.estimators.push_back(EstimatorSpec::of(M::Probabilistic));
    CHECK_THROWS_AS(folds.validate(), std::invalid_argument);
  }

  TEST_CASE("worker count does not change results") {
    const auto spec = small_comparison();
    const auto serial = run_experiment(spec, {1});
    const auto parallel = run_experiment(spec, {4});
    REQUIRE(serial.size() == parallel.size());
    REQUIRE(serial.size() == 4 * 3 * 2 * 6);
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(same_except_timing(serial[i], parallel[i]));
    check_record_ranges(serial);
  }

  TEST_CASE("repetitions are isolated from one another") {
    auto spec = small_comparison();
    spec.repetitions = 3;
    const auto three = run_experiment(spec);
    spec.repetitions = 5;
    const auto five = run_experiment(spec);
    REQUIRE(five.size() > three.size());
    for (std::size_t i = 0; i < three.size(); ++i) CHECK(same_except_timing(three[i], five[i]));
  }

  TEST_CASE("smaller budgets see a prefix of the larger acquisition") {
    auto spec = small_comparison();
    const auto short_run = acquisition_sequence(spec, 2, 1);
    spec.budgets = {10, 20, 45};
    const auto long_run = acquisition_sequence(spec, 2, 1);
    REQUIRE(short_run.size() == 20);
    REQUIRE(long_run.size() == 45);
    for (std::size_t i = 0; i < short_run.size(); ++i) {
      CHECK(short_run[i].x == long_run[i].x);
      CHECK(short_run[i].y == long_run[i].y);
    }
  }

  TEST_CASE("fold scenario") {
    auto spec = builtin_spec("fig3");
    spec.repetitions = 6;
    spec.true_eval_size = 500;
    const auto records = run_experiment(spec);
    check_record_ranges(records);
    std::map<std::string, std::vector<double>> by_estimator;
    for (const auto& r : records) by_estimator[r.estimator].push_back(r.estimate.mean);
    const auto& loo = by_estimator.at("cv-k20");
    CHECK(std::all_of(loo.begin(), loo.end(), [&](double v) { return v == loo.front(); }));
    for (const auto& r : records) CHECK(r.true_baseline == records.front().true_baseline);

    spec.budgets = {2};
    spec.estimators = {EstimatorSpec::of(M::Cv, 2)};
    CHECK(run_experiment(spec).size() == 6);
  }

  TEST_CASE("bias sweep and eval-size scenarios run") {
    auto sweep = builtin_spec("fig5");
    sweep.repetitions = 3;
    sweep.true_eval_size = 300;
    const auto sweep_records = run_experiment(sweep);
    CHECK(sweep_records.size() == 3 * default_d_grid().size());
    check_record_ranges(sweep_records);

    auto sizes = builtin_spec("fig2");
    sizes.repetitions = 20;
    sizes.true_eval_size = 1000;
    const auto size_records = run_experiment(sizes);
    CHECK(size_records.size() == 20 * 4);
    check_record_ranges(size_records);
    for (const auto& r : size_records) {
      const double scaled = r.estimate.mean * static_cast<double>(r.budget);
      CHECK(scaled == doctest::Approx(std::round(scaled)).epsilon(1e-9));
    }
  }

  TEST_CASE("the first failure in a repetition propagates") {
    CHECK_THROWS_AS(for_each_repetition(8, 3,
                                        [](std::size_t rep) -> std::vector<RunRecord> {
                                          if (rep == 5) throw std::runtime_error("rep 5");
                                          return {};
                                        }),
                    std::runtime_error);
    const auto ordered = for_each_repetition(10, 4, [](std::size_t rep) {
      RunRecord r;
      r.repetition = rep;
      return std::vector<RunRecord>{r};
    });
    for (std::size_t i = 0; i < ordered.size(); ++i) CHECK(ordered[i].repetition == i);
  }
}
