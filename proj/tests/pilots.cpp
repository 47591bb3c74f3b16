// Pilot Monte-Carlo runs that pin the implementer-chosen margins used by the
// unit and acceptance suites. Not part of ctest; run manually after changing
// the simulator or the estimators.
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <vector>

#include "alperf/estimators.hpp"
#include "alperf/harness.hpp"
#include "alperf/parzen.hpp"
#include "alperf/synth_data.hpp"

using namespace alperf;

namespace {

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double std_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / (v.size() - 1));
}

void pilot_true_baseline_range() {
  const auto task = TaskModel::default_task();
  double lo = 1.0, hi = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto rng = derive_substream(seed, {1});
    const auto model = fit(draw_labeled(task, SamplingDistribution::data_marginal(), 100, rng), {});
    auto eval_rng = derive_substream(seed, {2});
    const double tb = true_baseline(model, task, 200000, eval_rng).point_value();
    lo = std::min(lo, tb);
    hi = std::max(hi, tb);
  }
  std::printf("true baseline, 100 unbiased labels, 50 seeds: min %.4f max %.4f\n", lo, hi);
}

void pilot_cv_folds() {
  auto spec = default_spec(Scenario::CvFolds);
  spec.master_seed = 42;
  spec.repetitions = 500;
  const auto records = run_experiment(spec);
  std::map<std::string, std::vector<double>> by_k;
  double tb = 0.0;
  for (const auto& r : records) {
    by_k[r.estimator].push_back(r.estimate.mean);
    tb = r.true_baseline;
  }
  std::printf("cv-folds pilot (500 reps, seed 42), true baseline %.4f\n", tb);
  for (const auto& [k, v] : by_k)
    std::printf("  %-8s mean %.4f  |bias| %.4f  sd %.4f  3*sd/sqrt(50) %.4f\n", k.c_str(), mean_of(v),
                std::abs(mean_of(v) - tb), std_of(v), 3.0 * std_of(v) / std::sqrt(50.0));
}

void pilot_bias_sweep() {
  for (std::uint64_t seed : {42, 1, 2, 3, 4, 5, 6, 7}) {
    auto spec = default_spec(Scenario::BiasSweep);
    spec.master_seed = seed;
    spec.samplers = bias_sweep_samplers({0.25, 2.5});
    const auto records = run_experiment(spec);
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_d;
    for (const auto& r : records) {
      by_d[r.sampler].first.push_back(r.estimate.mean);
      by_d[r.sampler].second.push_back(r.true_baseline);
    }
    std::printf("bias sweep seed %llu:", static_cast<unsigned long long>(seed));
    for (const auto& [d, v] : by_d) std::printf("  %s diff %+.4f", d.c_str(), mean_of(v.first) - mean_of(v.second));
    std::printf("\n");
  }
}

void pilot_self_label_two_points() {
  const auto task = TaskModel::default_task();
  const std::vector<LabeledSample> labeled{{-1.5, 1, 1.0}, {1.5, 2, 1.0}};
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto pool_rng = derive_substream(seed, {1});
    const auto pool = draw_unlabeled(task, 100, pool_rng);
    auto a = derive_substream(seed, {2});
    auto b = derive_substream(seed, {3});
    const double self = self_label_cv(labeled, pool, 3, {}, a).point_value();
    const double plain = kfold_cv(labeled, 2, {}, b).point_value();
    wins += self >= plain;
  }
  std::printf("self-label >= plain CV on two separated points: %d / 50\n", wins);
}

void pilot_fig6_directional() {
  auto spec = default_spec(Scenario::EstimatorComparison);
  spec.master_seed = 42;
  spec.budgets = {50};
  const auto records = run_experiment(spec);
  std::map<std::string, std::vector<double>> over, under;
  for (const auto& r : records) {
    const double diff = r.estimate.mean - r.true_baseline;
    const std::string key = r.sampler + "/" + r.estimator;
    over[key].push_back(diff > 0 ? 1.0 : 0.0);
    under[key].push_back(diff < 0 ? 1.0 : 0.0);
  }
  for (const auto& [key, v] : over)
    std::printf("  %-32s P(over) %.3f  P(under) %.3f\n", key.c_str(), mean_of(v), mean_of(under[key]));
}

}  // namespace

int main() {
  pilot_true_baseline_range();
  pilot_cv_folds();
  pilot_bias_sweep();
  pilot_self_label_two_points();
  pilot_fig6_directional();
}
