#include "alperf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "alperf/random.hpp"

namespace alperf {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string format_number(double value) {
  std::ostringstream out;
  out << value;
  return out.str();
}

[[noreturn]] void reject(const std::string& field, const std::string& constraint) {
  throw std::invalid_argument(field + ": " + constraint);
}

std::uint64_t index(std::size_t i) { return static_cast<std::uint64_t>(i); }

RunRecord make_record(const ExperimentSpec& spec, std::size_t rep, const NamedSampler& sampler,
                      std::size_t budget, std::string estimator, const PerformanceEstimate& estimate,
                      double true_baseline, double wall_ms) {
  RunRecord r;
  r.scenario = to_string(spec.scenario);
  r.repetition = rep;
  r.sampler = sampler.id;
  r.budget = budget;
  r.estimator = std::move(estimator);
  r.estimate = summarize_estimate(estimate);
  r.true_baseline = true_baseline;
  r.wall_ms = wall_ms;
  return r;
}

CvOptions cv_options(const EstimatorSpec& e) {
  CvOptions options;
  options.reweighted = e.method == EstimatorSpec::Method::ReweightedCv;
  options.weight_cap = e.weight_cap;
  return options;
}

void require_scenario(const ExperimentSpec& spec, Scenario expected) {
  if (spec.scenario != expected)
    throw std::invalid_argument("spec scenario is " + to_string(spec.scenario) + ", expected " + to_string(expected));
  spec.validate();
}

}  // namespace

// -- names --------------------------------------------------------------------

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::EvalSizeDistribution: return "eval-size-distribution";
    case Scenario::CvFolds: return "cv-folds";
    case Scenario::BiasSweep: return "bias-sweep";
    case Scenario::EstimatorComparison: return "estimator-comparison";
  }
  return "unknown";
}

Scenario scenario_from_string(const std::string& name) {
  for (Scenario s : {Scenario::EvalSizeDistribution, Scenario::CvFolds, Scenario::BiasSweep,
                     Scenario::EstimatorComparison}) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument("scenario: unknown value '" + name + "'");
}

std::string method_name(EstimatorSpec::Method method) {
  using M = EstimatorSpec::Method;
  switch (method) {
    case M::SubsampleBaseline: return "subsample-baseline";
    case M::GeneralizationError: return "generalization-error";
    case M::Cv: return "cv";
    case M::ReweightedCv: return "reweighted-cv";
    case M::SelfLabelCv: return "self-label-cv";
    case M::Probabilistic: return "probabilistic";
  }
  return "unknown";
}

EstimatorSpec::Method method_from_string(const std::string& name) {
  using M = EstimatorSpec::Method;
  for (M m : {M::SubsampleBaseline, M::GeneralizationError, M::Cv, M::ReweightedCv, M::SelfLabelCv,
              M::Probabilistic}) {
    if (method_name(m) == name) return m;
  }
  throw std::invalid_argument("estimators: unknown estimator '" + name + "'");
}

std::string EstimatorSpec::label() const {
  std::string name = method_name(method);
  if (uses_folds()) name += "-k" + std::to_string(k);
  if (weight_cap) name += "-cap" + format_number(*weight_cap);
  if (method == Method::Probabilistic && nearby == NearbyCount::Hard) name += "-hard";
  return name;
}

// -- spec ---------------------------------------------------------------------

void ExperimentSpec::validate() const {
  if (repetitions < 1) reject("repetitions", "must be >= 1");
  if (budgets.empty()) reject("budgets", "must be nonempty");
  if (budgets.front() < 1) reject("budgets", "must be >= 1");
  for (std::size_t i = 1; i < budgets.size(); ++i)
    if (budgets[i] <= budgets[i - 1]) reject("budgets", "must be strictly increasing");
  if (pool_size < 1) reject("pool_size", "must be >= 1");
  if (true_eval_size < 1) reject("true_eval_size", "must be >= 1");
  if (subsample_reps < 1) reject("subsample_reps", "must be >= 1");
  if (train_size < 1) reject("train_size", "must be >= 1");
  if (!(classifier.bandwidth > 0.0) || !std::isfinite(classifier.bandwidth))
    reject("classifier.bandwidth", "must be > 0 (bandwidth>0)");
  if (!(classifier.prior_weight >= 0.0) || !std::isfinite(classifier.prior_weight))
    reject("classifier.epsilon", "must be >= 0");
  if (classifier.class_count != task.class_count())
    reject("classifier", "class count must match the task");

  if (samplers.empty()) reject("samplers", "must be nonempty");
  std::set<std::string> ids;
  for (const auto& s : samplers) {
    if (s.id.empty()) reject("samplers.id", "must be nonempty");
    if (!ids.insert(s.id).second) reject("samplers.id", "duplicate id '" + s.id + "'");
    try {
      s.distribution.validate();
    } catch (const std::invalid_argument& e) {
      reject("samplers[" + s.id + "]", e.what());
    }
  }

  if (estimators.empty()) reject("estimators", "must be nonempty");
  std::set<std::string> labels;
  using M = EstimatorSpec::Method;
  for (const auto& e : estimators) {
    if (!labels.insert(e.label()).second) reject("estimators", "duplicate estimator '" + e.label() + "'");
    if (e.uses_folds()) {
      if (e.k < 2) reject("estimators." + e.label() + ".k", "must be >= 2");
      const std::size_t smallest = scenario == Scenario::EvalSizeDistribution ? train_size : budgets.front();
      if (static_cast<std::size_t>(e.k) > smallest)
        reject("estimators." + e.label() + ".k", "must not exceed the smallest budget");
    }
    if (e.weight_cap && !(*e.weight_cap > 0.0)) reject("estimators." + e.label() + ".weight_cap", "must be > 0");
    if (e.method == M::Probabilistic && task.class_count() != 2)
      reject("estimators.probabilistic", "requires a two-class task");

    switch (scenario) {
      case Scenario::EvalSizeDistribution:
        if (e.method != M::SubsampleBaseline)
          reject("estimators", "eval-size-distribution supports only subsample-baseline");
        break;
      case Scenario::CvFolds:
      case Scenario::BiasSweep:
        if (e.method != M::Cv && e.method != M::ReweightedCv)
          reject("estimators", to_string(scenario) + " supports only cv and reweighted-cv");
        break;
      case Scenario::EstimatorComparison:
        break;
    }
  }
}

std::vector<double> default_d_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 12; ++i) grid.push_back(0.25 * i);
  return grid;
}

std::vector<NamedSampler> bias_sweep_samplers(const std::vector<double>& d_grid, double component_std) {
  std::vector<NamedSampler> out;
  for (double d : d_grid)
    out.push_back({"d=" + format_number(d), SamplingDistribution::symmetric_mixture(d, component_std)});
  return out;
}

ExperimentSpec default_spec(Scenario scenario) {
  using M = EstimatorSpec::Method;
  ExperimentSpec spec;
  spec.scenario = scenario;
  const NamedSampler unbiased{"unbiased", SamplingDistribution::data_marginal()};
  switch (scenario) {
    case Scenario::EvalSizeDistribution:
      spec.samplers = {unbiased};
      spec.budgets = {5, 10, 20, 100};
      spec.repetitions = 1000;
      spec.true_eval_size = 200000;
      spec.estimators = {EstimatorSpec::of(M::SubsampleBaseline)};
      break;
    case Scenario::CvFolds:
      spec.samplers = {unbiased};
      spec.budgets = {20};
      spec.repetitions = 50;
      for (int k : {2, 5, 10, 20}) spec.estimators.push_back(EstimatorSpec::of(M::Cv, k));
      break;
    case Scenario::BiasSweep:
      spec.samplers = bias_sweep_samplers(default_d_grid());
      spec.budgets = {30};
      spec.repetitions = 50;
      spec.estimators = {EstimatorSpec::of(M::Cv, 3)};
      break;
    case Scenario::EstimatorComparison:
      spec.samplers = {unbiased,
                       {"boundary", SamplingDistribution::symmetric_mixture(0.3, 0.25)},
                       {"far", SamplingDistribution::symmetric_mixture(2.0, 0.25)}};
      spec.budgets = {10, 30, 50};
      spec.repetitions = 200;
      spec.estimators = {EstimatorSpec::of(M::SubsampleBaseline), EstimatorSpec::of(M::GeneralizationError),
                         EstimatorSpec::of(M::Cv, 3),               EstimatorSpec::of(M::ReweightedCv, 3),
                         EstimatorSpec::of(M::SelfLabelCv, 3),      EstimatorSpec::of(M::Probabilistic)};
      break;
  }
  return spec;
}

std::vector<std::string> builtin_names() { return {"fig2", "fig3", "fig5", "fig6"}; }

ExperimentSpec builtin_spec(const std::string& name) {
  if (name == "fig2") return default_spec(Scenario::EvalSizeDistribution);
  if (name == "fig3") return default_spec(Scenario::CvFolds);
  if (name == "fig5") return default_spec(Scenario::BiasSweep);
  if (name == "fig6") return default_spec(Scenario::EstimatorComparison);
  throw std::invalid_argument("unknown built-in scenario '" + name + "'");
}

std::string builtin_description(const std::string& name) {
  if (name == "fig2") return "accuracy spread of a fixed classifier over evaluation sets of size 5, 10, 20, 100";
  if (name == "fig3") return "2-, 5-, 10-fold and leave-one-out CV on 20 unbiased labels";
  if (name == "fig5") return "3-fold CV vs. true accuracy under sampling bias, d = 0.25 .. 3.0";
  if (name == "fig6") return "all estimators, three samplers, budgets 10/30/50";
  throw std::invalid_argument("unknown built-in scenario '" + name + "'");
}

// -- runner -------------------------------------------------------------------

std::vector<RunRecord> for_each_repetition(std::size_t repetitions, unsigned workers,
                                           const std::function<std::vector<RunRecord>(std::size_t)>& task) {
  std::vector<std::vector<RunRecord>> results(repetitions);
  std::vector<std::exception_ptr> errors(repetitions);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t rep = next++; rep < repetitions; rep = next++) {
      try {
        results[rep] = task(rep);
      } catch (...) {
        errors[rep] = std::current_exception();
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(repetitions)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<RunRecord> out;
  for (auto& chunk : results) std::move(chunk.begin(), chunk.end(), std::back_inserter(out));
  return out;
}

std::vector<RunRecord> run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  switch (spec.scenario) {
    case Scenario::EvalSizeDistribution: return run_eval_size_distribution(spec, options);
    case Scenario::CvFolds: return run_cv_folds(spec, options);
    case Scenario::BiasSweep: return run_bias_sweep(spec, options);
    case Scenario::EstimatorComparison: return run_estimator_comparison(spec, options);
  }
  throw std::invalid_argument("unknown scenario");
}

std::vector<RunRecord> run_eval_size_distribution(const ExperimentSpec& spec, const RunOptions& options) {
  require_scenario(spec, Scenario::EvalSizeDistribution);
  const std::uint64_t seed = spec.master_seed;

  struct Fixed {
    ParzenModel model;
    double true_baseline;
  };
  std::vector<Fixed> fixed;
  for (std::size_t s = 0; s < spec.samplers.size(); ++s) {
    auto rng = derive_substream(seed, {stage::kTrain, index(s)});
    ParzenModel model = fit(draw_labeled(spec.task, spec.samplers[s].distribution, spec.train_size, rng),
                            spec.classifier);
    auto tb_rng = derive_substream(seed, {stage::kTrueBaseline, index(s)});
    const double tb = true_baseline(model, spec.task, spec.true_eval_size, tb_rng).point_value();
    fixed.push_back({std::move(model), tb});
  }

  return for_each_repetition(spec.repetitions, options.workers, [&](std::size_t rep) {
    std::vector<RunRecord> records;
    for (std::size_t s = 0; s < spec.samplers.size(); ++s) {
      for (std::size_t b = 0; b < spec.budgets.size(); ++b) {
        for (std::size_t e = 0; e < spec.estimators.size(); ++e) {
          const auto start = Clock::now();
          auto rng = derive_substream(seed, {index(rep), index(s), index(b), stage::kSubsample, index(e)});
          const auto estimate = subsample_baseline(fixed[s].model, spec.task, spec.budgets[b], 1, rng);
          records.push_back(make_record(spec, rep, spec.samplers[s], spec.budgets[b], spec.estimators[e].label(),
                                        estimate, fixed[s].true_baseline, elapsed_ms(start)));
        }
      }
    }
    return records;
  });
}

std::vector<RunRecord> run_cv_folds(const ExperimentSpec& spec, const RunOptions& options) {
  require_scenario(spec, Scenario::CvFolds);
  const std::uint64_t seed = spec.master_seed;

  // One fixed labeled set per (sampler, budget); repetitions only re-draw folds.
  struct Fixed {
    std::vector<LabeledSample> labeled;
    double true_baseline;
  };
  std::vector<std::vector<Fixed>> fixed(spec.samplers.size());
  for (std::size_t s = 0; s < spec.samplers.size(); ++s) {
    for (std::size_t b = 0; b < spec.budgets.size(); ++b) {
      auto rng = derive_substream(seed, {stage::kTrain, index(s), index(b)});
      auto labeled = draw_labeled(spec.task, spec.samplers[s].distribution, spec.budgets[b], rng);
      auto tb_rng = derive_substream(seed, {stage::kTrueBaseline, index(s), index(b)});
      const double tb =
          true_baseline(fit(labeled, spec.classifier), spec.task, spec.true_eval_size, tb_rng).point_value();
      fixed[s].push_back({std::move(labeled), tb});
    }
  }

  return for_each_repetition(spec.repetitions, options.workers, [&](std::size_t rep) {
    std::vector<RunRecord> records;
    for (std::size_t s = 0; s < spec.samplers.size(); ++s) {
      for (std::size_t b = 0; b < spec.budgets.size(); ++b) {
        const Fixed& f = fixed[s][b];
        for (std::size_t e = 0; e < spec.estimators.size(); ++e) {
          const auto& est = spec.estimators[e];
          const auto start = Clock::now();
          auto rng = derive_substream(seed, {index(rep), index(s), index(b), stage::kFolds, index(e)});
          const auto estimate = kfold_cv(f.labeled, est.k, spec.classifier, rng, cv_options(est));
          records.push_back(make_record(spec, rep, spec.samplers[s], spec.budgets[b], est.label(), estimate,
                                        f.true_baseline, elapsed_ms(start)));
        }
      }
    }
    return records;
  });
}

std::vector<RunRecord> run_bias_sweep(const ExperimentSpec& spec, const RunOptions& options) {
  require_scenario(spec, Scenario::BiasSweep);
  const std::uint64_t seed = spec.master_seed;

  return for_each_repetition(spec.repetitions, options.workers, [&](std::size_t rep) {
    std::vector<RunRecord> records;
    for (std::size_t s = 0; s < spec.samplers.size(); ++s) {
      for (std::size_t b = 0; b < spec.budgets.size(); ++b) {
        auto acquire_rng = derive_substream(seed, {index(rep), index(s), index(b), stage::kAcquire});
        const auto labeled = draw_labeled(spec.task, spec.samplers[s].distribution, spec.budgets[b], acquire_rng);
        auto holdout_rng = derive_substream(seed, {index(rep), index(s), index(b), stage::kHoldout});
        const auto holdout =
            draw_labeled(spec.task, SamplingDistribution::data_marginal(), spec.true_eval_size, holdout_rng);

        for (std::size_t e = 0; e < spec.estimators.size(); ++e) {
          const auto& est = spec.estimators[e];
          const auto start = Clock::now();
          auto rng = derive_substream(seed, {index(rep), index(s), index(b), stage::kFolds, index(e)});
          // kfold_cv draws its fold assignment first, so a copy of the stream
          // reproduces the same folds for the hold-out evaluation.
          auto fold_rng = rng;
          const auto estimate = kfold_cv(labeled, est.k, spec.classifier, rng, cv_options(est));
          const auto folds = assign_folds(labeled.size(), est.k, fold_rng);

          double holdout_accuracy = 0.0;
          for (int f = 0; f < est.k; ++f) {
            std::vector<LabeledSample> train;
            for (std::size_t i = 0; i < labeled.size(); ++i)
              if (folds[i] != f) train.push_back(labeled[i]);
            holdout_accuracy += accuracy_on(fit(std::move(train), spec.classifier), holdout);
          }
          holdout_accuracy /= est.k;
          records.push_back(make_record(spec, rep, spec.samplers[s], spec.budgets[b], est.label(), estimate,
                                        holdout_accuracy, elapsed_ms(start)));
        }
      }
    }
    return records;
  });
}

std::vector<LabeledSample> acquisition_sequence(const ExperimentSpec& spec, std::size_t repetition,
                                                std::size_t sampler_index) {
  auto rng = derive_substream(spec.master_seed, {index(repetition), index(sampler_index), stage::kAcquire});
  return draw_labeled(spec.task, spec.samplers.at(sampler_index).distribution, spec.budgets.back(), rng);
}

std::vector<RunRecord> run_estimator_comparison(const ExperimentSpec& spec, const RunOptions& options) {
  require_scenario(spec, Scenario::EstimatorComparison);
  const std::uint64_t seed = spec.master_seed;
  using M = EstimatorSpec::Method;

  return for_each_repetition(spec.repetitions, options.workers, [&](std::size_t rep) {
    std::vector<RunRecord> records;
    for (std::size_t s = 0; s < spec.samplers.size(); ++s) {
      const auto sequence = acquisition_sequence(spec, rep, s);
      auto pool_rng = derive_substream(seed, {index(rep), index(s), stage::kPool});
      const auto pool = draw_unlabeled(spec.task, spec.pool_size, pool_rng);

      for (std::size_t b = 0; b < spec.budgets.size(); ++b) {
        const std::span<const LabeledSample> prefix(sequence.data(), spec.budgets[b]);
        const ParzenModel model = fit({prefix.begin(), prefix.end()}, spec.classifier);
        auto tb_rng = derive_substream(seed, {index(rep), index(s), index(b), stage::kTrueBaseline});
        const double tb = true_baseline(model, spec.task, spec.true_eval_size, tb_rng).point_value();

        for (std::size_t e = 0; e < spec.estimators.size(); ++e) {
          const auto& est = spec.estimators[e];
          const auto start = Clock::now();
          auto rng = derive_substream(seed, {index(rep), index(s), index(b), stage::kEstimator, index(e)});
          PerformanceEstimate estimate = [&] {
            switch (est.method) {
              case M::SubsampleBaseline:
                return subsample_baseline(model, spec.task, spec.budgets[b], spec.subsample_reps, rng);
              case M::GeneralizationError:
                return generalization_error_estimate(model, pool);
              case M::Cv:
              case M::ReweightedCv:
                return kfold_cv(prefix, est.k, spec.classifier, rng, cv_options(est));
              case M::SelfLabelCv:
                return self_label_cv(prefix, pool, est.k, spec.classifier, rng);
              case M::Probabilistic:
                return probabilistic_performance(prefix, pool, spec.classifier.bandwidth, est.nearby);
            }
            throw std::logic_error("unhandled estimator");
          }();
          records.push_back(make_record(spec, rep, spec.samplers[s], spec.budgets[b], est.label(), estimate, tb,
                                        elapsed_ms(start)));
        }
      }
    }
    return records;
  });
}

}  // namespace alperf
