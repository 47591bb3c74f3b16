#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "alperf/estimators.hpp"
#include "alperf/parzen.hpp"
#include "alperf/summary.hpp"
#include "alperf/synth_data.hpp"

namespace alperf {

enum class Scenario { EvalSizeDistribution, CvFolds, BiasSweep, EstimatorComparison };

std::string to_string(Scenario scenario);
/// Throws std::invalid_argument for an unknown name.
Scenario scenario_from_string(const std::string& name);

struct NamedSampler {
  std::string id;
  SamplingDistribution distribution;
};

/// One estimator with its parameters.
struct EstimatorSpec {
  enum class Method { SubsampleBaseline, GeneralizationError, Cv, ReweightedCv, SelfLabelCv, Probabilistic };

  Method method = Method::Cv;
  int k = 3;
  std::optional<double> weight_cap;
  NearbyCount nearby = NearbyCount::Kernel;

  static EstimatorSpec of(Method method, int k = 3) {
    EstimatorSpec e;
    e.method = method;
    e.k = k;
    return e;
  }

  /// Name used in records, e.g. "cv-k3" or "probabilistic".
  std::string label() const;
  bool uses_folds() const { return method == Method::Cv || method == Method::ReweightedCv || method == Method::SelfLabelCv; }
};

std::string method_name(EstimatorSpec::Method method);
/// Throws std::invalid_argument for an unknown name.
EstimatorSpec::Method method_from_string(const std::string& name);

/// Full description of one experiment.
///
/// How the shared fields are read per scenario:
///  - eval-size-distribution: one classifier fit on train_size unbiased labels;
///    budgets are the evaluation-set sizes of the subsample baseline.
///  - cv-folds: per budget one fixed labeled set drawn from each sampler;
///    repetitions re-randomize the fold assignment of every listed CV estimator.
///  - bias-sweep: per repetition, sampler and budget a fresh labeled set; each
///    CV estimator is paired with the hold-out accuracy of its fold models.
///  - estimator-comparison: per repetition and sampler one acquisition sequence
///    of max(budgets) labels; each budget uses its prefix.
struct ExperimentSpec {
  Scenario scenario = Scenario::EstimatorComparison;
  TaskModel task = TaskModel::default_task();
  std::vector<NamedSampler> samplers;
  std::vector<std::size_t> budgets;
  std::size_t repetitions = 200;
  std::size_t pool_size = 1000;
  std::size_t true_eval_size = 2000;
  std::size_t subsample_reps = 100;
  std::size_t train_size = 100;
  ClassifierConfig classifier;
  std::vector<EstimatorSpec> estimators;
  std::uint64_t master_seed = 0;

  /// Throws std::invalid_argument naming the field and the violated constraint.
  void validate() const;
};

/// Replication defaults for a scenario (samplers, budgets, repetitions, estimators).
ExperimentSpec default_spec(Scenario scenario);

/// Built-in catalog: "fig2", "fig3", "fig5", "fig6".
std::vector<std::string> builtin_names();
ExperimentSpec builtin_spec(const std::string& name);
std::string builtin_description(const std::string& name);

/// Samplers for a d sweep, ids "d=<value>".
std::vector<NamedSampler> bias_sweep_samplers(const std::vector<double>& d_grid, double component_std = 0.25);
std::vector<double> default_d_grid();

struct RunRecord {
  std::string scenario;
  std::size_t repetition = 0;
  std::string sampler;
  std::size_t budget = 0;
  std::string estimator;
  EstimateSummary estimate;
  double true_baseline = 0.0;
  double wall_ms = 0.0;
};

/// The labeled acquisition sequence (max(budgets) long) of one repetition and
/// sampler in the estimator-comparison scenario; budget B uses its first B entries.
std::vector<LabeledSample> acquisition_sequence(const ExperimentSpec& spec, std::size_t repetition,
                                                std::size_t sampler_index);

struct RunOptions {
  unsigned workers = 1;
};

/// Runs the scenario named by spec.scenario. Records come back ordered by
/// (repetition, sampler, budget, estimator) in spec order, independent of the
/// worker count.
std::vector<RunRecord> run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

std::vector<RunRecord> run_eval_size_distribution(const ExperimentSpec& spec, const RunOptions& options = {});
std::vector<RunRecord> run_cv_folds(const ExperimentSpec& spec, const RunOptions& options = {});
std::vector<RunRecord> run_bias_sweep(const ExperimentSpec& spec, const RunOptions& options = {});
std::vector<RunRecord> run_estimator_comparison(const ExperimentSpec& spec, const RunOptions& options = {});

/// Executes task(rep) for rep in [0, repetitions) on up to `workers` threads and
/// concatenates the results in repetition order. The first exception thrown by
/// any repetition is rethrown after all workers finish.
std::vector<RunRecord> for_each_repetition(std::size_t repetitions, unsigned workers,
                                           const std::function<std::vector<RunRecord>(std::size_t)>& task);

}  // namespace alperf
