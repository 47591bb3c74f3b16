#include "alperf/synth_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace alperf {

namespace {

constexpr double kSumTolerance = 1e-12;

double gaussian_pdf(double x, double mean, double std) {
  return normal_pdf((x - mean) / std) / std;
}

// Index drawn from a discrete distribution given by probabilities summing to 1.
std::size_t draw_index(const std::vector<double>& probs, double u) {
  double cumulative = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    cumulative += probs[i];
    if (u < cumulative) return i;
  }
  return probs.size() - 1;
}

}  // namespace

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

TaskModel::TaskModel(std::vector<double> class_priors,
                     std::vector<std::vector<GaussianComponent>> class_components)
    : priors_(std::move(class_priors)), components_(std::move(class_components)) {
  if (priors_.size() < 2) throw std::invalid_argument("task: at least two classes required");
  if (components_.size() != priors_.size())
    throw std::invalid_argument("task: one component list per class required");
  for (double p : priors_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("task: priors must be >= 0");
  }
  if (std::abs(std::accumulate(priors_.begin(), priors_.end(), 0.0) - 1.0) > kSumTolerance)
    throw std::invalid_argument("task: priors must sum to 1");
  for (std::size_t c = 0; c < components_.size(); ++c) {
    const auto& comps = components_[c];
    if (comps.empty()) throw std::invalid_argument("task: class " + std::to_string(c + 1) + " has no components");
    double total = 0.0;
    for (const auto& g : comps) {
      if (!(g.std > 0.0) || !std::isfinite(g.std) || !std::isfinite(g.mean))
        throw std::invalid_argument("task: component std must be > 0");
      if (!(g.weight >= 0.0)) throw std::invalid_argument("task: component weights must be >= 0");
      total += g.weight;
    }
    if (std::abs(total - 1.0) > kSumTolerance)
      throw std::invalid_argument("task: component weights of class " + std::to_string(c + 1) + " must sum to 1");
  }
}

TaskModel TaskModel::default_task() { return symmetric_pair(1.5); }

TaskModel TaskModel::symmetric_pair(double separation, double std) {
  return TaskModel({0.5, 0.5}, {{{1.0, -separation, std}}, {{1.0, separation, std}}});
}

double TaskModel::class_density(int y, double x) const {
  double density = 0.0;
  for (const auto& g : components_.at(static_cast<std::size_t>(y - 1)))
    density += g.weight * gaussian_pdf(x, g.mean, g.std);
  return density;
}

double TaskModel::marginal_density(double x) const {
  double density = 0.0;
  for (int y = 1; y <= class_count(); ++y) density += priors_[y - 1] * class_density(y, x);
  return density;
}

double TaskModel::sample_feature(RandomStream& rng) const {
  const auto& comps = components_[draw_index(priors_, uniform01(rng))];
  std::vector<double> weights(comps.size());
  std::transform(comps.begin(), comps.end(), weights.begin(), [](const auto& g) { return g.weight; });
  const auto& g = comps[draw_index(weights, uniform01(rng))];
  return std::normal_distribution<double>(g.mean, g.std)(rng);
}

SamplingDistribution SamplingDistribution::data_marginal() { return {}; }

SamplingDistribution SamplingDistribution::symmetric_mixture(double d, double component_std,
                                                             double prior_negative) {
  SamplingDistribution s;
  s.kind = Kind::SymmetricMixture;
  s.d = d;
  s.component_std = component_std;
  s.component_priors = {prior_negative, 1.0 - prior_negative};
  s.validate();
  return s;
}

void SamplingDistribution::validate() const {
  if (kind == Kind::DataMarginal) return;
  if (!(component_std > 0.0) || !std::isfinite(component_std))
    throw std::invalid_argument("sampler: std must be > 0");
  if (!std::isfinite(d)) throw std::invalid_argument("sampler: d must be finite");
  if (component_priors[0] < 0.0 || component_priors[1] < 0.0 ||
      std::abs(component_priors[0] + component_priors[1] - 1.0) > kSumTolerance)
    throw std::invalid_argument("sampler: priors must be nonnegative and sum to 1");
}

std::string SamplingDistribution::describe() const {
  if (kind == Kind::DataMarginal) return "data-marginal";
  std::ostringstream out;
  out << "symmetric-mixture(d=" << d << ", std=" << component_std << ")";
  return out.str();
}

std::vector<double> bayes_posterior(const TaskModel& model, double x) {
  const int classes = model.class_count();
  std::vector<double> joint(static_cast<std::size_t>(classes));
  double total = 0.0;
  for (int y = 1; y <= classes; ++y) {
    joint[y - 1] = model.class_priors()[y - 1] * model.class_density(y, x);
    total += joint[y - 1];
  }
  if (!(total > 0.0)) return model.class_priors();
  for (double& p : joint) p /= total;
  return joint;
}

double sampling_density(const SamplingDistribution& s, const TaskModel& model, double x) {
  if (s.kind == SamplingDistribution::Kind::DataMarginal) return model.marginal_density(x);
  return s.component_priors[0] * gaussian_pdf(x, -s.d, s.component_std) +
         s.component_priors[1] * gaussian_pdf(x, s.d, s.component_std);
}

int oracle_label(const TaskModel& model, double x, RandomStream& rng) {
  return static_cast<int>(draw_index(bayes_posterior(model, x), uniform01(rng))) + 1;
}

std::vector<LabeledSample> draw_labeled(const TaskModel& model, const SamplingDistribution& s,
                                        std::size_t n, RandomStream& rng) {
  std::vector<LabeledSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = 0.0;
    if (s.kind == SamplingDistribution::Kind::DataMarginal) {
      x = model.sample_feature(rng);
    } else {
      const double center = uniform01(rng) < s.component_priors[0] ? -s.d : s.d;
      x = std::normal_distribution<double>(center, s.component_std)(rng);
    }
    const int y = oracle_label(model, x, rng);
    out.push_back({x, y, sampling_density(s, model, x)});
  }
  return out;
}

std::vector<UnlabeledSample> draw_unlabeled(const TaskModel& model, std::size_t n, RandomStream& rng) {
  std::vector<UnlabeledSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back({model.sample_feature(rng)});
  return out;
}

double bayes_accuracy(const TaskModel& model) {
  auto best_joint = [&model](double x) {
    double best = 0.0;
    for (int y = 1; y <= model.class_count(); ++y)
      best = std::max(best, model.class_priors()[y - 1] * model.class_density(y, x));
    return best;
  };
  double residual = 0.0;
  const double accuracy = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      best_joint, kSupportLow, kSupportHigh, 25, 1e-13, &residual);
  if (!(residual <= 1e-9)) {
    std::ostringstream msg;
    msg << "bayes_accuracy: quadrature did not converge (residual " << residual << ")";
    throw std::runtime_error(msg.str());
  }
  return accuracy;
}

}  // namespace alperf
