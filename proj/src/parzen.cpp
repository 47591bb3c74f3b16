#include "alperf/parzen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace alperf {

double gaussian_kernel(double a, double b, double bandwidth) {
  const double delta = a - b;
  const double exponent = -(delta * delta) / (2.0 * bandwidth * bandwidth);
  return std::exp(std::max(exponent, -700.0));
}

ParzenModel fit(std::vector<LabeledSample> training, const ClassifierConfig& config) {
  if (!(config.bandwidth > 0.0) || !std::isfinite(config.bandwidth))
    throw std::invalid_argument("classifier: bandwidth must be > 0");
  if (!(config.prior_weight >= 0.0) || !std::isfinite(config.prior_weight))
    throw std::invalid_argument("classifier: prior weight must be >= 0");
  if (config.class_count < 2) throw std::invalid_argument("classifier: class count must be >= 2");
  for (std::size_t i = 0; i < training.size(); ++i) {
    if (training[i].y < 1 || training[i].y > config.class_count)
      throw std::invalid_argument("classifier: label " + std::to_string(training[i].y) +
                                  " of training sample " + std::to_string(i) + " is outside 1.." +
                                  std::to_string(config.class_count));
  }
  return ParzenModel(std::move(training), config);
}

KernelStats ParzenModel::kernel_stats(double x) const {
  KernelStats stats;
  stats.per_class_mass.assign(static_cast<std::size_t>(config_.class_count), 0.0);
  for (const auto& s : training_) stats.per_class_mass[s.y - 1] += gaussian_kernel(x, s.x, config_.bandwidth);
  for (double m : stats.per_class_mass) stats.total_mass += m;
  return stats;
}

Posterior ParzenModel::posterior(double x) const {
  const KernelStats stats = kernel_stats(x);
  const double classes = static_cast<double>(config_.class_count);
  const double denominator = stats.total_mass + classes * config_.prior_weight;
  Posterior out;
  if (!(denominator > 0.0)) {
    out.probabilities.assign(stats.per_class_mass.size(), 1.0 / classes);
    out.degenerate = true;
    return out;
  }
  out.probabilities.reserve(stats.per_class_mass.size());
  for (double m : stats.per_class_mass) out.probabilities.push_back((m + config_.prior_weight) / denominator);
  return out;
}

int ParzenModel::predict(double x) const { return argmax_class(posterior(x).probabilities); }

int argmax_class(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return static_cast<int>(best) + 1;
}

double weighted_accuracy(std::span<const std::uint8_t> correct, std::optional<std::span<const double>> weights) {
  if (correct.empty()) throw std::invalid_argument("no evaluation instances");
  if (!weights) {
    const auto hits = std::count_if(correct.begin(), correct.end(), [](std::uint8_t c) { return c != 0; });
    return static_cast<double>(hits) / static_cast<double>(correct.size());
  }
  if (weights->size() != correct.size())
    throw std::invalid_argument("accuracy: weights and evaluation set differ in length");
  double hit = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < correct.size(); ++i) {
    const double w = (*weights)[i];
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("accuracy: weights must be finite and >= 0");
    total += w;
    if (correct[i] != 0) hit += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("accuracy: weights sum to zero");
  return hit / total;
}

double accuracy_on(const ParzenModel& model, std::span<const LabeledSample> eval,
                   std::optional<std::span<const double>> weights) {
  if (eval.empty()) throw std::invalid_argument("no evaluation instances");
  std::vector<std::uint8_t> hits(eval.size());
  for (std::size_t i = 0; i < eval.size(); ++i) hits[i] = model.predict(eval[i].x) == eval[i].y;
  return weighted_accuracy(hits, weights);
}

}  // namespace alperf
