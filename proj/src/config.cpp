#include "alperf/config.hpp"

#include <cmath>
#include <limits>
#include <set>

namespace alperf {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw ConfigError("config: " + field + ": " + message);
}

void reject_unknown_keys(const json& object, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& item : object.items()) {
    if (!allowed.contains(item.key()))
      fail(where.empty() ? item.key() : where + "." + item.key(), "unknown key");
  }
}

const json& require_object(const json& value, const std::string& field) {
  if (!value.is_object()) fail(field, "must be an object");
  return value;
}

double get_number(const json& value, const std::string& field) {
  if (!value.is_number()) fail(field, "must be a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) fail(field, "must be finite");
  return x;
}

std::uint64_t get_unsigned(const json& value, const std::string& field) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer()) fail(field, "must be >= 0");
  fail(field, "must be a nonnegative integer");
}

std::string get_string(const json& value, const std::string& field) {
  if (!value.is_string()) fail(field, "must be a string");
  return value.get<std::string>();
}

const json& require_array(const json& value, const std::string& field) {
  if (!value.is_array()) fail(field, "must be an array");
  return value;
}

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

TaskModel parse_task(const json& value) {
  require_object(value, "task");
  reject_unknown_keys(value, "task", {"priors", "components"});
  if (!value.contains("priors")) fail("task.priors", "required");
  if (!value.contains("components")) fail("task.components", "required");
  std::vector<double> priors;
  for (const auto& p : require_array(value["priors"], "task.priors")) priors.push_back(get_number(p, "task.priors"));
  std::vector<std::vector<GaussianComponent>> components;
  const auto& per_class = require_array(value["components"], "task.components");
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    const std::string where = "task.components[" + std::to_string(c) + "]";
    std::vector<GaussianComponent> list;
    for (const auto& g : require_array(per_class[c], where)) {
      require_object(g, where);
      reject_unknown_keys(g, where, {"weight", "mean", "std"});
      GaussianComponent component;
      if (g.contains("weight")) component.weight = get_number(g["weight"], where + ".weight");
      if (!g.contains("mean")) fail(where + ".mean", "required");
      component.mean = get_number(g["mean"], where + ".mean");
      if (!g.contains("std")) fail(where + ".std", "required");
      component.std = get_number(g["std"], where + ".std");
      if (!(component.std > 0.0)) fail(where + ".std", "must be > 0");
      list.push_back(component);
    }
    components.push_back(std::move(list));
  }
  try {
    return TaskModel(std::move(priors), std::move(components));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

NamedSampler parse_sampler(const json& value, std::size_t position) {
  const std::string where = "samplers[" + std::to_string(position) + "]";
  require_object(value, where);
  reject_unknown_keys(value, where, {"id", "kind", "d", "std", "priors"});
  if (!value.contains("kind")) fail(where + ".kind", "required");
  const std::string kind = get_string(value["kind"], where + ".kind");
  NamedSampler sampler;
  if (kind == "data-marginal") {
    for (const char* key : {"d", "std", "priors"})
      if (value.contains(key)) fail(where + "." + key, "not used by data-marginal");
    sampler.distribution = SamplingDistribution::data_marginal();
  } else if (kind == "symmetric-mixture") {
    if (!value.contains("d")) fail(where + ".d", "required");
    auto& s = sampler.distribution;
    s.kind = SamplingDistribution::Kind::SymmetricMixture;
    s.d = get_number(value["d"], where + ".d");
    if (value.contains("std")) s.component_std = get_number(value["std"], where + ".std");
    if (!(s.component_std > 0.0)) fail(where + ".std", "must be > 0");
    if (value.contains("priors")) {
      const auto& priors = require_array(value["priors"], where + ".priors");
      if (priors.size() != 2) fail(where + ".priors", "must have exactly two entries");
      s.component_priors = {get_number(priors[0], where + ".priors"), get_number(priors[1], where + ".priors")};
    }
    try {
      s.validate();
    } catch (const std::invalid_argument& e) {
      fail(where, e.what());
    }
  } else {
    fail(where + ".kind", "must be data-marginal or symmetric-mixture");
  }
  sampler.id = value.contains("id") ? get_string(value["id"], where + ".id")
                                    : (kind == "data-marginal" ? std::string("unbiased") : "d=" + value["d"].dump());
  return sampler;
}

EstimatorSpec parse_estimator(const json& value, std::size_t position) {
  const std::string where = "estimators[" + std::to_string(position) + "]";
  require_object(value, where);
  reject_unknown_keys(value, where, {"name", "params"});
  if (!value.contains("name")) fail(where + ".name", "required");
  EstimatorSpec e;
  try {
    e.method = method_from_string(get_string(value["name"], where + ".name"));
  } catch (const std::invalid_argument&) {
    fail(where + ".name", "unknown estimator '" + value["name"].get<std::string>() + "'");
  }
  if (!value.contains("params")) return e;
  const auto& params = require_object(value["params"], where + ".params");
  std::set<std::string> allowed;
  if (e.uses_folds()) allowed.insert("k");
  if (e.method == EstimatorSpec::Method::ReweightedCv) allowed.insert("weight_cap");
  if (e.method == EstimatorSpec::Method::Probabilistic) allowed.insert("nearby");
  reject_unknown_keys(params, where + ".params", allowed);
  if (params.contains("k")) {
    const auto k = get_unsigned(params["k"], where + ".params.k");
    if (k < 2 || k > static_cast<std::uint64_t>(std::numeric_limits<int>::max()))
      fail(where + ".params.k", "must be >= 2");
    e.k = static_cast<int>(k);
  }
  if (params.contains("weight_cap")) {
    e.weight_cap = get_number(params["weight_cap"], where + ".params.weight_cap");
    if (!(*e.weight_cap > 0.0)) fail(where + ".params.weight_cap", "must be > 0");
  }
  if (params.contains("nearby")) {
    const std::string mode = get_string(params["nearby"], where + ".params.nearby");
    if (mode == "kernel") {
      e.nearby = NearbyCount::Kernel;
    } else if (mode == "hard") {
      e.nearby = NearbyCount::Hard;
    } else {
      fail(where + ".params.nearby", "must be kernel or hard");
    }
  }
  return e;
}

std::size_t get_count(const json& doc, const char* key) {
  const auto v = get_unsigned(doc[key], key);
  return static_cast<std::size_t>(v);
}

}  // namespace

ParsedConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_and_column(text, e.byte);
    throw ConfigError("config: malformed JSON at line " + std::to_string(line) + ", column " +
                      std::to_string(column) + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");
  reject_unknown_keys(doc, "",
                      {"scenario", "master_seed", "task", "samplers", "d_grid", "classifier", "estimators", "budgets",
                       "repetitions", "pool_size", "true_eval_size", "subsample_reps", "train_size"});

  ParsedConfig out;
  auto defaulted = [&](const char* key) {
    if (doc.contains(key)) return false;
    out.defaults_applied.emplace_back(key);
    return true;
  };

  Scenario scenario = Scenario::EstimatorComparison;
  if (!defaulted("scenario")) {
    try {
      scenario = scenario_from_string(get_string(doc["scenario"], "scenario"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  ExperimentSpec spec = default_spec(scenario);
  spec.master_seed = 0;

  if (!defaulted("master_seed")) spec.master_seed = get_unsigned(doc["master_seed"], "master_seed");
  if (!defaulted("task")) spec.task = parse_task(doc["task"]);

  if (doc.contains("samplers") && doc.contains("d_grid")) fail("d_grid", "cannot be combined with samplers");
  if (doc.contains("d_grid")) {
    std::vector<double> grid;
    for (const auto& d : require_array(doc["d_grid"], "d_grid")) grid.push_back(get_number(d, "d_grid"));
    if (grid.empty()) fail("d_grid", "must be nonempty");
    spec.samplers = bias_sweep_samplers(grid);
  } else if (!defaulted("samplers")) {
    spec.samplers.clear();
    const auto& list = require_array(doc["samplers"], "samplers");
    for (std::size_t i = 0; i < list.size(); ++i) spec.samplers.push_back(parse_sampler(list[i], i));
  }

  if (!defaulted("classifier")) {
    const auto& c = require_object(doc["classifier"], "classifier");
    reject_unknown_keys(c, "classifier", {"bandwidth", "epsilon"});
    if (c.contains("bandwidth")) {
      spec.classifier.bandwidth = get_number(c["bandwidth"], "classifier.bandwidth");
    } else {
      out.defaults_applied.emplace_back("classifier.bandwidth");
    }
    if (c.contains("epsilon")) {
      spec.classifier.prior_weight = get_number(c["epsilon"], "classifier.epsilon");
    } else {
      out.defaults_applied.emplace_back("classifier.epsilon");
    }
    if (!(spec.classifier.bandwidth > 0.0)) fail("classifier.bandwidth", "must satisfy bandwidth>0");
    if (!(spec.classifier.prior_weight >= 0.0)) fail("classifier.epsilon", "must satisfy epsilon>=0");
  }
  spec.classifier.class_count = spec.task.class_count();

  if (!defaulted("estimators")) {
    spec.estimators.clear();
    const auto& list = require_array(doc["estimators"], "estimators");
    for (std::size_t i = 0; i < list.size(); ++i) spec.estimators.push_back(parse_estimator(list[i], i));
  }

  if (!defaulted("budgets")) {
    spec.budgets.clear();
    for (const auto& b : require_array(doc["budgets"], "budgets")) spec.budgets.push_back(get_unsigned(b, "budgets"));
    if (spec.budgets.empty()) fail("budgets", "must be nonempty");
    for (std::size_t i = 1; i < spec.budgets.size(); ++i)
      if (spec.budgets[i] <= spec.budgets[i - 1]) fail("budgets", "must be strictly increasing");
  }
  if (!defaulted("repetitions")) spec.repetitions = get_count(doc, "repetitions");
  if (!defaulted("pool_size")) spec.pool_size = get_count(doc, "pool_size");
  if (!defaulted("true_eval_size")) spec.true_eval_size = get_count(doc, "true_eval_size");
  if (!defaulted("subsample_reps")) spec.subsample_reps = get_count(doc, "subsample_reps");
  if (!defaulted("train_size")) spec.train_size = get_count(doc, "train_size");

  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  out.spec = std::move(spec);
  return out;
}

nlohmann::ordered_json spec_to_json(const ExperimentSpec& spec) {
  using ojson = nlohmann::ordered_json;
  ojson doc;
  doc["scenario"] = to_string(spec.scenario);
  doc["master_seed"] = spec.master_seed;

  ojson task;
  task["priors"] = spec.task.class_priors();
  task["components"] = ojson::array();
  for (const auto& list : spec.task.class_components()) {
    ojson comps = ojson::array();
    for (const auto& g : list) comps.push_back({{"weight", g.weight}, {"mean", g.mean}, {"std", g.std}});
    task["components"].push_back(comps);
  }
  doc["task"] = task;

  doc["samplers"] = ojson::array();
  for (const auto& s : spec.samplers) {
    ojson entry;
    entry["id"] = s.id;
    if (s.distribution.kind == SamplingDistribution::Kind::DataMarginal) {
      entry["kind"] = "data-marginal";
    } else {
      entry["kind"] = "symmetric-mixture";
      entry["d"] = s.distribution.d;
      entry["std"] = s.distribution.component_std;
      entry["priors"] = {s.distribution.component_priors[0], s.distribution.component_priors[1]};
    }
    doc["samplers"].push_back(entry);
  }

  doc["classifier"] = {{"bandwidth", spec.classifier.bandwidth}, {"epsilon", spec.classifier.prior_weight}};

  doc["estimators"] = ojson::array();
  for (const auto& e : spec.estimators) {
    ojson entry;
    entry["name"] = method_name(e.method);
    ojson params = ojson::object();
    if (e.uses_folds()) params["k"] = e.k;
    if (e.weight_cap) params["weight_cap"] = *e.weight_cap;
    if (e.method == EstimatorSpec::Method::Probabilistic)
      params["nearby"] = e.nearby == NearbyCount::Kernel ? "kernel" : "hard";
    if (!params.empty()) entry["params"] = params;
    doc["estimators"].push_back(entry);
  }

  doc["budgets"] = spec.budgets;
  doc["repetitions"] = spec.repetitions;
  doc["pool_size"] = spec.pool_size;
  doc["true_eval_size"] = spec.true_eval_size;
  doc["subsample_reps"] = spec.subsample_reps;
  doc["train_size"] = spec.train_size;
  return doc;
}

}  // namespace alperf
