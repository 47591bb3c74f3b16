#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "alperf/config.hpp"

using namespace alperf;

namespace {

std::string rejection(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::vector<std::string>& list, const std::string& item) {
  return std::find(list.begin(), list.end(), item) != list.end();
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("a minimal config is completed with recorded defaults") {
    const auto parsed = parse_config(R"({"scenario": "cv-folds"})");
    CHECK(parsed.spec.scenario == Scenario::CvFolds);
    CHECK(parsed.spec.master_seed == 0);
    CHECK(parsed.spec.budgets == builtin_spec("fig3").budgets);
    CHECK(contains(parsed.defaults_applied, "master_seed"));
    CHECK(contains(parsed.defaults_applied, "budgets"));
    CHECK_FALSE(contains(parsed.defaults_applied, "scenario"));

    const auto empty = parse_config("{}");
    CHECK(empty.spec.scenario == Scenario::EstimatorComparison);
    CHECK(contains(empty.defaults_applied, "scenario"));
  }

  TEST_CASE("explicit values override defaults") {
    const auto parsed = parse_config(R"({
      "scenario": "estimator-comparison", "master_seed": 9, "budgets": [5, 15],
      "classifier": {"bandwidth": 0.4},
      "samplers": [{"kind": "data-marginal"}, {"kind": "symmetric-mixture", "d": 0.5}],
      "estimators": [{"name": "reweighted-cv", "params": {"k": 5, "weight_cap": 20}},
                     {"name": "probabilistic", "params": {"nearby": "hard"}}]
    })");
    const auto& spec = parsed.spec;
    CHECK(spec.master_seed == 9);
    CHECK(spec.budgets == std::vector<std::size_t>{5, 15});
    CHECK(spec.classifier.bandwidth == 0.4);
    CHECK(contains(parsed.defaults_applied, "classifier.epsilon"));
    REQUIRE(spec.samplers.size() == 2);
    CHECK(spec.samplers[0].id == "unbiased");
    CHECK(spec.samplers[1].distribution.d == 0.5);
    REQUIRE(spec.estimators.size() == 2);
    CHECK(spec.estimators[0].label() == "reweighted-cv-k5-cap20");
    CHECK(spec.estimators[1].nearby == NearbyCount::Hard);
  }

  TEST_CASE("invalid values are rejected with the field and constraint") {
    CHECK(rejection(R"({"classifier": {"bandwidth": -1}})").find("bandwidth>0") != std::string::npos);
    CHECK(rejection(R"({"budgets": [30, 10]})").find("strictly increasing") != std::string::npos);
    CHECK(rejection(R"({"budget": [30]})").find("unknown key") != std::string::npos);
    CHECK(rejection(R"({"classifier": {"width": 1}})").find("classifier.width") != std::string::npos);
    CHECK(rejection(R"({"scenario": "fig9"})").find("fig9") != std::string::npos);
    CHECK(rejection(R"({"repetitions": 0})").find("repetitions") != std::string::npos);
    CHECK(rejection(R"({"estimators": [{"name": "magic"}]})").find("magic") != std::string::npos);
    CHECK(rejection(R"({"budgets": [2], "estimators": [{"name": "cv", "params": {"k": 3}}]})").find("k") !=
          std::string::npos);
    CHECK_FALSE(rejection("[1, 2]").empty());
  }

  TEST_CASE("malformed JSON reports line and column") {
    const std::string message = rejection("{\n  \"scenario\": \"cv-folds\",\n  oops\n}");
    CHECK(message.find("line 3") != std::string::npos);
    CHECK(message.find("column") != std::string::npos);
  }

  TEST_CASE("serialized specs parse back to the same serialization") {
    for (const auto& name : builtin_names()) {
      const auto json = spec_to_json(builtin_spec(name));
      const auto parsed = parse_config(json.dump());
      CHECK(parsed.defaults_applied.empty());
      CHECK(spec_to_json(parsed.spec) == json);
    }
  }

  TEST_CASE("shipped configs are valid") {
    const std::filesystem::path dir = std::filesystem::path(ALPERF_SOURCE_DIR) / "configs";
    std::size_t seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.path().extension() != ".json") continue;
      std::ifstream file(entry.path());
      std::stringstream text;
      text << file.rdbuf();
      CAPTURE(entry.path().string());
      CHECK_NOTHROW(parse_config(text.str()));
      ++seen;
    }
    CHECK(seen == 4);
  }
}
