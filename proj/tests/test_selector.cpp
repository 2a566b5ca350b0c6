#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "tempsweep/classifier.hpp"
#include "tempsweep/errors.hpp"
#include "tempsweep/mock_server.hpp"
#include "tempsweep/selector.hpp"

using namespace tempsweep;
namespace fs = std::filesystem;

namespace {

const char* kDataDir = TEMPSWEEP_DATA_DIR;

struct ThrowingClassifier : AbilityClassifier {
  AbilityPrediction classify(const std::string&) const override {
    throw ClassificationError("scripted failure");
  }
};

struct FixedClassifier : AbilityClassifier {
  Ability label;
  explicit FixedClassifier(Ability a) : label(a) {}
  AbilityPrediction classify(const std::string&) const override {
    return {label, 1.0, "fixed"};
  }
};

}  // namespace

TEST_CASE("argmax agrees with a brute-force scan on random tables") {
  std::mt19937 rng(7321);
  std::uniform_real_distribution<double> mean_dist(0.0, 1.0);

  for (int trial = 0; trial < 1000; ++trial) {
    // a random subset of a 0.1-spaced grid, 3..9 cells
    std::vector<double> pool(20);
    for (int i = 0; i < 20; ++i) pool[i] = 0.1 * (i + 1);
    std::shuffle(pool.begin(), pool.end(), rng);
    const std::size_t cells = 3 + rng() % 7;
    std::vector<double> temps(pool.begin(), pool.begin() + cells);
    std::sort(temps.begin(), temps.end());

    PerformanceTable table;
    std::vector<double> means;
    for (double t : temps) {
      means.push_back(mean_dist(rng));
      table.set("m", Ability::MT, t, {means.back(), 0.0, 3});
    }

    std::size_t best = 0;
    for (std::size_t j = 1; j < means.size(); ++j)
      if (means[j] > means[best]) best = j;

    CHECK(argmax_temperature(table, "m", Ability::MT) == temps[best]);
  }
}

TEST_CASE("equal means resolve to the lowest grid temperature") {
  PerformanceTable table;
  for (double t : {0.1, 0.4, 0.7, 1.0}) table.set("m", Ability::CT, t, {0.5, 0.01, 3});
  CHECK(argmax_temperature(table, "m", Ability::CT) == 0.1);

  // a two-way tie at the maximum keeps the colder temperature
  table.set("m", Ability::CT, 0.4, {0.9, 0.01, 3});
  table.set("m", Ability::CT, 1.0, {0.9, 0.01, 3});
  CHECK(argmax_temperature(table, "m", Ability::CT) == 0.4);
}

TEST_CASE("scaling every mean leaves the argmax unchanged") {
  std::mt19937 rng(991);
  std::uniform_real_distribution<double> mean_dist(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    PerformanceTable table, scaled;
    for (int i = 0; i < 7; ++i) {
      const double t = 0.1 + 0.3 * i;
      const double mean = mean_dist(rng);
      table.set("m", Ability::IF, t, {mean, 0.0, 3});
      scaled.set("m", Ability::IF, t, {3.0 * mean, 0.0, 3});
    }
    CHECK(argmax_temperature(table, "m", Ability::IF) ==
          argmax_temperature(scaled, "m", Ability::IF));
  }
}

TEST_CASE("missing cells raise CoverageError naming them") {
  PerformanceTable table;
  for (double t : {0.1, 0.4, 0.7}) table.set("m", Ability::MT, t, {0.5, 0.0, 3});
  table.set("m", Ability::CT, 0.1, {0.5, 0.0, 3});
  table.set("m", Ability::CT, 0.4, {0.5, 0.0, 3});
  // CT lacks T=0.7 although the table's grid includes it

  CHECK(argmax_temperature(table, "m", Ability::MT) == 0.1);
  try {
    argmax_temperature(table, "m", Ability::CT);
    FAIL("expected CoverageError");
  } catch (const CoverageError& e) {
    REQUIRE(e.missing_cells().size() == 1);
    CHECK(e.missing_cells()[0] == "m/CT/T=0.7");
  }

  // an absent series is missing every grid cell
  try {
    argmax_temperature(table, "other", Ability::MT);
    FAIL("expected CoverageError");
  } catch (const CoverageError& e) {
    CHECK(e.missing_cells().size() == 3);
  }

  CHECK_THROWS_AS(argmax_temperature(PerformanceTable{}, "m", Ability::MT), CoverageError);
}

TEST_CASE("select_temperature routes the prompt through the classifier") {
  const auto table = load_table_csv(fs::path(kDataDir) / "fixtures" / "selector_table.csv");
  const auto classifier =
      LocalCentroidClassifier::train_from_file(fs::path(kDataDir) / "exemplars.jsonl");

  const auto result = select_temperature("Translate this paragraph into French: the harbor was quiet.",
                                         "mock-1b", table, classifier);
  CHECK(result.prediction.label == Ability::MT);
  CHECK(result.prediction.source == "local-baseline");
  CHECK(result.t_star == 0.4);

  // every ability row in the fixture peaks at 0.4, so routing noise cannot
  // change the selected temperature
  for (const auto& [model, ability] : table.series())
    CHECK(argmax_temperature(table, model, ability) == 0.4);
}

TEST_CASE("selected temperatures beat the fixed default on the rigged endpoint") {
  MockServerOptions options;
  options.rigged = true;  // canonical answer with p=0.9 at T*=0.4, p=0.4 elsewhere
  MockServer server(options);
  server.start();

  EndpointConfig config;
  config.base_url = server.url();
  config.backoff_initial_ms = 1;
  ChatClient client(config);

  const auto benchmark =
      load_dataset(fs::path(kDataDir) / "fixtures" / "selector_icl.jsonl", Ability::ICL);
  REQUIRE(benchmark.size() == 20);
  const auto table = load_table_csv(fs::path(kDataDir) / "fixtures" / "selector_table.csv");
  const auto classifier =
      LocalCentroidClassifier::train_from_file(fs::path(kDataDir) / "exemplars.jsonl");

  const auto eval = evaluate_selector(benchmark, "mock-1b", table, classifier, client);
  CHECK(eval.fallbacks == 0);
  CHECK(eval.acc_default == doctest::Approx(20.0 / 60.0));
  CHECK(eval.acc_selected == doctest::Approx(56.0 / 60.0));
  CHECK(eval.acc_selected - eval.acc_default >= 0.4);
  // 20 prompts x 3 repetitions x 2 arms
  CHECK(server.request_count() == 120);

  // the whole comparison is deterministic: rerunning reproduces it exactly
  const auto again = evaluate_selector(benchmark, "mock-1b", table, classifier, client);
  CHECK(again.acc_default == eval.acc_default);
  CHECK(again.acc_selected == eval.acc_selected);
}

TEST_CASE("classification failures fall back to the default temperature") {
  MockServerOptions options;
  options.rigged = true;
  MockServer server(options);
  server.start();

  EndpointConfig config;
  config.base_url = server.url();
  config.backoff_initial_ms = 1;
  ChatClient client(config);

  auto benchmark =
      load_dataset(fs::path(kDataDir) / "fixtures" / "selector_icl.jsonl", Ability::ICL);
  benchmark.resize(4);
  const auto table = load_table_csv(fs::path(kDataDir) / "fixtures" / "selector_table.csv");

  const auto eval =
      evaluate_selector(benchmark, "mock-1b", table, ThrowingClassifier{}, client);
  CHECK(eval.fallbacks == 4);
  // both arms ran at the same temperature with the same seeds
  CHECK(eval.acc_selected == eval.acc_default);
}

TEST_CASE("evaluate_selector validates its inputs") {
  PerformanceTable table;
  table.set("m", Ability::ICL, 0.4, {0.9, 0.0, 3});
  EndpointConfig config;
  config.base_url = "http://127.0.0.1:9";  // never contacted
  ChatClient client(config);
  FixedClassifier classifier(Ability::ICL);

  CHECK_THROWS_AS(evaluate_selector({}, "m", table, classifier, client), InvalidInputError);

  std::vector<PromptInstance> benchmark(1);
  benchmark[0].prompt_id = "x";
  benchmark[0].ability = Ability::ICL;
  benchmark[0].prompt_text = "p";
  benchmark[0].gold = IclGold{"alpha"};
  CHECK_THROWS_AS(evaluate_selector(benchmark, "m", table, classifier, client, 1.0, 0),
                  InvalidInputError);

  // a benchmark prompt without a gold label cannot be scored
  std::vector<PromptInstance> unlabeled(1);
  unlabeled[0].prompt_id = "y";
  unlabeled[0].ability = Ability::MT;
  unlabeled[0].prompt_text = "translate";
  unlabeled[0].gold = MtGold{{"ref"}};
  MockServerOptions options;
  options.rigged = true;
  MockServer server(options);
  server.start();
  EndpointConfig live;
  live.base_url = server.url();
  CHECK_THROWS_AS(
      evaluate_selector(unlabeled, "m", PerformanceTable{}, ThrowingClassifier{}, ChatClient(live)),
      InvalidInputError);
}

TEST_CASE("selection result carries the classifier prediction") {
  PerformanceTable table;
  for (double t : {0.1, 0.4}) {
    table.set("m", Ability::CT, t, {t == 0.4 ? 0.9 : 0.2, 0.0, 3});
    table.set("m", Ability::MT, t, {t == 0.1 ? 0.8 : 0.3, 0.0, 3});
  }
  CHECK(select_temperature("p", "m", table, FixedClassifier(Ability::CT)).t_star == 0.4);
  CHECK(select_temperature("p", "m", table, FixedClassifier(Ability::MT)).t_star == 0.1);
  const auto result = select_temperature("p", "m", table, FixedClassifier(Ability::CT));
  CHECK(result.prediction.source == "fixed");
  CHECK(result.prediction.label == Ability::CT);
}
