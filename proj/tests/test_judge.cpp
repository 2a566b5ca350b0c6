#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <functional>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "tempsweep/errors.hpp"
#include "tempsweep/judge.hpp"
#include "tempsweep/perf_table.hpp"

using namespace tempsweep;
namespace fs = std::filesystem;

namespace {

const char* kDataDir = TEMPSWEEP_DATA_DIR;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("tempsweep_jd_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

/// Judge endpoint whose replies come from a script: the handler sees the
/// rendered template and the parsed request, and returns the raw reply text.
class ScriptedJudge {
 public:
  using Handler = std::function<std::string(const std::string& prompt, const nlohmann::json&)>;

  explicit ScriptedJudge(Handler handler) : handler_(std::move(handler)) {
    server_.Post("/v1/chat/completions",
                 [this](const httplib::Request& req, httplib::Response& res) {
                   const auto body = nlohmann::json::parse(req.body);
                   const std::string prompt =
                       body.at("messages").back().value("content", std::string());
                   {
                     std::lock_guard<std::mutex> lock(mutex_);
                     ++calls_;
                     last_body_ = body;
                   }
                   nlohmann::json reply;
                   reply["choices"] = nlohmann::json::array(
                       {{{"message", {{"role", "assistant"}, {"content", handler_(prompt, body)}}}}});
                   res.set_content(reply.dump(), "application/json");
                 });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~ScriptedJudge() {
    server_.stop();
    thread_.join();
  }

  ChatClient client() const {
    EndpointConfig config;
    config.base_url = "http://127.0.0.1:" + std::to_string(port_);
    config.backoff_initial_ms = 1;
    return ChatClient(config);
  }
  int calls() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return calls_;
  }
  nlohmann::json last_body() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return last_body_;
  }

 private:
  Handler handler_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  mutable std::mutex mutex_;
  int calls_ = 0;
  nlohmann::json last_body_;
};

RunRecord if_record() {
  RunRecord record;
  record.prompt_id = "if-1";
  record.model_id = "mock-1b";
  record.ability = Ability::IF;
  record.temperature = 0.7;
  record.repetition_index = 0;
  record.seed = 42;
  record.raw_output = "The object is round. It rolls well.";
  return record;
}

PromptInstance if_instance() {
  PromptInstance instance;
  instance.prompt_id = "if-1";
  instance.ability = Ability::IF;
  instance.prompt_text = "Describe the object in two sentences without the word very";
  instance.gold = IfGold{{"Describes the object.", "Exactly two sentences.",
                          "Does not use the word very.", "Written in English."}};
  return instance;
}

}  // namespace

TEST_CASE("parse_verdict accepts only an unambiguous yes/no token") {
  CHECK(parse_verdict("YES") == true);
  CHECK(parse_verdict("yes.") == true);
  CHECK(parse_verdict("Yes, it does satisfy the requirement.") == true);
  CHECK(parse_verdict("NO") == false);
  CHECK(parse_verdict("no\n") == false);
  CHECK(parse_verdict("The answer is no") == false);

  CHECK(parse_verdict("maybe") == std::nullopt);
  CHECK(parse_verdict("yes and no") == std::nullopt);
  CHECK(parse_verdict("") == std::nullopt);
  // word boundaries: "note"/"eyes" must not count as verdicts
  CHECK(parse_verdict("note the eyes") == std::nullopt);
  CHECK(parse_verdict("I cannot tell") == std::nullopt);
}

TEST_CASE("templates load and render with all placeholders filled") {
  const auto templates = JudgeTemplates::load(fs::path(kDataDir) / "judge_templates");
  const auto rendered = templates.render(
      Ability::IF, {{"prompt", "P-TEXT"}, {"response", "R-TEXT"}, {"question", "Q-TEXT"}});
  CHECK(rendered.find("P-TEXT") != std::string::npos);
  CHECK(rendered.find("R-TEXT") != std::string::npos);
  CHECK(rendered.find("Q-TEXT") != std::string::npos);
  CHECK(rendered.find('{') == std::string::npos);

  const auto cr = templates.render(Ability::CR, {{"prompt", "q"},
                                                {"response", "r"},
                                                {"options", "- a\n- b\n"},
                                                {"answer", "a"}});
  CHECK(cr.find("- a") != std::string::npos);
  CHECK_THROWS_AS(templates.for_ability(Ability::MT), InvalidInputError);
  CHECK_THROWS_AS(JudgeTemplates::load(fs::path(kDataDir) / "nope"), ParseError);
}

TEST_CASE("IF record with verdicts YES,YES,NO,YES scores 0.75 at judge temperature") {
  const auto templates = JudgeTemplates::load(fs::path(kDataDir) / "judge_templates");
  ScriptedJudge judge([](const std::string& prompt, const nlohmann::json&) -> std::string {
    return prompt.find("Requirement: Does not use the word very.") != std::string::npos ? "NO"
                                                                                        : "YES";
  });

  JudgeConfig config;
  const auto verdicts =
      judge_evaluate(if_record(), if_instance(), judge.client(), config, templates);
  REQUIRE(verdicts.size() == 4);
  CHECK(verdicts[0].verdict);
  CHECK(verdicts[1].verdict);
  CHECK_FALSE(verdicts[2].verdict);
  CHECK(verdicts[3].verdict);
  CHECK(verdicts[2].question_id == "r3");

  // one request per requirement, at the pinned judge temperature and model
  CHECK(judge.calls() == 4);
  const auto body = judge.last_body();
  CHECK(body.at("temperature").get<double>() == doctest::Approx(0.01));
  CHECK(body.at("model").get<std::string>() == "gpt-3.5-turbo-0125");
}

TEST_CASE("CR record gets a single verdict against the gold option") {
  const auto templates = JudgeTemplates::load(fs::path(kDataDir) / "judge_templates");
  ScriptedJudge judge([](const std::string& prompt, const nlohmann::json&) -> std::string {
    // say YES iff the candidate text repeats the gold option
    const auto gold_pos = prompt.find("Correct option: ");
    const auto answer = prompt.substr(gold_pos + 16, 5);
    return prompt.find("Candidate response:\n" + answer) != std::string::npos ? "YES" : "NO";
  });

  RunRecord record;
  record.prompt_id = "cr-1";
  record.ability = Ability::CR;
  record.raw_output = "alpha";
  PromptInstance instance;
  instance.prompt_id = "cr-1";
  instance.ability = Ability::CR;
  instance.prompt_text = "Pick alpha or beta";
  instance.gold = CrGold{{"alpha", "beta"}, "alpha"};

  JudgeConfig config;
  const auto templates_dir = JudgeTemplates::load(fs::path(kDataDir) / "judge_templates");
  auto verdicts = judge_evaluate(record, instance, judge.client(), config, templates);
  REQUIRE(verdicts.size() == 1);
  CHECK(verdicts[0].verdict);

  record.raw_output = "beta";
  verdicts = judge_evaluate(record, instance, judge.client(), config, templates);
  REQUIRE(verdicts.size() == 1);
  CHECK_FALSE(verdicts[0].verdict);
}

TEST_CASE("a judge replying maybe thrice triggers abstention") {
  const auto templates = JudgeTemplates::load(fs::path(kDataDir) / "judge_templates");
  ScriptedJudge judge([](const std::string&, const nlohmann::json&) { return "maybe"; });

  JudgeConfig config;
  CHECK_THROWS_AS(
      judge_evaluate(if_record(), if_instance(), judge.client(), config, templates, 2),
      JudgeAbstainError);
  CHECK(judge.calls() == 3);  // initial try + 2 retries, then abstain
}

TEST_CASE("run_judge_pass scores unscored records and flags abstentions") {
  const auto templates = JudgeTemplates::load(fs::path(kDataDir) / "judge_templates");
  TempDir dir;
  const fs::path records_path = dir.path / "runs.jsonl";
  const fs::path dataset_path = fs::path(kDataDir) / "fixtures" / "if_small.jsonl";

  // two unscored IF records (one per fixture prompt) plus one already scored
  {
    RecordSink sink(records_path);
    RunRecord a = if_record();
    a.raw_output = "First response text.";
    sink.append(a);
    RunRecord b = if_record();
    b.prompt_id = "if-2";
    b.raw_output = "UNPARSEABLE CASE";
    sink.append(b);
    RunRecord c = if_record();
    c.prompt_id = "if-1";
    c.repetition_index = 1;
    c.seed = 43;
    c.score = 0.5;
    sink.append(c);
  }

  ScriptedJudge judge([](const std::string& prompt, const nlohmann::json&) -> std::string {
    if (prompt.find("UNPARSEABLE CASE") != std::string::npos) return "hard to say";
    return "YES";
  });

  JudgeConfig config;
  const auto result =
      run_judge_pass(records_path, dataset_path, Ability::IF, judge.client(), config, templates);
  CHECK(result.judged == 1);
  CHECK(result.abstained == 1);
  CHECK(result.skipped == 1);

  const auto latest = latest_by_key(read_records(records_path));
  REQUIRE(latest.size() == 3);

  int with_score = 0, abstained = 0;
  for (const auto& [key, record] : latest) {
    if (record.has_flag("judge_abstained")) {
      ++abstained;
      CHECK_FALSE(record.score.has_value());
    }
    if (record.score) ++with_score;
  }
  CHECK(with_score == 2);
  CHECK(abstained == 1);

  // abstained records are excluded from means with the count reported
  const auto agg = aggregate(read_records(records_path));
  CHECK(agg.excluded_records == 1);

  // a second pass is a no-op: everything is scored or abstained
  const auto again =
      run_judge_pass(records_path, dataset_path, Ability::IF, judge.client(), config, templates);
  CHECK(again.judged == 0);
  CHECK(again.abstained == 0);
  CHECK(again.skipped == 3);
}
