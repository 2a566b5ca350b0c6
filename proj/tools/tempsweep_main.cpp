// Command-line driver: sweep, analyze, select, judge, report.
//
// Exit codes: 0 success, 1 usage, 2 IO/parse, 3 endpoint failure, 4 coverage.
// Endpoint credentials come from ENDPOINT_KEY / JUDGE_KEY and are never
// printed; URLs may come from ENDPOINT_URL / JUDGE_URL when the flag is
// omitted.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tempsweep/classifier.hpp"
#include "tempsweep/errors.hpp"
#include "tempsweep/gridspec.hpp"
#include "tempsweep/judge.hpp"
#include "tempsweep/perf_table.hpp"
#include "tempsweep/report.hpp"
#include "tempsweep/selector.hpp"
#include "tempsweep/sweep.hpp"
#include "tempsweep/util.hpp"

using namespace tempsweep;

namespace {

std::string env_or(const char* name, const std::string& fallback) {
  const char* value = std::getenv(name);
  return value ? std::string(value) : fallback;
}

EndpointConfig endpoint_from(const std::string& url_flag, const char* url_env,
                             const char* key_env) {
  EndpointConfig config;
  config.base_url = url_flag.empty() ? env_or(url_env, "") : url_flag;
  if (config.base_url.empty())
    throw InvalidInputError(std::string("no endpoint URL: pass the URL flag or set ") + url_env);
  config.api_key = env_or(key_env, "");  // value must never reach a log line
  return config;
}

Ability ability_flag(const std::string& text) {
  if (const auto ability = parse_ability(text)) return *ability;
  throw InvalidInputError("unknown ability '" + text +
                          "' (expected CR, CT, ICL, IF, MT or SUMM)");
}

std::string slurp_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temperature sweep runner, analyzer and optimal-temperature selector"};
  app.require_subcommand(1);
  bool deterministic = false;
  app.add_flag("--deterministic", deterministic,
               "Zero record timestamps so repeated runs produce identical bytes");

  std::function<int()> action;

  // ----- sweep -----------------------------------------------------------
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Run the temperature grid over a dataset against an endpoint");
  struct {
    std::string model, dataset, ability, endpoint, records;
    std::string grid{std::string(kDefaultGrid)};
    int reps = 3;
    double top_p = 0.9, rp = 1.0;
    int top_k = 0;
    std::uint64_t seed = 42;
    int max_tokens = 1024, max_length = 4096, concurrency = 8;
  } sw;
  sweep_cmd->add_option("--model", sw.model, "Model identifier sent with every request")
      ->required();
  sweep_cmd->add_option("--dataset", sw.dataset, "Prompt dataset, one JSON object per line")
      ->required();
  sweep_cmd->add_option("--ability", sw.ability, "Ability code: CR, CT, ICL, IF, MT or SUMM")
      ->required();
  sweep_cmd->add_option("--records", sw.records, "Append-only records file (JSON lines)")
      ->required();
  sweep_cmd->add_option("--endpoint", sw.endpoint,
                        "Endpoint base URL (default: ENDPOINT_URL environment variable)");
  sweep_cmd->add_option("--grid", sw.grid, "Temperature grid start:stop:step");
  sweep_cmd->add_option("--reps", sw.reps, "Repetitions per prompt-temperature cell");
  sweep_cmd->add_option("--top-p", sw.top_p, "Nucleus sampling mass in (0, 1]");
  sweep_cmd->add_option("--top-k", sw.top_k, "Top-k cutoff; 0 disables");
  sweep_cmd->add_option("--rp", sw.rp, "Repetition penalty");
  sweep_cmd->add_option("--seed", sw.seed, "Base seed; repetition r uses seed + r");
  sweep_cmd->add_option("--max-tokens", sw.max_tokens, "Completion budget per request");
  sweep_cmd->add_option("--max-length", sw.max_length,
                        "Prompt plus completion budget; longer prompts are truncated");
  sweep_cmd->add_option("--concurrency", sw.concurrency, "Parallel request workers");
  sweep_cmd->callback([&] {
    action = [&]() -> int {
      SweepPlan plan;
      plan.model_id = sw.model;
      plan.grid = parse_grid(sw.grid);  // a bad grid dies here, before any request
      plan.repetitions = sw.reps;
      plan.defaults.top_p = sw.top_p;
      if (sw.top_k > 0) plan.defaults.top_k = sw.top_k;
      plan.defaults.repetition_penalty = sw.rp;
      plan.defaults.seed = sw.seed;
      plan.defaults.max_new_tokens = sw.max_tokens;
      plan.defaults.max_length = sw.max_length;
      plan.dataset_path = sw.dataset;
      plan.ability = ability_flag(sw.ability);
      plan.concurrency = sw.concurrency;
      plan.validate();

      ChatClient client(endpoint_from(sw.endpoint, "ENDPOINT_URL", "ENDPOINT_KEY"));
      const auto result =
          run_sweep(plan, client, sw.records, {}, deterministic ? 0 : -1);
      std::cout << "completed " << result.completed << ", resumed " << result.resumed
                << ", failed " << result.failed << ", truncated " << result.truncated << "\n";

      // a cell that stayed failed across runs keeps the sweep incomplete
      int failed_cells = 0;
      for (const auto& [key, record] : latest_by_key(read_records(sw.records))) {
        if (!record.has_flag("failed")) continue;
        ++failed_cells;
        std::cerr << "failed cell: " << record.prompt_id << " T=" << format_double(record.temperature)
                  << " rep=" << record.repetition_index << "\n";
      }
      return failed_cells == 0 ? 0 : 3;
    };
  });

  // ----- analyze ---------------------------------------------------------
  auto* analyze_cmd = app.add_subcommand(
      "analyze", "Aggregate a records file and compute per-series statistics");
  struct {
    std::string records, out{"analysis.csv"}, table_out;
    double delta = 0.25;
  } an;
  analyze_cmd->add_option("--records", an.records, "Records file from a sweep")->required();
  analyze_cmd->add_option("--out", an.out, "Statistics CSV output path");
  analyze_cmd->add_option("--table-out", an.table_out,
                          "Also write the aggregated per-cell table CSV here");
  analyze_cmd->add_option("--delta", an.delta,
                          "Mutation threshold as a fraction of the curve maximum");
  analyze_cmd->callback([&] {
    action = [&]() -> int {
      const auto aggregated = aggregate(read_records(an.records));
      for (const auto& warning : aggregated.warnings) std::cerr << "warning: " << warning << "\n";
      if (!an.table_out.empty()) save_table_csv(aggregated.table, an.table_out);

      const auto rows = analyze_table(aggregated.table, an.delta);
      for (const auto& row : rows)
        for (const auto& warning : row.summary.warnings)
          std::cerr << "warning: " << row.model_id << "/" << to_string(row.ability) << ": "
                    << warning << "\n";
      write_analysis_csv(rows, an.out);
      std::cout << "analyzed " << rows.size() << " series, excluded "
                << aggregated.excluded_records << " records\n";
      return 0;
    };
  });

  // ----- select ----------------------------------------------------------
  auto* select_cmd = app.add_subcommand(
      "select", "Classify a prompt's ability and print its best temperature");
  struct {
    std::string prompt, prompt_file, table, model, exemplars, template_file, endpoint;
    std::string classifier{"local"};
    bool json = false;
  } se;
  select_cmd->add_option("--prompt", se.prompt, "Prompt text");
  select_cmd->add_option("--prompt-file", se.prompt_file, "Read the prompt from this file");
  select_cmd->add_option("--table", se.table, "Performance table CSV")->required();
  select_cmd->add_option("--model", se.model, "Model id whose table rows to use")->required();
  select_cmd->add_option("--classifier", se.classifier, "Ability classifier: local or remote");
  select_cmd->add_option("--exemplars", se.exemplars,
                         "Exemplar JSONL training data for the local classifier");
  select_cmd->add_option("--template", se.template_file,
                         "Prompt template file for the remote classifier");
  select_cmd->add_option("--endpoint", se.endpoint,
                         "Chat endpoint URL for the remote classifier (default: ENDPOINT_URL)");
  select_cmd->add_flag("--json", se.json, "Emit one JSON line instead of plain text");
  select_cmd->callback([&] {
    action = [&]() -> int {
      if (se.prompt.empty() == se.prompt_file.empty())
        throw InvalidInputError("pass exactly one of --prompt or --prompt-file");
      const auto prompt = se.prompt.empty() ? slurp_file(se.prompt_file) : se.prompt;
      const auto table = load_table_csv(se.table);

      std::unique_ptr<AbilityClassifier> classifier;
      if (se.classifier == "local") {
        if (se.exemplars.empty())
          throw InvalidInputError("the local classifier needs --exemplars");
        classifier = std::make_unique<LocalCentroidClassifier>(
            LocalCentroidClassifier::train_from_file(se.exemplars));
      } else if (se.classifier == "remote") {
        if (se.template_file.empty())
          throw InvalidInputError("the remote classifier needs --template");
        classifier = std::make_unique<RemoteLlmClassifier>(
            ChatClient(endpoint_from(se.endpoint, "ENDPOINT_URL", "ENDPOINT_KEY")),
            RemoteLlmClassifier::load_template(se.template_file));
      } else {
        throw InvalidInputError("classifier must be local or remote");
      }

      const auto result = select_temperature(prompt, se.model, table, *classifier);
      if (se.json) {
        nlohmann::json out;
        out["t_star"] = result.t_star;
        out["ability"] = std::string(to_string(result.prediction.label));
        out["confidence"] = result.prediction.confidence;
        std::cout << out.dump() << "\n";
      } else {
        std::cout << "t_star: " << format_double(result.t_star) << "\n"
                  << "ability: " << to_string(result.prediction.label) << "\n"
                  << "confidence: " << format_double(result.prediction.confidence) << "\n";
      }
      return 0;
    };
  });

  // ----- judge -----------------------------------------------------------
  auto* judge_cmd = app.add_subcommand(
      "judge", "Score unscored judge-ability records through a judge endpoint");
  struct {
    std::string records, dataset, ability, url, templates;
    std::string model{"gpt-3.5-turbo-0125"};
  } ju;
  judge_cmd->add_option("--records", ju.records, "Records file from a sweep")->required();
  judge_cmd->add_option("--dataset", ju.dataset, "Dataset the records were swept from")
      ->required();
  judge_cmd->add_option("--ability", ju.ability, "Ability code of the records")->required();
  judge_cmd->add_option("--templates", ju.templates,
                        "Directory holding the cr.txt, ct.txt and if.txt judge templates")
      ->required();
  judge_cmd->add_option("--judge-url", ju.url,
                        "Judge endpoint base URL (default: JUDGE_URL environment variable)");
  judge_cmd->add_option("--judge-model", ju.model, "Judge model identifier");
  judge_cmd->callback([&] {
    action = [&]() -> int {
      JudgeConfig config;
      config.model = ju.model;
      const auto templates = JudgeTemplates::load(ju.templates);
      ChatClient client(endpoint_from(ju.url, "JUDGE_URL", "JUDGE_KEY"));
      const auto result = run_judge_pass(ju.records, ju.dataset, ability_flag(ju.ability),
                                         client, config, templates);
      std::cout << "judged " << result.judged << ", abstained " << result.abstained
                << ", skipped " << result.skipped << "\n";
      return 0;
    };
  });

  // ----- report ----------------------------------------------------------
  auto* report_cmd =
      app.add_subcommand("report", "Emit per-ability curve CSVs and SVG charts from a table");
  struct {
    std::string table, out_dir{"report"}, group{"by-model"};
    std::vector<std::string> formats{"csv", "svg"};
    double band = 0.2;
  } re;
  report_cmd->add_option("--table", re.table, "Performance table CSV")->required();
  report_cmd->add_option("--out-dir", re.out_dir, "Output directory");
  report_cmd->add_option("--group", re.group, "Curve grouping: by-model or by-model-size");
  report_cmd->add_option("--format", re.formats, "Output formats, any of: csv svg");
  report_cmd->add_option("--band", re.band, "Shaded band half-width in standard deviations");
  report_cmd->callback([&] {
    action = [&]() -> int {
      ReportSpec spec;
      if (re.group == "by-model")
        spec.grouping = Grouping::ByModel;
      else if (re.group == "by-model-size")
        spec.grouping = Grouping::ByModelSize;
      else
        throw InvalidInputError("group must be by-model or by-model-size");
      spec.emit_csv = spec.emit_svg = false;
      for (const auto& format : re.formats) {
        if (format == "csv")
          spec.emit_csv = true;
        else if (format == "svg")
          spec.emit_svg = true;
        else
          throw InvalidInputError("unknown format '" + format + "' (expected csv or svg)");
      }
      spec.band_multiplier = re.band;
      spec.output_dir = re.out_dir;

      const auto written = write_report(load_table_csv(re.table), spec);
      std::cout << "wrote " << written.size() << " files to " << re.out_dir << "\n";
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the parse error
    return code == 0 ? 0 : 1;
  }

  try {
    return action ? action() : 1;
  } catch (const CoverageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& cell : e.missing_cells()) std::cerr << "  missing: " << cell << "\n";
    return 4;
  } catch (const EndpointError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
