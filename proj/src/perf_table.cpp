#include "tempsweep/perf_table.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "tempsweep/errors.hpp"
#include "tempsweep/metrics.hpp"
#include "tempsweep/util.hpp"

namespace tempsweep {

namespace {

constexpr const char* kCsvHeader = "model_id,ability,temperature,mean_score,std,n";

struct CellValues {
  // Raw score lists, keyed per prompt for the CR modal collapse.
  std::vector<std::pair<std::string, const RunRecord*>> records;  // (prompt_id, record)
  int excluded = 0;
};

CellStats stats_of(const std::vector<double>& values) {
  long double sum = 0.0L;
  for (double v : values) sum += v;
  const long double mean = sum / static_cast<long double>(values.size());
  long double ss = 0.0L;
  for (double v : values) {
    const long double d = static_cast<long double>(v) - mean;
    ss += d * d;
  }
  CellStats out;
  out.mean_score = static_cast<double>(mean);
  out.std_dev = static_cast<double>(std::sqrt(ss / static_cast<long double>(values.size())));
  out.n = static_cast<int>(values.size());
  return out;
}

std::string cell_name(const std::string& model, Ability ability, double temperature) {
  return model + "/" + std::string(to_string(ability)) + "/T=" + format_double(temperature);
}

}  // namespace

void PerformanceTable::set(const std::string& model_id, Ability ability, double temperature,
                           const CellStats& stats) {
  cells_[{model_id, static_cast<int>(ability), temperature}] = stats;
}

const CellStats* PerformanceTable::find(const std::string& model_id, Ability ability,
                                        double temperature) const {
  const auto it = cells_.find({model_id, static_cast<int>(ability), temperature});
  return it == cells_.end() ? nullptr : &it->second;
}

std::vector<std::pair<std::string, Ability>> PerformanceTable::series() const {
  std::vector<std::pair<std::string, Ability>> out;
  for (const auto& [key, stats] : cells_) {
    std::pair<std::string, Ability> id{std::get<0>(key),
                                       static_cast<Ability>(std::get<1>(key))};
    if (out.empty() || out.back() != id) out.push_back(std::move(id));
  }
  return out;
}

std::vector<double> PerformanceTable::temperatures(const std::string& model_id,
                                                   Ability ability) const {
  std::vector<double> out;
  for (const auto& [key, stats] : cells_)
    if (std::get<0>(key) == model_id && std::get<1>(key) == static_cast<int>(ability))
      out.push_back(std::get<2>(key));
  return out;  // map order is already ascending in temperature
}

std::vector<TableRow> PerformanceTable::rows() const {
  std::vector<TableRow> out;
  out.reserve(cells_.size());
  for (const auto& [key, stats] : cells_)
    out.push_back({std::get<0>(key), static_cast<Ability>(std::get<1>(key)), std::get<2>(key),
                   stats});
  return out;
}

stats::PerformanceCurve PerformanceTable::curve(const std::string& model_id,
                                                Ability ability) const {
  stats::PerformanceCurve curve;
  curve.model_id = model_id;
  curve.ability = ability;
  for (const auto& [key, stats] : cells_)
    if (std::get<0>(key) == model_id && std::get<1>(key) == static_cast<int>(ability))
      curve.points.push_back({std::get<2>(key), stats.mean_score, stats.std_dev, stats.n});
  return curve;
}

AggregateResult aggregate(const std::vector<RunRecord>& records) {
  AggregateResult result;
  const auto latest = latest_by_key(records);

  std::map<std::tuple<std::string, int, double>, CellValues> cells;
  for (const auto& [key, record] : latest) {
    auto& cell = cells[{record.model_id, static_cast<int>(record.ability), record.temperature}];
    if (!record.score || record.has_flag("failed") || record.has_flag("judge_abstained")) {
      ++cell.excluded;
      ++result.excluded_records;
      continue;
    }
    cell.records.emplace_back(record.prompt_id, &record);
  }

  for (const auto& [key, cell] : cells) {
    const auto& [model, ability_int, temperature] = key;
    const Ability ability = static_cast<Ability>(ability_int);
    if (cell.excluded > 0)
      result.warnings.push_back(cell_name(model, ability, temperature) + ": excluded " +
                                std::to_string(cell.excluded) + " flagged/unscored record(s)");
    if (cell.records.empty()) {
      result.warnings.push_back(cell_name(model, ability, temperature) +
                                ": no usable records, cell omitted");
      continue;
    }

    std::vector<double> values;
    if (ability == Ability::CR) {
      // Collapse repetitions per prompt: modal vote over normalized outputs,
      // ties to the earliest repetition; the winning repetition's judged
      // score becomes the prompt's value.
      std::map<std::string, std::vector<const RunRecord*>> by_prompt;
      for (const auto& [prompt_id, record] : cell.records)
        by_prompt[prompt_id].push_back(record);
      for (const auto& [prompt_id, reps] : by_prompt) {
        std::vector<std::string> choices;
        choices.reserve(reps.size());
        for (const auto* record : reps)
          choices.push_back(metrics::normalize_answer(record->raw_output));
        values.push_back(*reps[metrics::modal_choice(choices)]->score);
      }
    } else {
      for (const auto& [prompt_id, record] : cell.records) values.push_back(*record->score);
    }
    result.table.set(model, ability, temperature, stats_of(values));
  }
  return result;
}

void save_table_csv(const PerformanceTable& table, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open table file for writing: " + path.string());
  out << kCsvHeader << "\n";
  for (const auto& row : table.rows()) {
    out << row.model_id << ',' << to_string(row.ability) << ',' << format_double(row.temperature)
        << ',' << format_double(row.stats.mean_score) << ',' << format_double(row.stats.std_dev)
        << ',' << row.stats.n << "\n";
  }
  if (!out) throw Error("write failed: " + path.string());
}

PerformanceTable load_table_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open table file: " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty table file: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader)
    throw ParseError("line 1: bad header, expected '" + std::string(kCsvHeader) + "'", 1);

  PerformanceTable table;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 6)
      throw ParseError("line " + std::to_string(line_no) + ": expected 6 fields, got " +
                           std::to_string(fields.size()),
                       line_no);

    const auto ability = parse_ability(fields[1]);
    if (!ability)
      throw ParseError("line " + std::to_string(line_no) + ": unknown ability '" + fields[1] + "'",
                       line_no);
    CellStats stats;
    stats.mean_score = parse_strict_double(fields[3], line_no);
    stats.std_dev = parse_strict_double(fields[4], line_no);
    stats.n = static_cast<int>(parse_strict_double(fields[5], line_no));
    table.set(fields[0], *ability, parse_strict_double(fields[2], line_no), stats);
  }
  return table;
}

}  // namespace tempsweep
