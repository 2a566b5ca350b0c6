#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tempsweep/ability.hpp"
#include "tempsweep/records.hpp"
#include "tempsweep/stats.hpp"

namespace tempsweep {

/// Per-cell statistics for one (model, ability, temperature).
struct CellStats {
  double mean_score = 0.0;
  double std_dev = 0.0;
  int n = 0;
  bool operator==(const CellStats&) const = default;
};

struct TableRow {
  std::string model_id;
  Ability ability = Ability::CR;
  double temperature = 0.0;
  CellStats stats;
};

/// The performance distribution D: mean/std/n per (model, ability,
/// temperature) cell. Iteration order is fixed (model, then ability code,
/// then temperature) so emitted files are deterministic.
class PerformanceTable {
 public:
  void set(const std::string& model_id, Ability ability, double temperature,
           const CellStats& stats);
  const CellStats* find(const std::string& model_id, Ability ability, double temperature) const;

  /// Distinct (model, ability) series present, in iteration order.
  std::vector<std::pair<std::string, Ability>> series() const;
  /// Sorted temperatures covered by one series.
  std::vector<double> temperatures(const std::string& model_id, Ability ability) const;
  std::vector<TableRow> rows() const;
  stats::PerformanceCurve curve(const std::string& model_id, Ability ability) const;

  bool empty() const { return cells_.empty(); }
  std::size_t size() const { return cells_.size(); }
  bool operator==(const PerformanceTable& other) const { return cells_ == other.cells_; }

 private:
  using Key = std::tuple<std::string, int, double>;  // ability stored by enum order
  std::map<Key, CellStats> cells_;
};

struct AggregateResult {
  PerformanceTable table;
  std::vector<std::string> warnings;    // omitted cells, exclusions
  int excluded_records = 0;             // flagged-failed / abstained / unscored
};

/// Collapses scored records into the performance table. Records are first
/// deduplicated per sweep cell (latest wins, so judge re-appends replace the
/// unscored originals). Failed or abstained records are excluded and counted.
/// CR collapses repetitions per prompt by modal vote over normalized outputs
/// before averaging across prompts; every other ability averages record
/// scores directly.
AggregateResult aggregate(const std::vector<RunRecord>& records);

/// CSV persistence. Columns, in order:
///   model_id,ability,temperature,mean_score,std,n
/// Numeric fields use shortest round-trip formatting, so save/load is exact
/// and repeated saves are byte-identical.
void save_table_csv(const PerformanceTable& table, const std::filesystem::path& path);
PerformanceTable load_table_csv(const std::filesystem::path& path);

}  // namespace tempsweep
