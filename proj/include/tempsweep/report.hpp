#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tempsweep/perf_table.hpp"
#include "tempsweep/stats.hpp"

namespace tempsweep {

struct AnalysisRow {
  std::string model_id;
  Ability ability = Ability::CR;
  stats::StatsSummary summary;
};

/// One statistics row per table series. A statistic that is undefined for
/// the series (constant scores, too few points, zero mean) stays unset and
/// the reason is recorded in the row's warnings; the other columns still
/// come out.
std::vector<AnalysisRow> analyze_table(const PerformanceTable& table,
                                       double mutation_delta = 0.25);

/// Columns:
///   model_id,ability,pearson,pearson_p,spearman,spearman_p,range_pct,cv_pct,mutation_temperature
/// Unset statistics serialize as "undefined"; an absent mutation as "none".
void write_analysis_csv(std::span<const AnalysisRow> rows, const std::filesystem::path& path);

/// Trailing parameter-count token of a model id: "pythia-160m" -> "160m",
/// "llama-2-13b" -> "13b". Ids without one fall into "unknown".
std::string model_size_class(const std::string& model_id);

enum class Grouping { ByModel, ByModelSize };

struct ReportSpec {
  Grouping grouping = Grouping::ByModel;
  bool emit_csv = true;
  bool emit_svg = true;
  double band_multiplier = 0.2;  // shaded band half-width, in units of std
  std::filesystem::path output_dir;
};

struct GroupedCurve {
  std::string group;  // model id, or size class under ByModelSize
  std::vector<stats::CurvePoint> points;
};

/// Curves for one ability, grouped and averaged pointwise. Size groups sort
/// by parameter count, model groups lexically; members of a group must share
/// one temperature grid.
std::vector<GroupedCurve> group_curves(const PerformanceTable& table, Ability ability,
                                       Grouping grouping);

/// Line chart with one polyline per group and a +-band_multiplier*std shaded
/// band behind each. Pure string construction, byte-stable for equal input.
std::string render_curve_svg(Ability ability, std::span<const GroupedCurve> groups,
                             double band_multiplier);

/// Emits curve_<CODE>.csv / curve_<CODE>.svg per ability present in the
/// table. Returns the paths written, in emission order.
std::vector<std::filesystem::path> write_report(const PerformanceTable& table,
                                                const ReportSpec& spec);

}  // namespace tempsweep
