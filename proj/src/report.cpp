#include "tempsweep/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "tempsweep/errors.hpp"
#include "tempsweep/util.hpp"

namespace tempsweep {

namespace {

/// Guarded evaluation: undefined statistics become a warning, not a throw.
template <typename Fn>
void try_stat(const char* name, std::vector<std::string>& warnings, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    warnings.push_back(std::string(name) + " undefined: " + e.what());
  }
}

}  // namespace

std::vector<AnalysisRow> analyze_table(const PerformanceTable& table, double mutation_delta) {
  std::vector<AnalysisRow> rows;
  for (const auto& [model_id, ability] : table.series()) {
    AnalysisRow row;
    row.model_id = model_id;
    row.ability = ability;

    const auto curve = table.curve(model_id, ability);
    const auto temps = curve.temperatures();
    const auto means = curve.means();
    auto& summary = row.summary;

    try_stat("pearson", summary.warnings,
             [&] { summary.pearson = stats::pearson(temps, means); });
    try_stat("spearman", summary.warnings,
             [&] { summary.spearman = stats::spearman(temps, means); });
    try_stat("range_pct", summary.warnings,
             [&] { summary.range_pct = stats::range_pct(curve); });
    try_stat("cv_pct", summary.warnings, [&] { summary.cv_pct = stats::cv_pct(curve); });
    try_stat("mutation_temperature", summary.warnings, [&] {
      summary.mutation_temperature = stats::mutation_temperature(curve, mutation_delta);
    });

    rows.push_back(std::move(row));
  }
  return rows;
}

void write_analysis_csv(std::span<const AnalysisRow> rows, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open analysis output: " + path.string());

  out << "model_id,ability,pearson,pearson_p,spearman,spearman_p,range_pct,cv_pct,"
         "mutation_temperature\n";
  const auto corr = [](const std::optional<stats::Correlation>& c, std::string& a,
                       std::string& b) {
    a = c ? format_double(c->coefficient) : "undefined";
    b = c ? format_double(c->p_value) : "undefined";
  };
  for (const auto& row : rows) {
    std::string p, pp, s, sp;
    corr(row.summary.pearson, p, pp);
    corr(row.summary.spearman, s, sp);
    out << row.model_id << ',' << to_string(row.ability) << ',' << p << ',' << pp << ',' << s
        << ',' << sp << ','
        << (row.summary.range_pct ? format_double(*row.summary.range_pct) : "undefined") << ','
        << (row.summary.cv_pct ? format_double(*row.summary.cv_pct) : "undefined") << ','
        << (row.summary.mutation_temperature ? format_double(*row.summary.mutation_temperature)
                                             : "none")
        << '\n';
  }
}

std::string model_size_class(const std::string& model_id) {
  std::string lowered;
  for (char c : model_id) lowered += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

  // tokens are runs of [a-z0-9.]; the last one shaped like 160m / 1.4b wins
  static const std::regex size_token(R"(^[0-9]+(\.[0-9]+)?[mb]$)");
  std::string found = "unknown";
  std::string token;
  const auto flush = [&] {
    if (!token.empty() && std::regex_match(token, size_token)) found = token;
    token.clear();
  };
  for (char c : lowered) {
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.')
      token += c;
    else
      flush();
  }
  flush();
  return found;
}

namespace {

/// "160m" -> 1.6e8 for sorting; unknown sorts last.
double parameter_count(const std::string& size_class) {
  if (size_class.empty() || (size_class.back() != 'm' && size_class.back() != 'b'))
    return std::numeric_limits<double>::infinity();
  const double scale = size_class.back() == 'b' ? 1e9 : 1e6;
  try {
    return parse_strict_double(std::string_view(size_class).substr(0, size_class.size() - 1)) *
           scale;
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

std::vector<GroupedCurve> group_curves(const PerformanceTable& table, Ability ability,
                                       Grouping grouping) {
  // group key -> member model ids, already sorted because series() is
  std::map<std::string, std::vector<std::string>> members;
  for (const auto& [model_id, series_ability] : table.series()) {
    if (series_ability != ability) continue;
    const auto key = grouping == Grouping::ByModel ? model_id : model_size_class(model_id);
    members[key].push_back(model_id);
  }

  std::vector<GroupedCurve> groups;
  for (const auto& [key, model_ids] : members) {
    GroupedCurve group;
    group.group = key;
    for (const auto& model_id : model_ids) {
      const auto temps = table.temperatures(model_id, ability);
      if (group.points.empty()) {
        for (double t : temps) group.points.push_back({t, 0.0, 0.0, 0});
      } else if (temps.size() != group.points.size() ||
                 !std::equal(temps.begin(), temps.end(), group.points.begin(),
                             group.points.end(),
                             [](double t, const stats::CurvePoint& p) {
                               return t == p.temperature;
                             })) {
        throw InvalidInputError("models in group '" + key +
                                "' cover different temperature grids");
      }
      for (auto& point : group.points) {
        const auto* cell = table.find(model_id, ability, point.temperature);
        point.mean_score += cell->mean_score;
        point.std_dev += cell->std_dev;
        point.n += cell->n;
      }
    }
    const auto count = static_cast<double>(model_ids.size());
    for (auto& point : group.points) {
      point.mean_score /= count;
      point.std_dev /= count;
    }
    groups.push_back(std::move(group));
  }

  if (grouping == Grouping::ByModelSize) {
    std::stable_sort(groups.begin(), groups.end(),
                     [](const GroupedCurve& a, const GroupedCurve& b) {
                       const double ca = parameter_count(a.group), cb = parameter_count(b.group);
                       return ca != cb ? ca < cb : a.group < b.group;
                     });
  }
  return groups;
}

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 52, kRight = 16, kTop = 24, kBottom = 40;

const char* kPalette[8] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52",
                           "#8172b3", "#937860", "#da8bc3", "#8c8c8c"};

std::string num(double v) { return format_double(std::round(v * 100.0) / 100.0); }

}  // namespace

std::string render_curve_svg(Ability ability, std::span<const GroupedCurve> groups,
                             double band_multiplier) {
  if (groups.empty()) throw InvalidInputError("no curves to draw");
  if (band_multiplier < 0.0) throw InvalidInputError("band multiplier must be non-negative");

  std::set<double> ticks;
  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = 0.0, y_max = 1.0;
  for (const auto& group : groups) {
    for (const auto& point : group.points) {
      ticks.insert(point.temperature);
      x_min = std::min(x_min, point.temperature);
      x_max = std::max(x_max, point.temperature);
      y_min = std::min(y_min, point.mean_score - band_multiplier * point.std_dev);
      y_max = std::max(y_max, point.mean_score + band_multiplier * point.std_dev);
    }
  }
  const double x_span = std::max(x_max - x_min, 1e-9);
  const double y_span = std::max(y_max - y_min, 1e-9);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const auto px = [&](double t) { return kLeft + (t - x_min) / x_span * plot_w; };
  const auto py = [&](double v) { return kTop + (y_max - v) / y_span * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "  <title>" << to_string(ability) << "</title>\n";
  svg << "  <text class=\"charttitle\" x=\"" << num(kLeft) << "\" y=\"16\">" << to_string(ability)
      << "</text>\n";

  // axes
  svg << "  <line class=\"axis\" x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + plot_h)
      << "\" x2=\"" << num(kLeft + plot_w) << "\" y2=\"" << num(kTop + plot_h)
      << "\" stroke=\"#333333\"/>\n";
  svg << "  <line class=\"axis\" x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\""
      << num(kLeft) << "\" y2=\"" << num(kTop + plot_h) << "\" stroke=\"#333333\"/>\n";

  // one tick per grid temperature
  for (double t : ticks) {
    const double x = px(t);
    svg << "  <line class=\"xtick\" x1=\"" << num(x) << "\" y1=\"" << num(kTop + plot_h)
        << "\" x2=\"" << num(x) << "\" y2=\"" << num(kTop + plot_h + 5)
        << "\" stroke=\"#333333\"/>\n";
    svg << "  <text class=\"xlabel\" x=\"" << num(x) << "\" y=\"" << num(kTop + plot_h + 18)
        << "\" text-anchor=\"middle\">" << format_double(t) << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = y_min + y_span * i / 4.0;
    const double y = py(v);
    svg << "  <line class=\"ytick\" x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(y) << "\" x2=\""
        << num(kLeft) << "\" y2=\"" << num(y) << "\" stroke=\"#333333\"/>\n";
    svg << "  <text class=\"ylabel\" x=\"" << num(kLeft - 8) << "\" y=\"" << num(y + 4)
        << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
  }

  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& group = groups[i];
    const char* color = kPalette[i % 8];

    // shaded band: out along mean + band, back along mean - band
    std::string band;
    for (const auto& point : group.points) {
      if (!band.empty()) band += ' ';
      band += num(px(point.temperature)) + ',' +
              num(py(point.mean_score + band_multiplier * point.std_dev));
    }
    for (auto it = group.points.rbegin(); it != group.points.rend(); ++it)
      band += ' ' + num(px(it->temperature)) + ',' +
              num(py(it->mean_score - band_multiplier * it->std_dev));
    svg << "  <polygon class=\"band\" fill=\"" << color << "\" fill-opacity=\"0.2\" points=\""
        << band << "\"/>\n";

    std::string line;
    for (const auto& point : group.points) {
      if (!line.empty()) line += ' ';
      line += num(px(point.temperature)) + ',' + num(py(point.mean_score));
    }
    svg << "  <polyline class=\"curve\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"" << line << "\"/>\n";

    const double key_y = kTop + 6 + 18.0 * static_cast<double>(i);
    svg << "  <rect class=\"key\" x=\"" << num(kLeft + plot_w - 130) << "\" y=\"" << num(key_y)
        << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
    svg << "  <text class=\"legend\" x=\"" << num(kLeft + plot_w - 114) << "\" y=\""
        << num(key_y + 10) << "\">" << group.group << "</text>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::filesystem::path> write_report(const PerformanceTable& table,
                                                const ReportSpec& spec) {
  if (!spec.emit_csv && !spec.emit_svg)
    throw InvalidInputError("report needs at least one output format");
  if (table.empty()) throw InvalidInputError("performance table is empty");

  std::filesystem::create_directories(spec.output_dir);

  std::vector<std::filesystem::path> written;
  for (const auto ability : kAllAbilities) {
    const auto groups = group_curves(table, ability, spec.grouping);
    if (groups.empty()) continue;
    const std::string stem = "curve_" + std::string(to_string(ability));

    if (spec.emit_csv) {
      const auto path = spec.output_dir / (stem + ".csv");
      std::ofstream out(path, std::ios::binary);
      if (!out) throw ParseError("cannot open report output: " + path.string());
      out << "group,temperature,mean_score,std,n\n";
      for (const auto& group : groups)
        for (const auto& point : group.points)
          out << group.group << ',' << format_double(point.temperature) << ','
              << format_double(point.mean_score) << ',' << format_double(point.std_dev) << ','
              << point.n << '\n';
      written.push_back(path);
    }
    if (spec.emit_svg) {
      const auto path = spec.output_dir / (stem + ".svg");
      std::ofstream out(path, std::ios::binary);
      if (!out) throw ParseError("cannot open report output: " + path.string());
      out << render_curve_svg(ability, groups, spec.band_multiplier);
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace tempsweep
