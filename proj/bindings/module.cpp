// Python surface over the C++ core: decoding transforms, ability metrics,
// curve statistics, table persistence and temperature selection. Network
// orchestration (sweep, judge, endpoints) stays behind the command-line tool.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "tempsweep/ability.hpp"
#include "tempsweep/errors.hpp"
#include "tempsweep/gridspec.hpp"
#include "tempsweep/metrics.hpp"
#include "tempsweep/perf_table.hpp"
#include "tempsweep/report.hpp"
#include "tempsweep/rng.hpp"
#include "tempsweep/sampling.hpp"
#include "tempsweep/selector.hpp"
#include "tempsweep/stats.hpp"

namespace py = pybind11;
using namespace tempsweep;

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Temperature-sweep evaluation core: decoding transforms, ability "
      "metrics, curve statistics and optimal-temperature selection.";

  // Exceptions. Derived classes are registered after the base so their
  // translators run first.
  const auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidInputError>(m, "InvalidInputError", error.ptr());
  py::register_exception<UndefinedStatError>(m, "UndefinedStatError", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<EndpointError>(m, "EndpointError", error.ptr());
  py::register_exception<ClassificationError>(m, "ClassificationError", error.ptr());
  py::register_exception<CoverageError>(m, "CoverageError", error.ptr());

  py::enum_<Ability>(m, "Ability")
      .value("CR", Ability::CR)
      .value("CT", Ability::CT)
      .value("ICL", Ability::ICL)
      .value("IF", Ability::IF)
      .value("MT", Ability::MT)
      .value("SUMM", Ability::SUMM);
  m.def(
      "parse_ability", [](std::string_view text) { return parse_ability(text); },
      py::arg("text"), "Ability code -> enum member, or None for anything else.");
  m.def(
      "uses_judge", [](Ability ability) { return uses_judge(ability); }, py::arg("ability"));

  // --- decoding stack ------------------------------------------------------
  m.attr("EPSILON_GREEDY") = sampling::kEpsilonGreedy;
  m.attr("REPETITION_PENALTY_FLOOR") = sampling::kRepetitionPenaltyFloor;
  m.attr("DEFAULT_TEMPERATURE_CEILING") = sampling::kDefaultTemperatureCeiling;

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("next_uniform", &Rng::next_uniform)
      .def("next_u64", &Rng::next_u64);

  py::class_<sampling::TokenDistribution>(m, "TokenDistribution")
      .def(py::init<>())
      .def_readwrite("probs", &sampling::TokenDistribution::probs)
      .def("support", &sampling::TokenDistribution::support)
      .def("__len__", &sampling::TokenDistribution::size);

  py::class_<sampling::SamplingConfig>(m, "SamplingConfig")
      .def(py::init<>())
      .def_readwrite("temperature", &sampling::SamplingConfig::temperature)
      .def_readwrite("top_k", &sampling::SamplingConfig::top_k)
      .def_readwrite("top_p", &sampling::SamplingConfig::top_p)
      .def_readwrite("repetition_penalty", &sampling::SamplingConfig::repetition_penalty)
      .def_readwrite("seed", &sampling::SamplingConfig::seed)
      .def_readwrite("max_new_tokens", &sampling::SamplingConfig::max_new_tokens)
      .def_readwrite("max_length", &sampling::SamplingConfig::max_length)
      .def_readwrite("temperature_ceiling", &sampling::SamplingConfig::temperature_ceiling)
      .def("validate", &sampling::SamplingConfig::validate);

  py::class_<sampling::PipelineResult>(m, "PipelineResult")
      .def_readonly("token", &sampling::PipelineResult::token)
      .def_readonly("dist", &sampling::PipelineResult::dist)
      .def_readonly("warnings", &sampling::PipelineResult::warnings);

  m.def(
      "apply_temperature",
      [](const std::vector<double>& logits, double temperature) {
        return sampling::apply_temperature(logits, temperature);
      },
      py::arg("logits"), py::arg("temperature"),
      "Temperature-scaled softmax; at or below EPSILON_GREEDY this is a "
      "one-hot at the argmax logit.");
  m.def(
      "apply_repetition_penalty",
      [](std::vector<double> logits, const std::vector<int>& history, double rp) {
        std::vector<std::string> warnings;
        auto out = sampling::apply_repetition_penalty(std::move(logits), history, rp, &warnings);
        return py::make_tuple(std::move(out), std::move(warnings));
      },
      py::arg("logits"), py::arg("history"), py::arg("repetition_penalty"),
      "Returns (penalized logits, warnings).");
  m.def("apply_top_k", &sampling::apply_top_k, py::arg("dist"), py::arg("k"));
  m.def("apply_top_p", &sampling::apply_top_p, py::arg("dist"), py::arg("p"));
  m.def("sample_token", &sampling::sample_token, py::arg("dist"), py::arg("rng"));
  m.def("entropy", &sampling::entropy, py::arg("dist"));
  m.def(
      "sample_pipeline",
      [](const std::vector<double>& logits, const std::vector<int>& history,
         const sampling::SamplingConfig& config) {
        Rng rng(config.seed);
        return sampling::sample_pipeline(logits, history, config, rng);
      },
      py::arg("logits"), py::arg("history"), py::arg("config"),
      "Repetition penalty -> temperature -> top-k -> top-p -> seeded draw.");

  // --- metrics -------------------------------------------------------------
  py::class_<metrics::ScoreResult>(m, "ScoreResult")
      .def_readonly("value", &metrics::ScoreResult::value)
      .def_readonly("degenerate", &metrics::ScoreResult::degenerate)
      .def("__repr__", [](const metrics::ScoreResult& r) {
        return "ScoreResult(value=" + std::to_string(r.value) +
               ", degenerate=" + (r.degenerate ? std::string("True") : std::string("False")) + ")";
      });

  py::class_<metrics::JudgeVerdict>(m, "JudgeVerdict")
      .def(py::init([](std::string question_id, bool verdict, std::string rationale) {
             return metrics::JudgeVerdict{std::move(question_id), verdict, std::move(rationale)};
           }),
           py::arg("question_id"), py::arg("verdict"), py::arg("rationale") = std::string())
      .def_readwrite("question_id", &metrics::JudgeVerdict::question_id)
      .def_readwrite("verdict", &metrics::JudgeVerdict::verdict)
      .def_readwrite("rationale", &metrics::JudgeVerdict::rationale);

  m.def(
      "rouge_l_f1",
      [](std::string_view candidate, std::string_view reference) {
        return metrics::rouge_l_f1(candidate, reference);
      },
      py::arg("candidate"), py::arg("reference"));
  m.def(
      "bleu_normalized",
      [](std::string_view candidate, const std::vector<std::string>& references, int max_n) {
        return metrics::bleu_normalized(candidate, references, metrics::default_tokenizer(),
                                        max_n);
      },
      py::arg("candidate"), py::arg("references"), py::arg("max_n") = 4);
  m.def(
      "normalize_answer",
      [](std::string_view text) { return metrics::normalize_answer(text); }, py::arg("text"));
  m.def(
      "exact_match_cls",
      [](std::string_view candidate, std::string_view gold) {
        return metrics::exact_match_cls(candidate, gold);
      },
      py::arg("candidate"), py::arg("gold_label"));
  m.def(
      "modal_choice",
      [](const std::vector<std::string>& choices) { return metrics::modal_choice(choices); },
      py::arg("choices"));
  m.def(
      "top1_accuracy",
      [](const std::vector<std::string>& choices, std::string_view gold) {
        return metrics::top1_accuracy(choices, gold);
      },
      py::arg("per_repetition_choices"), py::arg("gold"));
  m.def(
      "drfr",
      [](const std::vector<metrics::JudgeVerdict>& verdicts) { return metrics::drfr(verdicts); },
      py::arg("verdicts"));
  m.def(
      "ttcw_accuracy",
      [](const std::vector<metrics::JudgeVerdict>& verdicts) {
        return metrics::ttcw_accuracy(verdicts);
      },
      py::arg("verdicts"));

  // --- statistics ----------------------------------------------------------
  py::class_<stats::CurvePoint>(m, "CurvePoint")
      .def(py::init([](double temperature, double mean_score, double std_dev, int n) {
             return stats::CurvePoint{temperature, mean_score, std_dev, n};
           }),
           py::arg("temperature"), py::arg("mean_score"), py::arg("std_dev") = 0.0,
           py::arg("n") = 0)
      .def_readwrite("temperature", &stats::CurvePoint::temperature)
      .def_readwrite("mean_score", &stats::CurvePoint::mean_score)
      .def_readwrite("std_dev", &stats::CurvePoint::std_dev)
      .def_readwrite("n", &stats::CurvePoint::n);

  py::class_<stats::PerformanceCurve>(m, "PerformanceCurve")
      .def(py::init<>())
      .def_readwrite("model_id", &stats::PerformanceCurve::model_id)
      .def_readwrite("ability", &stats::PerformanceCurve::ability)
      .def_readwrite("points", &stats::PerformanceCurve::points)
      .def("temperatures", &stats::PerformanceCurve::temperatures)
      .def("means", &stats::PerformanceCurve::means);

  py::class_<stats::Correlation>(m, "Correlation")
      .def_readonly("coefficient", &stats::Correlation::coefficient)
      .def_readonly("p_value", &stats::Correlation::p_value);

  py::class_<stats::StatsSummary>(m, "StatsSummary")
      .def_readonly("pearson", &stats::StatsSummary::pearson)
      .def_readonly("spearman", &stats::StatsSummary::spearman)
      .def_readonly("range_pct", &stats::StatsSummary::range_pct)
      .def_readonly("cv_pct", &stats::StatsSummary::cv_pct)
      .def_readonly("mutation_temperature", &stats::StatsSummary::mutation_temperature)
      .def_readonly("warnings", &stats::StatsSummary::warnings);

  m.def(
      "pearson",
      [](const std::vector<double>& xs, const std::vector<double>& ys) {
        return stats::pearson(xs, ys);
      },
      py::arg("xs"), py::arg("ys"));
  m.def(
      "spearman",
      [](const std::vector<double>& xs, const std::vector<double>& ys) {
        return stats::spearman(xs, ys);
      },
      py::arg("xs"), py::arg("ys"));
  m.def(
      "average_ranks",
      [](const std::vector<double>& xs) { return stats::average_ranks(xs); }, py::arg("xs"));
  m.def("range_pct", &stats::range_pct, py::arg("curve"));
  m.def("cv_pct", &stats::cv_pct, py::arg("curve"));
  m.def("mutation_temperature", &stats::mutation_temperature, py::arg("curve"),
        py::arg("delta") = 0.25,
        "Smallest temperature whose consecutive drop exceeds delta x curve "
        "maximum, or None.");
  m.def(
      "curve_correlation_matrix",
      [](const std::vector<stats::PerformanceCurve>& curves) {
        return stats::curve_correlation_matrix(curves);
      },
      py::arg("curves"));

  // --- performance table and selection -------------------------------------
  py::class_<CellStats>(m, "CellStats")
      .def(py::init([](double mean_score, double std_dev, int n) {
             return CellStats{mean_score, std_dev, n};
           }),
           py::arg("mean_score"), py::arg("std_dev") = 0.0, py::arg("n") = 0)
      .def_readwrite("mean_score", &CellStats::mean_score)
      .def_readwrite("std_dev", &CellStats::std_dev)
      .def_readwrite("n", &CellStats::n)
      .def("__eq__",
           [](const CellStats& a, const CellStats& b) { return a == b; });

  py::class_<TableRow>(m, "TableRow")
      .def_readonly("model_id", &TableRow::model_id)
      .def_readonly("ability", &TableRow::ability)
      .def_readonly("temperature", &TableRow::temperature)
      .def_readonly("stats", &TableRow::stats);

  py::class_<PerformanceTable>(m, "PerformanceTable")
      .def(py::init<>())
      .def("set", &PerformanceTable::set, py::arg("model_id"), py::arg("ability"),
           py::arg("temperature"), py::arg("stats"))
      .def(
          "find",
          [](const PerformanceTable& table, const std::string& model_id, Ability ability,
             double temperature) -> std::optional<CellStats> {
            const CellStats* cell = table.find(model_id, ability, temperature);
            if (!cell) return std::nullopt;
            return *cell;
          },
          py::arg("model_id"), py::arg("ability"), py::arg("temperature"))
      .def("series", &PerformanceTable::series)
      .def("temperatures", &PerformanceTable::temperatures, py::arg("model_id"),
           py::arg("ability"))
      .def("rows", &PerformanceTable::rows)
      .def("curve", &PerformanceTable::curve, py::arg("model_id"), py::arg("ability"))
      .def("__len__", &PerformanceTable::size)
      .def("__bool__", [](const PerformanceTable& table) { return !table.empty(); });

  m.def("save_table_csv", &save_table_csv, py::arg("table"), py::arg("path"));
  m.def("load_table_csv", &load_table_csv, py::arg("path"));
  m.def("argmax_temperature", &argmax_temperature, py::arg("table"), py::arg("model_id"),
        py::arg("ability"),
        "Grid temperature with the maximal mean score; equal means resolve "
        "to the lowest temperature.");

  // --- analysis and grids --------------------------------------------------
  py::class_<AnalysisRow>(m, "AnalysisRow")
      .def_readonly("model_id", &AnalysisRow::model_id)
      .def_readonly("ability", &AnalysisRow::ability)
      .def_readonly("summary", &AnalysisRow::summary);

  m.def("analyze_table", &analyze_table, py::arg("table"), py::arg("mutation_delta") = 0.25);
  m.def("write_analysis_csv",
        [](const std::vector<AnalysisRow>& rows, const std::filesystem::path& path) {
          write_analysis_csv(rows, path);
        },
        py::arg("rows"), py::arg("path"));
  m.def("model_size_class", &model_size_class, py::arg("model_id"));

  m.attr("DEFAULT_GRID") = std::string(kDefaultGrid);
  m.def("parse_grid", &parse_grid, py::arg("spec"),
        "Expand a start:stop:step grid specification into temperatures.");

  m.attr("__version__") = "0.1.0";
}
