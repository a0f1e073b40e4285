#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>

#include <json.hpp>

#include "error.hpp"
#include "label.hpp"

namespace codemix {

// counts[gold][pred], both indexed by label_index().
struct ConfusionMatrix {
  std::array<std::array<std::uint64_t, kNumLabels>, kNumLabels> counts{};

  std::uint64_t at(Label gold, Label pred) const noexcept {
    return counts[label_index(gold)][label_index(pred)];
  }
  std::uint64_t support(Label gold) const noexcept {
    std::uint64_t sum = 0;
    for (auto c : counts[label_index(gold)]) sum += c;
    return sum;
  }
  std::uint64_t predicted(Label pred) const noexcept {
    std::uint64_t sum = 0;
    for (const auto& row : counts) sum += row[label_index(pred)];
    return sum;
  }
  std::uint64_t total() const noexcept {
    std::uint64_t sum = 0;
    for (const auto& row : counts)
      for (auto c : row) sum += c;
    return sum;
  }
  std::uint64_t correct() const noexcept {
    std::uint64_t sum = 0;
    for (std::size_t k = 0; k < kNumLabels; ++k) sum += counts[k][k];
    return sum;
  }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

inline ConfusionMatrix confusion(std::span<const Label> golds, std::span<const Label> preds) {
  if (golds.size() != preds.size()) {
    throw DataError("gold and prediction lists differ in length (" + std::to_string(golds.size()) +
                    " vs " + std::to_string(preds.size()) + ")");
  }
  ConfusionMatrix m;
  for (std::size_t i = 0; i < golds.size(); ++i) ++m.counts[label_index(golds[i])][label_index(preds[i])];
  return m;
}

struct LabelScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
};

struct EvalReport {
  ConfusionMatrix matrix;
  std::array<LabelScores, kNumLabels> per_label{};
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_f1 = 0.0;
  double accuracy = 0.0;

  const LabelScores& scores(Label label) const noexcept { return per_label[label_index(label)]; }
};

// Undefined ratios (zero denominators) count as 0.
inline EvalReport evaluate(const ConfusionMatrix& matrix) {
  const auto total = matrix.total();
  if (total == 0) throw DataError("cannot evaluate an empty confusion matrix");
  auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };

  EvalReport report;
  report.matrix = matrix;
  const double n = static_cast<double>(total);
  for (Label label : kLabels) {
    auto& s = report.per_label[label_index(label)];
    const double tp = static_cast<double>(matrix.at(label, label));
    s.support = matrix.support(label);
    s.precision = ratio(tp, static_cast<double>(matrix.predicted(label)));
    s.recall = ratio(tp, static_cast<double>(s.support));
    s.f1 = ratio(2.0 * s.precision * s.recall, s.precision + s.recall);
    const double weight = static_cast<double>(s.support) / n;
    report.weighted_precision += weight * s.precision;
    report.weighted_recall += weight * s.recall;
    report.weighted_f1 += weight * s.f1;
  }
  report.accuracy = static_cast<double>(matrix.correct()) / n;
  return report;
}

// Half-up rounding to 4 decimals, as printed in score tables.
inline double round4(double value) noexcept { return std::floor(value * 1e4 + 0.5 + 1e-9) / 1e4; }

inline std::string format_score(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", round4(value));
  return buf;
}

enum class ReportFormat { Table, Json };

inline ReportFormat parse_report_format(std::string_view text) {
  if (text == "table") return ReportFormat::Table;
  if (text == "json") return ReportFormat::Json;
  throw ConfigError("unknown report format '" + std::string(text) + "' (expected table or json)");
}

inline constexpr int kReportSchemaVersion = 1;

inline nlohmann::json report_to_json(const EvalReport& report) {
  using nlohmann::json;
  json per_label = json::object();
  for (Label label : kLabels) {
    const auto& s = report.scores(label);
    per_label[std::string(to_string(label))] = {
        {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"support", s.support}};
  }
  json matrix = json::array();
  for (const auto& row : report.matrix.counts) matrix.push_back(row);
  return json{{"schema_version", kReportSchemaVersion},
              {"labels", {"NOT", "OFF"}},
              {"confusion", matrix},
              {"per_label", per_label},
              {"weighted",
               {{"precision", report.weighted_precision},
                {"recall", report.weighted_recall},
                {"f1", report.weighted_f1}}},
              {"accuracy", report.accuracy},
              {"total", report.matrix.total()}};
}

inline EvalReport report_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
      throw DataError("unsupported report schema version");
    }
    EvalReport report;
    const auto& matrix = j.at("confusion");
    for (std::size_t g = 0; g < kNumLabels; ++g)
      for (std::size_t p = 0; p < kNumLabels; ++p)
        report.matrix.counts[g][p] = matrix.at(g).at(p).get<std::uint64_t>();
    for (Label label : kLabels) {
      const auto& s = j.at("per_label").at(std::string(to_string(label)));
      report.per_label[label_index(label)] = {s.at("precision").get<double>(), s.at("recall").get<double>(),
                                              s.at("f1").get<double>(), s.at("support").get<std::uint64_t>()};
    }
    const auto& w = j.at("weighted");
    report.weighted_precision = w.at("precision").get<double>();
    report.weighted_recall = w.at("recall").get<double>();
    report.weighted_f1 = w.at("f1").get<double>();
    report.accuracy = j.at("accuracy").get<double>();
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed report JSON: ") + e.what());
  }
}

inline std::string render_table(const EvalReport& report) {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof line, "%-10s %10s %10s %10s %8s\n", "Label", "Precision", "Recall", "F1", "Support");
  out += line;
  auto row = [&](const char* name, double p, double r, double f, std::uint64_t support) {
    std::snprintf(line, sizeof line, "%-10s %10s %10s %10s %8llu\n", name, format_score(p).c_str(),
                  format_score(r).c_str(), format_score(f).c_str(), static_cast<unsigned long long>(support));
    out += line;
  };
  for (Label label : kLabels) {
    const auto& s = report.scores(label);
    row(std::string(to_string(label)).c_str(), s.precision, s.recall, s.f1, s.support);
  }
  row("Weighted", report.weighted_precision, report.weighted_recall, report.weighted_f1, report.matrix.total());
  std::snprintf(line, sizeof line, "%-10s %10s\n\n", "Accuracy", format_score(report.accuracy).c_str());
  out += line;

  out += "Confusion matrix (rows: gold, columns: predicted)\n";
  std::snprintf(line, sizeof line, "%-10s %8s %8s\n", "", "NOT", "OFF");
  out += line;
  for (Label gold : kLabels) {
    std::snprintf(line, sizeof line, "%-10s %8llu %8llu\n", std::string(to_string(gold)).c_str(),
                  static_cast<unsigned long long>(report.matrix.at(gold, Label::NOT)),
                  static_cast<unsigned long long>(report.matrix.at(gold, Label::OFF)));
    out += line;
  }
  return out;
}

inline std::string render_report(const EvalReport& report, ReportFormat format) {
  if (format == ReportFormat::Json) return report_to_json(report).dump(2) + "\n";
  return render_table(report);
}

}  // namespace codemix
