#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "corpus.hpp"
#include "error.hpp"
#include "label.hpp"

namespace codemix {

// One row of the prediction interchange file:
//   id<TAB>label[<TAB>score]
// under a header row `id<TAB>label` or `id<TAB>label<TAB>score`. The score
// is whatever real-valued confidence the producer emits (SVM decision value,
// transformer positive-class probability); evaluation ignores it.
struct Prediction {
  std::string id;
  Label label = Label::NOT;
  std::optional<double> score;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw DataError("cannot format number");
  return std::string(buf, end);
}

inline std::string serialize_predictions(const std::vector<Prediction>& preds) {
  bool with_score = !preds.empty();
  for (const auto& p : preds) with_score = with_score && p.score.has_value();
  std::string out = with_score ? "id\tlabel\tscore\n" : "id\tlabel\n";
  for (const auto& p : preds) {
    out += tsv::escape(p.id);
    out += '\t';
    out += to_string(p.label);
    if (with_score) {
      out += '\t';
      out += format_double(*p.score);
    }
    out += '\n';
  }
  return out;
}

inline std::vector<Prediction> parse_predictions(std::string_view content, const std::string& source = "<memory>") {
  const auto lines = tsv::split_lines(tsv::strip_bom(content));
  auto fail = [&](std::size_t line_no, const std::string& what) {
    return DataError(source + ":" + std::to_string(line_no) + ": " + what);
  };
  if (lines.empty()) throw fail(1, "empty prediction file (missing header row)");
  const auto header = tsv::split_fields(lines.front());
  bool with_score = false;
  if (header.size() == 3 && header[0] == "id" && header[1] == "label" && header[2] == "score") {
    with_score = true;
  } else if (!(header.size() == 2 && header[0] == "id" && header[1] == "label")) {
    throw fail(1, "header must be 'id<TAB>label' or 'id<TAB>label<TAB>score'");
  }

  std::vector<Prediction> preds;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto fields = tsv::split_fields(lines[i]);
    if (fields.size() != header.size()) {
      throw fail(line_no, "expected " + std::to_string(header.size()) + " columns, found " +
                              std::to_string(fields.size()));
    }
    Prediction p;
    p.id = tsv::unescape(fields[0]);
    if (p.id.empty()) throw fail(line_no, "empty id");
    if (!seen.insert(p.id).second) throw fail(line_no, "duplicate id '" + p.id + "'");
    try {
      p.label = parse_label(fields[1]);
    } catch (const DataError& e) {
      throw fail(line_no, e.what());
    }
    if (with_score) {
      double value = 0.0;
      const auto text = fields[2];
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw fail(line_no, "invalid score '" + std::string(text) + "'");
      }
      p.score = value;
    }
    preds.push_back(std::move(p));
  }
  return preds;
}

struct AlignedLabels {
  std::vector<Label> golds;
  std::vector<Label> preds;
};

// Joins predictions to gold documents by id, in gold order. Every gold id
// needs exactly one prediction and no prediction may name an unknown id.
inline AlignedLabels align_predictions(const LabeledCorpus& gold, const std::vector<Prediction>& preds) {
  std::unordered_map<std::string, Label> by_id;
  for (const auto& p : preds) by_id.emplace(p.id, p.label);

  std::unordered_set<std::string> gold_ids;
  std::vector<std::string> missing;
  AlignedLabels aligned;
  for (const auto& d : gold.docs) {
    if (!d.label) throw DataError("gold document '" + d.id + "' is unlabeled");
    gold_ids.insert(d.id);
    const auto it = by_id.find(d.id);
    if (it == by_id.end()) {
      missing.push_back(d.id);
      continue;
    }
    aligned.golds.push_back(*d.label);
    aligned.preds.push_back(it->second);
  }
  std::vector<std::string> unknown;
  for (const auto& p : preds)
    if (!gold_ids.contains(p.id)) unknown.push_back(p.id);

  if (!missing.empty() || !unknown.empty()) {
    auto list = [](const std::vector<std::string>& ids) {
      std::string s;
      const std::size_t shown = std::min<std::size_t>(ids.size(), 20);
      for (std::size_t k = 0; k < shown; ++k) s += (k ? ", " : "") + ids[k];
      if (ids.size() > shown) s += ", ... (" + std::to_string(ids.size()) + " total)";
      return s;
    };
    std::string msg = "predictions do not match gold ids";
    if (!missing.empty()) msg += "; missing predictions for: " + list(missing);
    if (!unknown.empty()) msg += "; unknown ids in predictions: " + list(unknown);
    throw DataError(msg);
  }
  if (aligned.golds.empty()) throw DataError("nothing to evaluate: gold file has no documents");
  return aligned;
}

}  // namespace codemix
