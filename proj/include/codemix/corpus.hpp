#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "error.hpp"
#include "label.hpp"
#include "random.hpp"

namespace codemix {

struct Document {
  std::string id;
  std::string text;
  std::optional<Label> label;

  friend bool operator==(const Document&, const Document&) = default;
};

// Documents in input-file order. Ids are unique.
struct LabeledCorpus {
  std::vector<Document> docs;
  std::string source;

  std::size_t size() const noexcept { return docs.size(); }
  bool empty() const noexcept { return docs.empty(); }

  bool fully_labeled() const noexcept {
    for (const auto& d : docs)
      if (!d.label) return false;
    return true;
  }

  std::vector<std::string> texts() const {
    std::vector<std::string> out;
    out.reserve(docs.size());
    for (const auto& d : docs) out.push_back(d.text);
    return out;
  }

  std::vector<Label> labels() const {
    std::vector<Label> out;
    out.reserve(docs.size());
    for (const auto& d : docs) {
      if (!d.label) throw DataError("document '" + d.id + "' has no label");
      out.push_back(*d.label);
    }
    return out;
  }
};

namespace tsv {

// Tabs, newlines, carriage returns and backslashes travel escaped as
// \t \n \r \\. Any other backslash sequence is kept verbatim.
inline std::string escape(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (char c : field) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string unescape(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    const char c = field[i];
    if (c != '\\' || i + 1 == field.size()) {
      out += c;
      continue;
    }
    switch (field[i + 1]) {
      case '\\': out += '\\'; ++i; break;
      case 't': out += '\t'; ++i; break;
      case 'n': out += '\n'; ++i; break;
      case 'r': out += '\r'; ++i; break;
      default: out += c;
    }
  }
  return out;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// Splits on '\n', dropping one trailing '\r' per line and the empty piece
// after a final newline.
inline std::vector<std::string_view> split_lines(std::string_view content) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    auto pos = content.find('\n', start);
    if (pos == std::string_view::npos) pos = content.size();
    auto line = content.substr(start, pos - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = pos + 1;
  }
  return lines;
}

inline std::string_view strip_bom(std::string_view content) {
  if (content.starts_with("\xEF\xBB\xBF")) content.remove_prefix(3);
  return content;
}

}  // namespace tsv

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError("write failed for '" + path + "'");
}

// Parses `id<TAB>text[<TAB>label]` with a mandatory header row naming the
// columns. An empty label cell means the document is unlabeled.
inline LabeledCorpus parse_dataset(std::string_view content, std::string source = "<memory>") {
  const auto lines = tsv::split_lines(tsv::strip_bom(content));
  auto fail = [&](std::size_t line_no, const std::string& what) -> DataError {
    return DataError(source + ":" + std::to_string(line_no) + ": " + what);
  };
  if (lines.empty()) throw fail(1, "missing header row");

  const auto header = tsv::split_fields(lines.front());
  bool has_label = false;
  if (header.size() == 3 && header[0] == "id" && header[1] == "text" && header[2] == "label") {
    has_label = true;
  } else if (!(header.size() == 2 && header[0] == "id" && header[1] == "text")) {
    throw fail(1, "header must be 'id<TAB>text' or 'id<TAB>text<TAB>label'");
  }
  const std::size_t columns = has_label ? 3 : 2;

  LabeledCorpus corpus;
  corpus.source = source;
  corpus.docs.reserve(lines.size() - 1);
  std::unordered_set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto fields = tsv::split_fields(lines[i]);
    if (fields.size() != columns) {
      throw fail(line_no, "expected " + std::to_string(columns) + " columns, found " +
                              std::to_string(fields.size()));
    }
    Document doc{tsv::unescape(fields[0]), tsv::unescape(fields[1]), std::nullopt};
    if (doc.id.empty()) throw fail(line_no, "empty id");
    if (!seen.insert(doc.id).second) throw fail(line_no, "duplicate id '" + doc.id + "'");
    if (has_label && !fields[2].empty()) {
      try {
        doc.label = parse_label(fields[2]);
      } catch (const DataError& e) {
        throw fail(line_no, e.what());
      }
    }
    corpus.docs.push_back(std::move(doc));
  }
  return corpus;
}

inline LabeledCorpus load_dataset(const std::string& path) {
  return parse_dataset(read_file(path), path);
}

// Writes the label column whenever at least one document is labeled.
inline std::string serialize_dataset(const LabeledCorpus& corpus) {
  bool any_label = false;
  for (const auto& d : corpus.docs) any_label = any_label || d.label.has_value();
  std::string out = any_label ? "id\ttext\tlabel\n" : "id\ttext\n";
  for (const auto& d : corpus.docs) {
    out += tsv::escape(d.id);
    out += '\t';
    out += tsv::escape(d.text);
    if (any_label) {
      out += '\t';
      if (d.label) out += to_string(*d.label);
    }
    out += '\n';
  }
  return out;
}

// FNV-1a over the serialized corpus; recorded in model metadata.
inline std::uint64_t fingerprint(const LabeledCorpus& corpus) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_dataset(corpus)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct ClassCounts {
  std::array<std::size_t, kNumLabels> counts{};
  std::size_t total = 0;

  std::size_t count(Label label) const noexcept { return counts[label_index(label)]; }

  // Percentage rounded half-up to one decimal, computed in integers.
  double percentage(Label label) const noexcept {
    const auto c = count(label);
    const auto tenths = (2 * 1000 * c + total) / (2 * total);
    return static_cast<double>(tenths) / 10.0;
  }
};

inline ClassCounts corpus_stats(const LabeledCorpus& corpus) {
  if (corpus.empty()) throw DataError("cannot compute statistics of an empty corpus");
  ClassCounts stats;
  for (const auto& d : corpus.docs) {
    if (!d.label) throw DataError("document '" + d.id + "' is unlabeled");
    ++stats.counts[label_index(*d.label)];
  }
  stats.total = corpus.size();
  return stats;
}

inline std::string render_stats(const ClassCounts& stats) {
  std::string out;
  char line[96];
  std::snprintf(line, sizeof line, "%-6s %10s %11s\n", "Label", "Count", "Percentage");
  out += line;
  for (Label label : kLabels) {
    std::snprintf(line, sizeof line, "%-6s %10zu %10.1f%%\n", std::string(to_string(label)).c_str(),
                  stats.count(label), stats.percentage(label));
    out += line;
  }
  std::snprintf(line, sizeof line, "%-6s %10zu %10.1f%%\n", "Total", stats.total, 100.0);
  out += line;
  return out;
}

// Number of a label's documents that go to training: fraction * count,
// rounded half-up. The 1e-9 slack keeps decimal fractions such as 0.85 from
// rounding down because of their binary representation.
inline std::size_t train_quota(double train_fraction, std::size_t label_count) noexcept {
  return static_cast<std::size_t>(
      std::floor(train_fraction * static_cast<double>(label_count) + 0.5 + 1e-9));
}

struct Split {
  LabeledCorpus train;
  LabeledCorpus dev;
};

// Per label (NOT first, then OFF) the document positions are shuffled with one
// xoshiro256** stream seeded by `seed`; the first train_quota of them go to
// train. Both outputs keep the input order.
inline Split stratified_split(const LabeledCorpus& corpus, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train fraction must lie strictly between 0 and 1");
  }
  std::array<std::vector<std::size_t>, kNumLabels> positions;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& d = corpus.docs[i];
    if (!d.label) throw DataError("cannot split: document '" + d.id + "' is unlabeled");
    positions[label_index(*d.label)].push_back(i);
  }
  for (Label label : kLabels) {
    if (positions[label_index(label)].size() < 2) {
      throw DataError("cannot split: label " + std::string(to_string(label)) +
                      " has fewer than 2 documents");
    }
  }

  Xoshiro256 rng(seed);
  std::vector<bool> in_train(corpus.size(), false);
  for (auto& group : positions) {
    shuffle(std::span<std::size_t>(group), rng);
    const auto quota = train_quota(train_fraction, group.size());
    for (std::size_t k = 0; k < quota; ++k) in_train[group[k]] = true;
  }

  Split split;
  split.train.source = corpus.source + "#train";
  split.dev.source = corpus.source + "#dev";
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    (in_train[i] ? split.train : split.dev).docs.push_back(corpus.docs[i]);
  }
  return split;
}

}  // namespace codemix
