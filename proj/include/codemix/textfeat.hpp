#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "error.hpp"
#include "unicode.hpp"

namespace codemix {

enum class Analyzer { Char, Word, CharWord };

inline std::string_view to_string(Analyzer analyzer) noexcept {
  switch (analyzer) {
    case Analyzer::Char: return "char";
    case Analyzer::Word: return "word";
    case Analyzer::CharWord: return "char+word";
  }
  return "?";
}

inline Analyzer parse_analyzer(std::string_view text) {
  if (text == "char") return Analyzer::Char;
  if (text == "word") return Analyzer::Word;
  if (text == "char+word") return Analyzer::CharWord;
  throw ConfigError("unknown analyzer '" + std::string(text) + "' (expected char, word or char+word)");
}

// Inclusive n-gram size range.
struct NgramRange {
  std::size_t min = 1;
  std::size_t max = 1;

  bool valid() const noexcept { return 1 <= min && min <= max; }
  friend bool operator==(const NgramRange&, const NgramRange&) = default;
};

struct FeatureConfig {
  Analyzer analyzer = Analyzer::CharWord;
  NgramRange char_range{1, 6};
  NgramRange word_range{1, 3};
  std::size_t min_df = 1;
  bool lowercase = true;

  bool uses_char() const noexcept { return analyzer != Analyzer::Word; }
  bool uses_word() const noexcept { return analyzer != Analyzer::Char; }

  void validate() const {
    if (uses_char() && !char_range.valid()) {
      throw ConfigError("invalid char n-gram range " + std::to_string(char_range.min) + "-" +
                        std::to_string(char_range.max) + " (need 1 <= min <= max)");
    }
    if (uses_word() && !word_range.valid()) {
      throw ConfigError("invalid word n-gram range " + std::to_string(word_range.min) + "-" +
                        std::to_string(word_range.max) + " (need 1 <= min <= max)");
    }
    if (min_df < 1) throw ConfigError("min_df must be at least 1");
  }

  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

// Optional simple case folding, whitespace runs collapsed to one space,
// leading and trailing whitespace removed.
inline std::string normalize(std::string_view text, const FeatureConfig& config) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char32_t c : unicode::decode_utf8(text)) {
    if (unicode::is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    unicode::append_utf8(out, config.lowercase ? unicode::fold_case(c) : c);
  }
  return out;
}

// Maximal runs of word characters (letters, marks, decimal digits).
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char32_t c : unicode::decode_utf8(text)) {
    if (unicode::is_word_char(c)) {
      unicode::append_utf8(current, c);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

// All contiguous code-point substrings of each size in `range`, spaces
// included, ordered by size then position.
inline std::vector<std::string> char_ngrams(std::string_view text, NgramRange range) {
  // Byte offset of each code point boundary; re-encoding makes the input
  // well-formed so substrings can be sliced directly.
  const std::string clean = unicode::encode_utf8(unicode::decode_utf8(text));
  std::vector<std::size_t> bounds;
  bounds.reserve(clean.size() + 1);
  {
    const auto* bytes = reinterpret_cast<const std::uint8_t*>(clean.data());
    const auto length = static_cast<std::int32_t>(clean.size());
    std::int32_t i = 0;
    while (i < length) {
      bounds.push_back(static_cast<std::size_t>(i));
      U8_FWD_1(bytes, i, length);
    }
    bounds.push_back(clean.size());
  }
  const std::size_t length = bounds.size() - 1;
  std::vector<std::string> grams;
  for (std::size_t n = range.min; n <= range.max && n <= length; ++n) {
    for (std::size_t start = 0; start + n <= length; ++start) {
      grams.emplace_back(clean.substr(bounds[start], bounds[start + n] - bounds[start]));
    }
  }
  return grams;
}

// Contiguous token tuples joined by single spaces, ordered by size then
// position.
inline std::vector<std::string> word_ngrams(std::span<const std::string> tokens, NgramRange range) {
  std::vector<std::string> grams;
  for (std::size_t n = range.min; n <= range.max && n <= tokens.size(); ++n) {
    for (std::size_t start = 0; start + n <= tokens.size(); ++start) {
      std::string gram = tokens[start];
      for (std::size_t k = 1; k < n; ++k) {
        gram += ' ';
        gram += tokens[start + k];
      }
      grams.push_back(std::move(gram));
    }
  }
  return grams;
}

struct SparseEntry {
  std::uint32_t index;
  double value;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

// Index-ascending (index, value) pairs over a fixed dimensionality.
struct SparseVector {
  std::size_t dim = 0;
  std::vector<SparseEntry> entries;

  bool empty() const noexcept { return entries.empty(); }

  double squared_norm() const noexcept {
    double sum = 0.0;
    for (const auto& e : entries) sum += e.value * e.value;
    return sum;
  }

  double norm() const noexcept { return std::sqrt(squared_norm()); }

  double dot(std::span<const double> dense) const noexcept {
    double sum = 0.0;
    for (const auto& e : entries) sum += e.value * dense[e.index];
    return sum;
  }

  // Strictly ascending indices below dim, no zero values.
  bool well_formed() const noexcept {
    for (std::size_t k = 0; k < entries.size(); ++k) {
      if (entries[k].index >= dim || entries[k].value == 0.0) return false;
      if (k > 0 && entries[k - 1].index >= entries[k].index) return false;
    }
    return true;
  }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

// Terms indexed 0..V-1 in lexicographic (byte) order.
class Vocabulary {
 public:
  Vocabulary() = default;

  explicit Vocabulary(std::vector<std::string> terms) : terms_(std::move(terms)) {
    if (!std::is_sorted(terms_.begin(), terms_.end()) ||
        std::adjacent_find(terms_.begin(), terms_.end()) != terms_.end()) {
      throw DataError("vocabulary terms must be strictly ascending");
    }
    index_.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      index_.emplace(terms_[i], static_cast<std::uint32_t>(i));
    }
  }

  std::size_t size() const noexcept { return terms_.size(); }
  const std::vector<std::string>& terms() const noexcept { return terms_; }

  std::optional<std::uint32_t> find(const std::string& term) const {
    const auto it = index_.find(term);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

enum class BlockKind { Char, Word };

inline std::string_view to_string(BlockKind kind) noexcept {
  return kind == BlockKind::Char ? "char" : "word";
}

// Terms of one kind extracted from an already-normalized string.
inline std::vector<std::string> extract_terms(BlockKind kind, std::string_view normalized,
                                              NgramRange range) {
  if (kind == BlockKind::Char) return char_ngrams(normalized, range);
  const auto tokens = tokenize(normalized);
  return word_ngrams(tokens, range);
}

// One contiguous block of feature columns: [offset, offset + vocab.size()).
struct FeatureBlock {
  BlockKind kind = BlockKind::Char;
  NgramRange range;
  Vocabulary vocab;
  std::vector<double> idf;
  std::size_t offset = 0;
};

inline double smoothed_idf(std::size_t n_docs, std::size_t df) noexcept {
  return std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + static_cast<double>(df))) + 1.0;
}

// Fitted TF-IDF featurizer. Raw term counts times smoothed idf
// ln((1+N)/(1+df)) + 1, then one L2 normalization over all blocks. The
// char+word analyzer places the char block first.
class TfidfModel {
 public:
  static TfidfModel fit(std::span<const std::string> texts, const FeatureConfig& config) {
    config.validate();
    if (texts.empty()) throw DataError("cannot fit TF-IDF on an empty corpus");

    std::vector<std::string> normalized;
    normalized.reserve(texts.size());
    for (const auto& t : texts) normalized.push_back(normalize(t, config));

    std::vector<FeatureBlock> blocks;
    if (config.uses_char()) blocks.push_back(fit_block(BlockKind::Char, config.char_range, normalized, config.min_df));
    if (config.uses_word()) blocks.push_back(fit_block(BlockKind::Word, config.word_range, normalized, config.min_df));
    return TfidfModel(config, std::move(blocks), texts.size());
  }

  // Rebuilds a model from stored parts; offsets are recomputed from block
  // order.
  TfidfModel(FeatureConfig config, std::vector<FeatureBlock> blocks, std::size_t n_docs)
      : config_(config), blocks_(std::move(blocks)), n_docs_(n_docs) {
    config_.validate();
    std::size_t offset = 0;
    for (auto& block : blocks_) {
      if (block.idf.size() != block.vocab.size()) {
        throw DataError("idf length does not match vocabulary size");
      }
      for (double w : block.idf) {
        if (!(w > 0.0) || !std::isfinite(w)) throw DataError("idf weights must be positive and finite");
      }
      block.offset = offset;
      offset += block.vocab.size();
    }
    dim_ = offset;
    if (dim_ == 0) throw DataError("vocabulary is empty after min_df filtering");
    if (dim_ > UINT32_MAX) throw DataError("feature dimensionality exceeds 32-bit index range");
  }

  const FeatureConfig& config() const noexcept { return config_; }
  const std::vector<FeatureBlock>& blocks() const noexcept { return blocks_; }
  std::size_t n_docs() const noexcept { return n_docs_; }
  std::size_t dimension() const noexcept { return dim_; }

  SparseVector transform(std::string_view text) const {
    const std::string normalized = normalize(text, config_);
    SparseVector out;
    out.dim = dim_;
    for (const auto& block : blocks_) {
      std::unordered_map<std::uint32_t, std::uint32_t> counts;
      for (const auto& term : extract_terms(block.kind, normalized, block.range)) {
        if (auto idx = block.vocab.find(term)) ++counts[*idx];
      }
      for (const auto& [idx, count] : counts) {
        out.entries.push_back({static_cast<std::uint32_t>(block.offset + idx),
                               static_cast<double>(count) * block.idf[idx]});
      }
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
    const double norm = out.norm();
    if (norm > 0.0) {
      for (auto& e : out.entries) e.value /= norm;
    }
    return out;
  }

  std::vector<SparseVector> transform(std::span<const std::string> texts) const {
    std::vector<SparseVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(transform(t));
    return out;
  }

 private:
  static FeatureBlock fit_block(BlockKind kind, NgramRange range,
                                const std::vector<std::string>& normalized, std::size_t min_df) {
    std::unordered_map<std::string, std::size_t> df;
    for (const auto& text : normalized) {
      auto terms = extract_terms(kind, text, range);
      std::sort(terms.begin(), terms.end());
      terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
      for (auto& term : terms) ++df[std::move(term)];
    }
    std::vector<std::string> kept;
    for (const auto& [term, count] : df) {
      if (count >= min_df) kept.push_back(term);
    }
    std::sort(kept.begin(), kept.end());

    FeatureBlock block;
    block.kind = kind;
    block.range = range;
    block.idf.reserve(kept.size());
    for (const auto& term : kept) block.idf.push_back(smoothed_idf(normalized.size(), df.at(term)));
    block.vocab = Vocabulary(std::move(kept));
    return block;
  }

  FeatureConfig config_;
  std::vector<FeatureBlock> blocks_;
  std::size_t n_docs_ = 0;
  std::size_t dim_ = 0;
};

}  // namespace codemix
