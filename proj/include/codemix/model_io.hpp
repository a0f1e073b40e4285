#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <string>

#include <json.hpp>

#include "corpus.hpp"
#include "error.hpp"
#include "svm.hpp"
#include "textfeat.hpp"

namespace codemix {

inline constexpr int kModelFormatVersion = 1;
inline constexpr std::string_view kModelFormatName = "codemix-model";
// Serialized containers above this size are rejected on save and on load.
inline constexpr std::size_t kMaxModelBytes = std::size_t{512} << 20;

struct TrainingMetadata {
  std::uint64_t seed = 0;
  std::string created_utc;
  std::string corpus_fingerprint;
  std::size_t train_docs = 0;
};

// Complete predictor: fitted featurizer, linear model and the settings that
// produced them.
struct ModelContainer {
  TfidfModel features;
  LinearSvmModel svm;
  SvmConfig svm_config;
  TrainingMetadata metadata;

  SparseVector featurize(std::string_view text) const { return features.transform(text); }
  double decision_value(std::string_view text) const { return svm.decision_value(featurize(text)); }
  Label predict(std::string_view text) const { return svm.predict(featurize(text)); }
};

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

inline nlohmann::json to_json(const ModelContainer& model) {
  using nlohmann::json;
  const auto& fc = model.features.config();
  json blocks = json::array();
  for (const auto& b : model.features.blocks()) {
    blocks.push_back({{"kind", to_string(b.kind)},
                      {"ngrams", {b.range.min, b.range.max}},
                      {"terms", b.vocab.terms()},
                      {"idf", b.idf}});
  }
  const auto& sc = model.svm_config;
  const auto& diag = model.svm.diagnostics();
  return json{
      {"format", kModelFormatName},
      {"format_version", kModelFormatVersion},
      {"features",
       {{"analyzer", to_string(fc.analyzer)},
        {"char_ngrams", {fc.char_range.min, fc.char_range.max}},
        {"word_ngrams", {fc.word_range.min, fc.word_range.max}},
        {"min_df", fc.min_df},
        {"lowercase", fc.lowercase},
        {"n_docs", model.features.n_docs()},
        {"dimension", model.features.dimension()},
        {"blocks", blocks}}},
      {"svm",
       {{"positive_label", to_string(model.svm.positive_label())},
        {"weights", model.svm.weights()},
        {"bias", model.svm.bias()},
        {"c", sc.c},
        {"tolerance", sc.tolerance},
        {"max_epochs", sc.max_epochs},
        {"seed", sc.seed},
        {"fit_bias", sc.fit_bias},
        {"bias_scale", sc.bias_scale},
        {"label_cost", sc.label_cost},
        {"epochs", diag.epochs},
        {"dual_objective", diag.dual_objective},
        {"max_projected_gradient", diag.max_projected_gradient},
        {"converged", diag.converged}}},
      {"metadata",
       {{"seed", model.metadata.seed},
        {"created_utc", model.metadata.created_utc},
        {"corpus_fingerprint", model.metadata.corpus_fingerprint},
        {"train_docs", model.metadata.train_docs}}}};
}

inline ModelContainer model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != kModelFormatName) throw DataError("not a codemix model file");
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw DataError("unsupported model format version " + std::to_string(version) + " (expected " +
                      std::to_string(kModelFormatVersion) + ")");
    }

    const auto& f = j.at("features");
    FeatureConfig fc;
    fc.analyzer = parse_analyzer(f.at("analyzer").get<std::string>());
    fc.char_range = {f.at("char_ngrams").at(0).get<std::size_t>(), f.at("char_ngrams").at(1).get<std::size_t>()};
    fc.word_range = {f.at("word_ngrams").at(0).get<std::size_t>(), f.at("word_ngrams").at(1).get<std::size_t>()};
    fc.min_df = f.at("min_df").get<std::size_t>();
    fc.lowercase = f.at("lowercase").get<bool>();

    std::vector<FeatureBlock> blocks;
    for (const auto& b : f.at("blocks")) {
      FeatureBlock block;
      const auto kind = b.at("kind").get<std::string>();
      if (kind == "char") block.kind = BlockKind::Char;
      else if (kind == "word") block.kind = BlockKind::Word;
      else throw DataError("unknown feature block kind '" + kind + "'");
      block.range = {b.at("ngrams").at(0).get<std::size_t>(), b.at("ngrams").at(1).get<std::size_t>()};
      block.vocab = Vocabulary(b.at("terms").get<std::vector<std::string>>());
      block.idf = b.at("idf").get<std::vector<double>>();
      blocks.push_back(std::move(block));
    }
    TfidfModel features(fc, std::move(blocks), f.at("n_docs").get<std::size_t>());

    const auto& s = j.at("svm");
    SvmConfig sc;
    sc.c = s.at("c").get<double>();
    sc.tolerance = s.at("tolerance").get<double>();
    sc.max_epochs = s.at("max_epochs").get<std::size_t>();
    sc.seed = s.at("seed").get<std::uint64_t>();
    sc.positive_label = parse_label(s.at("positive_label").get<std::string>());
    sc.fit_bias = s.at("fit_bias").get<bool>();
    sc.bias_scale = s.at("bias_scale").get<double>();
    sc.label_cost = s.at("label_cost").get<std::array<double, kNumLabels>>();
    TrainingDiagnostics diag{s.at("epochs").get<std::size_t>(), s.at("dual_objective").get<double>(),
                             s.at("max_projected_gradient").get<double>(), s.at("converged").get<bool>()};
    LinearSvmModel svm(s.at("weights").get<std::vector<double>>(), s.at("bias").get<double>(),
                       sc.positive_label, diag);
    if (svm.dim() != features.dimension()) {
      throw DataError("model is inconsistent: " + std::to_string(svm.dim()) + " weights for " +
                      std::to_string(features.dimension()) + " features");
    }

    const auto& m = j.at("metadata");
    TrainingMetadata meta{m.at("seed").get<std::uint64_t>(), m.at("created_utc").get<std::string>(),
                          m.at("corpus_fingerprint").get<std::string>(), m.at("train_docs").get<std::size_t>()};
    return ModelContainer{std::move(features), std::move(svm), sc, std::move(meta)};
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  } catch (const ConfigError& e) {
    throw DataError(std::string("model file holds an invalid configuration: ") + e.what());
  }
}

inline std::string serialize_model(const ModelContainer& model) {
  std::string text = to_json(model).dump() + "\n";
  if (text.size() > kMaxModelBytes) {
    throw DataError("serialized model is " + std::to_string(text.size()) + " bytes, above the " +
                    std::to_string(kMaxModelBytes) + "-byte cap");
  }
  return text;
}

inline ModelContainer parse_model(std::string_view text) {
  if (text.size() > kMaxModelBytes) throw DataError("model file exceeds the size cap");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model file is not valid JSON: ") + e.what());
  }
  return model_from_json(j);
}

inline void save_model(const ModelContainer& model, const std::string& path) {
  write_file(path, serialize_model(model));
}

inline ModelContainer load_model(const std::string& path) { return parse_model(read_file(path)); }

}  // namespace codemix
