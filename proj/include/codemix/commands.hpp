#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "error.hpp"
#include "metrics.hpp"
#include "model_io.hpp"
#include "predictions.hpp"
#include "svm.hpp"
#include "textfeat.hpp"

namespace codemix {

// Process exit statuses.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitInternal = 3 };

// Defaults reproduce the reference setup: char 1-6 + word 1-3 union,
// linear SVM with C = 1, 85/15 stratified split.
struct RunConfig {
  FeatureConfig features;
  SvmConfig svm;
  double train_fraction = 0.85;
  std::uint64_t seed = 1;

  void validate() const {
    features.validate();
    svm.validate();
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
      throw ConfigError("train fraction must lie strictly between 0 and 1");
    }
  }
};

// Fits TF-IDF on `train` only, then the SVM on its vectors.
inline ModelContainer train_pipeline(const LabeledCorpus& train, RunConfig config) {
  config.svm.seed = config.seed;
  config.validate();
  if (!train.fully_labeled()) throw DataError("training data must be fully labeled");
  const auto texts = train.texts();
  TfidfModel features = TfidfModel::fit(texts, config.features);
  const auto labels = train.labels();
  auto data = make_training_set(features.transform(texts), labels, config.svm.positive_label);
  LinearSvmModel svm = train_svm(data, config.svm);
  TrainingMetadata meta{config.seed, utc_timestamp(), hex64(fingerprint(train)), train.size()};
  return ModelContainer{std::move(features), std::move(svm), config.svm, std::move(meta)};
}

inline std::vector<Prediction> predict_corpus(const ModelContainer& model, const LabeledCorpus& corpus) {
  std::vector<Prediction> out;
  out.reserve(corpus.size());
  for (const auto& d : corpus.docs) {
    const auto x = model.featurize(d.text);
    const double score = model.svm.decision_value(x);
    out.push_back({d.id, model.svm.predict(x), score});
  }
  return out;
}

inline EvalReport evaluate_predictions(const LabeledCorpus& gold, const std::vector<Prediction>& preds) {
  const auto aligned = align_predictions(gold, preds);
  return evaluate(confusion(aligned.golds, aligned.preds));
}

// Weighted F1 of always predicting the most frequent gold label.
inline EvalReport majority_baseline(const LabeledCorpus& train, const LabeledCorpus& test) {
  const auto stats = corpus_stats(train);
  const Label majority = stats.count(Label::OFF) > stats.count(Label::NOT) ? Label::OFF : Label::NOT;
  const auto golds = test.labels();
  const std::vector<Label> preds(golds.size(), majority);
  return evaluate(confusion(golds, preds));
}

inline int cmd_stats(const std::string& dataset, std::ostream& out) {
  out << render_stats(corpus_stats(load_dataset(dataset)));
  return kExitOk;
}

inline int cmd_split(const std::string& dataset, double fraction, std::uint64_t seed,
                     const std::string& train_out, const std::string& dev_out, std::ostream& out) {
  const auto split = stratified_split(load_dataset(dataset), fraction, seed);
  write_file(train_out, serialize_dataset(split.train));
  write_file(dev_out, serialize_dataset(split.dev));
  out << "train: " << split.train.size() << " documents -> " << train_out << "\n"
      << "dev:   " << split.dev.size() << " documents -> " << dev_out << "\n";
  return kExitOk;
}

inline int cmd_train(const std::string& train_path, const RunConfig& config, const std::string& model_out,
                     const std::optional<std::string>& dev_path, ReportFormat format, std::ostream& out) {
  config.validate();
  const auto train = load_dataset(train_path);
  const auto model = train_pipeline(train, config);
  save_model(model, model_out);
  const auto& diag = model.svm.diagnostics();
  out << "trained on " << train.size() << " documents, " << model.features.dimension() << " features ("
      << to_string(config.features.analyzer) << "), " << diag.epochs << " epochs"
      << (diag.converged ? "" : " (max epochs reached)") << "\n"
      << "model written to " << model_out << "\n";
  if (dev_path) {
    const auto dev = load_dataset(*dev_path);
    const auto report = evaluate_predictions(dev, predict_corpus(model, dev));
    out << "\ndev set (" << dev.size() << " documents): weighted F1 " << format_score(report.weighted_f1) << "\n"
        << render_report(report, format);
  }
  return kExitOk;
}

inline int cmd_predict(const std::string& model_path, const std::string& input_path,
                       const std::string& out_path, std::ostream& out) {
  const auto model = load_model(model_path);
  const auto corpus = load_dataset(input_path);
  const auto text = serialize_predictions(predict_corpus(model, corpus));
  if (out_path == "-") {
    out << text;
  } else {
    write_file(out_path, text);
    out << "wrote " << corpus.size() << " predictions to " << out_path << "\n";
  }
  return kExitOk;
}

inline int cmd_evaluate(const std::string& gold_path, const std::string& pred_path, ReportFormat format,
                        const std::optional<std::string>& json_out, std::ostream& out) {
  const auto gold = load_dataset(gold_path);
  const auto preds = parse_predictions(read_file(pred_path), pred_path);
  const auto report = evaluate_predictions(gold, preds);
  out << render_report(report, format);
  if (json_out) write_file(*json_out, report_to_json(report).dump(2) + "\n");
  return kExitOk;
}

// Runs a command, mapping exceptions to exit statuses and messages on `err`.
inline int run_guarded(const std::function<int()>& command, std::ostream& err) {
  try {
    return command();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace codemix
