// codemix: TF-IDF n-gram + linear SVM offensive-language classifier.
//
//   codemix stats    DATASET
//   codemix split    DATASET --train-out T --dev-out D [--fraction F] [--seed S]
//   codemix train    TRAIN --model M [--dev DEV] [feature/SVM flags]
//   codemix predict  --model M INPUT [--out FILE]
//   codemix evaluate GOLD PREDICTIONS [--format table|json] [--json-out FILE]

#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include <codemix/commands.hpp>

int main(int argc, char** argv) {
  using namespace codemix;

  CLI::App app{"Offensive-language detection for code-mixed text: TF-IDF n-grams + linear SVM"};
  app.require_subcommand(1);

  std::string dataset;
  auto* stats = app.add_subcommand("stats", "Print per-label counts and percentages of a labeled TSV");
  stats->add_option("dataset", dataset, "Labeled TSV (id, text, label)")->required();

  double fraction = 0.85;
  std::uint64_t split_seed = 1;
  std::string train_out, dev_out;
  auto* split = app.add_subcommand("split", "Stratified train/dev split");
  split->add_option("dataset", dataset, "Labeled TSV")->required();
  split->add_option("--fraction", fraction, "Training fraction per label")->capture_default_str();
  split->add_option("--seed", split_seed, "Shuffle seed")->capture_default_str();
  split->add_option("--train-out", train_out, "Output TSV for the training part")->required();
  split->add_option("--dev-out", dev_out, "Output TSV for the development part")->required();

  RunConfig config;
  std::string analyzer = "char+word";
  std::pair<std::size_t, std::size_t> char_ngrams{config.features.char_range.min, config.features.char_range.max};
  std::pair<std::size_t, std::size_t> word_ngrams{config.features.word_range.min, config.features.word_range.max};
  bool no_lowercase = false;
  double off_cost = 1.0;
  std::string model_path;
  std::string dev_path;
  std::string format = "table";
  auto* train = app.add_subcommand("train", "Fit TF-IDF features and a linear SVM, write a model file");
  train->add_option("train", dataset, "Labeled training TSV")->required();
  train->add_option("--model", model_path, "Output model file")->required();
  train->add_option("--dev", dev_path, "Labeled development TSV to score after training");
  train->add_option("--analyzer", analyzer, "Feature set")
      ->check(CLI::IsMember({"char", "word", "char+word"}))
      ->capture_default_str();
  train->add_option("--char-ngrams", char_ngrams, "Character n-gram sizes MIN MAX")->capture_default_str();
  train->add_option("--word-ngrams", word_ngrams, "Word n-gram sizes MIN MAX")->capture_default_str();
  train->add_option("--min-df", config.features.min_df, "Minimum document frequency")->capture_default_str();
  train->add_flag("--no-lowercase", no_lowercase, "Disable case folding");
  train->add_option("--c", config.svm.c, "SVM regularization constant C")->capture_default_str();
  train->add_option("--tolerance", config.svm.tolerance, "Projected-gradient stopping tolerance")
      ->capture_default_str();
  train->add_option("--max-epochs", config.svm.max_epochs, "Epoch limit")->capture_default_str();
  train->add_flag("--bias", config.svm.fit_bias, "Append a constant bias feature");
  train->add_option("--off-cost", off_cost, "Multiplier on C for OFF examples")->capture_default_str();
  train->add_option("--seed", config.seed, "Training seed")->capture_default_str();
  train->add_option("--format", format, "Dev report format")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();

  std::string input_path;
  std::string out_path = "-";
  auto* predict = app.add_subcommand("predict", "Label a TSV with a trained model");
  predict->add_option("--model", model_path, "Model file")->required();
  predict->add_option("input", input_path, "TSV with id and text columns")->required();
  predict->add_option("--out", out_path, "Prediction TSV ('-' for stdout)")->capture_default_str();

  std::string gold_path, pred_path, json_out;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score predictions against gold labels");
  evaluate_cmd->add_option("gold", gold_path, "Labeled gold TSV")->required();
  evaluate_cmd->add_option("predictions", pred_path, "Prediction TSV (id, label[, score])")->required();
  evaluate_cmd->add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();
  evaluate_cmd->add_option("--json-out", json_out, "Also write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? kExitOk : kExitUsage;
  }

  auto optional_path = [](const std::string& p) { return p.empty() ? std::nullopt : std::optional<std::string>(p); };

  return run_guarded(
      [&]() -> int {
        if (*stats) return cmd_stats(dataset, std::cout);
        if (*split) return cmd_split(dataset, fraction, split_seed, train_out, dev_out, std::cout);
        if (*train) {
          config.features.analyzer = parse_analyzer(analyzer);
          config.features.char_range = {char_ngrams.first, char_ngrams.second};
          config.features.word_range = {word_ngrams.first, word_ngrams.second};
          config.features.lowercase = !no_lowercase;
          config.svm.label_cost[label_index(Label::OFF)] = off_cost;
          return cmd_train(dataset, config, model_path, optional_path(dev_path), parse_report_format(format),
                           std::cout);
        }
        if (*predict) return cmd_predict(model_path, input_path, out_path, std::cout);
        if (*evaluate_cmd) {
          return cmd_evaluate(gold_path, pred_path, parse_report_format(format), optional_path(json_out),
                              std::cout);
        }
        return kExitUsage;
      },
      std::cerr);
}
