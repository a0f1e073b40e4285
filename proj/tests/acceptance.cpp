// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <codemix/commands.hpp>

#include "support/metrics_oracle.hpp"
#include "support/split_oracle.hpp"
#include "support/synthetic.hpp"
#include "support/tfidf_oracle.hpp"

namespace {

using namespace codemix;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail.clear();
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Table 4 matrices against the weighted scores of Tables 2-3.
Outcome golden_metrics() {
  struct Row {
    const char* system;
    std::uint64_t nn, no, on, oo;
    double p, r, f;
  };
  const Row rows[] = {
      {"Task1 Malayalam SVM(char+word)", 332, 2, 18, 48, 0.9505, 0.9500, 0.9471},
      {"Task1 Malayalam XLM-RoBERTa", 320, 14, 16, 50, 0.9241, 0.9250, 0.9245},
      {"Task2 Tamil SVM(word)", 389, 76, 63, 412, 0.8524, 0.8521, 0.8520},
      {"Task2 Tamil XLM-RoBERTa", 390, 75, 50, 425, 0.8680, 0.8670, 0.8669},
      {"Task2 Malayalam SVM(char+word)", 403, 85, 152, 360, 0.7686, 0.7630, 0.7623},
      {"Task2 Malayalam XLM-RoBERTa", 127, 361, 59, 453, 0.6181, 0.5800, 0.5337},
  };
  constexpr double kTolerance = 5e-5;
  Outcome out;
  int checked = 0;
  for (const auto& row : rows) {
    ConfusionMatrix m;
    m.counts = {{{row.nn, row.no}, {row.on, row.oo}}};
    const auto report = evaluate(m);
    const std::pair<const char*, std::pair<double, double>> values[] = {
        {"P", {report.weighted_precision, row.p}},
        {"R", {report.weighted_recall, row.r}},
        {"F1", {report.weighted_f1, row.f}}};
    for (const auto& [name, pair] : values) {
      ++checked;
      const double diff = std::abs(pair.first - pair.second);
      std::printf("    %-32s %-2s computed %.6f published %.4f |diff| %.2e %s\n", row.system, name, pair.first,
                  pair.second, diff, diff <= kTolerance ? "ok" : "OUT OF TOLERANCE");
      if (diff > kTolerance) out.fail(fmt("%s %s: %.6f vs %.4f", row.system, name, pair.first, pair.second));
    }
  }
  if (out.pass) out.detail = fmt("%d values within %.0e", checked, kTolerance);
  return out;
}

Outcome recall_accuracy_identity() {
  Xoshiro256 rng(1001);
  Outcome out;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = 1 + rng.uniform_below(200);
    std::vector<Label> gold(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      gold[i] = kLabels[rng.uniform_below(2)];
      pred[i] = kLabels[rng.uniform_below(2)];
    }
    const auto m = confusion(gold, pred);
    const auto r = evaluate(m);
    const double accuracy = static_cast<double>(m.correct()) / static_cast<double>(m.total());
    const double o = oracle::weighted_metrics(gold, pred).recall;
    worst = std::max({worst, std::abs(r.weighted_recall - accuracy), std::abs(o - accuracy)});
  }
  if (worst > 1e-12) out.fail(fmt("max |weighted recall - accuracy| = %.3e", worst));
  else out.detail = fmt("1000 random pairs, max deviation %.3e <= 1e-12", worst);
  return out;
}

Outcome tfidf_oracle_equivalence() {
  Xoshiro256 rng(2002);
  const std::vector<std::u32string> alphabet = {U"a", U"b", U"c", U"A", U"N", U" ", U"\t", U"!", U"-", U"7",
                                                U"ß", U"Σ", U"ς", U"പ", U"ം", U"്", U"த", U"\U0001F44D", U" "};
  Outcome out;
  int corpora = 0, vectors = 0, empty_vocab = 0;
  double worst = 0.0;
  while (corpora < 200) {
    oracle::Settings s;
    const auto analyzer = rng.uniform_below(3);
    s.use_char = analyzer != 1;
    s.use_word = analyzer != 0;
    s.char_lo = 1 + rng.uniform_below(6);
    s.char_hi = s.char_lo + rng.uniform_below(7 - s.char_lo);
    s.word_lo = 1 + rng.uniform_below(3);
    s.word_hi = s.word_lo + rng.uniform_below(4 - s.word_lo);
    s.min_df = 1 + rng.uniform_below(2);
    s.lowercase = rng.uniform_below(5) != 0;

    FeatureConfig config;
    config.analyzer = analyzer == 0 ? Analyzer::Char : analyzer == 1 ? Analyzer::Word : Analyzer::CharWord;
    config.char_range = {s.char_lo, s.char_hi};
    config.word_range = {s.word_lo, s.word_hi};
    config.min_df = s.min_df;
    config.lowercase = s.lowercase;

    std::vector<std::string> docs;
    const auto n_docs = 1 + rng.uniform_below(10);
    for (std::size_t d = 0; d < n_docs; ++d) {
      std::u32string text;
      const auto len = rng.uniform_below(31);
      for (std::size_t k = 0; k < len; ++k) text += alphabet[rng.uniform_below(alphabet.size())];
      docs.push_back(unicode::encode_utf8(text));
    }
    const auto expected = oracle::fit(docs, s);
    if (expected.dimension() == 0) {
      ++empty_vocab;
      try {
        TfidfModel::fit(docs, config);
        out.fail("empty oracle vocabulary but fit succeeded");
      } catch (const DataError&) {
      }
      continue;
    }
    ++corpora;
    const auto model = TfidfModel::fit(docs, config);
    if (model.dimension() != expected.dimension()) {
      out.fail(fmt("dimension %zu vs oracle %zu", model.dimension(), expected.dimension()));
      continue;
    }
    std::vector<std::string> probes = docs;
    probes.push_back(unicode::encode_utf8(U"Ab c പം!"));
    for (const auto& doc : probes) {
      const auto want = expected.transform(doc);
      std::vector<double> got(model.dimension(), 0.0);
      for (const auto& e : model.transform(doc).entries) got[e.index] = e.value;
      for (std::size_t k = 0; k < got.size(); ++k) worst = std::max(worst, std::abs(got[k] - want[k]));
      ++vectors;
    }
  }
  if (worst > 1e-9) out.fail(fmt("max component deviation %.3e > 1e-9", worst));
  if (out.pass) {
    out.detail = fmt("%d corpora compared (%d more with empty vocabulary also rejected), %d vectors, max deviation %.3e <= 1e-9", corpora,
                     empty_vocab, vectors, worst);
  }
  return out;
}

SparseVector point(double x, double y) {
  SparseVector v;
  v.dim = 2;
  if (x != 0.0) v.entries.push_back({0, x});
  if (y != 0.0) v.entries.push_back({1, y});
  return v;
}

Outcome svm_correctness() {
  Outcome out;
  // (a) symmetric pair
  {
    TrainingSet data;
    data.x = {point(1, 0), point(-1, 0)};
    data.y = {1, -1};
    const auto model = train_svm(data, SvmConfig{});
    const auto& w = model.weights();
    if (std::abs(w[0] - 1.0) > 1e-3 || std::abs(w[1]) > 1e-3) out.fail(fmt("(a) w = (%.6f, %.6f)", w[0], w[1]));
  }

  // (b) + (c)
  Xoshiro256 rng(3003);
  std::size_t epochs_logged = 0;
  auto check_epochs = [&](const TrainingSet& data, const SvmConfig& config, const char* tag, int trial) {
    double previous = -INFINITY;
    bool box_ok = true, monotone_ok = true;
    const auto model = train_svm(data, config, [&](const EpochState& s) {
      ++epochs_logged;
      for (std::size_t i = 0; i < s.alpha.size(); ++i)
        box_ok = box_ok && s.alpha[i] >= 0.0 && s.alpha[i] <= s.upper_bound[i];
      monotone_ok = monotone_ok && s.dual_objective >= previous - 1e-12 * std::max(1.0, std::abs(previous));
      previous = s.dual_objective;
    });
    if (!box_ok) out.fail(fmt("(c) %s trial %d: alpha outside [0, C]", tag, trial));
    if (!monotone_ok) out.fail(fmt("(c) %s trial %d: dual objective decreased", tag, trial));
    return model;
  };

  int separable_ok = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const double theta = 2 * std::numbers::pi * rng.uniform_unit();
    const double nx = std::cos(theta), ny = std::sin(theta);
    const std::size_t n = 2 + rng.uniform_below(19);
    TrainingSet data;
    bool has_pos = false, has_neg = false;
    while (data.x.size() < n || !has_pos || !has_neg) {
      const double x = 4 * rng.uniform_unit() - 2, y = 4 * rng.uniform_unit() - 2;
      const double side = nx * x + ny * y;
      if (std::abs(side) < 0.05) continue;
      if (data.x.size() >= n) {
        data.x.clear();
        data.y.clear();
        has_pos = has_neg = false;
      }
      data.x.push_back(point(x, y));
      data.y.push_back(side > 0 ? 1 : -1);
      (side > 0 ? has_pos : has_neg) = true;
    }
    SvmConfig config;
    config.c = 1000.0;
    config.tolerance = 1e-6;
    config.max_epochs = 100000;
    config.seed = rng();
    const auto model = check_epochs(data, config, "separable", trial);
    bool all = true;
    for (std::size_t i = 0; i < data.x.size(); ++i) all = all && data.y[i] * model.decision_value(data.x[i]) > 0.0;
    separable_ok += all;
  }
  if (separable_ok != 50) out.fail(fmt("(b) %d/50 separable instances fit perfectly", separable_ok));

  for (int trial = 0; trial < 50; ++trial) {
    TrainingSet data;
    const std::size_t n = 4 + rng.uniform_below(30);
    for (std::size_t i = 0; i < n; ++i) {
      data.x.push_back(point(2 * rng.uniform_unit() - 1, 2 * rng.uniform_unit() - 1));
      data.y.push_back(i % 2 ? 1 : -1);
    }
    SvmConfig config;
    config.c = 0.05 + 5 * rng.uniform_unit();
    config.seed = rng();
    config.fit_bias = trial % 2 == 0;
    check_epochs(data, config, "overlapping", trial);
  }
  if (out.pass) {
    out.detail = fmt("(a) w = (1, 0) within 1e-3; (b) 50/50 separable sets at 100%%; (c) %zu epochs feasible and "
                     "monotone (slack 1e-12 relative)",
                     epochs_logged);
  }
  return out;
}

Outcome stratified_split_properties() {
  Xoshiro256 rng(4004);
  Outcome out;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t counts[2] = {2 + rng.uniform_below(80), 2 + rng.uniform_below(80)};
    LabeledCorpus corpus;
    std::size_t left[2] = {counts[0], counts[1]};
    for (std::size_t i = 0; i < counts[0] + counts[1]; ++i) {
      std::size_t which = rng.uniform_below(2);
      if (left[which] == 0) which = 1 - which;
      --left[which];
      corpus.docs.push_back({"doc" + std::to_string(i), "t", kLabels[which]});
    }
    const auto pct = 1 + rng.uniform_below(99);
    const double fraction = static_cast<double>(pct) / 100.0;
    const auto seed = rng();
    const auto split = stratified_split(corpus, fraction, seed);
    const auto again = stratified_split(corpus, fraction, seed);
    if (serialize_dataset(split.train) != serialize_dataset(again.train) ||
        serialize_dataset(split.dev) != serialize_dataset(again.dev)) {
      out.fail(fmt("trial %d: not deterministic", trial));
    }
    std::set<std::string> train_ids, dev_ids, all_ids;
    for (const auto& d : split.train.docs) train_ids.insert(d.id);
    for (const auto& d : split.dev.docs) dev_ids.insert(d.id);
    for (const auto& d : corpus.docs) all_ids.insert(d.id);
    std::set<std::string> joined = train_ids;
    joined.insert(dev_ids.begin(), dev_ids.end());
    if (train_ids.size() + dev_ids.size() != corpus.size() || joined != all_ids) {
      out.fail(fmt("trial %d: not a partition", trial));
    }
    for (Label label : kLabels) {
      const auto in_train = static_cast<std::size_t>(std::count_if(
          split.train.docs.begin(), split.train.docs.end(), [&](const Document& d) { return d.label == label; }));
      const auto total = counts[label_index(label)];
      const auto want = oracle::train_quota(pct, 100, total);
      if (in_train != want) {
        out.fail(fmt("trial %d %s: %zu in train, quota %zu", trial, std::string(to_string(label)).c_str(), in_train, want));
      }
    }
  }
  if (out.pass) out.detail = "100 random corpora: quotas exact (half-up), partition, determinism";
  return out;
}

Outcome end_to_end_synthetic() {
  const auto start = std::chrono::steady_clock::now();
  synthetic::Options opt;
  opt.docs = 1000;
  auto corpus = synthetic::generate(opt);
  LabeledCorpus train, test;
  train.docs.assign(corpus.docs.begin(), corpus.docs.begin() + 800);
  test.docs.assign(corpus.docs.begin() + 800, corpus.docs.end());

  const RunConfig config;  // char 1-6 + word 1-3 union
  const auto model = train_pipeline(train, config);
  const auto report = evaluate_predictions(test, predict_corpus(model, test));
  const auto baseline = majority_baseline(train, test);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  Outcome out;
  if (report.weighted_f1 < 0.90) out.fail(fmt("weighted F1 %.4f < 0.90", report.weighted_f1));
  if (!(report.weighted_f1 > baseline.weighted_f1)) {
    out.fail(fmt("weighted F1 %.4f does not beat majority baseline %.4f", report.weighted_f1, baseline.weighted_f1));
  }
  if (seconds >= 60.0) out.fail(fmt("pipeline took %.1f s", seconds));
  if (out.pass) {
    out.detail = fmt("800/200 docs, %zu features, weighted F1 %.4f (>= 0.90), majority baseline %.4f, %.2f s (< 60 s)",
                     model.features.dimension(), report.weighted_f1, baseline.weighted_f1, seconds);
  }
  return out;
}

Outcome persistence_round_trip() {
  synthetic::Options opt;
  opt.docs = 400;
  const auto model = train_pipeline(synthetic::generate(opt), RunConfig{});
  opt.docs = 100;
  opt.seed = 77;
  opt.id_prefix = "probe";
  const auto probe = synthetic::generate(opt);

  const auto path = std::string("acceptance_model.json");
  save_model(model, path);
  const auto loaded = load_model(path);
  std::remove(path.c_str());

  const auto in_memory = serialize_predictions(predict_corpus(model, probe));
  const auto from_disk = serialize_predictions(predict_corpus(loaded, probe));
  Outcome out;
  if (in_memory != from_disk) out.fail("prediction files differ after save/load");
  else out.detail = fmt("100 documents, %zu-byte prediction files identical", in_memory.size());
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"metrics golden values (six published confusion matrices, +-0.00005)", golden_metrics},
      {"weighted recall equals accuracy (1000 random pairs, 1e-12)", recall_accuracy_identity},
      {"TF-IDF matches brute-force oracle (200 corpora, 1e-9)", tfidf_oracle_equivalence},
      {"SVM correctness (analytic pair, separable sets, dual feasibility/monotonicity)", svm_correctness},
      {"stratified split quotas, partition, determinism (100 corpora)", stratified_split_properties},
      {"end-to-end synthetic code-mixed run (F1 >= 0.90, beats majority, < 60 s)", end_to_end_synthetic},
      {"persistence: save/load predictions byte-identical (100 docs)", persistence_round_trip},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome.fail(std::string("exception: ") + e.what());
    }
    std::printf("[%s] %s: %s\n", outcome.pass ? "PASS" : "FAIL", name, outcome.detail.c_str());
    std::fflush(stdout);
    failed += !outcome.pass;
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
