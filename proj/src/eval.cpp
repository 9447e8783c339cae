#include "mgtd/eval.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include "mgtd/csv.hpp"
#include "mgtd/error.hpp"
#include "mgtd/rng.hpp"
#include "mgtd/style.hpp"

namespace mgtd {

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] != fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] == fold) out.push_back(i);
  }
  return out;
}

FoldPlan stratified_kfold(const std::vector<Label>& labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InputError("stratified_kfold: k must be at least 2");
  std::array<std::vector<std::size_t>, 2> members;
  for (std::size_t i = 0; i < labels.size(); ++i) members[static_cast<std::size_t>(to_int(labels[i]))].push_back(i);
  for (std::size_t c = 0; c < 2; ++c) {
    if (members[c].size() < k) {
      throw InputError(fmt::format("stratified_kfold: class {} has {} documents, fewer than k={}", c,
                                   members[c].size(), k));
    }
  }
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignments.assign(labels.size(), 0);
  Rng rng(seed);
  std::size_t offset = 0;
  for (auto& m : members) {
    rng.shuffle(std::span<std::size_t>(m));
    for (std::size_t p = 0; p < m.size(); ++p) plan.assignments[m[p]] = (offset + p) % k;
    offset = (offset + m.size()) % k;
  }
  return plan;
}

Metrics compute_metrics(std::span<const Label> predictions, std::span<const Label> truth) {
  if (predictions.size() != truth.size()) throw InputError("compute_metrics: length mismatch");
  if (predictions.empty()) throw InputError("compute_metrics: no predictions");
  Metrics m;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool p = predictions[i] == Label::Machine;
    const bool t = truth[i] == Label::Machine;
    if (p && t) ++m.tp;
    if (p && !t) ++m.fp;
    if (!p && t) ++m.fn;
    if (!p && !t) ++m.tn;
  }
  const auto d = [](std::size_t v) { return static_cast<double>(v); };
  m.accuracy = d(m.tp + m.tn) / d(truth.size());
  m.precision_undefined = m.tp + m.fp == 0;
  m.precision = m.precision_undefined ? 0.0 : d(m.tp) / d(m.tp + m.fp);
  m.recall = m.tp + m.fn == 0 ? 0.0 : d(m.tp) / d(m.tp + m.fn);
  m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  return m;
}

Metrics mean_metrics(const std::vector<Metrics>& folds) {
  Metrics m;
  if (folds.empty()) return m;
  for (const auto& f : folds) {
    m.accuracy += f.accuracy;
    m.precision += f.precision;
    m.recall += f.recall;
    m.f1 += f.f1;
    m.precision_undefined = m.precision_undefined || f.precision_undefined;
    m.tp += f.tp;
    m.fp += f.fp;
    m.fn += f.fn;
    m.tn += f.tn;
  }
  const double k = static_cast<double>(folds.size());
  m.accuracy /= k;
  m.precision /= k;
  m.recall /= k;
  m.f1 /= k;
  return m;
}

// ---- featurizer ----

namespace {

std::vector<std::string> dense_names(const FeaturizerSpec& spec) {
  std::vector<std::string> names;
  if (spec.style) {
    for (const auto& n : StyleFeatures::names()) names.push_back(n);
  }
  if (spec.embeddings) {
    for (std::size_t i = 0; i < spec.word2vec.dimension; ++i) names.push_back(fmt::format("emb:{}", i));
  }
  return names;
}

nlohmann::json tfidf_config_json(const TfidfConfig& c) {
  nlohmann::json j = {{"min_df", c.min_df},
                      {"sublinear", c.sublinear},
                      {"ngram_max", c.ngram_max},
                      {"drop_stopwords", c.drop_stopwords}};
  j["max_features"] = c.max_features ? nlohmann::json(*c.max_features) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json word2vec_config_json(const Word2VecConfig& c) {
  return {{"dimension", c.dimension}, {"window", c.window},       {"negatives", c.negatives},
          {"epochs", c.epochs},       {"learning_rate", c.learning_rate}, {"min_count", c.min_count},
          {"seed", c.seed},           {"drop_stopwords", c.drop_stopwords}};
}

Word2VecConfig word2vec_config_from_json(const nlohmann::json& j) {
  Word2VecConfig c;
  c.dimension = j.at("dimension").get<std::size_t>();
  c.window = j.at("window").get<std::size_t>();
  c.negatives = j.at("negatives").get<std::size_t>();
  c.epochs = j.at("epochs").get<std::size_t>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.min_count = j.at("min_count").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.drop_stopwords = j.at("drop_stopwords").get<bool>();
  return c;
}

}  // namespace

Featurizer Featurizer::fit(const std::vector<CleanDocument>& train, const FeaturizerSpec& spec, std::uint64_t seed,
                           Execution exec) {
  if (!spec.tfidf && !spec.style && !spec.embeddings) throw InputError("featurizer: no feature blocks selected");
  if (train.empty()) throw InputError("featurizer: no training documents");
  Featurizer f;
  f.spec_ = spec;
  if (spec.tfidf) f.tfidf_ = TfidfModel::fit(train, spec.tfidf_config);
  if (spec.embeddings) {
    Word2VecConfig cfg = spec.word2vec;
    cfg.seed = derive_seed(seed, 0x77);
    f.spec_.word2vec = cfg;
    f.embeddings_ = train_word2vec(train, cfg);
  }
  if (spec.style || spec.embeddings) {
    const auto block = f.dense_block(train, exec);
    const std::size_t width = block.front().size();
    f.dense_min_.assign(width, 0.0);
    f.dense_max_.assign(width, 0.0);
    for (std::size_t j = 0; j < width; ++j) {
      double lo = block[0][j], hi = block[0][j];
      for (const auto& row : block) {
        lo = std::min(lo, row[j]);
        hi = std::max(hi, row[j]);
      }
      f.dense_min_[j] = lo;
      f.dense_max_[j] = hi;
    }
  }
  return f;
}

std::vector<std::vector<double>> Featurizer::dense_block(const std::vector<CleanDocument>& docs,
                                                         Execution exec) const {
  std::vector<std::vector<double>> rows(docs.size());
  std::vector<std::array<double, StyleFeatures::kWidth>> style;
  if (spec_.style) style = style_rows(docs, exec);
  for_each_index(docs.size(), exec, [&](std::size_t i) {
    auto& row = rows[i];
    if (spec_.style) row.assign(style[i].begin(), style[i].end());
    if (spec_.embeddings) {
      const auto e = doc_embedding(*embeddings_, featurized_tokens(docs[i], embeddings_->config().drop_stopwords));
      row.insert(row.end(), e.values.begin(), e.values.end());
    }
  });
  return rows;
}

std::vector<std::string> Featurizer::feature_names() const {
  std::vector<std::string> names;
  if (tfidf_) names = tfidf_->feature_names();
  const auto dense = dense_names(spec_);
  names.insert(names.end(), dense.begin(), dense.end());
  return names;
}

FeatureMatrix Featurizer::transform(const std::vector<CleanDocument>& docs, Execution exec) const {
  std::optional<FeatureMatrix> sparse;
  if (tfidf_) sparse = tfidf_->transform_all(docs, exec);
  if (!spec_.style && !spec_.embeddings) return std::move(*sparse);

  auto block = dense_block(docs, exec);
  FeatureMatrix dense(dense_names(spec_));
  for (std::size_t i = 0; i < docs.size(); ++i) {
    auto& row = block[i];
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double range = dense_max_[j] - dense_min_[j];
      row[j] = range > 0.0 ? std::clamp((row[j] - dense_min_[j]) / range, 0.0, 1.0) : 0.0;
    }
    dense.add_dense_row(row, docs[i].label);
  }
  if (!sparse) return dense;
  return FeatureMatrix::hstack(*sparse, dense);
}

void Featurizer::assert_no_leakage(const std::vector<CleanDocument>& train) const {
  if (tfidf_) {
    std::set<std::string> terms;
    for (const auto& d : train) {
      for (auto& t : ngrams(featurized_tokens(d, tfidf_->config().drop_stopwords), tfidf_->config().ngram_max)) {
        terms.insert(std::move(t));
      }
    }
    for (const auto& [term, col] : tfidf_->vocabulary()) {
      if (!terms.contains(term)) throw InvariantError("leakage: TF-IDF term '" + term + "' not in training documents");
    }
  }
  if (embeddings_) {
    std::set<std::string> tokens;
    for (const auto& d : train) {
      const auto& toks = featurized_tokens(d, embeddings_->config().drop_stopwords);
      tokens.insert(toks.begin(), toks.end());
    }
    for (const auto& w : embeddings_->words()) {
      if (!tokens.contains(w)) throw InvariantError("leakage: embedding word '" + w + "' not in training documents");
    }
  }
}

nlohmann::json Featurizer::to_json() const {
  nlohmann::json j;
  j["format"] = "mgtd-featurizer";
  j["version"] = 1;
  j["blocks"] = {{"tfidf", spec_.tfidf}, {"style", spec_.style}, {"embeddings", spec_.embeddings}};
  j["tfidf_config"] = tfidf_config_json(spec_.tfidf_config);
  j["word2vec"] = word2vec_config_json(spec_.word2vec);
  if (tfidf_) j["tfidf"] = tfidf_->to_json();
  if (embeddings_) {
    nlohmann::json words = nlohmann::json::array(), vectors = nlohmann::json::array();
    for (std::size_t i = 0; i < embeddings_->size(); ++i) {
      words.push_back(embeddings_->words()[i]);
      const auto v = embeddings_->vector(i);
      vectors.push_back(std::vector<double>(v.begin(), v.end()));
    }
    j["embeddings"] = {{"words", words}, {"vectors", vectors}};
  }
  j["dense_min"] = dense_min_;
  j["dense_max"] = dense_max_;
  return j;
}

Featurizer Featurizer::from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "mgtd-featurizer") throw ModelError("not a featurizer description");
    if (j.value("version", -1) != 1) throw ModelError("unsupported featurizer version");
    Featurizer f;
    f.spec_.tfidf = j.at("blocks").at("tfidf").get<bool>();
    f.spec_.style = j.at("blocks").at("style").get<bool>();
    f.spec_.embeddings = j.at("blocks").at("embeddings").get<bool>();
    f.spec_.word2vec = word2vec_config_from_json(j.at("word2vec"));
    if (f.spec_.tfidf) {
      f.tfidf_ = TfidfModel::from_json(j.at("tfidf"));
      f.spec_.tfidf_config = f.tfidf_->config();
    }
    if (f.spec_.embeddings) {
      EmbeddingTable table(f.spec_.word2vec.dimension, f.spec_.word2vec);
      const auto& words = j.at("embeddings").at("words");
      const auto& vectors = j.at("embeddings").at("vectors");
      if (words.size() != vectors.size()) throw ModelError("featurizer: embedding rows mismatch");
      for (std::size_t i = 0; i < words.size(); ++i) {
        table.add(words[i].get<std::string>(), vectors[i].get<std::vector<double>>());
      }
      f.embeddings_ = std::move(table);
    }
    f.dense_min_ = j.at("dense_min").get<std::vector<double>>();
    f.dense_max_ = j.at("dense_max").get<std::vector<double>>();
    if (f.dense_min_.size() != dense_names(f.spec_).size() || f.dense_max_.size() != f.dense_min_.size()) {
      throw ModelError("featurizer: scaling width mismatch");
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("featurizer: ") + e.what());
  } catch (const InputError& e) {
    throw ModelError(std::string("featurizer: ") + e.what());
  }
}

// ---- experiments ----

namespace {

std::vector<CleanDocument> subset(const std::vector<CleanDocument>& docs, const std::vector<std::size_t>& idx) {
  std::vector<CleanDocument> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(docs[i]);
  return out;
}

std::size_t kind_index(ModelKind kind) {
  return static_cast<std::size_t>(std::find(kAllModelKinds.begin(), kAllModelKinds.end(), kind) - kAllModelKinds.begin());
}

EvalReport run_with_plan(const Corpus& corpus, const ExperimentConfig& config, const FoldPlan& plan) {
  if (config.models.empty()) throw InputError("run_experiment: no model kinds");
  EvalReport report;
  report.k = config.k;
  report.seed = config.seed;
  std::vector<std::map<std::string, double>> importance_sums(config.models.size());
  report.models.resize(config.models.size());
  for (std::size_t m = 0; m < config.models.size(); ++m) report.models[m].kind = config.models[m];

  for (std::size_t fold = 0; fold < plan.k; ++fold) {
    const std::uint64_t fold_seed = derive_seed(config.seed, fold);
    const auto train_docs = subset(corpus.documents, plan.train_indices(fold));
    const auto test_docs = subset(corpus.documents, plan.test_indices(fold));
    const Featurizer featurizer = Featurizer::fit(train_docs, config.features, fold_seed);
    if (config.check_leakage) featurizer.assert_no_leakage(train_docs);
    const FeatureMatrix x_train = featurizer.transform(train_docs);
    const FeatureMatrix x_test = featurizer.transform(test_docs);

    for (std::size_t m = 0; m < config.models.size(); ++m) {
      ModelConfig mc = config.model;
      mc.seed = derive_seed(fold_seed, 100 + kind_index(config.models[m]));
      const TrainedModel model = train(config.models[m], x_train, mc);
      const auto predictions = predict(model, x_test);
      report.models[m].folds.push_back(compute_metrics(predictions, x_test.labels()));
      if (supports_importance(config.models[m])) {
        for (const auto& [name, value] : feature_importance(model)) importance_sums[m][name] += value;
      }
    }
  }

  for (std::size_t m = 0; m < config.models.size(); ++m) {
    auto& result = report.models[m];
    result.mean = mean_metrics(result.folds);
    if (supports_importance(result.kind)) {
      ImportanceRanking ranking;
      for (const auto& [name, sum] : importance_sums[m]) ranking.emplace_back(name, sum / static_cast<double>(plan.k));
      std::stable_sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
      result.importance = std::move(ranking);
    }
  }
  return report;
}

}  // namespace

EvalReport run_experiment(const Corpus& corpus, const ExperimentConfig& config) {
  if (corpus.documents.empty()) throw InputError("run_experiment: corpus is empty");
  const FoldPlan plan = stratified_kfold(corpus.labels(), config.k, config.seed);
  EvalReport report = run_with_plan(corpus, config, plan);
  report.name = "evaluation";
  return report;
}

EvalReport run_experiment(const Corpus& corpus, const FeaturizerSpec& features, const std::vector<ModelKind>& kinds,
                          std::size_t k, std::uint64_t seed) {
  ExperimentConfig config;
  config.features = features;
  config.models = kinds;
  config.k = k;
  config.seed = seed;
  return run_experiment(corpus, config);
}

AblationReport run_ablation_experiment(const Corpus& corpus, const AblationConfig& config) {
  if (!corpus.has_both_classes()) throw InputError("run_ablation_experiment: both classes must be present");
  auto [ablated, map] = intersection_ablation(corpus);
  const FoldPlan plan = stratified_kfold(corpus.labels(), config.k, config.seed);

  ExperimentConfig base;
  base.models = config.models;
  base.k = config.k;
  base.seed = config.seed;
  base.model = config.model;
  base.features.tfidf_config = config.tfidf;
  base.features.word2vec = config.word2vec;

  AblationReport report;
  report.map = std::move(map);
  report.arms[0] = run_with_plan(corpus, base, plan);
  report.arms[0].name = "A";
  report.arms[1] = run_with_plan(ablated, base, plan);
  report.arms[1].name = "B";
  ExperimentConfig arm_c = base;
  arm_c.features.style = true;
  arm_c.features.embeddings = true;
  report.arms[2] = run_with_plan(ablated, arm_c, plan);
  report.arms[2].name = "C";

  for (std::size_t m = 0; m < config.models.size(); ++m) {
    AblationArmDelta d;
    d.kind = config.models[m];
    d.accuracy_a = report.arms[0].models[m].mean.accuracy;
    d.accuracy_b = report.arms[1].models[m].mean.accuracy;
    d.accuracy_c = report.arms[2].models[m].mean.accuracy;
    d.drop = d.accuracy_a - d.accuracy_b;
    if (d.drop > 0.0) d.recovery = (d.accuracy_c - d.accuracy_b) / d.drop;
    report.deltas.push_back(d);
  }
  return report;
}

AblationReport run_ablation_experiment(const Corpus& corpus, std::size_t k, std::uint64_t seed) {
  AblationConfig config;
  config.k = k;
  config.seed = seed;
  return run_ablation_experiment(corpus, config);
}

Corpus merge_corpora(const std::vector<Corpus>& corpora, std::optional<std::size_t> per_source, std::uint64_t seed) {
  std::vector<CleanDocument> docs;
  DropLog drops;
  for (std::size_t s = 0; s < corpora.size(); ++s) {
    const auto& c = corpora[s];
    std::vector<std::size_t> idx(c.documents.size());
    std::iota(idx.begin(), idx.end(), 0);
    if (per_source && *per_source < idx.size()) {
      Rng rng(derive_seed(seed, 0x5000 + s));
      rng.shuffle(std::span<std::size_t>(idx));
      idx.resize(*per_source);
      std::sort(idx.begin(), idx.end());
    }
    for (auto i : idx) docs.push_back(c.documents[i]);
    drops.missing_text += c.drops.missing_text;
    drops.missing_label += c.drops.missing_label;
    drops.non_english += c.drops.non_english;
    drops.empty_after_cleaning += c.drops.empty_after_cleaning;
    drops.reasons.insert(drops.reasons.end(), c.drops.reasons.begin(), c.drops.reasons.end());
  }
  Corpus merged = assemble_corpus(std::move(docs));
  merged.drops = std::move(drops);
  return merged;
}

// ---- reports ----

namespace {

std::vector<std::string> metric_cells(const Metrics& m) {
  return {csv::format_double(m.accuracy), csv::format_double(m.precision), csv::format_double(m.recall),
          csv::format_double(m.f1), m.precision_undefined ? "1" : "0"};
}

class ReportWriter {
 public:
  explicit ReportWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}

  // Writes rows (header first) and records the data row count.
  void write(const std::string& name, const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + (dir_ / name).string());
    for (const auto& r : rows) csv::write_row(out, r);
    if (!out) throw InputError("write failed for " + (dir_ / name).string());
    files.push_back({{"name", name}, {"rows", rows.empty() ? 0 : rows.size() - 1}});
  }

  nlohmann::json files = nlohmann::json::array();

 private:
  std::filesystem::path dir_;
};

bool is_report_file(const std::string& name) {
  return name == "manifest.json" || name == "metrics.csv" || name == "metrics_mean.csv" ||
         name == "characterization.csv" || name == "embedding_2d.csv" || name == "unique_words.csv" ||
         (name.starts_with("importance_") && name.ends_with(".csv")) ||
         (name.starts_with("ablation_") && name.ends_with(".csv"));
}

void add_importance_files(ReportWriter& w, const EvalReport& report, const std::string& prefix) {
  for (const auto& m : report.models) {
    if (!m.importance) continue;
    std::vector<std::vector<std::string>> rows = {{"rank", "feature", "importance"}};
    for (std::size_t i = 0; i < m.importance->size(); ++i) {
      rows.push_back({std::to_string(i + 1), (*m.importance)[i].first, csv::format_double((*m.importance)[i].second)});
    }
    w.write(prefix + to_string(m.kind) + ".csv", rows);
  }
}

}  // namespace

nlohmann::json emit_reports(const ReportInputs& inputs, const std::filesystem::path& out) {
  const auto dir = out / "report";
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw InputError("cannot create output directory " + dir.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_report_file(entry.path().filename().string())) {
      std::filesystem::remove(entry.path());
    }
  }

  ReportWriter w(dir);
  nlohmann::json absent = nlohmann::json::array();
  nlohmann::json notes = nlohmann::json::array();
  const std::vector<std::string> metric_header = {"accuracy", "precision", "recall", "f1", "precision_undefined"};

  if (inputs.evaluation) {
    const auto& ev = *inputs.evaluation;
    std::vector<std::vector<std::string>> per_fold = {{"model", "fold"}};
    per_fold[0].insert(per_fold[0].end(), metric_header.begin(), metric_header.end());
    std::vector<std::vector<std::string>> means = {{"model"}};
    means[0].insert(means[0].end(), metric_header.begin(), metric_header.end());
    for (const auto& m : ev.models) {
      for (std::size_t f = 0; f < m.folds.size(); ++f) {
        std::vector<std::string> row = {to_string(m.kind), std::to_string(f)};
        const auto cells = metric_cells(m.folds[f]);
        row.insert(row.end(), cells.begin(), cells.end());
        per_fold.push_back(std::move(row));
      }
      std::vector<std::string> row = {to_string(m.kind)};
      const auto cells = metric_cells(m.mean);
      row.insert(row.end(), cells.begin(), cells.end());
      means.push_back(std::move(row));
    }
    w.write("metrics.csv", per_fold);
    w.write("metrics_mean.csv", means);
    add_importance_files(w, ev, "importance_");
    for (const auto& n : ev.notes) notes.push_back(n);
  } else {
    absent.push_back("evaluation");
  }

  if (inputs.characterization) {
    const auto& rep = *inputs.characterization;
    std::vector<std::vector<std::string>> rows = {{"group", "metric", "human_mean", "human_sd", "machine_mean",
                                                   "machine_sd", "t_statistic", "degrees_freedom", "p_value",
                                                   "significant_at_05"}};
    for (const auto& r : rep.rows) {
      std::vector<std::string> row = {r.group, r.metric, csv::format_double(r.human_mean), csv::format_double(r.human_sd),
                                      csv::format_double(r.machine_mean), csv::format_double(r.machine_sd)};
      if (r.test) {
        row.insert(row.end(), {csv::format_double(r.test->t_statistic), csv::format_double(r.test->degrees_freedom),
                               csv::format_double(r.test->p_value), r.test->significant_at_05 ? "1" : "0"});
      } else {
        row.insert(row.end(), {"", "", "", ""});
      }
      rows.push_back(std::move(row));
    }
    w.write("characterization.csv", rows);
    if (rep.smog_short_documents > 0) {
      notes.push_back(fmt::format("SMOG computed on {} documents with fewer than 30 sentences", rep.smog_short_documents));
    }
  } else {
    absent.push_back("characterization");
  }

  if (inputs.stats) {
    std::vector<std::vector<std::string>> rows = {{"doc_id", "label", "tokens", "unique_words"}};
    for (const auto& d : inputs.stats->documents) {
      rows.push_back({d.id, std::to_string(to_int(d.label)), std::to_string(d.tokens), std::to_string(d.unique_words)});
    }
    w.write("unique_words.csv", rows);
  } else {
    absent.push_back("unique_words");
  }

  if (inputs.embedding_2d) {
    const auto& p = *inputs.embedding_2d;
    std::vector<std::vector<std::string>> rows = {{"doc_id", "x", "y", "label"}};
    for (std::size_t i = 0; i < p.ids.size(); ++i) {
      rows.push_back({p.ids[i], csv::format_double(p.projection.points[i][0]),
                      csv::format_double(p.projection.points[i][1]), std::to_string(to_int(p.labels[i]))});
    }
    w.write("embedding_2d.csv", rows);
  } else {
    absent.push_back("embedding_2d");
  }

  nlohmann::json ablation_info = nullptr;
  if (inputs.ablation) {
    const auto& ab = *inputs.ablation;
    std::vector<std::vector<std::string>> per_fold = {{"arm", "model", "fold"}};
    per_fold[0].insert(per_fold[0].end(), metric_header.begin(), metric_header.end());
    for (const auto& arm : ab.arms) {
      for (const auto& m : arm.models) {
        for (std::size_t f = 0; f < m.folds.size(); ++f) {
          std::vector<std::string> row = {arm.name, to_string(m.kind), std::to_string(f)};
          const auto cells = metric_cells(m.folds[f]);
          row.insert(row.end(), cells.begin(), cells.end());
          per_fold.push_back(std::move(row));
        }
      }
    }
    w.write("ablation_metrics.csv", per_fold);
    std::vector<std::vector<std::string>> summary = {
        {"model", "accuracy_a", "accuracy_b", "accuracy_c", "drop_a_to_b", "recovery_fraction"}};
    for (const auto& d : ab.deltas) {
      summary.push_back({to_string(d.kind), csv::format_double(d.accuracy_a), csv::format_double(d.accuracy_b),
                         csv::format_double(d.accuracy_c), csv::format_double(d.drop),
                         d.recovery ? csv::format_double(*d.recovery) : ""});
    }
    w.write("ablation_summary.csv", summary);
    add_importance_files(w, ab.arms[2], "ablation_importance_");
    ablation_info = {{"intersection_vocab_size", ab.map.intersection_vocab.size()},
                     {"replaced_tokens_human", ab.map.replaced_count[0]},
                     {"replaced_tokens_machine", ab.map.replaced_count[1]}};
  } else {
    absent.push_back("ablation");
  }

  nlohmann::json manifest;
  manifest["format"] = "mgtd-report";
  manifest["version"] = 1;
  manifest["files"] = w.files;
  manifest["absent"] = absent;
  manifest["notes"] = notes;
  if (!ablation_info.is_null()) manifest["ablation"] = ablation_info;
  manifest["config"] = inputs.config;
  std::ofstream out_manifest(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out_manifest) throw InputError("cannot write " + (dir / "manifest.json").string());
  out_manifest << manifest.dump(2) << '\n';
  return manifest;
}

}  // namespace mgtd
