// mgtd: command-line driver for the machine-generated text pipeline.
#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "mgtd/config.hpp"
#include "mgtd/csv.hpp"
#include "mgtd/error.hpp"
#include "mgtd/eval.hpp"
#include "mgtd/execution.hpp"
#include "mgtd/lexfeatures.hpp"
#include "mgtd/projection.hpp"
#include "mgtd/rng.hpp"
#include "mgtd/word2vec.hpp"

namespace {

using namespace mgtd;
using nlohmann::json;

constexpr const char* kScorerFormat = "mgtd-scorer";
constexpr int kScorerVersion = 1;

struct Flags {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> config;
  std::optional<int> threads;

  std::vector<std::string> inputs;
  std::optional<std::string> models;
  std::optional<std::size_t> k;
  std::optional<std::string> features;
  std::optional<int> ngram_max;
  bool keep_stopwords = false;
  bool ablation = false;
  std::optional<std::size_t> merge_sample;
  std::optional<std::string> lexicons;
  std::optional<std::string> class_weight;
  std::optional<std::string> save_model;
  std::optional<std::string> save_kind;

  std::string model_path;
  std::string score_input;
  std::optional<std::string> score_output;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// Defaults, then the config file, then command-line overrides.
json resolved_json(const Flags& f) {
  json cfg = default_config();
  if (f.config) cfg = merge_config(cfg, read_config_file(*f.config));
  json overlay = json::object();
  if (f.seed) overlay["seed"] = *f.seed;
  if (f.out) overlay["out"] = *f.out;
  if (f.threads) overlay["threads"] = *f.threads;
  if (!f.inputs.empty()) overlay["inputs"] = f.inputs;
  if (f.models) overlay["models"] = split_list(*f.models);
  if (f.k) overlay["k"] = *f.k;
  if (f.features) {
    const auto blocks = split_list(*f.features);
    json feats = {{"tfidf", false}, {"style", false}, {"embeddings", false}};
    for (const auto& b : blocks) {
      if (!feats.contains(b)) throw InputError("unknown feature block '" + b + "' (tfidf, style, embeddings)");
      feats[b] = true;
    }
    overlay["features"] = feats;
  }
  if (f.ngram_max) overlay["tfidf"]["ngram_max"] = *f.ngram_max;
  if (f.keep_stopwords) overlay["tfidf"]["drop_stopwords"] = false;
  if (f.ablation) overlay["ablation"] = true;
  if (f.merge_sample) overlay["merge_sample"] = *f.merge_sample;
  if (f.lexicons) overlay["lexicon_dir"] = *f.lexicons;
  if (f.class_weight) overlay["class_weight"] = *f.class_weight;
  return merge_config(cfg, overlay);
}

void apply_environment(const RunConfig& c) {
  if (c.data_dir) ::setenv("MGTD_DATA_DIR", c.data_dir->c_str(), 1);
  if (c.threads) set_thread_count(*c.threads);
}

void report_drops(const DropLog& drops) {
  if (drops.total() == 0) return;
  std::cerr << fmt::format("dropped {} documents (missing text {}, missing label {}, non-English {}, empty {})\n",
                           drops.total(), drops.missing_text, drops.missing_label, drops.non_english,
                           drops.empty_after_cleaning);
}

Corpus load_inputs(const RunConfig& c) {
  if (c.inputs.empty()) throw InputError("no input corpus given (--input or config 'inputs')");
  std::vector<Corpus> corpora;
  for (const auto& path : c.inputs) {
    corpora.push_back(load_corpus(path, c.format.value_or(format_from_path(path)), c.schema, c.cleaning));
  }
  Corpus corpus = corpora.size() == 1 && !c.merge_sample ? std::move(corpora.front())
                                                          : merge_corpora(corpora, c.merge_sample, c.seed);
  report_drops(corpus.drops);
  if (corpus.documents.empty()) throw InputError("no usable documents after cleaning");
  if (!corpus.has_both_classes()) std::cerr << "warning: only one class present in the corpus\n";
  return corpus;
}

std::filesystem::path ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw InputError("cannot create output directory " + dir.string());
  return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

LexiconSet load_lexicons(const RunConfig& c) {
  return LexiconSet::load(c.lexicon_dir.value_or(default_data_dir() / "lexicons"));
}

ProjectionData embedding_projection(const Corpus& corpus, const RunConfig& c, EmbeddingTable* keep = nullptr) {
  Word2VecConfig cfg = c.features.word2vec;
  cfg.seed = derive_seed(c.seed, 0x2d);
  EmbeddingTable table = train_word2vec(corpus.documents, cfg);
  std::vector<std::vector<double>> vectors;
  ProjectionData data;
  for (const auto& d : corpus.documents) {
    vectors.push_back(doc_embedding(table, featurized_tokens(d, cfg.drop_stopwords)).values);
    data.ids.push_back(d.id);
    data.labels.push_back(d.label);
  }
  data.projection = project_2d(vectors);
  if (keep) *keep = std::move(table);
  return data;
}

ModelConfig model_config(const RunConfig& c) {
  ModelConfig m;
  m.seed = c.seed;
  m.balanced_class_weight = c.balanced_class_weight;
  return m;
}

void print_means(const EvalReport& r) {
  std::cout << fmt::format("{:<12} {:>9} {:>9} {:>9} {:>9}\n", "model", "accuracy", "precision", "recall", "f1");
  for (const auto& m : r.models) {
    std::cout << fmt::format("{:<12} {:>9.4f} {:>9.4f} {:>9.4f} {:>9.4f}\n", to_string(m.kind), m.mean.accuracy,
                             m.mean.precision, m.mean.recall, m.mean.f1);
  }
}

int cmd_stats(const Flags& f) {
  const json cfg = resolved_json(f);
  const RunConfig c = resolve_config(cfg);
  apply_environment(c);
  const Corpus corpus = load_inputs(c);
  const auto out = ensure_dir(c.out);
  write_text(out / "stats.json", stats_to_json(corpus.stats, corpus.drops).dump(2) + "\n");
  write_document_counts_csv(corpus.stats, out / "unique_words.csv");
  std::cout << fmt::format("{} documents; stats written to {}\n", corpus.stats.total_n, (out / "stats.json").string());
  return 0;
}

int cmd_characterize(const Flags& f) {
  const json cfg = resolved_json(f);
  const RunConfig c = resolve_config(cfg);
  apply_environment(c);
  const LexiconSet lex = load_lexicons(c);
  const Corpus corpus = load_inputs(c);
  const auto report = characterize(corpus, lex);
  const auto out = ensure_dir(c.out);
  write_characterization_csv(report, out / "characterization.csv");
  write_text(out / "characterization.json", to_json(report).dump(2) + "\n");
  if (report.smog_short_documents > 0) {
    std::cerr << fmt::format("note: SMOG computed on {} documents with fewer than 30 sentences\n",
                             report.smog_short_documents);
  }
  std::cout << fmt::format("{} metrics written to {}\n", report.rows.size(),
                           (out / "characterization.csv").string());
  return 0;
}

void save_scorer(const Corpus& corpus, const RunConfig& c, ModelKind kind, const std::filesystem::path& path) {
  const Featurizer featurizer = Featurizer::fit(corpus.documents, c.features, c.seed);
  const FeatureMatrix x = featurizer.transform(corpus.documents);
  ModelConfig mc = model_config(c);
  const TrainedModel model = train(kind, x, mc);
  const json bundle = {{"format", kScorerFormat},
                       {"version", kScorerVersion},
                       {"featurizer", featurizer.to_json()},
                       {"model", model_to_json(model)}};
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  write_text(path, bundle.dump() + "\n");
}

int cmd_evaluate(const Flags& f) {
  const json cfg = resolved_json(f);
  const RunConfig c = resolve_config(cfg);
  apply_environment(c);
  std::optional<LexiconSet> lex;
  if (c.report_characterization) lex = load_lexicons(c);
  const Corpus corpus = load_inputs(c);

  ExperimentConfig ec;
  ec.features = c.features;
  ec.models = c.models;
  ec.k = c.k;
  ec.seed = c.seed;
  ec.model = model_config(c);
  const EvalReport report = run_experiment(corpus, ec);
  print_means(report);

  std::optional<CharacterizationReport> characterization;
  if (lex) characterization = characterize(corpus, *lex);
  std::optional<ProjectionData> projection;
  if (c.report_projection) projection = embedding_projection(corpus, c);
  std::optional<AblationReport> ablation;
  if (c.ablation) {
    AblationConfig ac;
    ac.models = c.ablation_models;
    ac.k = c.k;
    ac.seed = c.seed;
    ac.tfidf = c.features.tfidf_config;
    ac.word2vec = c.features.word2vec;
    ac.model = model_config(c);
    ablation = run_ablation_experiment(corpus, ac);
  }

  ReportInputs inputs;
  inputs.evaluation = &report;
  inputs.stats = &corpus.stats;
  inputs.characterization = characterization ? &*characterization : nullptr;
  inputs.embedding_2d = projection ? &*projection : nullptr;
  inputs.ablation = ablation ? &*ablation : nullptr;
  inputs.config = config_echo(cfg);
  emit_reports(inputs, ensure_dir(c.out));

  if (f.save_model) {
    ModelKind kind = c.models.front();
    if (f.save_kind) {
      const auto k = parse_model_kind(*f.save_kind);
      if (!k) throw InputError("unknown model kind '" + *f.save_kind + "'");
      kind = *k;
    }
    save_scorer(corpus, c, kind, *f.save_model);
  }
  std::cout << fmt::format("report written to {}\n", (c.out / "report").string());
  return 0;
}

int cmd_ablate(const Flags& f) {
  const json cfg = resolved_json(f);
  const RunConfig c = resolve_config(cfg);
  apply_environment(c);
  const Corpus corpus = load_inputs(c);
  AblationConfig ac;
  ac.models = f.models ? c.models : c.ablation_models;
  ac.k = c.k;
  ac.seed = c.seed;
  ac.tfidf = c.features.tfidf_config;
  ac.word2vec = c.features.word2vec;
  ac.model = model_config(c);
  const AblationReport ablation = run_ablation_experiment(corpus, ac);
  for (const auto& d : ablation.deltas) {
    std::cout << fmt::format("{:<12} A {:.4f}  B {:.4f}  C {:.4f}\n", to_string(d.kind), d.accuracy_a, d.accuracy_b,
                             d.accuracy_c);
  }
  ReportInputs inputs;
  inputs.ablation = &ablation;
  inputs.config = config_echo(cfg);
  emit_reports(inputs, ensure_dir(c.out));
  return 0;
}

int cmd_score(const Flags& f) {
  // The seed is not used for scoring, so it is optional here.
  json cfg = resolved_json(f);
  if (cfg["seed"].is_null()) cfg["seed"] = 0;
  const RunConfig c = resolve_config(cfg);
  apply_environment(c);

  std::ifstream model_in(f.model_path);
  if (!model_in) throw InputError("cannot read model file " + f.model_path);
  json bundle;
  try {
    bundle = json::parse(model_in);
  } catch (const json::parse_error& e) {
    throw ModelError(f.model_path + ": malformed model file (" + e.what() + ")");
  }
  if (!bundle.is_object() || bundle.value("format", "") != kScorerFormat) {
    throw ModelError(f.model_path + ": not a scorer bundle");
  }
  if (bundle.value("version", -1) != kScorerVersion) {
    throw ModelError(f.model_path + ": unsupported scorer version " + bundle.value("version", json()).dump());
  }
  const Featurizer featurizer = Featurizer::from_json(bundle.at("featurizer"));
  const TrainedModel model = model_from_json(bundle.at("model"));
  if (fingerprint_of(featurizer.feature_names()) != model.fingerprint) {
    throw ModelError("feature fingerprint mismatch between featurizer and model");
  }

  std::vector<CleanDocument> docs;
  const std::filesystem::path input = f.score_input;
  if (!std::filesystem::exists(input)) throw InputError("cannot read " + input.string());
  if (std::filesystem::file_size(input) > 0) {
    ColumnSchema schema = c.schema;
    schema.require_label = false;
    DropLog drops;
    for (const auto& d : read_documents(input, c.format.value_or(format_from_path(input)), schema, drops)) {
      docs.push_back(clean_document(d));
    }
    report_drops(drops);
  }

  const std::filesystem::path output = f.score_output.value_or((c.out / "scores.csv").string());
  if (output.has_parent_path()) ensure_dir(output.parent_path());
  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + output.string());
  csv::write_row(out, {"doc_id", "label", "score"});
  if (!docs.empty()) {
    const FeatureMatrix x = featurizer.transform(docs);
    const auto labels = predict(model, x);
    const auto scores = score(model, x);
    for (std::size_t i = 0; i < docs.size(); ++i) {
      csv::write_row(out, {docs[i].id, std::to_string(to_int(labels[i])), csv::format_double(scores[i])});
    }
  }
  std::cout << fmt::format("{} documents scored into {}\n", docs.size(), output.string());
  return 0;
}

int cmd_export_embeddings(const Flags& f) {
  const json cfg = resolved_json(f);
  const RunConfig c = resolve_config(cfg);
  apply_environment(c);
  const Corpus corpus = load_inputs(c);
  EmbeddingTable table;
  const ProjectionData data = embedding_projection(corpus, c, &table);
  const auto out = ensure_dir(c.out);
  table.save(out / "embeddings.txt");
  write_projection_csv(data.projection, data.ids, data.labels, out / "embedding_2d.csv");
  std::cout << fmt::format("{} word vectors and {} document points written to {}\n", table.size(), data.ids.size(),
                           out.string());
  return 0;
}

void add_corpus_options(CLI::App* cmd, Flags& f) {
  cmd->add_option("-i,--input", f.inputs, "Corpus file (CSV or JSONL); repeat to merge corpora");
}

void add_eval_options(CLI::App* cmd, Flags& f) {
  cmd->add_option("--models", f.models, "Comma-separated model kinds");
  cmd->add_option("--k", f.k, "Number of cross-validation folds");
  cmd->add_option("--features", f.features, "Comma-separated feature blocks: tfidf, style, embeddings");
  cmd->add_option("--ngram-max", f.ngram_max, "Largest TF-IDF n-gram");
  cmd->add_flag("--keep-stopwords", f.keep_stopwords, "Featurize with stopwords kept");
  cmd->add_option("--merge-sample", f.merge_sample, "Sample this many documents from each input corpus");
  cmd->add_option("--class-weight", f.class_weight, "none or balanced");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Machine-generated text characterization and detection"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--seed", f.seed, "Random seed (required unless set in the config)");
  app.add_option("--out", f.out, "Output directory");
  app.add_option("--config", f.config, "JSON config file");
  app.add_option("--threads", f.threads, "Worker threads for parallel kernels");

  auto* stats = app.add_subcommand("stats", "Corpus statistics and per-document unique-word counts");
  add_corpus_options(stats, f);

  auto* charz = app.add_subcommand("characterize", "Readability, bias, affect, and moral metrics with Welch tests");
  add_corpus_options(charz, f);
  charz->add_option("--lexicons", f.lexicons, "Lexicon directory");

  auto* evaluate = app.add_subcommand("evaluate", "Cross-validated classification and the full report bundle");
  add_corpus_options(evaluate, f);
  add_eval_options(evaluate, f);
  evaluate->add_flag("--ablation", f.ablation, "Also run the vocabulary-intersection ablation");
  evaluate->add_option("--lexicons", f.lexicons, "Lexicon directory");
  evaluate->add_option("--save-model", f.save_model, "Write a scorer bundle trained on the full corpus");
  evaluate->add_option("--save-kind", f.save_kind, "Model kind for --save-model (default: first listed)");

  auto* ablate = app.add_subcommand("ablate", "Vocabulary-intersection ablation arms A, B, C");
  add_corpus_options(ablate, f);
  add_eval_options(ablate, f);

  auto* score_cmd = app.add_subcommand("score", "Apply a saved scorer bundle to documents");
  score_cmd->add_option("--model", f.model_path, "Scorer bundle from evaluate --save-model")->required();
  score_cmd->add_option("-i,--input", f.score_input, "Documents to score (label column optional)")->required();
  score_cmd->add_option("-o,--output", f.score_output, "Output CSV (default <out>/scores.csv)");

  auto* embed = app.add_subcommand("export-embeddings", "Train word vectors and write the 2-D document projection");
  add_corpus_options(embed, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*stats) return cmd_stats(f);
    if (*charz) return cmd_characterize(f);
    if (*evaluate) return cmd_evaluate(f);
    if (*ablate) return cmd_ablate(f);
    if (*score_cmd) return cmd_score(f);
    if (*embed) return cmd_export_embeddings(f);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return 3;
  } catch (const InvariantError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 4;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 4;
  }
  return 2;
}
