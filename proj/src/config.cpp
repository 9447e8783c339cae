#include "mgtd/config.hpp"

#include <algorithm>
#include <fstream>

#include "mgtd/error.hpp"

namespace mgtd {

nlohmann::json default_config() {
  using nlohmann::json;
  return json{
      {"inputs", json::array()},
      {"format", nullptr},
      {"schema", {{"text", "text"}, {"label", "label"}, {"id", "id"}, {"source", "source"}}},
      {"data_dir", nullptr},
      {"lexicon_dir", nullptr},
      {"drop_non_english", true},
      {"features", {{"tfidf", true}, {"style", false}, {"embeddings", false}}},
      {"tfidf",
       {{"min_df", 2}, {"max_features", nullptr}, {"sublinear", false}, {"ngram_max", 1}, {"drop_stopwords", true}}},
      {"word2vec",
       {{"dimension", 100}, {"window", 5}, {"negatives", 5}, {"epochs", 5}, {"learning_rate", 0.025}, {"min_count", 1}}},
      {"models", {"logreg", "tree", "forest", "mnb", "sgd_linear", "svm_linear", "voting", "mlp"}},
      {"k", 5},
      {"seed", nullptr},
      {"ablation", false},
      {"ablation_models", {"logreg", "svm_linear", "forest"}},
      {"merge_sample", nullptr},
      {"class_weight", "none"},
      {"threads", nullptr},
      {"report", {{"characterization", true}, {"projection", true}}},
      {"out", "mgtd-out"},
  };
}

nlohmann::json merge_config(nlohmann::json base, const nlohmann::json& overlay, const std::string& where) {
  if (!overlay.is_object()) throw InputError("config" + (where.empty() ? "" : " key '" + where + "'") + " must be an object");
  for (const auto& [key, value] : overlay.items()) {
    const std::string path = where.empty() ? key : where + "." + key;
    if (!base.contains(key)) throw InputError("unknown config key '" + path + "'");
    if (base[key].is_object()) {
      base[key] = merge_config(base[key], value, path);
    } else {
      base[key] = value;
    }
  }
  return base;
}

nlohmann::json read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": malformed JSON (" + e.what() + ")");
  }
}

std::vector<ModelKind> parse_model_list(const std::vector<std::string>& names) {
  std::vector<ModelKind> out;
  for (const auto& n : names) {
    const auto k = parse_model_kind(n);
    if (!k) throw InputError("unknown model kind '" + n + "'");
    if (std::find(out.begin(), out.end(), *k) == out.end()) out.push_back(*k);
  }
  if (out.empty()) throw InputError("model list is empty");
  return out;
}

namespace {

template <typename T>
std::optional<T> optional_value(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

std::size_t positive(const nlohmann::json& j, const char* name) {
  const auto v = j.get<long long>();
  if (v < 1) throw InputError(std::string("config '") + name + "' must be positive");
  return static_cast<std::size_t>(v);
}

}  // namespace

RunConfig resolve_config(const nlohmann::json& j) {
  try {
    RunConfig c;
    for (const auto& p : j.at("inputs")) c.inputs.emplace_back(p.get<std::string>());
    if (!j.at("format").is_null()) {
      const auto f = j.at("format").get<std::string>();
      if (f == "csv") {
        c.format = CorpusFormat::Csv;
      } else if (f == "jsonl") {
        c.format = CorpusFormat::Jsonl;
      } else {
        throw InputError("config 'format' must be csv or jsonl");
      }
    }
    const auto& s = j.at("schema");
    c.schema.text = s.at("text").get<std::string>();
    c.schema.label = s.at("label").get<std::string>();
    c.schema.id = s.at("id").get<std::string>();
    c.schema.source = s.at("source").get<std::string>();
    if (auto d = optional_value<std::string>(j.at("data_dir"))) c.data_dir = *d;
    if (auto d = optional_value<std::string>(j.at("lexicon_dir"))) c.lexicon_dir = *d;
    c.cleaning.drop_non_english = j.at("drop_non_english").get<bool>();

    const auto& f = j.at("features");
    c.features.tfidf = f.at("tfidf").get<bool>();
    c.features.style = f.at("style").get<bool>();
    c.features.embeddings = f.at("embeddings").get<bool>();
    const auto& t = j.at("tfidf");
    c.features.tfidf_config.min_df = static_cast<int>(positive(t.at("min_df"), "tfidf.min_df"));
    if (!t.at("max_features").is_null()) c.features.tfidf_config.max_features = positive(t.at("max_features"), "tfidf.max_features");
    c.features.tfidf_config.sublinear = t.at("sublinear").get<bool>();
    c.features.tfidf_config.ngram_max = static_cast<int>(positive(t.at("ngram_max"), "tfidf.ngram_max"));
    c.features.tfidf_config.drop_stopwords = t.at("drop_stopwords").get<bool>();
    const auto& w = j.at("word2vec");
    c.features.word2vec.dimension = positive(w.at("dimension"), "word2vec.dimension");
    c.features.word2vec.window = positive(w.at("window"), "word2vec.window");
    c.features.word2vec.negatives = positive(w.at("negatives"), "word2vec.negatives");
    c.features.word2vec.epochs = positive(w.at("epochs"), "word2vec.epochs");
    c.features.word2vec.learning_rate = w.at("learning_rate").get<double>();
    c.features.word2vec.min_count = positive(w.at("min_count"), "word2vec.min_count");
    c.features.word2vec.drop_stopwords = c.features.tfidf_config.drop_stopwords;

    c.models = parse_model_list(j.at("models").get<std::vector<std::string>>());
    c.ablation_models = parse_model_list(j.at("ablation_models").get<std::vector<std::string>>());
    c.k = positive(j.at("k"), "k");
    if (j.at("seed").is_null()) throw InputError("a seed is required (--seed or config key 'seed')");
    c.seed = j.at("seed").get<std::uint64_t>();
    c.features.word2vec.seed = c.seed;
    c.ablation = j.at("ablation").get<bool>();
    if (!j.at("merge_sample").is_null()) c.merge_sample = positive(j.at("merge_sample"), "merge_sample");
    const auto cw = j.at("class_weight").get<std::string>();
    if (cw != "none" && cw != "balanced") throw InputError("config 'class_weight' must be none or balanced");
    c.balanced_class_weight = cw == "balanced";
    if (!j.at("threads").is_null()) c.threads = static_cast<int>(positive(j.at("threads"), "threads"));
    c.report_characterization = j.at("report").at("characterization").get<bool>();
    c.report_projection = j.at("report").at("projection").get<bool>();
    c.out = j.at("out").get<std::string>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid config: ") + e.what());
  }
}

nlohmann::json config_echo(const nlohmann::json& j) {
  nlohmann::json echo = j;
  echo.erase("out");
  return echo;
}

}  // namespace mgtd
