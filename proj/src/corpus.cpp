#include "mgtd/corpus.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include "mgtd/csv.hpp"
#include "mgtd/error.hpp"
#include "mgtd/execution.hpp"

namespace mgtd {

namespace {

bool is_single_digit(const std::string& t) { return t.size() == 1 && t[0] >= '0' && t[0] <= '9'; }

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::vector<Label> Corpus::labels() const {
  std::vector<Label> out;
  out.reserve(documents.size());
  for (const auto& d : documents) out.push_back(d.label);
  return out;
}

std::optional<Label> parse_label(std::string_view raw) {
  const std::string v = to_lower(trim(raw));
  if (v == "0" || v == "0.0" || v == "false" || v == "human") return Label::Human;
  if (v == "1" || v == "1.0" || v == "true" || v == "machine") return Label::Machine;
  return std::nullopt;
}

CleanDocument clean_document(const Document& doc, const TextResources& res) {
  CleanDocument out;
  out.id = doc.id;
  out.label = doc.label;
  out.source = doc.source.value_or("");
  const std::string cleaned = clean_text(doc.text);
  out.sentences = split_sentences(cleaned, res);
  // Decimal fragments such as "3.5" tokenize to single digits; drop them.
  for (auto& t : tokenize(cleaned, false, res)) {
    if (is_single_digit(t)) continue;
    if (!res.stopwords.contains(t)) out.tokens_nostop.push_back(t);
    out.tokens.push_back(std::move(t));
  }
  return out;
}

Corpus build_corpus(const std::vector<Document>& docs, const CleaningOptions& opts, const TextResources& res) {
  std::vector<CleanDocument> cleaned(docs.size());
  std::vector<char> english(docs.size(), 1);

  for_each_index(docs.size(), Execution::Parallel, [&](std::size_t i) {
    cleaned[i] = clean_document(docs[i], res);
    if (opts.drop_non_english) {
      const std::string text = clean_text(docs[i].text);
      english[i] = !text.empty() && is_english(text, res) ? 1 : 0;
    }
  });

  DropLog drops;
  std::vector<CleanDocument> kept;
  kept.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (cleaned[i].tokens.empty()) {
      ++drops.empty_after_cleaning;
      drops.reasons.push_back(fmt::format("document {}: empty after cleaning", docs[i].id));
      continue;
    }
    if (!english[i]) {
      ++drops.non_english;
      drops.reasons.push_back(fmt::format("document {}: not English", docs[i].id));
      continue;
    }
    kept.push_back(std::move(cleaned[i]));
  }
  Corpus corpus = assemble_corpus(std::move(kept));
  corpus.drops = std::move(drops);
  return corpus;
}

Corpus assemble_corpus(std::vector<CleanDocument> docs) {
  Corpus corpus;
  corpus.documents = std::move(docs);
  for (const auto& d : corpus.documents) {
    auto& vocab = corpus.class_vocab[static_cast<std::size_t>(to_int(d.label))];
    vocab.insert(d.tokens.begin(), d.tokens.end());
  }
  if (!corpus.documents.empty()) corpus.stats = corpus_stats(corpus.documents);
  return corpus;
}

CorpusFormat format_from_path(const std::filesystem::path& path) {
  const std::string ext = to_lower(path.extension().string());
  if (ext == ".jsonl" || ext == ".ndjson") return CorpusFormat::Jsonl;
  return CorpusFormat::Csv;
}

std::vector<Document> read_documents(const std::filesystem::path& path, CorpusFormat format,
                                     const ColumnSchema& schema, DropLog& drops) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read corpus file: " + path.string());

  std::vector<Document> docs;
  auto accept = [&](std::size_t row, std::size_t line, std::optional<std::string> id, std::optional<std::string> text,
                    std::optional<std::string> label_raw, std::optional<std::string> source) {
    if (!text || trim(*text).empty()) {
      ++drops.missing_text;
      drops.reasons.push_back(fmt::format("line {}: missing text", line));
      return;
    }
    if ((!label_raw || trim(*label_raw).empty()) && !schema.require_label) label_raw = "0";
    if (!label_raw || trim(*label_raw).empty()) {
      ++drops.missing_label;
      drops.reasons.push_back(fmt::format("line {}: missing label", line));
      return;
    }
    const auto label = parse_label(*label_raw);
    if (!label) {
      throw InputError(fmt::format("{}:{}: label '{}' is not one of 0/1", path.string(), line, *label_raw));
    }
    Document d;
    d.id = id && !id->empty() ? *id : std::to_string(row);
    d.text = std::move(*text);
    d.label = *label;
    if (source && !source->empty()) d.source = std::move(*source);
    docs.push_back(std::move(d));
  };

  if (format == CorpusFormat::Csv) {
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header) throw InputError(path.string() + ": empty file, expected a header row");
    if (!header->empty() && header->front().starts_with("\xEF\xBB\xBF")) header->front().erase(0, 3);
    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
      auto it = std::find(header->begin(), header->end(), name);
      if (it == header->end()) return std::nullopt;
      return static_cast<std::size_t>(it - header->begin());
    };
    const auto text_col = column(schema.text);
    const auto label_col = column(schema.label);
    if (!text_col) throw InputError(fmt::format("{}: missing required column '{}'", path.string(), schema.text));
    if (!label_col && schema.require_label) throw InputError(fmt::format("{}: missing required column '{}'", path.string(), schema.label));
    const auto id_col = column(schema.id);
    const auto source_col = column(schema.source);

    std::size_t row = 0;
    while (auto rec = reader.next()) {
      if (rec->size() == 1 && (*rec)[0].empty()) continue;  // blank line
      const std::size_t line = reader.record_line();
      auto get = [&](std::optional<std::size_t> col) -> std::optional<std::string> {
        if (!col || *col >= rec->size()) return std::nullopt;
        return (*rec)[*col];
      };
      accept(row++, line, get(id_col), get(text_col), get(label_col), get(source_col));
    }
    return docs;
  }

  std::string line_text;
  std::size_t line = 0;
  std::size_t row = 0;
  bool saw_text = false;
  bool saw_label = false;
  while (std::getline(in, line_text)) {
    ++line;
    if (trim(line_text).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line_text);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(fmt::format("{}:{}: malformed JSON ({})", path.string(), line, e.what()));
    }
    if (!obj.is_object()) throw InputError(fmt::format("{}:{}: expected a JSON object", path.string(), line));
    auto get = [&](const std::string& key) -> std::optional<std::string> {
      auto it = obj.find(key);
      if (it == obj.end() || it->is_null()) return std::nullopt;
      if (it->is_string()) return it->get<std::string>();
      if (it->is_boolean()) return it->get<bool>() ? std::string("1") : std::string("0");
      if (it->is_number_integer()) return std::to_string(it->get<long long>());
      if (it->is_number()) return fmt::format("{}", it->get<double>());
      return it->dump();
    };
    saw_text = saw_text || obj.contains(schema.text);
    saw_label = saw_label || obj.contains(schema.label);
    accept(row++, line, get(schema.id), get(schema.text), get(schema.label), get(schema.source));
  }
  if (row > 0 && !saw_text) throw InputError(fmt::format("{}: missing required key '{}'", path.string(), schema.text));
  if (row > 0 && !saw_label && schema.require_label) throw InputError(fmt::format("{}: missing required key '{}'", path.string(), schema.label));
  return docs;
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format, const ColumnSchema& schema,
                   const CleaningOptions& opts, const TextResources& res) {
  DropLog read_drops;
  const auto docs = read_documents(path, format, schema, read_drops);
  Corpus corpus = build_corpus(docs, opts, res);
  corpus.drops.missing_text = read_drops.missing_text;
  corpus.drops.missing_label = read_drops.missing_label;
  corpus.drops.reasons.insert(corpus.drops.reasons.begin(), read_drops.reasons.begin(), read_drops.reasons.end());
  return corpus;
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_sd(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

CorpusStats corpus_stats(const std::vector<CleanDocument>& docs) {
  if (docs.empty()) throw InputError("corpus_stats: corpus is empty");
  CorpusStats stats;
  stats.total_n = docs.size();
  std::array<std::vector<double>, 2> lengths;
  std::array<std::unordered_set<std::string>, 2> vocab;
  for (const auto& d : docs) {
    const auto c = static_cast<std::size_t>(to_int(d.label));
    lengths[c].push_back(static_cast<double>(d.tokens.size()));
    vocab[c].insert(d.tokens.begin(), d.tokens.end());
    const std::unordered_set<std::string> unique(d.tokens.begin(), d.tokens.end());
    stats.documents.push_back({d.id, d.label, d.tokens.size(), unique.size()});
  }
  for (std::size_t c = 0; c < 2; ++c) {
    auto& cs = stats.per_class[c];
    cs.n = lengths[c].size();
    cs.present = cs.n > 0;
    if (!cs.present) continue;
    cs.mean_tokens = mean(lengths[c]);
    cs.sd_tokens = sample_sd(lengths[c]);
    cs.vocab_size = vocab[c].size();
  }
  return stats;
}

nlohmann::json stats_to_json(const CorpusStats& stats, const DropLog& drops) {
  nlohmann::json j;
  j["total_n"] = stats.total_n;
  const char* names[] = {"human", "machine"};
  for (std::size_t c = 0; c < 2; ++c) {
    const auto& cs = stats.per_class[c];
    nlohmann::json k;
    k["present"] = cs.present;
    if (cs.present) {
      k["n"] = cs.n;
      k["mean_tokens"] = cs.mean_tokens;
      k["sd_tokens"] = cs.sd_tokens;
      k["vocab_size"] = cs.vocab_size;
    }
    j["classes"][names[c]] = k;
  }
  j["dropped"] = {{"missing_text", drops.missing_text},
                  {"missing_label", drops.missing_label},
                  {"non_english", drops.non_english},
                  {"empty_after_cleaning", drops.empty_after_cleaning},
                  {"total", drops.total()}};
  return j;
}

void write_document_counts_csv(const CorpusStats& stats, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  csv::write_row(out, {"doc_id", "label", "tokens", "unique_words"});
  for (const auto& d : stats.documents) {
    csv::write_row(out, {d.id, std::to_string(to_int(d.label)), std::to_string(d.tokens), std::to_string(d.unique_words)});
  }
}

}  // namespace mgtd
