#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mgtd/text.hpp"

namespace mgtd {

// 1 = machine (positive class), 0 = human.
enum class Label : int { Human = 0, Machine = 1 };

inline int to_int(Label l) { return static_cast<int>(l); }

struct Document {
  std::string id;
  std::string text;
  Label label = Label::Human;
  std::optional<std::string> source;
};

struct CleanDocument {
  std::string id;
  std::vector<std::string> sentences;  // cleaned text, original casing
  std::vector<std::string> tokens;
  std::vector<std::string> tokens_nostop;
  Label label = Label::Human;
  std::string source;
};

struct ClassStats {
  bool present = false;
  std::size_t n = 0;
  double mean_tokens = 0.0;
  double sd_tokens = 0.0;
  std::size_t vocab_size = 0;
};

// Per-document counts behind the unique-word distribution.
struct DocumentCounts {
  std::string id;
  Label label = Label::Human;
  std::size_t tokens = 0;
  std::size_t unique_words = 0;
};

struct CorpusStats {
  std::array<ClassStats, 2> per_class;
  std::size_t total_n = 0;
  std::vector<DocumentCounts> documents;
};

struct DropLog {
  std::size_t missing_text = 0;
  std::size_t missing_label = 0;
  std::size_t non_english = 0;
  std::size_t empty_after_cleaning = 0;
  std::vector<std::string> reasons;  // "row N: reason"

  std::size_t total() const { return missing_text + missing_label + non_english + empty_after_cleaning; }
};

struct Corpus {
  std::vector<CleanDocument> documents;
  std::array<std::set<std::string>, 2> class_vocab;
  CorpusStats stats;
  DropLog drops;

  bool has_both_classes() const { return stats.per_class[0].present && stats.per_class[1].present; }
  std::vector<Label> labels() const;
};

enum class CorpusFormat { Csv, Jsonl };

struct ColumnSchema {
  std::string text = "text";
  std::string label = "label";
  std::string id = "id";
  std::string source = "source";
  // When false, a missing label column or value reads as human (0).
  bool require_label = true;
};

struct CleaningOptions {
  bool drop_non_english = true;
};

CleanDocument clean_document(const Document& doc, const TextResources& res = TextResources::defaults());

// Cleans each document (in parallel, merged in input order), drops
// documents that are non-English or empty after cleaning, and fills
// class_vocab and stats.
Corpus build_corpus(const std::vector<Document>& docs, const CleaningOptions& opts = {},
                    const TextResources& res = TextResources::defaults());

// Recomputes class_vocab and stats from already-clean documents.
Corpus assemble_corpus(std::vector<CleanDocument> docs);

std::vector<Document> read_documents(const std::filesystem::path& path, CorpusFormat format,
                                     const ColumnSchema& schema, DropLog& drops);

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format, const ColumnSchema& schema = {},
                   const CleaningOptions& opts = {}, const TextResources& res = TextResources::defaults());

CorpusFormat format_from_path(const std::filesystem::path& path);

// Label coercion: 0/1, 0.0/1.0, true/false, human/machine.
std::optional<Label> parse_label(std::string_view raw);

CorpusStats corpus_stats(const std::vector<CleanDocument>& docs);

nlohmann::json stats_to_json(const CorpusStats& stats, const DropLog& drops);

void write_document_counts_csv(const CorpusStats& stats, const std::filesystem::path& path);

double mean(const std::vector<double>& xs);

// Sample standard deviation (n-1); 0 for fewer than two values.
double sample_sd(const std::vector<double>& xs);

}  // namespace mgtd
