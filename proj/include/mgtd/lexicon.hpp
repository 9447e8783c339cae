#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mgtd {

enum class LexiconKind { Plain, Wildcard, Valenced };

/// A named term set. Wildcard entries ("harm*") match any token with that
/// prefix; valenced entries carry a score in [-1, 1].
class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(std::string name, LexiconKind kind) : name_(std::move(name)), kind_(kind) {}

  // Entries are lowercased; a trailing '*' marks a prefix.
  void add(std::string_view entry);
  void add_scored(std::string_view term, double score);

  bool matches(std::string_view token) const;
  // Valence of an exact entry, if present.
  std::optional<double> score(std::string_view token) const;

  const std::string& name() const { return name_; }
  LexiconKind kind() const { return kind_; }
  std::size_t size() const { return exact_.size() + prefixes_.size(); }
  bool empty() const { return size() == 0; }

  // Entries in sorted order, prefixes rendered with their trailing '*'.
  std::vector<std::string> entries() const;

 private:
  std::string name_;
  LexiconKind kind_ = LexiconKind::Plain;
  std::unordered_set<std::string> exact_;
  std::unordered_set<std::string> prefixes_;
  std::set<std::size_t> prefix_lengths_;
  std::unordered_map<std::string, double> scores_;
};

Lexicon load_lexicon(const std::filesystem::path& path, LexiconKind kind);

// A wildcard file whose lines are `term<TAB>Category`, split by category.
std::map<std::string, Lexicon> load_categorized_lexicon(const std::filesystem::path& path);

// Fraction of tokens that match; throws on an empty token list.
double match_proportion(std::span<const std::string> tokens, const Lexicon& lexicon);

}  // namespace mgtd
