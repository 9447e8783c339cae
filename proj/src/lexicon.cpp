#include "mgtd/lexicon.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>

#include "mgtd/error.hpp"
#include "mgtd/text.hpp"

namespace mgtd {

namespace {

std::string strip(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

struct Line {
  std::size_t number;
  std::string term;
  std::string second;  // after the tab, if any
  bool has_second;
};

std::vector<Line> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read lexicon: " + path.string());
  std::vector<Line> lines;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string s = strip(raw);
    if (s.empty() || s[0] == '#') continue;
    const auto tab = s.find('\t');
    if (tab == std::string::npos) {
      lines.push_back({number, s, "", false});
    } else {
      lines.push_back({number, strip(s.substr(0, tab)), strip(s.substr(tab + 1)), true});
    }
  }
  return lines;
}

void check_term(const std::filesystem::path& path, const Line& line, bool allow_wildcard) {
  const auto star = line.term.find('*');
  if (star != std::string::npos && (!allow_wildcard || star + 1 != line.term.size() || star == 0)) {
    throw InputError(fmt::format("{}:{}: '*' is only allowed as the final character of a wildcard entry",
                                 path.string(), line.number));
  }
  if (line.term.find_first_of(" \t") != std::string::npos) {
    throw InputError(fmt::format("{}:{}: malformed entry '{}'", path.string(), line.number, line.term));
  }
}

}  // namespace

void Lexicon::add(std::string_view entry) {
  std::string e = to_lower(entry);
  if (!e.empty() && e.back() == '*') {
    e.pop_back();
    prefix_lengths_.insert(e.size());
    prefixes_.insert(std::move(e));
  } else {
    exact_.insert(std::move(e));
  }
}

void Lexicon::add_scored(std::string_view term, double score) {
  std::string e = to_lower(term);
  scores_.emplace(e, score);
  exact_.insert(std::move(e));
}

bool Lexicon::matches(std::string_view token) const {
  const std::string t(token);
  if (exact_.contains(t)) return true;
  for (std::size_t len : prefix_lengths_) {
    if (len > t.size()) break;
    if (prefixes_.contains(t.substr(0, len))) return true;
  }
  return false;
}

std::optional<double> Lexicon::score(std::string_view token) const {
  auto it = scores_.find(std::string(token));
  if (it == scores_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Lexicon::entries() const {
  std::vector<std::string> out(exact_.begin(), exact_.end());
  for (const auto& p : prefixes_) out.push_back(p + "*");
  std::sort(out.begin(), out.end());
  return out;
}

Lexicon load_lexicon(const std::filesystem::path& path, LexiconKind kind) {
  Lexicon lex(path.stem().string(), kind);
  for (const auto& line : read_lines(path)) {
    check_term(path, line, kind == LexiconKind::Wildcard);
    if (kind == LexiconKind::Valenced) {
      if (!line.has_second) {
        throw InputError(fmt::format("{}:{}: expected term<TAB>score", path.string(), line.number));
      }
      double score = 0.0;
      const char* first = line.second.data();
      const char* last = first + line.second.size();
      auto [ptr, ec] = std::from_chars(first, last, score);
      if (ec != std::errc() || ptr != last) {
        throw InputError(fmt::format("{}:{}: score '{}' is not a number", path.string(), line.number, line.second));
      }
      if (score < -1.0 || score > 1.0) {
        throw InputError(fmt::format("{}:{}: score {} outside [-1, 1]", path.string(), line.number, score));
      }
      if (!lex.score(to_lower(line.term))) lex.add_scored(line.term, score);
      continue;
    }
    if (line.has_second && kind == LexiconKind::Plain) {
      throw InputError(fmt::format("{}:{}: plain lexicon lines hold a single term", path.string(), line.number));
    }
    lex.add(line.term);
  }
  return lex;
}

std::map<std::string, Lexicon> load_categorized_lexicon(const std::filesystem::path& path) {
  std::map<std::string, Lexicon> out;
  for (const auto& line : read_lines(path)) {
    check_term(path, line, true);
    if (!line.has_second || line.second.empty()) {
      throw InputError(fmt::format("{}:{}: expected term<TAB>category", path.string(), line.number));
    }
    auto [it, inserted] = out.try_emplace(line.second, line.second, LexiconKind::Wildcard);
    it->second.add(line.term);
  }
  return out;
}

double match_proportion(std::span<const std::string> tokens, const Lexicon& lexicon) {
  if (tokens.empty()) throw InputError("match_proportion: empty document");
  std::size_t hits = 0;
  for (const auto& t : tokens) hits += lexicon.matches(t) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(tokens.size());
}

}  // namespace mgtd
