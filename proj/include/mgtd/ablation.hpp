#pragma once

#include <array>
#include <set>
#include <string>
#include <utility>

#include "mgtd/corpus.hpp"

namespace mgtd {

inline constexpr const char* kUnknownToken = "<unk>";

struct AblationMap {
  std::set<std::string> intersection_vocab;
  std::array<std::size_t, 2> replaced_count{};  // token occurrences replaced, per class
};

/// Replaces every token outside class_vocab[0] ∩ class_vocab[1] with <unk>
/// in tokens, tokens_nostop, and the sentence text. Requires both classes;
/// throws if the intersection is empty.
std::pair<Corpus, AblationMap> intersection_ablation(const Corpus& corpus);

}  // namespace mgtd
