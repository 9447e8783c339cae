#include "mgtd/ablation.hpp"

#include <algorithm>

#include "mgtd/error.hpp"
#include "mgtd/text.hpp"

namespace mgtd {

namespace {

// Rewrites each word of a sentence that is not in the kept vocabulary.
std::string ablate_sentence(const std::string& sentence, const std::set<std::string>& keep) {
  std::string out;
  for (const auto& w : scan_words(sentence)) {
    const std::string lower = w.is_digit_run ? w.text : to_lower(w.text);
    if (!out.empty()) out.push_back(' ');
    out += keep.contains(lower) || lower == kUnknownToken ? w.text : kUnknownToken;
  }
  // Keep the sentence terminal so sentence boundaries stay visible.
  const auto last = sentence.find_last_not_of(" \"')");
  if (last != std::string::npos && (sentence[last] == '.' || sentence[last] == '!' || sentence[last] == '?')) {
    out.push_back(sentence[last]);
  }
  return out;
}

}  // namespace

std::pair<Corpus, AblationMap> intersection_ablation(const Corpus& corpus) {
  if (!corpus.has_both_classes()) throw InputError("intersection_ablation: both classes are required");
  AblationMap map;
  const auto& human = corpus.class_vocab[0];
  const auto& machine = corpus.class_vocab[1];
  std::set_intersection(human.begin(), human.end(), machine.begin(), machine.end(),
                        std::inserter(map.intersection_vocab, map.intersection_vocab.end()));
  if (map.intersection_vocab.empty() ||
      (map.intersection_vocab.size() == 1 && map.intersection_vocab.contains(kUnknownToken))) {
    throw InputError("intersection_ablation: degenerate ablation, the class vocabularies do not intersect");
  }

  std::vector<CleanDocument> docs = corpus.documents;
  for (auto& d : docs) {
    auto& replaced = map.replaced_count[static_cast<std::size_t>(to_int(d.label))];
    for (auto& t : d.tokens) {
      if (!map.intersection_vocab.contains(t)) {
        t = kUnknownToken;
        ++replaced;
      }
    }
    for (auto& t : d.tokens_nostop) {
      if (!map.intersection_vocab.contains(t)) t = kUnknownToken;
    }
    for (auto& s : d.sentences) s = ablate_sentence(s, map.intersection_vocab);
  }
  Corpus out = assemble_corpus(std::move(docs));
  out.drops = corpus.drops;
  return {std::move(out), std::move(map)};
}

}  // namespace mgtd
