#include <doctest.h>

#include <set>

#include "mgtd/error.hpp"
#include "mgtd/lexfeatures.hpp"
#include "mgtd/rng.hpp"
#include "../support/synthetic.hpp"
#include "../support/tempdir.hpp"

using namespace mgtd;
using mgtd::testing::TempDir;

namespace {

std::vector<std::string> fillers(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("xq" + std::string(1, static_cast<char>('a' + i % 26)) + std::to_string(i));
  return out;
}

}  // namespace

TEST_CASE("plain lexicon file") {
  TempDir dir("lex");
  const auto lex = load_lexicon(dir.write("h.txt", "Hedge\nmaybe\n"), LexiconKind::Plain);
  CHECK(lex.entries() == std::vector<std::string>{"hedge", "maybe"});
  CHECK(lex.matches("hedge"));
  CHECK_FALSE(lex.matches("hedges"));
}

TEST_CASE("categorized wildcard file") {
  TempDir dir("lex");
  const auto cats = load_categorized_lexicon(dir.write("m.txt", "harm*\tHarmVice\nsafe\tHarmVirtue\n"));
  REQUIRE(cats.count("HarmVice") == 1);
  CHECK(cats.at("HarmVice").matches("harmful"));
  CHECK(cats.at("HarmVice").matches("harm"));
  CHECK_FALSE(cats.at("HarmVirtue").matches("safety"));
}

TEST_CASE("valenced file") {
  TempDir dir("lex");
  const auto lex = load_lexicon(dir.write("v.txt", "good\t0.7\n"), LexiconKind::Valenced);
  CHECK(lex.score("good") == doctest::Approx(0.7));
  CHECK_FALSE(lex.score("bad").has_value());
}

TEST_CASE("malformed lexicon lines are rejected") {
  TempDir dir("lex");
  CHECK_THROWS_AS(load_lexicon(dir.write("a.txt", "ha*rm\n"), LexiconKind::Wildcard), InputError);
  CHECK_THROWS_AS(load_lexicon(dir.write("b.txt", "good\tlots\n"), LexiconKind::Valenced), InputError);
  CHECK_THROWS_AS(load_lexicon(dir.write("c.txt", "good\t1.5\n"), LexiconKind::Valenced), InputError);
  CHECK_THROWS_AS(load_lexicon(dir / "missing.txt", LexiconKind::Plain), InputError);
  CHECK_THROWS_AS(LexiconSet::load(dir / "nowhere"), InputError);
}

TEST_CASE("match proportion") {
  Lexicon a("a", LexiconKind::Plain);
  a.add("a");
  const std::vector<std::string> toks{"a", "b", "a", "c"};
  CHECK(match_proportion(toks, a) == 0.5);
  Lexicon w("w", LexiconKind::Wildcard);
  w.add("harm*");
  const std::vector<std::string> toks2{"harmful", "ok"};
  CHECK(match_proportion(toks2, w) == 0.5);
  CHECK_THROWS_AS(match_proportion(std::vector<std::string>{}, a), InputError);
}

TEST_CASE("bias features on the bundled lexicons") {
  const auto& lex = LexiconSet::defaults();
  const auto none = fillers(10);
  for (double v : bias_features(none, lex).values()) CHECK(v == 0.0);
  auto toks = fillers(9);
  toks.push_back("maybe");
  const auto f = bias_features(toks, lex);
  CHECK(f.hedges == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(f.bias_words == 0.0);
  CHECK(f.assertives == 0.0);
  CHECK(f.factives == 0.0);
  CHECK(f.implicatives == 0.0);
}

TEST_CASE("moral features on the bundled lexicons") {
  const auto& lex = LexiconSet::defaults();
  for (double v : moral_features(fillers(12), lex).values) CHECK(v == 0.0);
  auto toks = fillers(19);
  toks.insert(toks.begin() + 7, "kill");
  const auto f = moral_features(toks, lex);
  CHECK(f.values[1] == doctest::Approx(0.05).epsilon(1e-15));
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (i != 1) CHECK(f.values[i] == 0.0);
  }
  const std::vector<std::string> harm{"killing", "tree"};
  CHECK(moral_features(harm, lex).values[1] == 0.5);
}

TEST_CASE("affect features, hand arithmetic") {
  LexiconSet lex;
  lex.valence.add_scored("great", 0.8);
  const std::vector<std::string> toks{"a", "great", "b", "c"};
  const auto f = affect_features(toks, {toks}, lex);
  CHECK(f.vadpos == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(f.vadneg == 0.0);
  CHECK(f.vadneu == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(f.wpos == 0.25);
  CHECK(f.spos == 1.0);

  const std::vector<std::string> flat{"a", "b"};
  const auto g = affect_features(flat, {flat}, lex);
  CHECK(g.vadneu == 1.0);
  CHECK(g.sneg == 0.0);
  CHECK(g.spos == 0.0);
  CHECK(g.sneu == 0.0);
  CHECK_THROWS_AS(affect_features(std::vector<std::string>{}, {}, lex), InputError);
}

TEST_CASE("affect word and sentence bins against a hand oracle") {
  LexiconSet lex;
  lex.valence.add_scored("good", 0.5);
  lex.valence.add_scored("bad", -0.6);
  lex.valence.add_scored("meh", 0.05);
  lex.opinion_positive.add("good");
  lex.opinion_negative.add("bad");
  const std::vector<std::vector<std::string>> sentences{{"good", "x"}, {"bad", "bad", "x"}, {"meh", "x"}, {"x"}};
  std::vector<std::string> toks;
  for (const auto& s : sentences) toks.insert(toks.end(), s.begin(), s.end());
  const auto f = affect_features(toks, sentences, lex);
  // 8 tokens: good, bad x2, meh
  CHECK(f.pos == 1.0 / 8);
  CHECK(f.neg == 2.0 / 8);
  CHECK(f.vadpos == doctest::Approx(0.55 / 8));
  CHECK(f.vadneg == doctest::Approx(1.2 / 8));
  CHECK(f.wpos == 1.0 / 8);
  CHECK(f.wneg == 2.0 / 8);
  CHECK(f.wneu == 1.0 / 8);
  // sentence means 0.25, -0.4, 0.025, 0
  CHECK(f.spos == 0.25);
  CHECK(f.sneg == 0.25);
  CHECK(f.sneu == 0.25);
}

TEST_CASE("proportions match brute-force counts on random short documents") {
  const auto& lex = LexiconSet::defaults();
  auto hedges = lex.bias[3].entries();
  auto moral = lex.moral[1].entries();
  std::vector<std::string> vocab = fillers(30);
  vocab.insert(vocab.end(), hedges.begin(), hedges.begin() + 10);
  for (const auto& m : moral) {
    if (m.back() == '*') vocab.push_back(m.substr(0, m.size() - 1) + "ness");
    else vocab.push_back(m);
  }
  Rng rng(5);
  for (int d = 0; d < 200; ++d) {
    std::vector<std::string> toks(1 + rng.uniform_index(20));
    for (auto& t : toks) t = vocab[rng.uniform_index(vocab.size())];
    std::size_t hedge_hits = 0, harm_hits = 0;
    for (const auto& t : toks) {
      hedge_hits += std::count(hedges.begin(), hedges.end(), t) > 0;
      bool hit = false;
      for (const auto& m : moral) {
        if (m.back() == '*' ? t.rfind(m.substr(0, m.size() - 1), 0) == 0 : t == m) hit = true;
      }
      harm_hits += hit;
    }
    const double n = static_cast<double>(toks.size());
    CHECK(bias_features(toks, lex).hedges == static_cast<double>(hedge_hits) / n);
    CHECK(moral_features(toks, lex).values[1] == static_cast<double>(harm_hits) / n);
  }
}

TEST_CASE("valence shares sum to one") {
  const auto& lex = LexiconSet::defaults();
  const auto valenced = lex.valence.entries();
  Rng rng(11);
  for (int d = 0; d < 300; ++d) {
    std::vector<std::string> toks(1 + rng.uniform_index(40));
    for (auto& t : toks) t = rng.uniform() < 0.5 ? valenced[rng.uniform_index(valenced.size())] : "zzfiller";
    const auto f = affect_features(toks, {toks}, lex);
    CHECK(std::abs(f.vadpos + f.vadneg + f.vadneu - 1.0) < 1e-9);
    CHECK(f.vadneu >= -1e-12);
  }
}

TEST_CASE("characterization flags a hedge-heavy machine class") {
  std::vector<Document> docs;
  Rng rng(3);
  const auto pool = mgtd::testing::word_pool(0, 100, true);
  for (int i = 0; i < 40; ++i) {
    const bool machine = i % 2 == 1;
    std::string text;
    for (int s = 0; s < 3; ++s) {
      std::vector<std::string> words;
      for (int t = 0; t < 10; ++t) {
        const bool hedge = machine ? rng.uniform() < 0.3 : rng.uniform() < 0.03;
        words.push_back(hedge ? "apparently" : pool[rng.uniform_index(pool.size())]);
      }
      text += mgtd::testing::render_sentence(words) + " ";
    }
    docs.push_back(mgtd::testing::make_doc(std::to_string(i), text, machine ? Label::Machine : Label::Human));
  }
  const auto report = characterize(build_corpus(docs));
  bool found = false;
  for (const auto& row : report.rows) {
    if (row.metric != "hedges") continue;
    found = true;
    REQUIRE(row.test.has_value());
    CHECK(row.test->significant_at_05);
    CHECK(row.machine_mean > row.human_mean);
  }
  CHECK(found);
}

TEST_CASE("mirrored corpus has no significant differences") {
  std::vector<Document> docs;
  const char* texts[] = {"Maybe the cat sat on the mat. It was happy.", "A terrible storm destroyed the old barn.",
                         "We claim the results are good. They realize it."};
  for (int i = 0; i < 3; ++i) {
    docs.push_back(mgtd::testing::make_doc("h" + std::to_string(i), texts[i], Label::Human));
    docs.push_back(mgtd::testing::make_doc("m" + std::to_string(i), texts[i], Label::Machine));
  }
  const auto report = characterize(build_corpus(docs));
  CHECK(report.rows.size() == 5 + 5 + 11 + 11);
  for (const auto& row : report.rows) {
    REQUIRE(row.test.has_value());
    CHECK(row.test->p_value == 1.0);
    CHECK_FALSE(row.test->significant_at_05);
  }
}

TEST_CASE("single-class corpus omits comparisons") {
  const auto c = mgtd::testing::corpus_of({{"The cat sat.", Label::Human}, {"A dog ran far.", Label::Human}});
  for (const auto& row : characterize(c).rows) CHECK_FALSE(row.test.has_value());
}

TEST_CASE("longer machine sentences raise the machine fog mean") {
  std::vector<Document> docs;
  Rng rng(9);
  const auto pool = mgtd::testing::word_pool(0, 50, true);
  for (int i = 0; i < 20; ++i) {
    const bool machine = i % 2 == 1;
    std::string text;
    for (int s = 0; s < 4; ++s) {
      std::vector<std::string> words(machine ? 20 : 8);
      for (auto& w : words) w = pool[rng.uniform_index(pool.size())];
      text += mgtd::testing::render_sentence(words) + " ";
    }
    docs.push_back(mgtd::testing::make_doc(std::to_string(i), text, machine ? Label::Machine : Label::Human));
  }
  const auto report = readability_report(build_corpus(docs));
  CHECK(report.rows[0].metric == "gunning_fog");
  CHECK(report.rows[0].machine_mean > report.rows[0].human_mean);
}
