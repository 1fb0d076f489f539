#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "readrank/errors.hpp"
#include "readrank/features.hpp"
#include "testutil.hpp"

using namespace readrank;
using rrtest::TempDir;

namespace {

Sentence make_sentence(const std::string& text, int level = 2) {
  Sentence s;
  s.text = text;
  s.tokens = tokenize(text);
  s.level = level;
  return s;
}

NormLexicon tiny_lexicon(const std::string& name,
                         std::map<std::string, double> entries) {
  NormLexicon lex;
  lex.name = name;
  lex.entries = std::move(entries);
  return lex;
}

FeatureRegistry full_registry(bool include_coverage = false) {
  std::map<std::string, NormLexicon> norms;
  norms["senses"] = tiny_lexicon("senses", {{"cat", 8.0},
                                            {"sat", 6.0},
                                            {"the", 12.0},
                                            {"dog", 7.0},
                                            {"mat", 4.0}});
  norms["aoa"] = tiny_lexicon("aoa", {{"cat", 3.5}, {"sat", 4.2}, {"mat", 5.0}});
  norms["imagery"] = tiny_lexicon("imagery", {{"cat", 600.0}, {"mat", 450.0}});
  norms["familiarity"] = tiny_lexicon("familiarity", {{"cat", 550.0}, {"the", 650.0}});
  norms["meaningfulness"] = tiny_lexicon("meaningfulness", {{"cat", 420.0}});
  norms["concreteness"] = tiny_lexicon("concreteness", {{"cat", 580.0}, {"mat", 520.0}});
  AttributeTable celex;
  celex.name = "celex";
  celex.attributes = {"complexity", "compound"};
  celex.entries = {{"cat", {1.0, 0.0}}, {"mat", {2.0, 1.0}}};
  return FeatureRegistry::standard(std::move(norms), std::move(celex), include_coverage);
}

}  // namespace

TEST_CASE("ttr and cttr") {
  CHECK(ttr({"a", "a", "b", "b"}) == doctest::Approx(0.5));
  CHECK(cttr({"a", "a", "b", "b"}) == doctest::Approx(2.0 / std::sqrt(8.0)));
  CHECK(cttr({"a", "a", "b", "b"}) == doctest::Approx(0.7071).epsilon(1e-4));
  std::vector<std::string> eight = {"a", "b", "c", "d", "e", "f", "g", "h"};
  CHECK(ttr(eight) == doctest::Approx(1.0));
  CHECK(cttr(eight) == doctest::Approx(2.0));  // 8 / sqrt(16)
  CHECK(ttr({}) == 0.0);
  CHECK(cttr({}) == 0.0);

  // cttr = ttr * sqrt(n/2), algebraically.
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> tokens;
    std::size_t n = 1 + rng.below(12);
    for (std::size_t i = 0; i < n; ++i)
      tokens.push_back(std::string(1, static_cast<char>('a' + rng.below(5))));
    double n_d = static_cast<double>(n);
    REQUIRE(cttr(tokens) ==
            doctest::Approx(ttr(tokens) * std::sqrt(n_d / 2.0)).epsilon(1e-12));
  }
}

TEST_CASE("pos_ratios") {
  auto r = pos_ratios({"DT", "NN", "VBD"});
  CHECK(r.at("noun_ratio") == doctest::Approx(1.0 / 3.0));
  CHECK(r.at("verb_ratio") == doctest::Approx(1.0 / 3.0));
  CHECK(r.at("adj_ratio") == 0.0);
  CHECK(r.at("adv_ratio") == 0.0);
  CHECK(r.at("lexical_density") == doctest::Approx(2.0 / 3.0));

  auto all_dt = pos_ratios({"DT", "DT"});
  CHECK(all_dt.at("noun_ratio") == 0.0);
  CHECK(all_dt.at("lexical_density") == 0.0);

  auto empty = pos_ratios({});
  CHECK(empty.at("noun_ratio") == 0.0);
  CHECK(empty.at("lexical_density") == 0.0);

  // Prefix matching covers inflected tags.
  auto infl = pos_ratios({"NNS", "VBZ", "JJR", "RBS"});
  CHECK(infl.at("lexical_density") == doctest::Approx(1.0));
}

TEST_CASE("syllable heuristic") {
  CHECK(syllables("cat") == 1);
  CHECK(syllables("simplification") == 5);
  CHECK(syllables("\xE5\x83\x8F") == 1);  // no Latin vowels: minimum rule
  CHECK(syllables("the") == 1);
  CHECK(syllables("make") == 1);    // terminal silent e
  CHECK(syllables("table") == 2);   // -le keeps its vowel group
  CHECK(syllables("apple") == 2);
  CHECK(syllables("readability") == 5);
  CHECK(syllables("e") == 1);
  CHECK(syllables("rhythm") == 1);  // y as vowel
}

TEST_CASE("fk_grade") {
  Sentence s = make_sentence("the cat sat on the mat");
  CHECK(fk_grade(s) == doctest::Approx(-1.45).epsilon(1e-9));

  // Doubling every word raises the grade: same syllable ratio, more words.
  Sentence doubled = make_sentence("the cat sat on the mat the cat sat on the mat");
  CHECK(fk_grade(doubled) > fk_grade(s));

  Sentence empty;
  empty.text = "...";
  empty.tokens = tokenize("...");
  CHECK_THROWS_AS(fk_grade(empty), FKUndefined);
}

TEST_CASE("extract with a minimal registry") {
  FeatureRegistry reg;
  reg.enabled = {"senlen"};
  Sentence s = make_sentence("one two three four five six seven");
  FeatureVector fv = extract(s, nullptr, reg);  // senlen needs no tree
  REQUIRE(fv.values.size() == 1);
  CHECK(fv.values[0].first == "senlen");
  CHECK(fv.values[0].second == 7.0);
}

TEST_CASE("extract demands a tree for syntax features") {
  FeatureRegistry reg;
  reg.enabled = {"subtrees"};
  Sentence s = make_sentence("the cat sat");
  CHECK_THROWS_AS(extract(s, nullptr, reg), MissingParse);

  FeatureRegistry pos_reg;
  pos_reg.enabled = {"noun_ratio"};
  CHECK_THROWS_AS(extract(s, nullptr, pos_reg), MissingParse);

  ParseTree tree = parse_bracketed("(ROOT (S (NP (DT the) (NN cat)) (VP (VBD sat))))");
  FeatureVector fv = extract(s, &tree, reg);
  CHECK(fv.values[0].second == 6.0);
}

TEST_CASE("full extraction is deterministic and group-partitioned") {
  FeatureRegistry reg = full_registry();
  Sentence s = make_sentence("the cat sat on the mat");
  ParseTree tree = parse_bracketed(
      "(ROOT (S (NP (DT the) (NN cat)) (VP (VBD sat) (PP (IN on) (NP (DT the) (NN mat))))))");

  FeatureVector a = extract(s, &tree, reg);
  FeatureVector b = extract(s, &tree, reg);
  REQUIRE(a == b);  // bit-for-bit

  // Concatenating the four group extractions reproduces the full vector.
  FeatureVector joined;
  for (const char* group : {"LEX", "SYN", "CEL", "PSY"}) {
    FeatureRegistry sub = reg.group_only(group);
    FeatureVector part = extract(s, &tree, sub);
    joined.values.insert(joined.values.end(), part.values.begin(), part.values.end());
  }
  REQUIRE(joined == a);

  // Spot values.
  auto value_of = [&](const std::string& name) {
    for (const auto& [n, v] : a.values)
      if (n == name) return v;
    throw std::runtime_error("missing " + name);
  };
  CHECK(value_of("senlen") == 6.0);
  CHECK(value_of("subtrees") == 11.0);  // S NP VP PP NP + DT NN VBD IN DT NN
  CHECK(value_of("const") == 5.0);
  CHECK(value_of("avg_senses") ==
        doctest::Approx((12.0 + 8.0 + 6.0 + 12.0 + 4.0) / 5.0));
  CHECK(value_of("aoa") == doctest::Approx((3.5 + 4.2 + 5.0) / 3.0));
  CHECK(value_of("cel_complexity") == doctest::Approx((1.0 + 2.0) / 2.0));
}

TEST_CASE("registry coverage companions and errors") {
  FeatureRegistry reg = full_registry(true);
  Sentence s = make_sentence("the cat sat");
  ParseTree tree = parse_bracketed("(ROOT (S (NP (DT the) (NN cat)) (VP (VBD sat))))");
  FeatureVector fv = extract(s, &tree, reg);
  auto value_of = [&](const std::string& name) {
    for (const auto& [n, v] : fv.values)
      if (n == name) return v;
    throw std::runtime_error("missing " + name);
  };
  CHECK(value_of("aoa_cov") == doctest::Approx(2.0 / 3.0));
  CHECK(value_of("avg_senses_cov") == doctest::Approx(1.0));

  CHECK_THROWS_AS(reg.restricted_to({"no_such_feature"}), RegistryError);

  FeatureRegistry missing;
  missing.enabled = {"aoa"};  // no lexicon bound
  CHECK_THROWS_AS(missing.validate(), RegistryError);
  CHECK_THROWS_AS(extract(s, &tree, missing), RegistryError);

  CHECK(feature_group("cttr") == "LEX");
  CHECK(feature_group("mlc") == "SYN");
  CHECK(feature_group("cel_complexity") == "CEL");
  CHECK(feature_group("aoa") == "PSY");
  CHECK(feature_group("aoa_cov") == "PSY");
  CHECK_THROWS_AS(feature_group("bogus"), RegistryError);
}

TEST_CASE("feature matrix round trip and LETOR output") {
  TempDir tmp("matrix");
  FeatureMatrix m;
  m.feature_names = {"senlen", "ttr"};
  m.rows = {{"g:0", 2, {6.0, 0.8123}, ""}, {"g:0", 1, {4.0, 1.0}, ""}};
  write_matrix_tsv(m, tmp.path("m.tsv"));
  FeatureMatrix back = read_matrix_tsv(tmp.path("m.tsv"));
  REQUIRE(back == m);

  write_matrix_letor(m, tmp.path("m.letor"));
  CHECK(rrtest::read_file(tmp.path("m.letor")) ==
        "2 qid:g:0 1:6 2:0.8123\n1 qid:g:0 1:4 2:1\n");

  rrtest::write_file(tmp.path("bad.tsv"), "group_id\tlevel\tsenlen\ng:0\t2\n");
  CHECK_THROWS_AS(read_matrix_tsv(tmp.path("bad.tsv")), ParseError);
}

TEST_CASE("extract_corpus walks pairs in corpus order and respects jobs") {
  RawArticle harder = rrtest::make_article(
      {"the storm flooded the northern village", "children played near the old bridge"},
      2, "h");
  RawArticle simpler = rrtest::make_article(
      {"the storm flooded the village", "children played near the bridge"}, 1, "s");
  AlignmentConfig cfg;
  cfg.threshold = 0.3;
  Corpus corpus;
  corpus.pairs = align_pair(harder, simpler, cfg);

  FeatureRegistry reg;
  reg.enabled = {"senlen", "ttr", "cttr"};
  FeatureMatrix serial = extract_corpus(corpus, reg, 1);
  FeatureMatrix parallel = extract_corpus(corpus, reg, 4);
  REQUIRE(serial == parallel);
  REQUIRE(serial.rows.size() == 4);  // harder + simpler per group
  CHECK(serial.rows[0].level == 2);
  CHECK(serial.rows[1].level == 1);
  CHECK(serial.rows[0].text == "the storm flooded the northern village");
}
