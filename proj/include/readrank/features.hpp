#ifndef READRANK_FEATURES_HPP
#define READRANK_FEATURES_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "readrank/corpus.hpp"
#include "readrank/lexicon.hpp"
#include "readrank/treebank.hpp"

namespace readrank {

struct FeatureVector {
  std::vector<std::pair<std::string, double>> values;

  bool operator==(const FeatureVector&) const = default;
};

// Which features to extract and which lexicons back them. `standard()`
// enables everything the bound resources support, in catalogue order:
//   LEX  ttr cttr avg_senses noun_ratio verb_ratio adj_ratio adv_ratio
//        lexical_density
//   SYN  senlen subtrees const mlt mlc
//   CEL  cel_<attribute> per bound table column
//   PSY  aoa imagery familiarity meaningfulness concreteness
// include_coverage adds a `<name>_cov` companion for lexicon-backed
// features.
struct FeatureRegistry {
  std::vector<std::string> enabled;
  std::map<std::string, NormLexicon> norms;  // lexicon name -> norms
  std::optional<AttributeTable> celex;
  bool include_coverage = false;

  static FeatureRegistry standard(std::map<std::string, NormLexicon> norms,
                                  std::optional<AttributeTable> celex,
                                  bool include_coverage = false);

  // Keeps only the named features (plus their coverage companions when
  // enabled); unknown names raise RegistryError.
  FeatureRegistry restricted_to(const std::vector<std::string>& names) const;
  FeatureRegistry group_only(const std::string& group) const;

  void validate() const;
};

// Group tag (LEX/SYN/CEL/PSY) for a feature name; RegistryError for names
// outside the catalogue.
std::string feature_group(const std::string& name);

// True when the feature needs the constituency parse.
bool feature_needs_tree(const std::string& name);

// Extracts exactly the registry's enabled features, in registry order.
// Throws MissingParse when a tree-dependent feature is enabled and tree is
// null, RegistryError when a lexicon binding is missing.
FeatureVector extract(const Sentence& s, const ParseTree* tree,
                      const FeatureRegistry& reg);

double ttr(const std::vector<std::string>& tokens);
double cttr(const std::vector<std::string>& tokens);
double avg_senses(const std::vector<std::string>& tokens, const NormLexicon& senses);

// noun/verb/adj/adv ratios and lexical density over Penn tag prefixes
// NN/VB/JJ/RB.
std::map<std::string, double> pos_ratios(const std::vector<std::string>& tags);

// Maximal aeiouy groups, minus a terminal silent 'e' (kept in "-le"),
// minimum 1.
int syllables(std::string_view word);

// Flesch-Kincaid grade for one sentence:
// 0.39 * words + 11.8 * syllables/word - 15.59. Throws FKUndefined on an
// empty token list.
double fk_grade(const Sentence& s);

// Dense per-sentence feature rows keyed by (group_id, level).
struct FeatureMatrix {
  std::vector<std::string> feature_names;
  struct Row {
    std::string group_id;
    int level = 1;
    std::vector<double> values;
    std::string text;  // carried when built from a corpus; not serialized

    bool operator==(const Row& o) const {
      return group_id == o.group_id && level == o.level && values == o.values;
    }
  };
  std::vector<Row> rows;

  bool operator==(const FeatureMatrix& o) const {
    return feature_names == o.feature_names && rows == o.rows;
  }
};

// One row per corpus sentence, corpus order (harder before simpler, adv
// before int before ele). jobs > 1 extracts sentences in parallel with
// identical output.
FeatureMatrix extract_corpus(const Corpus& corpus, const FeatureRegistry& reg,
                             int jobs = 1);

// TSV `group_id level feat1...featN` with a header row.
void write_matrix_tsv(const FeatureMatrix& m, const std::string& path);
FeatureMatrix read_matrix_tsv(const std::string& path);

// LETOR-style lines: `level qid:<group_id> 1:<v1> ... N:<vN>`.
void write_matrix_letor(const FeatureMatrix& m, const std::string& path);

}  // namespace readrank

#endif  // READRANK_FEATURES_HPP
