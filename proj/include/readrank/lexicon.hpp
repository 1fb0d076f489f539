#ifndef READRANK_LEXICON_HPP
#define READRANK_LEXICON_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace readrank {

// Mean of a word norm over one sentence, with the fraction of alphabetic
// tokens the lexicon covered. coverage == 0 implies mean == 0.
struct SentenceAverage {
  double mean = 0.0;
  double coverage = 0.0;

  bool operator==(const SentenceAverage&) const = default;
};

// One real value per lowercase word form (AoA, imagery, sense counts, ...).
struct NormLexicon {
  std::string name;
  std::map<std::string, double> entries;
  std::optional<std::pair<double, double>> value_range;
};

// Named real attributes per word form, all entries sharing one schema.
struct AttributeTable {
  std::string name;
  std::vector<std::string> attributes;
  std::map<std::string, std::vector<double>> entries;
};

// TSV with header `word<TAB>value`. Keys are case-folded; later duplicates
// override earlier ones. Values must be finite (and inside `range` when one
// is declared).
NormLexicon load_norms(const std::string& path, const std::string& name,
                       std::optional<std::pair<double, double>> range = std::nullopt);

// TSV with header `word<TAB>attr1<TAB>attr2...`; attribute names come from
// the header.
AttributeTable load_attributes(const std::string& path, const std::string& name);

SentenceAverage sentence_average(const NormLexicon& lex,
                                 const std::vector<std::string>& tokens);

std::map<std::string, SentenceAverage> attribute_averages(
    const AttributeTable& table, const std::vector<std::string>& tokens);

}  // namespace readrank

#endif  // READRANK_LEXICON_HPP
