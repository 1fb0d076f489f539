#ifndef READRANK_CORPUS_HPP
#define READRANK_CORPUS_HPP

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace readrank {

// One text unit with its reading level. `tree` holds the bracketed parse
// from the .trees sidecar, empty when absent. `id` is provenance for error
// messages and is not part of a sentence's identity.
struct Sentence {
  std::string id;
  std::string text;
  std::vector<std::string> tokens;
  int level = 1;
  std::string tree;

  bool operator==(const Sentence& o) const {
    return text == o.text && level == o.level && tree == o.tree &&
           tokens == o.tokens;
  }
};

struct RawArticle {
  std::string article_id;
  int level = 1;
  std::vector<Sentence> sentences;
};

struct AlignedPair {
  std::string group_id;
  Sentence harder;
  Sentence simpler;
  double similarity = 0.0;

  bool operator==(const AlignedPair&) const = default;
};

struct AlignedTriple {
  std::string group_id;
  Sentence adv;
  Sentence intermediate;
  Sentence ele;
  double sim_adv_int = 0.0;
  double sim_int_ele = 0.0;
  double sim_adv_ele = 0.0;

  bool operator==(const AlignedTriple&) const = default;
};

struct AlignmentConfig {
  double threshold = 0.7;
  int max_splits = 2;
  bool require_distinct_text = true;
};

// Lowercased word tokens: split on whitespace and punctuation, keep internal
// hyphens/apostrophes, strip them at token edges. Non-ASCII letters survive;
// general-punctuation codepoints (dashes, curly quotes, ellipsis) separate.
std::vector<std::string> tokenize(std::string_view text);

// True when the token has at least one letter and no ASCII digit.
bool is_alphabetic_token(std::string_view token);

// Reads one sentence per line (blank lines skipped) and the .trees sidecar
// next to it when present (same basename, one bracketed parse or `_` per
// line, line-aligned with the article file).
RawArticle load_article(const std::string& path, int level);

// Term -> tf*idf weight; std::map keeps summation order canonical so
// similarity values are reproducible bit for bit.
using TermVec = std::map<std::string, double>;

// Sentence-as-document TF-IDF over the union of both articles' sentences:
// tf = raw count, idf = ln(N / df).
struct TfIdfVectors {
  std::vector<TermVec> a;
  std::vector<TermVec> b;
};
TfIdfVectors tfidf_vectors(const RawArticle& doc_a, const RawArticle& doc_b);

// dot(u,v) / (|u||v|), clamped to [0,1]; 0 when either norm is 0.
double cosine(const TermVec& u, const TermVec& v);

// Greedy alignment by descending similarity: each simpler sentence is used
// at most once, each harder sentence at most cfg.max_splits times. Ties
// break on lower harder index, then lower simpler index. Output is sorted
// by (harder index, simpler index); group_id = article_id ":" harder index.
std::vector<AlignedPair> align_pair(const RawArticle& harder,
                                    const RawArticle& simpler,
                                    const AlignmentConfig& cfg);

// Triples where the adv-int, int-ele and adv-ele alignments agree on the
// same sentence chain; all three similarity/distinctness constraints hold
// by construction.
std::vector<AlignedTriple> align_triples(const RawArticle& adv,
                                         const RawArticle& intermediate,
                                         const RawArticle& ele,
                                         const AlignmentConfig& cfg);

// A corpus file holds either pairs or triples, never both.
struct Corpus {
  std::vector<AlignedPair> pairs;
  std::vector<AlignedTriple> triples;

  bool is_triples() const { return !triples.empty(); }
  std::size_t group_count() const;
};

// TSV with header `group_id level similarity text tree`; one row per
// sentence, `_` for a missing tree. Pairs sharing a group_id (split
// sentences) write the harder row once. Triple rows carry the adv-int,
// int-ele and adv-ele similarities in level order.
void write_corpus(const std::vector<AlignedPair>& pairs, const std::string& path);
void write_corpus(const std::vector<AlignedTriple>& triples, const std::string& path);
Corpus read_corpus(const std::string& path);

// Triples expanded to their three ranking pairs; pairs pass through.
std::vector<AlignedPair> corpus_pairs(const Corpus& corpus);

}  // namespace readrank

#endif  // READRANK_CORPUS_HPP
