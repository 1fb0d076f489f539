// Shared helpers for the test suites: deterministic generators and an
// independent brute-force alignment oracle.
#ifndef READRANK_TESTS_TESTUTIL_HPP
#define READRANK_TESTS_TESTUTIL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "readrank/corpus.hpp"
#include "readrank/ranker.hpp"
#include "readrank/treebank.hpp"
#include "readrank/util.hpp"

namespace rrtest {

// Unique scratch directory under the system temp dir, removed on scope exit.
class TempDir {
public:
  explicit TempDir(const std::string& tag) {
    dir_ = std::filesystem::temp_directory_path() /
           ("readrank_" + tag + "_" + std::to_string(counter_++));
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

private:
  static inline int counter_ = 0;
  std::filesystem::path dir_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// ---------------------------------------------------------------------
// Random article generator for alignment property tests.

inline readrank::RawArticle make_article(const std::vector<std::string>& sentences,
                                         int level, const std::string& id) {
  readrank::RawArticle a;
  a.article_id = id;
  a.level = level;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    readrank::Sentence s;
    s.id = id + ":" + std::to_string(i);
    s.text = sentences[i];
    s.tokens = readrank::tokenize(sentences[i]);
    s.level = level;
    a.sentences.push_back(std::move(s));
  }
  return a;
}

inline readrank::RawArticle random_article(readrank::Rng& rng, std::size_t max_sentences,
                                           int level, const std::string& id) {
  static const std::vector<std::string> vocab = {
      "cat",  "dog",  "bird", "house", "tree",  "river", "stone",
      "wind", "rain", "road", "cloud", "light", "night", "field"};
  std::size_t n = 1 + rng.below(max_sentences);
  std::vector<std::string> sentences;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t len = 3 + rng.below(5);
    std::string text;
    for (std::size_t w = 0; w < len; ++w) {
      if (w) text += ' ';
      text += vocab[rng.below(vocab.size())];
    }
    sentences.push_back(text);
  }
  return make_article(sentences, level, id);
}

// ---------------------------------------------------------------------
// Brute-force alignment oracle, independent of the corpus module: its own
// tf-idf, cosine and greedy assignment over explicitly enumerated
// candidates. Sums run in lexicographic term order so exact float ties
// match the implementation's.

struct OracleLink {
  int harder_index;
  int simpler_index;
  double similarity;
};

inline std::vector<OracleLink> oracle_align(const readrank::RawArticle& harder,
                                            const readrank::RawArticle& simpler,
                                            const readrank::AlignmentConfig& cfg) {
  const auto& hs = harder.sentences;
  const auto& ss = simpler.sentences;
  std::size_t n_total = hs.size() + ss.size();

  std::map<std::string, int> df;
  auto count_df = [&](const readrank::Sentence& s) {
    std::set<std::string> uniq(s.tokens.begin(), s.tokens.end());
    for (const auto& t : uniq) ++df[t];
  };
  for (const auto& s : hs) count_df(s);
  for (const auto& s : ss) count_df(s);

  auto weights = [&](const readrank::Sentence& s) {
    std::map<std::string, double> tf;
    for (const auto& t : s.tokens) tf[t] += 1.0;
    std::map<std::string, double> w;
    for (const auto& [term, count] : tf) {
      double v = count * std::log(static_cast<double>(n_total) / df.at(term));
      if (v != 0.0) w[term] = v;
    }
    return w;
  };

  auto sim = [&](const std::map<std::string, double>& u,
                 const std::map<std::string, double>& v) {
    double dot = 0.0;
    for (const auto& [term, w] : u) {
      auto it = v.find(term);
      if (it != v.end()) dot += w * it->second;
    }
    if (dot == 0.0) return 0.0;
    double nu = 0.0, nv = 0.0;
    for (const auto& [term, w] : u) nu += w * w;
    for (const auto& [term, w] : v) nv += w * w;
    if (nu == 0.0 || nv == 0.0) return 0.0;
    double c = dot / (std::sqrt(nu) * std::sqrt(nv));
    if (c < 0.0) c = 0.0;
    if (c > 1.0) c = 1.0;
    return c;
  };

  std::vector<std::map<std::string, double>> hv, sv;
  for (const auto& s : hs) hv.push_back(weights(s));
  for (const auto& s : ss) sv.push_back(weights(s));

  // Every admissible candidate pair.
  std::vector<OracleLink> candidates;
  for (std::size_t i = 0; i < hs.size(); ++i)
    for (std::size_t j = 0; j < ss.size(); ++j) {
      if (cfg.require_distinct_text && hs[i].text == ss[j].text) continue;
      double c = sim(hv[i], sv[j]);
      if (c >= cfg.threshold)
        candidates.push_back({static_cast<int>(i), static_cast<int>(j), c});
    }

  // Greedy consumption by descending similarity, index tie-breaks.
  std::vector<OracleLink> accepted;
  std::vector<bool> used(ss.size(), false);
  std::vector<int> splits(hs.size(), 0);
  while (true) {
    int best = -1;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const auto& cand = candidates[c];
      if (used[static_cast<std::size_t>(cand.simpler_index)]) continue;
      if (splits[static_cast<std::size_t>(cand.harder_index)] >= cfg.max_splits) continue;
      if (best < 0) {
        best = static_cast<int>(c);
        continue;
      }
      const auto& champ = candidates[static_cast<std::size_t>(best)];
      if (cand.similarity > champ.similarity ||
          (cand.similarity == champ.similarity &&
           (cand.harder_index < champ.harder_index ||
            (cand.harder_index == champ.harder_index &&
             cand.simpler_index < champ.simpler_index))))
        best = static_cast<int>(c);
    }
    if (best < 0) break;
    OracleLink chosen = candidates[static_cast<std::size_t>(best)];
    used[static_cast<std::size_t>(chosen.simpler_index)] = true;
    ++splits[static_cast<std::size_t>(chosen.harder_index)];
    accepted.push_back(chosen);
    candidates.erase(candidates.begin() + best);
  }
  return accepted;
}

// ---------------------------------------------------------------------
// Random parse-tree generator for the treebank identities.

inline readrank::ParseTree random_tree(readrank::Rng& rng, int depth = 0) {
  static const std::vector<std::string> phrase_labels = {
      "S", "NP", "VP", "PP", "SBAR", "ADJP", "SINV", "SQ", "S-TPC", "NP-SBJ"};
  static const std::vector<std::string> pos_labels = {"DT", "NN",  "VBD", "JJ",
                                                      "RB", "IN",  "PRP", "CC"};
  static const std::vector<std::string> words = {"the", "cat", "dog", "sat", "ran",
                                                 "big", "fast", "on", "it", "and"};
  readrank::ParseTree node;
  bool make_preterminal = depth >= 4 || rng.below(100) < 35;
  if (make_preterminal) {
    node.label = pos_labels[rng.below(pos_labels.size())];
    readrank::ParseTree leaf;
    leaf.token = words[rng.below(words.size())];
    node.children.push_back(std::move(leaf));
    return node;
  }
  node.label = phrase_labels[rng.below(phrase_labels.size())];
  std::size_t n_children = 1 + rng.below(3);
  for (std::size_t i = 0; i < n_children; ++i)
    node.children.push_back(random_tree(rng, depth + 1));
  return node;
}

inline readrank::ParseTree random_rooted_tree(readrank::Rng& rng) {
  if (rng.below(2) == 0) {
    readrank::ParseTree root;
    root.label = "ROOT";
    root.children.push_back(random_tree(rng, 1));
    return root;
  }
  return random_tree(rng, 1);
}

// ---------------------------------------------------------------------
// Synthetic ranking data.

// Exhaustive weak-ranker search mirroring the documented candidate order:
// features ascending, thresholds (midpoints of consecutive distinct
// observed values) ascending, strict improvement on |r|.
struct OracleWeak {
  int feature = -1;
  double threshold = 0.0;
  double r = 0.0;
};

inline OracleWeak oracle_weak_search(const std::vector<readrank::TrainedPair>& pairs,
                                     const std::vector<double>& dist) {
  OracleWeak best;
  bool found = false;
  std::size_t dim = pairs.front().x_hard.size();
  for (std::size_t f = 0; f < dim; ++f) {
    std::vector<double> values;
    for (const auto& p : pairs) {
      values.push_back(p.x_hard[f]);
      values.push_back(p.x_simple[f]);
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      double theta = 0.5 * (values[i] + values[i + 1]);
      double r = 0.0;
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        double hh = pairs[p].x_hard[f] > theta ? 1.0 : 0.0;
        double hs = pairs[p].x_simple[f] > theta ? 1.0 : 0.0;
        r += dist[p] * (hh - hs);
      }
      if (!found || std::fabs(r) > std::fabs(best.r)) {
        best = {static_cast<int>(f), theta, r};
        found = true;
      }
    }
  }
  return best;
}

// Worst componentwise gradient error over random networks and pairs,
// relative to the gradient's own scale, against central finite differences.
inline double ranknet_gradient_check(std::uint64_t seed, int n_settings, int n_pairs,
                                     double step) {
  readrank::Rng rng(seed);
  double worst = 0.0;
  for (int setting = 0; setting < n_settings; ++setting) {
    std::size_t dim = 2 + rng.below(4);
    int hidden = 2 + static_cast<int>(rng.below(5));
    readrank::NetModel net;
    net.hidden = hidden;
    for (std::size_t i = 0; i < static_cast<std::size_t>(hidden) * dim; ++i)
      net.w1.push_back(rng.uniform(-0.5, 0.5));
    for (int i = 0; i < hidden; ++i) net.b1.push_back(rng.uniform(-0.5, 0.5));
    for (int i = 0; i < hidden; ++i) net.w2.push_back(rng.uniform(-0.5, 0.5));
    net.b2 = rng.uniform(-0.5, 0.5);

    for (int p = 0; p < n_pairs; ++p) {
      std::vector<double> xh(dim), xs(dim);
      for (auto& v : xh) v = rng.gaussian();
      for (auto& v : xs) v = rng.gaussian();
      readrank::NetGradient g = readrank::ranknet_pair_gradient(net, xh, xs);

      std::vector<double> analytic;
      for (double v : g.w1) analytic.push_back(v);
      for (double v : g.b1) analytic.push_back(v);
      for (double v : g.w2) analytic.push_back(v);
      analytic.push_back(g.b2);

      readrank::NetModel probe = net;
      std::vector<double*> ptrs;
      for (auto& v : probe.w1) ptrs.push_back(&v);
      for (auto& v : probe.b1) ptrs.push_back(&v);
      for (auto& v : probe.w2) ptrs.push_back(&v);
      ptrs.push_back(&probe.b2);

      std::vector<double> numeric(ptrs.size());
      for (std::size_t i = 0; i < ptrs.size(); ++i) {
        double saved = *ptrs[i];
        *ptrs[i] = saved + step;
        double up = readrank::ranknet_pair_loss(probe, xh, xs);
        *ptrs[i] = saved - step;
        double down = readrank::ranknet_pair_loss(probe, xh, xs);
        *ptrs[i] = saved;
        numeric[i] = (up - down) / (2.0 * step);
      }
      double scale = 1e-8;
      for (std::size_t i = 0; i < ptrs.size(); ++i)
        scale = std::max({scale, std::fabs(analytic[i]), std::fabs(numeric[i])});
      for (std::size_t i = 0; i < ptrs.size(); ++i)
        worst = std::max(worst, std::fabs(analytic[i] - numeric[i]) / scale);
    }
  }
  return worst;
}

// Pair corpus whose true score is a fixed linear function of the features.
// Instances sit on a latent score axis with orthogonal feature noise; the
// label comes from the true score plus Gaussian noise with sigma = 0.1 of
// the realized score spread. Pair gaps are wide relative to that noise, so
// a good ranker can exceed 95% pairwise accuracy.
inline readrank::RankData synthetic_linear_corpus(std::size_t n_pairs,
                                                  std::uint64_t seed) {
  const std::vector<double> w = {2.0, -1.5, 1.2, 3.0, 0.0,
                                 0.5, -2.2, 1.0, 0.0, 0.8};
  const std::size_t dim = w.size();
  double norm = 0.0;
  for (double v : w) norm += v * v;
  norm = std::sqrt(norm);
  std::vector<double> unit(dim);
  for (std::size_t i = 0; i < dim; ++i) unit[i] = w[i] / norm;

  readrank::Rng rng(seed);
  auto make_x = [&](double latent) {
    std::vector<double> noise(dim);
    double along = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      noise[i] = 0.3 * rng.gaussian();
      along += noise[i] * unit[i];
    }
    std::vector<double> x(dim);
    for (std::size_t i = 0; i < dim; ++i)
      x[i] = latent * unit[i] + (noise[i] - along * unit[i]);
    return x;
  };

  struct Raw {
    std::vector<double> x_hard, x_simple;
    double s_hard, s_simple;
  };
  std::vector<Raw> raws;
  double lo = 1e300, hi = -1e300;
  for (std::size_t p = 0; p < n_pairs; ++p) {
    double s_simple = rng.uniform(0.0, 2.0) * norm;
    double s_hard = s_simple + rng.uniform(2.5, 4.0) * norm;
    Raw raw;
    raw.x_hard = make_x(s_hard / norm);
    raw.x_simple = make_x(s_simple / norm);
    raw.s_hard = s_hard;
    raw.s_simple = s_simple;
    raws.push_back(std::move(raw));
    lo = std::min({lo, s_hard, s_simple});
    hi = std::max({hi, s_hard, s_simple});
  }
  double sigma = 0.1 * (hi - lo);

  readrank::RankData data;
  for (std::size_t f = 0; f < dim; ++f) data.schema.push_back("f" + std::to_string(f));
  for (std::size_t p = 0; p < raws.size(); ++p) {
    std::string qid = "q" + std::to_string(p);
    double noisy_hard = raws[p].s_hard + sigma * rng.gaussian();
    double noisy_simple = raws[p].s_simple + sigma * rng.gaussian();
    bool keep = noisy_hard >= noisy_simple;
    data.items.push_back({qid, 2, keep ? raws[p].x_hard : raws[p].x_simple, ""});
    data.items.push_back({qid, 1, keep ? raws[p].x_simple : raws[p].x_hard, ""});
  }
  return data;
}

// Linearly separable pair corpus: the harder member of each qid gets the
// larger value of one informative feature; the rest are uniform noise.
inline readrank::RankData synthetic_single_feature(std::size_t n_pairs,
                                                   std::size_t n_features,
                                                   std::size_t informative,
                                                   std::uint64_t seed,
                                                   const std::vector<std::string>& schema) {
  readrank::Rng rng(seed);
  readrank::RankData data;
  data.schema = schema;
  for (std::size_t p = 0; p < n_pairs; ++p) {
    std::string qid = "q" + std::to_string(p);
    readrank::RankInstance hard{qid, 2, {}, ""};
    readrank::RankInstance simple{qid, 1, {}, ""};
    for (std::size_t f = 0; f < n_features; ++f) {
      if (f == informative) {
        double base = rng.uniform(0.0, 1.0);
        hard.x.push_back(base + 1.0 + rng.uniform(0.0, 0.5));
        simple.x.push_back(base);
      } else {
        hard.x.push_back(rng.uniform(0.0, 1.0));
        simple.x.push_back(rng.uniform(0.0, 1.0));
      }
    }
    data.items.push_back(std::move(hard));
    data.items.push_back(std::move(simple));
  }
  return data;
}

}  // namespace rrtest

#endif  // READRANK_TESTS_TESTUTIL_HPP
