#include "readrank/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "readrank/errors.hpp"
#include "readrank/treebank.hpp"
#include "readrank/util.hpp"

namespace readrank {

namespace {

// UTF-8 decode with byte passthrough on invalid sequences.
std::uint32_t next_codepoint(std::string_view s, std::size_t& i) {
  unsigned char c = static_cast<unsigned char>(s[i]);
  if (c < 0x80) {
    ++i;
    return c;
  }
  int extra = 0;
  std::uint32_t cp = 0;
  if ((c & 0xe0) == 0xc0) {
    cp = c & 0x1f;
    extra = 1;
  } else if ((c & 0xf0) == 0xe0) {
    cp = c & 0x0f;
    extra = 2;
  } else if ((c & 0xf8) == 0xf0) {
    cp = c & 0x07;
    extra = 3;
  } else {
    ++i;
    return c;
  }
  if (i + static_cast<std::size_t>(extra) >= s.size()) {
    ++i;
    return c;
  }
  for (int k = 1; k <= extra; ++k) {
    unsigned char cc = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
    if ((cc & 0xc0) != 0x80) {
      ++i;
      return c;
    }
    cp = (cp << 6) | (cc & 0x3f);
  }
  i += static_cast<std::size_t>(extra) + 1;
  return cp;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xc0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3f));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xe0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
    out += static_cast<char>(0x80 | (cp & 0x3f));
  } else {
    out += static_cast<char>(0xf0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3f));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
    out += static_cast<char>(0x80 | (cp & 0x3f));
  }
}

enum class CharClass { Letter, Digit, Joiner, Separator };

CharClass classify(std::uint32_t cp) {
  if (cp < 0x80) {
    if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return CharClass::Letter;
    if (cp >= '0' && cp <= '9') return CharClass::Digit;
    if (cp == '-' || cp == '\'') return CharClass::Joiner;
    return CharClass::Separator;
  }
  if (cp == 0x2019) return CharClass::Joiner;  // curly apostrophe
  if (cp >= 0x2000 && cp <= 0x206f) return CharClass::Separator;  // dashes, quotes, ellipsis
  if (cp >= 0x00a0 && cp <= 0x00bf) return CharClass::Separator;
  if (cp == 0x00d7 || cp == 0x00f7) return CharClass::Separator;
  return CharClass::Letter;  // accented Latin, CJK, ...
}

std::string basename_no_ext(const std::string& path) {
  std::filesystem::path p(path);
  return p.stem().string();
}

std::string tree_sidecar_path(const std::string& path) {
  std::filesystem::path p(path);
  p.replace_extension(".trees");
  return p.string();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

struct Link {
  int harder_index;
  int simpler_index;
  double similarity;
};

// Greedy assignment over all admissible candidates, by descending
// similarity with (harder, simpler) index tie-breaks.
std::vector<Link> align_indices(const RawArticle& harder, const RawArticle& simpler,
                                const AlignmentConfig& cfg) {
  TfIdfVectors vecs = tfidf_vectors(harder, simpler);
  std::vector<Link> candidates;
  for (std::size_t i = 0; i < harder.sentences.size(); ++i) {
    for (std::size_t j = 0; j < simpler.sentences.size(); ++j) {
      if (cfg.require_distinct_text &&
          harder.sentences[i].text == simpler.sentences[j].text)
        continue;
      double sim = cosine(vecs.a[i], vecs.b[j]);
      if (sim >= cfg.threshold)
        candidates.push_back({static_cast<int>(i), static_cast<int>(j), sim});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Link& x, const Link& y) {
    if (x.similarity != y.similarity) return x.similarity > y.similarity;
    if (x.harder_index != y.harder_index) return x.harder_index < y.harder_index;
    return x.simpler_index < y.simpler_index;
  });
  std::vector<int> splits(harder.sentences.size(), 0);
  std::vector<char> simpler_used(simpler.sentences.size(), 0);
  std::vector<Link> accepted;
  for (const Link& c : candidates) {
    if (simpler_used[static_cast<std::size_t>(c.simpler_index)]) continue;
    if (splits[static_cast<std::size_t>(c.harder_index)] >= cfg.max_splits) continue;
    simpler_used[static_cast<std::size_t>(c.simpler_index)] = 1;
    ++splits[static_cast<std::size_t>(c.harder_index)];
    accepted.push_back(c);
  }
  std::sort(accepted.begin(), accepted.end(), [](const Link& x, const Link& y) {
    if (x.harder_index != y.harder_index) return x.harder_index < y.harder_index;
    return x.simpler_index < y.simpler_index;
  });
  return accepted;
}

std::string render_row(const std::string& group_id, const Sentence& s, double similarity) {
  std::string row = group_id;
  row += '\t';
  row += std::to_string(s.level);
  row += '\t';
  row += format_double(similarity);
  row += '\t';
  row += escape_tsv(s.text);
  row += '\t';
  row += s.tree.empty() ? "_" : escape_tsv(s.tree);
  row += '\n';
  return row;
}

struct CorpusRow {
  std::string group_id;
  int level;
  double similarity;
  std::string text;
  std::string tree;
  std::size_t line;
};

Sentence row_sentence(const CorpusRow& row) {
  Sentence s;
  s.id = row.group_id + "/" + std::to_string(row.level);
  s.text = row.text;
  s.tokens = tokenize(row.text);
  s.level = row.level;
  s.tree = row.tree;
  return s;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  auto flush = [&]() {
    // Trim joiners at the edges; drop what is left if empty.
    std::size_t b = 0, e = current.size();
    while (b < e && (current[b] == '-' || current[b] == '\'')) ++b;
    while (e > b && (current[e - 1] == '-' || current[e - 1] == '\'')) --e;
    if (e > b) tokens.push_back(current.substr(b, e - b));
    current.clear();
  };
  while (i < text.size()) {
    std::uint32_t cp = next_codepoint(text, i);
    CharClass cls = classify(cp);
    if (cls == CharClass::Separator) {
      flush();
      continue;
    }
    if (cp >= 'A' && cp <= 'Z') cp = cp - 'A' + 'a';
    if (cp == 0x2019) cp = '\'';
    append_utf8(current, cp);
  }
  flush();
  return tokens;
}

bool is_alphabetic_token(std::string_view token) {
  bool has_letter = false;
  std::size_t i = 0;
  while (i < token.size()) {
    std::uint32_t cp = next_codepoint(token, i);
    if (cp >= '0' && cp <= '9') return false;
    if (classify(cp) == CharClass::Letter) has_letter = true;
  }
  return has_letter;
}

RawArticle load_article(const std::string& path, int level) {
  std::vector<std::string> lines = read_lines(path);

  std::vector<std::string> tree_lines;
  bool have_trees = false;
  std::string sidecar = tree_sidecar_path(path);
  if (std::filesystem::exists(sidecar)) {
    tree_lines = read_lines(sidecar);
    have_trees = true;
    if (tree_lines.size() != lines.size())
      throw ParseError("tree sidecar " + sidecar + " has " +
                           std::to_string(tree_lines.size()) + " lines, article has " +
                           std::to_string(lines.size()),
                       tree_lines.size());
  }

  RawArticle article;
  article.article_id = basename_no_ext(path);
  article.level = level;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string text = trim(lines[ln]);
    if (text.empty()) continue;
    Sentence s;
    s.id = article.article_id + ":" + std::to_string(article.sentences.size());
    s.text = text;
    s.tokens = tokenize(text);
    s.level = level;
    if (have_trees) {
      std::string tree = trim(tree_lines[ln]);
      if (tree != "_" && !tree.empty()) {
        parse_bracketed(tree);  // validate now, with the offending line known
        s.tree = tree;
      }
    }
    article.sentences.push_back(std::move(s));
  }
  if (article.sentences.empty()) throw EmptyArticle(path);
  return article;
}

TfIdfVectors tfidf_vectors(const RawArticle& doc_a, const RawArticle& doc_b) {
  if (doc_a.sentences.empty() || doc_b.sentences.empty())
    throw EmptyArticle(doc_a.sentences.empty() ? doc_a.article_id : doc_b.article_id);

  const std::size_t n_total = doc_a.sentences.size() + doc_b.sentences.size();
  std::map<std::string, int> df;
  auto add_df = [&](const Sentence& s) {
    std::set<std::string> seen(s.tokens.begin(), s.tokens.end());
    for (const auto& term : seen) ++df[term];
  };
  for (const auto& s : doc_a.sentences) add_df(s);
  for (const auto& s : doc_b.sentences) add_df(s);

  auto vectorize = [&](const Sentence& s) {
    TermVec tf;
    for (const auto& tok : s.tokens) tf[tok] += 1.0;
    TermVec v;
    for (const auto& [term, count] : tf) {
      double idf = std::log(static_cast<double>(n_total) / df.at(term));
      double w = count * idf;
      if (w != 0.0) v[term] = w;
    }
    return v;
  };

  TfIdfVectors out;
  out.a.reserve(doc_a.sentences.size());
  out.b.reserve(doc_b.sentences.size());
  for (const auto& s : doc_a.sentences) out.a.push_back(vectorize(s));
  for (const auto& s : doc_b.sentences) out.b.push_back(vectorize(s));
  return out;
}

double cosine(const TermVec& u, const TermVec& v) {
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
  double sim = dot / (std::sqrt(nu) * std::sqrt(nv));
  return std::clamp(sim, 0.0, 1.0);
}

std::vector<AlignedPair> align_pair(const RawArticle& harder, const RawArticle& simpler,
                                    const AlignmentConfig& cfg) {
  if (harder.level <= simpler.level)
    throw InvalidLevels("align_pair: harder level " + std::to_string(harder.level) +
                        " must exceed simpler level " + std::to_string(simpler.level));
  std::vector<AlignedPair> pairs;
  for (const Link& link : align_indices(harder, simpler, cfg)) {
    AlignedPair p;
    p.group_id = harder.article_id + ":" + std::to_string(link.harder_index);
    p.harder = harder.sentences[static_cast<std::size_t>(link.harder_index)];
    p.simpler = simpler.sentences[static_cast<std::size_t>(link.simpler_index)];
    p.similarity = link.similarity;
    pairs.push_back(std::move(p));
  }
  return pairs;
}

std::vector<AlignedTriple> align_triples(const RawArticle& adv,
                                         const RawArticle& intermediate,
                                         const RawArticle& ele,
                                         const AlignmentConfig& cfg) {
  if (!(adv.level > intermediate.level && intermediate.level > ele.level))
    throw InvalidLevels("align_triples: levels must be strictly decreasing");

  auto adv_int = align_indices(adv, intermediate, cfg);
  auto int_ele = align_indices(intermediate, ele, cfg);
  auto adv_ele = align_indices(adv, ele, cfg);

  std::map<std::pair<int, int>, double> adv_ele_sim;
  for (const Link& l : adv_ele) adv_ele_sim[{l.harder_index, l.simpler_index}] = l.similarity;

  std::vector<AlignedTriple> triples;
  for (const Link& ai : adv_int) {
    for (const Link& ie : int_ele) {
      if (ie.harder_index != ai.simpler_index) continue;
      auto it = adv_ele_sim.find({ai.harder_index, ie.simpler_index});
      if (it == adv_ele_sim.end()) continue;
      AlignedTriple t;
      t.group_id = adv.article_id + ":" + std::to_string(ai.harder_index);
      t.adv = adv.sentences[static_cast<std::size_t>(ai.harder_index)];
      t.intermediate = intermediate.sentences[static_cast<std::size_t>(ai.simpler_index)];
      t.ele = ele.sentences[static_cast<std::size_t>(ie.simpler_index)];
      t.sim_adv_int = ai.similarity;
      t.sim_int_ele = ie.similarity;
      t.sim_adv_ele = it->second;
      triples.push_back(std::move(t));
    }
  }
  return triples;
}

std::size_t Corpus::group_count() const {
  std::set<std::string> groups;
  for (const auto& p : pairs) groups.insert(p.group_id);
  for (const auto& t : triples) groups.insert(t.group_id);
  return groups.size();
}

void write_corpus(const std::vector<AlignedPair>& pairs, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << "group_id\tlevel\tsimilarity\ttext\ttree\n";
  const std::string* prev_group = nullptr;
  const Sentence* prev_harder = nullptr;
  for (const auto& p : pairs) {
    bool same_group = prev_group && *prev_group == p.group_id && prev_harder &&
                      *prev_harder == p.harder;
    if (!same_group) out << render_row(p.group_id, p.harder, p.similarity);
    out << render_row(p.group_id, p.simpler, p.similarity);
    prev_group = &p.group_id;
    prev_harder = &p.harder;
  }
}

void write_corpus(const std::vector<AlignedTriple>& triples, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << "group_id\tlevel\tsimilarity\ttext\ttree\n";
  for (const auto& t : triples) {
    out << render_row(t.group_id, t.adv, t.sim_adv_int);
    out << render_row(t.group_id, t.intermediate, t.sim_int_ele);
    out << render_row(t.group_id, t.ele, t.sim_adv_ele);
  }
}

Corpus read_corpus(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.empty() || split(lines[0], '\t') !=
                           std::vector<std::string>{"group_id", "level", "similarity",
                                                    "text", "tree"})
    throw ParseError("missing corpus header in " + path, 1);

  std::vector<CorpusRow> rows;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    auto cols = split(lines[ln], '\t');
    if (cols.size() != 5)
      throw ParseError("expected 5 columns, found " + std::to_string(cols.size()),
                       ln + 1);
    CorpusRow row;
    row.group_id = cols[0];
    if (!parse_int(cols[1], row.level) || row.level < 1)
      throw ParseError("bad level '" + cols[1] + "'", ln + 1);
    if (!parse_double(cols[2], row.similarity) || row.similarity < 0.0 ||
        row.similarity > 1.0)
      throw ParseError("bad similarity '" + cols[2] + "'", ln + 1);
    row.text = unescape_tsv(cols[3]);
    row.tree = cols[4] == "_" ? std::string() : unescape_tsv(cols[4]);
    row.line = ln + 1;
    rows.push_back(std::move(row));
  }

  // Consecutive rows sharing a group_id form one group.
  std::vector<std::vector<CorpusRow>> groups;
  for (auto& row : rows) {
    if (groups.empty() || groups.back().back().group_id != row.group_id)
      groups.emplace_back();
    groups.back().push_back(std::move(row));
  }

  bool all_triples = !groups.empty();
  for (const auto& g : groups) {
    if (g.size() != 3 || g[0].level == g[1].level || g[1].level == g[2].level ||
        g[0].level == g[2].level) {
      all_triples = false;
      break;
    }
  }

  Corpus corpus;
  if (all_triples) {
    for (auto& g : groups) {
      std::stable_sort(g.begin(), g.end(),
                       [](const CorpusRow& a, const CorpusRow& b) { return a.level > b.level; });
      AlignedTriple t;
      t.group_id = g[0].group_id;
      t.adv = row_sentence(g[0]);
      t.intermediate = row_sentence(g[1]);
      t.ele = row_sentence(g[2]);
      t.sim_adv_int = g[0].similarity;
      t.sim_int_ele = g[1].similarity;
      t.sim_adv_ele = g[2].similarity;
      corpus.triples.push_back(std::move(t));
    }
    return corpus;
  }

  for (const auto& g : groups) {
    int max_level = 0;
    for (const auto& row : g) max_level = std::max(max_level, row.level);
    const CorpusRow* harder = nullptr;
    for (const auto& row : g) {
      if (row.level == max_level) {
        if (harder)
          throw ParseError("group '" + g[0].group_id + "' has two rows at level " +
                               std::to_string(max_level),
                           row.line);
        harder = &row;
      }
    }
    bool any_simpler = false;
    for (const auto& row : g) {
      if (&row == harder) continue;
      any_simpler = true;
      AlignedPair p;
      p.group_id = row.group_id;
      p.harder = row_sentence(*harder);
      p.simpler = row_sentence(row);
      p.similarity = row.similarity;
      corpus.pairs.push_back(std::move(p));
    }
    if (!any_simpler)
      throw ParseError("group '" + g[0].group_id + "' has no simpler row", g[0].line);
  }
  return corpus;
}

std::vector<AlignedPair> corpus_pairs(const Corpus& corpus) {
  if (!corpus.is_triples()) return corpus.pairs;
  std::vector<AlignedPair> pairs;
  pairs.reserve(corpus.triples.size() * 3);
  for (const auto& t : corpus.triples) {
    pairs.push_back({t.group_id, t.adv, t.intermediate, t.sim_adv_int});
    pairs.push_back({t.group_id, t.intermediate, t.ele, t.sim_int_ele});
    pairs.push_back({t.group_id, t.adv, t.ele, t.sim_adv_ele});
  }
  return pairs;
}

}  // namespace readrank
