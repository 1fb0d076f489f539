#include "readrank/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "readrank/errors.hpp"
#include "readrank/util.hpp"

namespace readrank {

namespace {

constexpr const char* kLexFeatures[] = {"ttr",        "cttr",      "avg_senses",
                                        "noun_ratio", "verb_ratio", "adj_ratio",
                                        "adv_ratio",  "lexical_density"};
constexpr const char* kSynFeatures[] = {"senlen", "subtrees", "const", "mlt", "mlc"};
constexpr const char* kPsyFeatures[] = {"aoa", "imagery", "familiarity",
                                        "meaningfulness", "concreteness"};

bool in_list(const std::string& name, const auto& list) {
  for (const char* f : list)
    if (name == f) return true;
  return false;
}

std::string strip_coverage_suffix(const std::string& name) {
  if (name.size() > 4 && name.ends_with("_cov")) return name.substr(0, name.size() - 4);
  return name;
}

bool is_pos_feature(const std::string& name) {
  return name == "noun_ratio" || name == "verb_ratio" || name == "adj_ratio" ||
         name == "adv_ratio" || name == "lexical_density";
}

// Per-sentence work shared by several features, computed at most once.
struct ExtractionScratch {
  const Sentence& sentence;
  const ParseTree* tree;
  std::optional<std::map<std::string, double>> pos;
  std::map<std::string, SentenceAverage> norm_avgs;
  std::optional<std::map<std::string, SentenceAverage>> cel_avgs;

  const std::map<std::string, double>& pos_map() {
    if (!pos) {
      std::vector<std::string> tags;
      for (auto& [tag, tok] : preterminal_tags(*tree)) tags.push_back(tag);
      pos = pos_ratios(tags);
    }
    return *pos;
  }

  const SentenceAverage& norm(const std::string& name, const FeatureRegistry& reg) {
    auto it = norm_avgs.find(name);
    if (it == norm_avgs.end()) {
      auto lex = reg.norms.find(name);
      if (lex == reg.norms.end())
        throw RegistryError("feature '" + name + "' has no bound lexicon");
      it = norm_avgs.emplace(name, sentence_average(lex->second, sentence.tokens)).first;
    }
    return it->second;
  }

  const std::map<std::string, SentenceAverage>& cel(const FeatureRegistry& reg) {
    if (!cel_avgs) {
      if (!reg.celex) throw RegistryError("CEL features have no bound attribute table");
      cel_avgs = attribute_averages(*reg.celex, sentence.tokens);
    }
    return *cel_avgs;
  }
};

double compute_feature(const std::string& name, ExtractionScratch& sc,
                       const FeatureRegistry& reg) {
  const auto& tokens = sc.sentence.tokens;
  if (name == "ttr") return ttr(tokens);
  if (name == "cttr") return cttr(tokens);
  if (name == "avg_senses") return sc.norm("senses", reg).mean;
  if (name == "avg_senses_cov") return sc.norm("senses", reg).coverage;
  if (is_pos_feature(name)) return sc.pos_map().at(name);
  if (name == "senlen") return static_cast<double>(tokens.size());
  if (name == "subtrees") return static_cast<double>(count_subtrees(*sc.tree));
  if (name == "const") return static_cast<double>(count_constituents(*sc.tree));
  if (name == "mlt") return mlt(*sc.tree);
  if (name == "mlc") return mlc(*sc.tree);
  if (name.starts_with("cel_")) {
    std::string base = strip_coverage_suffix(name);
    std::string attr = base.substr(4);
    const auto& avgs = sc.cel(reg);
    auto it = avgs.find(attr);
    if (it == avgs.end())
      throw RegistryError("attribute table has no column '" + attr + "'");
    return name.ends_with("_cov") ? it->second.coverage : it->second.mean;
  }
  std::string base = strip_coverage_suffix(name);
  if (in_list(base, kPsyFeatures))
    return name.ends_with("_cov") ? sc.norm(base, reg).coverage : sc.norm(base, reg).mean;
  throw RegistryError("unknown feature '" + name + "'");
}

}  // namespace

std::string feature_group(const std::string& name) {
  std::string base = strip_coverage_suffix(name);
  if (in_list(base, kLexFeatures)) return "LEX";
  if (in_list(base, kSynFeatures)) return "SYN";
  if (in_list(base, kPsyFeatures)) return "PSY";
  if (base.starts_with("cel_")) return "CEL";
  throw RegistryError("unknown feature '" + name + "'");
}

bool feature_needs_tree(const std::string& name) {
  std::string base = strip_coverage_suffix(name);
  if (base == "subtrees" || base == "const" || base == "mlt" || base == "mlc")
    return true;
  return is_pos_feature(base);  // POS tags come from the parse
}

FeatureRegistry FeatureRegistry::standard(std::map<std::string, NormLexicon> norms,
                                          std::optional<AttributeTable> celex,
                                          bool include_coverage) {
  FeatureRegistry reg;
  reg.norms = std::move(norms);
  reg.celex = std::move(celex);
  reg.include_coverage = include_coverage;

  auto add = [&](const std::string& name, bool lexicon_backed) {
    reg.enabled.push_back(name);
    if (lexicon_backed && include_coverage) reg.enabled.push_back(name + "_cov");
  };
  add("ttr", false);
  add("cttr", false);
  if (reg.norms.count("senses")) add("avg_senses", true);
  for (const char* f : {"noun_ratio", "verb_ratio", "adj_ratio", "adv_ratio",
                        "lexical_density"})
    add(f, false);
  for (const char* f : kSynFeatures) add(f, false);
  if (reg.celex)
    for (const auto& attr : reg.celex->attributes) add("cel_" + attr, true);
  for (const char* f : kPsyFeatures)
    if (reg.norms.count(f)) add(f, true);
  reg.validate();
  return reg;
}

FeatureRegistry FeatureRegistry::restricted_to(const std::vector<std::string>& names) const {
  std::set<std::string> keep;
  for (const auto& n : names) {
    keep.insert(n);
    if (include_coverage) keep.insert(n + "_cov");
  }
  FeatureRegistry reg = *this;
  reg.enabled.clear();
  for (const auto& n : enabled)
    if (keep.count(n)) reg.enabled.push_back(n);
  std::set<std::string> have(reg.enabled.begin(), reg.enabled.end());
  for (const auto& n : names)
    if (!have.count(n))
      throw RegistryError("feature '" + n + "' is not available in this registry");
  reg.validate();
  return reg;
}

FeatureRegistry FeatureRegistry::group_only(const std::string& group) const {
  FeatureRegistry reg = *this;
  reg.enabled.clear();
  for (const auto& n : enabled)
    if (feature_group(n) == group) reg.enabled.push_back(n);
  return reg;
}

void FeatureRegistry::validate() const {
  std::set<std::string> seen;
  for (const auto& name : enabled) {
    if (!seen.insert(name).second)
      throw RegistryError("duplicate feature '" + name + "'");
    std::string base = strip_coverage_suffix(name);
    if (base == "avg_senses" && !norms.count("senses"))
      throw RegistryError("avg_senses requires a bound 'senses' lexicon");
    if (in_list(base, kPsyFeatures) && !norms.count(base))
      throw RegistryError("PSY feature '" + base + "' has no bound lexicon");
    if (base.starts_with("cel_") && !celex)
      throw RegistryError("CEL feature '" + base + "' has no bound attribute table");
    feature_group(name);  // rejects unknown names
  }
}

FeatureVector extract(const Sentence& s, const ParseTree* tree,
                      const FeatureRegistry& reg) {
  for (const auto& name : reg.enabled)
    if (feature_needs_tree(name) && tree == nullptr)
      throw MissingParse("feature '" + name + "' requires a parse tree (sentence " +
                         s.id + ")");
  ExtractionScratch scratch{s, tree, {}, {}, {}};
  FeatureVector fv;
  fv.values.reserve(reg.enabled.size());
  for (const auto& name : reg.enabled)
    fv.values.emplace_back(name, compute_feature(name, scratch, reg));
  return fv;
}

double ttr(const std::vector<std::string>& tokens) {
  if (tokens.empty()) return 0.0;
  std::set<std::string> types(tokens.begin(), tokens.end());
  return static_cast<double>(types.size()) / static_cast<double>(tokens.size());
}

double cttr(const std::vector<std::string>& tokens) {
  if (tokens.empty()) return 0.0;
  std::set<std::string> types(tokens.begin(), tokens.end());
  return static_cast<double>(types.size()) /
         std::sqrt(2.0 * static_cast<double>(tokens.size()));
}

double avg_senses(const std::vector<std::string>& tokens, const NormLexicon& senses) {
  return sentence_average(senses, tokens).mean;
}

std::map<std::string, double> pos_ratios(const std::vector<std::string>& tags) {
  double nouns = 0, verbs = 0, adjs = 0, advs = 0;
  for (const auto& tag : tags) {
    if (tag.starts_with("NN")) ++nouns;
    else if (tag.starts_with("VB")) ++verbs;
    else if (tag.starts_with("JJ")) ++adjs;
    else if (tag.starts_with("RB")) ++advs;
  }
  double n = static_cast<double>(tags.size());
  std::map<std::string, double> out;
  out["noun_ratio"] = n > 0 ? nouns / n : 0.0;
  out["verb_ratio"] = n > 0 ? verbs / n : 0.0;
  out["adj_ratio"] = n > 0 ? adjs / n : 0.0;
  out["adv_ratio"] = n > 0 ? advs / n : 0.0;
  out["lexical_density"] = n > 0 ? (nouns + verbs + adjs + advs) / n : 0.0;
  return out;
}

int syllables(std::string_view word) {
  auto is_vowel = [](char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
  };
  int groups = 0;
  bool in_group = false;
  for (char c : word) {
    if (is_vowel(c)) {
      if (!in_group) ++groups;
      in_group = true;
    } else {
      in_group = false;
    }
  }
  std::size_t n = word.size();
  if (n >= 1 && word[n - 1] == 'e' && !(n >= 2 && word[n - 2] == 'l')) --groups;
  return groups < 1 ? 1 : groups;
}

double fk_grade(const Sentence& s) {
  if (s.tokens.empty()) throw FKUndefined();
  double words = static_cast<double>(s.tokens.size());
  double sylls = 0.0;
  for (const auto& tok : s.tokens) sylls += syllables(tok);
  return 0.39 * words + 11.8 * (sylls / words) - 15.59;
}

FeatureMatrix extract_corpus(const Corpus& corpus, const FeatureRegistry& reg, int jobs) {
  struct Cell {
    const Sentence* sentence;
    std::string group_id;
  };
  std::vector<Cell> cells;
  if (corpus.is_triples()) {
    for (const auto& t : corpus.triples) {
      cells.push_back({&t.adv, t.group_id});
      cells.push_back({&t.intermediate, t.group_id});
      cells.push_back({&t.ele, t.group_id});
    }
  } else {
    const std::string* prev_group = nullptr;
    const Sentence* prev_harder = nullptr;
    for (const auto& p : corpus.pairs) {
      bool same_group = prev_group && *prev_group == p.group_id && prev_harder &&
                        *prev_harder == p.harder;
      if (!same_group) cells.push_back({&p.harder, p.group_id});
      cells.push_back({&p.simpler, p.group_id});
      prev_group = &p.group_id;
      prev_harder = &p.harder;
    }
  }

  FeatureMatrix m;
  m.feature_names = reg.enabled;
  m.rows.resize(cells.size());
  parallel_for(jobs, cells.size(), [&](std::size_t i) {
    const Sentence& s = *cells[i].sentence;
    std::optional<ParseTree> tree;
    if (!s.tree.empty()) tree = parse_bracketed(s.tree);
    FeatureVector fv = extract(s, tree ? &*tree : nullptr, reg);
    FeatureMatrix::Row& row = m.rows[i];
    row.group_id = cells[i].group_id;
    row.level = s.level;
    row.text = s.text;
    row.values.reserve(fv.values.size());
    for (auto& [name, value] : fv.values) row.values.push_back(value);
  });
  return m;
}

void write_matrix_tsv(const FeatureMatrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << "group_id\tlevel";
  for (const auto& name : m.feature_names) out << '\t' << name;
  out << '\n';
  for (const auto& row : m.rows) {
    out << row.group_id << '\t' << row.level;
    for (double v : row.values) out << '\t' << format_double(v);
    out << '\n';
  }
}

FeatureMatrix read_matrix_tsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty feature matrix " + path, 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split(line, '\t');
  if (header.size() < 3 || header[0] != "group_id" || header[1] != "level")
    throw ParseError("bad feature matrix header in " + path, 1);

  FeatureMatrix m;
  m.feature_names.assign(header.begin() + 2, header.end());
  std::size_t ln = 1;
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cols = split(line, '\t');
    if (cols.size() != header.size())
      throw ParseError("expected " + std::to_string(header.size()) + " columns, found " +
                           std::to_string(cols.size()),
                       ln);
    FeatureMatrix::Row row;
    row.group_id = cols[0];
    if (!parse_int(cols[1], row.level) || row.level < 1)
      throw ParseError("bad level '" + cols[1] + "'", ln);
    row.values.reserve(m.feature_names.size());
    for (std::size_t c = 2; c < cols.size(); ++c) {
      double v;
      if (!parse_double(cols[c], v))
        throw ParseError("bad feature value '" + cols[c] + "'", ln);
      row.values.push_back(v);
    }
    m.rows.push_back(std::move(row));
  }
  return m;
}

void write_matrix_letor(const FeatureMatrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  for (const auto& row : m.rows) {
    out << row.level << " qid:" << row.group_id;
    for (std::size_t i = 0; i < row.values.size(); ++i)
      out << ' ' << (i + 1) << ':' << format_double(row.values[i]);
    out << '\n';
  }
}

}  // namespace readrank
