#include "readrank/lexicon.hpp"

#include <cmath>
#include <fstream>

#include "readrank/corpus.hpp"
#include "readrank/errors.hpp"
#include "readrank/util.hpp"

namespace readrank {

namespace {

std::vector<std::string> read_lines_checked(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open lexicon: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

double parse_value(const std::string& field, std::size_t line) {
  double v;
  if (!parse_double(field, v) || !std::isfinite(v))
    throw LexiconParseError("non-numeric value '" + field + "'", line);
  return v;
}

}  // namespace

NormLexicon load_norms(const std::string& path, const std::string& name,
                       std::optional<std::pair<double, double>> range) {
  std::vector<std::string> lines = read_lines_checked(path);
  if (lines.empty()) throw FormatError("empty lexicon file: " + path);
  auto header = split(lines[0], '\t');
  if (header.size() < 2 || lower_ascii(header[0]) != "word")
    throw FormatError("lexicon " + path + " is missing the 'word<TAB>value' header");

  NormLexicon lex;
  lex.name = name;
  lex.value_range = range;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    auto cols = split(lines[ln], '\t');
    if (cols.size() < 2)
      throw LexiconParseError("expected 2 columns", ln + 1);
    std::string word = lower_ascii(trim(cols[0]));
    if (word.empty()) throw LexiconParseError("empty word", ln + 1);
    double v = parse_value(cols[1], ln + 1);
    if (range && (v < range->first || v > range->second))
      throw LexiconParseError("value " + cols[1] + " outside declared range", ln + 1);
    lex.entries[word] = v;
  }
  return lex;
}

AttributeTable load_attributes(const std::string& path, const std::string& name) {
  std::vector<std::string> lines = read_lines_checked(path);
  if (lines.empty()) throw FormatError("empty attribute file: " + path);
  auto header = split(lines[0], '\t');
  if (header.size() < 2 || lower_ascii(header[0]) != "word")
    throw FormatError("attribute table " + path + " is missing its header");

  AttributeTable table;
  table.name = name;
  table.attributes.assign(header.begin() + 1, header.end());
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    auto cols = split(lines[ln], '\t');
    if (cols.size() != header.size())
      throw LexiconParseError("expected " + std::to_string(header.size()) + " columns",
                              ln + 1);
    std::string word = lower_ascii(trim(cols[0]));
    if (word.empty()) throw LexiconParseError("empty word", ln + 1);
    std::vector<double> values;
    values.reserve(table.attributes.size());
    for (std::size_t c = 1; c < cols.size(); ++c)
      values.push_back(parse_value(cols[c], ln + 1));
    table.entries[word] = std::move(values);
  }
  return table;
}

SentenceAverage sentence_average(const NormLexicon& lex,
                                 const std::vector<std::string>& tokens) {
  // Accumulate per distinct token in lexicographic order so the result is
  // exactly permutation-invariant.
  std::map<std::string, std::size_t> counts;
  std::size_t alpha_total = 0;
  std::size_t alpha_found = 0;
  for (const auto& tok : tokens) {
    bool alpha = is_alphabetic_token(tok);
    if (alpha) ++alpha_total;
    auto it = lex.entries.find(lower_ascii(tok));
    if (it == lex.entries.end()) continue;
    ++counts[it->first];
    if (alpha) ++alpha_found;
  }
  double sum = 0.0;
  std::size_t found = 0;
  for (const auto& [word, count] : counts) {
    sum += static_cast<double>(count) * lex.entries.at(word);
    found += count;
  }
  SentenceAverage avg;
  if (found > 0) avg.mean = sum / static_cast<double>(found);
  if (alpha_total > 0)
    avg.coverage = static_cast<double>(alpha_found) / static_cast<double>(alpha_total);
  if (avg.coverage == 0.0) avg.mean = 0.0;  // convention: uncovered means 0
  return avg;
}

std::map<std::string, SentenceAverage> attribute_averages(
    const AttributeTable& table, const std::vector<std::string>& tokens) {
  std::map<std::string, std::size_t> counts;
  std::size_t alpha_total = 0;
  std::size_t alpha_found = 0;
  for (const auto& tok : tokens) {
    bool alpha = is_alphabetic_token(tok);
    if (alpha) ++alpha_total;
    auto it = table.entries.find(lower_ascii(tok));
    if (it == table.entries.end()) continue;
    ++counts[it->first];
    if (alpha) ++alpha_found;
  }
  std::vector<double> sums(table.attributes.size(), 0.0);
  std::size_t found = 0;
  for (const auto& [word, count] : counts) {
    const auto& values = table.entries.at(word);
    for (std::size_t a = 0; a < sums.size(); ++a)
      sums[a] += static_cast<double>(count) * values[a];
    found += count;
  }
  double coverage = alpha_total > 0
                        ? static_cast<double>(alpha_found) / static_cast<double>(alpha_total)
                        : 0.0;
  std::map<std::string, SentenceAverage> out;
  for (std::size_t a = 0; a < table.attributes.size(); ++a) {
    SentenceAverage avg;
    if (found > 0) avg.mean = sums[a] / static_cast<double>(found);
    avg.coverage = coverage;
    if (avg.coverage == 0.0) avg.mean = 0.0;
    out[table.attributes[a]] = avg;
  }
  return out;
}

}  // namespace readrank
