#include "readrank/treebank.hpp"

#include "readrank/errors.hpp"

namespace readrank {

namespace {

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() &&
           (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' ||
            text[pos] == '\r'))
      ++pos;
  }

  bool at_end() const { return pos >= text.size(); }

  std::string read_atom() {
    std::size_t start = pos;
    while (pos < text.size() && text[pos] != '(' && text[pos] != ')' &&
           text[pos] != ' ' && text[pos] != '\t' && text[pos] != '\n' &&
           text[pos] != '\r')
      ++pos;
    return std::string(text.substr(start, pos - start));
  }

  ParseTree parse_node() {
    skip_ws();
    if (at_end() || text[pos] != '(')
      throw TreeParseError("expected '('", pos);
    ++pos;
    skip_ws();
    ParseTree node;
    node.label = read_atom();
    if (node.label.empty())
      throw TreeParseError("empty node label", pos);
    while (true) {
      skip_ws();
      if (at_end())
        throw TreeParseError("unbalanced parentheses: missing ')'", pos);
      if (text[pos] == ')') {
        ++pos;
        break;
      }
      if (text[pos] == '(') {
        node.children.push_back(parse_node());
      } else {
        ParseTree leaf;
        leaf.token = read_atom();
        node.children.push_back(std::move(leaf));
      }
    }
    if (node.children.empty())
      throw TreeParseError("node '" + node.label + "' has no children", pos);
    return node;
  }
};

bool is_wrapper(const ParseTree& t) {
  if (t.is_leaf()) return false;
  auto base = base_label(t.label);
  return base == "ROOT" || base == "TOP" || t.label.empty();
}

struct NodeCounts {
  int internal = 0;
  int preterminal = 0;
};

void count_nodes(const ParseTree& t, NodeCounts& c) {
  if (t.is_leaf()) return;
  ++c.internal;
  if (t.is_preterminal()) ++c.preterminal;
  for (const auto& ch : t.children) count_nodes(ch, c);
}

NodeCounts counts_excluding_wrapper(const ParseTree& t) {
  NodeCounts c;
  count_nodes(t, c);
  if (is_wrapper(t)) {
    --c.internal;
    if (t.is_preterminal()) --c.preterminal;
  }
  return c;
}

bool is_clause_label(std::string_view label) {
  auto base = base_label(label);
  return base == "S" || base == "SBAR" || base == "SINV" || base == "SQ";
}

bool is_tunit_label(std::string_view label) {
  auto base = base_label(label);
  return base == "S" || base == "SINV" || base == "SQ";
}

void print_node(const ParseTree& t, std::string& out) {
  if (t.is_leaf()) {
    out += t.token;
    return;
  }
  out += '(';
  out += t.label;
  for (const auto& ch : t.children) {
    out += ' ';
    print_node(ch, out);
  }
  out += ')';
}

}  // namespace

ParseTree parse_bracketed(std::string_view text) {
  Parser p{text};
  ParseTree root = p.parse_node();
  p.skip_ws();
  if (!p.at_end())
    throw TreeParseError("trailing input after tree", p.pos);
  return root;
}

std::string print_tree(const ParseTree& t) {
  std::string out;
  print_node(t, out);
  return out;
}

std::vector<std::string> tree_yield(const ParseTree& t) {
  std::vector<std::string> leaves;
  std::vector<const ParseTree*> stack{&t};
  while (!stack.empty()) {
    const ParseTree* node = stack.back();
    stack.pop_back();
    if (node->is_leaf()) {
      leaves.push_back(node->token);
      continue;
    }
    for (auto it = node->children.rbegin(); it != node->children.rend(); ++it)
      stack.push_back(&*it);
  }
  return leaves;
}

std::string_view base_label(std::string_view label) {
  std::size_t cut = label.find_first_of("-=");
  if (cut == std::string_view::npos || cut == 0) return label;
  return label.substr(0, cut);
}

int count_subtrees(const ParseTree& t) {
  return counts_excluding_wrapper(t).internal;
}

int count_constituents(const ParseTree& t) {
  NodeCounts c = counts_excluding_wrapper(t);
  return c.internal - c.preterminal;
}

int count_preterminals(const ParseTree& t) {
  return counts_excluding_wrapper(t).preterminal;
}

int clause_count(const ParseTree& t) {
  int n = 0;
  std::vector<const ParseTree*> stack{&t};
  while (!stack.empty()) {
    const ParseTree* node = stack.back();
    stack.pop_back();
    if (node->is_leaf()) continue;
    if (is_clause_label(node->label)) ++n;
    for (const auto& ch : node->children) stack.push_back(&ch);
  }
  return n < 1 ? 1 : n;
}

int tunit_count(const ParseTree& t) {
  std::vector<const ParseTree*> tops;
  if (is_wrapper(t)) {
    for (const auto& ch : t.children) tops.push_back(&ch);
  } else {
    tops.push_back(&t);
  }
  int n = 0;
  for (const ParseTree* top : tops) {
    if (top->is_leaf()) continue;
    std::vector<const ParseTree*> conjuncts;
    for (const auto& ch : top->children)
      if (!ch.is_leaf() && is_tunit_label(ch.label)) conjuncts.push_back(&ch);
    if (conjuncts.size() >= 2) {
      // Coordination of clauses: the conjuncts are the t-units.
      n += static_cast<int>(conjuncts.size());
    } else if (is_tunit_label(top->label)) {
      ++n;
    }
  }
  return n < 1 ? 1 : n;
}

double mlc(const ParseTree& t) {
  return static_cast<double>(tree_yield(t).size()) / clause_count(t);
}

double mlt(const ParseTree& t) {
  return static_cast<double>(tree_yield(t).size()) / tunit_count(t);
}

std::vector<std::pair<std::string, std::string>> preterminal_tags(const ParseTree& t) {
  std::vector<std::pair<std::string, std::string>> tags;
  std::vector<const ParseTree*> stack{&t};
  while (!stack.empty()) {
    const ParseTree* node = stack.back();
    stack.pop_back();
    if (node->is_leaf()) continue;
    if (node->is_preterminal()) {
      tags.emplace_back(node->label, node->children[0].token);
      continue;
    }
    for (auto it = node->children.rbegin(); it != node->children.rend(); ++it)
      stack.push_back(&*it);
  }
  return tags;
}

}  // namespace readrank
