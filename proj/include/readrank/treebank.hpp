#ifndef READRANK_TREEBANK_HPP
#define READRANK_TREEBANK_HPP

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace readrank {

// Penn-style constituency tree. A node is either a leaf (token set, no
// children, empty label) or internal (nonempty label, >= 1 child).
struct ParseTree {
  std::string label;
  std::string token;
  std::vector<ParseTree> children;

  bool is_leaf() const { return children.empty(); }
  bool is_preterminal() const {
    return children.size() == 1 && children[0].is_leaf();
  }

  bool operator==(const ParseTree&) const = default;
};

// Parses a bracketing like "(S (NP (DT the) (NN cat)) (VP (VBD sat)))".
// Whitespace-insensitive. Throws TreeParseError with a character offset on
// unbalanced parentheses, empty labels, childless nodes, or trailing input.
ParseTree parse_bracketed(std::string_view text);

// Canonical single-space form; parse_bracketed(print_tree(t)) == t.
std::string print_tree(const ParseTree& t);

// Left-to-right leaf tokens.
std::vector<std::string> tree_yield(const ParseTree& t);

// Label prefix before any '-' or '=' function tag (kept whole if the label
// starts with the separator, as in -NONE-).
std::string_view base_label(std::string_view label);

// Internal nodes including preterminals, excluding a ROOT/TOP wrapper.
int count_subtrees(const ParseTree& t);

// Internal non-preterminal nodes, excluding a ROOT/TOP wrapper.
int count_constituents(const ParseTree& t);

// Preterminals, excluding a ROOT/TOP wrapper. Exposed so the identity
// count_subtrees == count_constituents + count_preterminals is checkable.
int count_preterminals(const ParseTree& t);

// Nodes labeled S, SBAR, SINV or SQ; at least 1.
int clause_count(const ParseTree& t);

// Minimal terminable units: top-level S/SINV/SQ nodes, where a top-level
// coordination of clauses contributes its clausal conjuncts instead of
// itself; at least 1.
int tunit_count(const ParseTree& t);

// Mean length of clause / t-unit: yield length over the respective count.
double mlc(const ParseTree& t);
double mlt(const ParseTree& t);

// Left-to-right (POS tag, token) for every preterminal.
std::vector<std::pair<std::string, std::string>> preterminal_tags(const ParseTree& t);

}  // namespace readrank

#endif  // READRANK_TREEBANK_HPP
