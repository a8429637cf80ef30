#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "reltag/corpus.hpp"
#include "reltag/tree.hpp"

namespace reltag {

enum class TestKind {
  kTags,     // the position carries one of `tags`
  kNotTags,  // the position carries none of `tags`
  kWords,    // the word at the position is one of `words`
};

/// One test applied to a context position. Tag lists are sorted by id and
/// duplicate free; `out_of_sentence` lets a tag test accept positions beyond
/// the sentence edge (written `<OUT>` inside a set).
struct ContextTest {
  TestKind kind = TestKind::kTags;
  std::vector<TagId> tags;
  std::vector<std::string> words;
  bool out_of_sentence = false;

  friend bool operator==(const ContextTest&, const ContextTest&) = default;
};

/// A context position. With `offset` set the item binds at target+offset.
/// Without it the item is positional: it sits next to the previously placed
/// item on its side (or next to the target), and a `repeated` item covers
/// every contiguous span, empty included, before the next one.
struct ContextItem {
  ContextTest test;
  std::optional<int> offset;
  bool repeated = false;

  friend bool operator==(const ContextItem&, const ContextItem&) = default;
};

enum class ConstraintSource { kHandWritten, kLearned, kBigram, kTrigram };

std::string_view to_string(ConstraintSource source);

/// Weighted compatibility statement. `left` holds the items written before
/// the target in source order, `right` those after it. An empty context is
/// legal: compiled tree paths that only test the word form produce one, and
/// its influence is the bare compatibility.
struct Constraint {
  double compatibility = 0.0;
  std::vector<std::string> target_words;  // empty: any word
  TagId target_tag = -1;
  std::vector<ContextItem> left;
  std::vector<ContextItem> right;
  ConstraintSource source = ConstraintSource::kHandWritten;

  std::size_t context_size() const { return left.size() + right.size(); }
  bool applies_to_word(std::string_view word) const;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Constraints indexed by target tag and target word forms.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  explicit ConstraintSet(std::vector<Constraint> constraints);

  void add(Constraint c);
  void append(const ConstraintSet& other);

  const std::vector<Constraint>& constraints() const { return constraints_; }
  std::size_t size() const { return constraints_.size(); }
  bool empty() const { return constraints_.empty(); }

  /// Indices of the constraints whose target matches (word, tag), ascending.
  std::vector<std::size_t> lookup(std::string_view word, TagId tag) const;

 private:
  void index(std::size_t i);

  std::vector<Constraint> constraints_;
  std::unordered_map<TagId, std::vector<std::size_t>> any_word_;
  std::map<std::pair<std::string, TagId>, std::vector<std::size_t>, std::less<>> by_word_;
};

/// Macro table produced while parsing: name → expanded test.
using MacroTable = std::map<std::string, ContextTest, std::less<>>;

struct ParsedConstraints {
  std::vector<Constraint> constraints;
  MacroTable macros;
};

/// Parses the constraint language:
///
///   file       := (macro | constraint)*
///   macro      := '%' name '%' '=' set ';'
///   constraint := number item* target item* ';'
///   target     := '<' ('[' word+ '],')? TAG '>'
///   item       := '(' test ')' '+'? | offset ':' test
///   test       := set | '-' set | '%' name '%' | '-%' name '%' | '"' word '"'
///   set        := '[' (TAG | '"' word '"' | <OUT>)+ ']'
///
/// `//` starts a comment. Throws ParseError with the offending line.
ParsedConstraints parse_constraints(std::string_view text, const TagSet& tagset,
                                    ConstraintSource source = ConstraintSource::kHandWritten);
ConstraintSet read_constraints(const std::string& path, const TagSet& tagset, ConstraintSource source);

/// Canonical text, one constraint per line; parse_constraints() reproduces
/// the input exactly.
std::string serialize_constraints(std::span<const Constraint> constraints, const TagSet& tagset);
void write_constraints(std::ostream& out, std::span<const Constraint> constraints, const TagSet& tagset);

/// One constraint per (leaf, class tag): the path's tests become the context
/// (word tests restrict the target words) and the compatibility is
/// log2(p_leaf(tag) / prior(tag)).
std::vector<Constraint> compile_tree(const TreeNode& tree, const AmbiguityClass& cls,
                                     std::span<const double> prior, const Window& window);
inline std::vector<Constraint> compile_tree(const LearnedTree& learned, const Window& window) {
  return compile_tree(learned.tree, learned.cls, learned.prior, window);
}

/// A bound context position contributing to a constraint's influence: the
/// weight of the candidates in `tags`, or with `negated` the weight outside.
struct Factor {
  std::size_t position = 0;
  std::vector<TagId> tags;
  bool negated = false;

  friend bool operator==(const Factor&, const Factor&) = default;
};

using FactorList = std::vector<Factor>;

/// Every way the constraint's context binds around target position `i`
/// carrying `tag`. Word tests and out-of-sentence tests are decided here and
/// never become factors. Returns nothing when the target does not match.
std::vector<FactorList> instantiate(const Constraint& constraint, std::span<const std::string> words,
                                    std::size_t i, TagId tag);

}  // namespace reltag
