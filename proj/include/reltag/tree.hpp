#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "reltag/corpus.hpp"

namespace reltag {

/// Context window around the word being classified.
struct Window {
  int left = 3;
  int right = 2;

  std::size_t attribute_count() const { return static_cast<std::size_t>(left + right + 1); }
  /// Attribute a (0-based, fixed order) looks at relative position offset(a);
  /// offset 0 is the word form itself.
  int offset(std::size_t attribute) const { return static_cast<int>(attribute) - left; }
  std::size_t word_attribute() const { return static_cast<std::size_t>(left); }

  friend bool operator==(const Window&, const Window&) = default;
};

/// Name used in diagnostics: left3 … left1, word, right1 … right2.
std::string attribute_name(const Window& window, std::size_t attribute);

/// Attribute value for positions beyond the sentence edge.
inline constexpr std::int32_t kOutOfSentence = -1;

/// Set of words sharing one lexicon tag set of two or more tags.
struct AmbiguityClass {
  std::vector<TagId> tags;                // sorted by id
  std::vector<std::string> member_words;  // sorted
  std::int64_t example_count = 0;
};

/// Classes ordered by example count, largest first; ties by tag symbols.
std::vector<AmbiguityClass> extract_ambiguity_classes(const Lexicon& lex, const TagSet& tagset);

/// Attribute values: tag ids (or kOutOfSentence) for context attributes and
/// an index into AmbiguityClass::member_words for the word attribute.
/// `label` indexes AmbiguityClass::tags.
struct TrainingExample {
  std::vector<std::int32_t> values;
  std::int32_t label = 0;
};

/// One example per occurrence of a member word in `train`; neighbor values
/// are the corpus tags. Occurrences whose tag was removed from the lexicon
/// entry (see filter_lexicon) are skipped.
std::vector<TrainingExample> build_examples(const AmbiguityClass& cls,
                                            const std::vector<TaggedSentence>& train,
                                            const Window& window);

/// (count_i + 1/m) / (n + 1) per class; m = counts.size(), n = Σ counts.
std::vector<double> smoothed_distribution(std::span<const std::int64_t> counts);

/// 1 - max component.
double classification_error(std::span<const double> distribution);

/// Normalized López de Mántaras distance between the partition induced by
/// `attribute` and the class partition. 0 when the joint partition has a
/// single cell.
double partition_distance(std::span<const TrainingExample> examples, std::size_t attribute);

/// Attribute minimizing partition_distance; ties go to the lower index.
std::size_t select_attribute(std::span<const TrainingExample> examples,
                             std::span<const std::size_t> candidates);

struct ValueSubset {
  std::vector<std::int32_t> values;
  std::vector<std::int64_t> counts;  // label histogram
};

/// χ² statistic of homogeneity on the smoothed 2×m contingency table.
double chi_square_smoothed(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

/// Upper critical value of the χ² distribution.
double chi_square_critical(double alpha, int degrees_of_freedom);

/// Greedy minimum-χ² pairwise merging while homogeneity is not rejected at
/// `alpha`, then every group not improving on `parent_error` is folded into
/// one residual group. Output groups keep values sorted and are ordered by
/// their smallest value.
std::vector<ValueSubset> merge_branches(std::vector<ValueSubset> subsets, double parent_error,
                                        double alpha = 0.05);

struct LearnerParams {
  double purity_threshold = 0.99;
  std::int64_t min_examples = 10;
  double chi2_alpha = 0.05;
  double holdout_fraction = 0.10;
  Window window;
  std::size_t top_k_classes = 40;

  void validate() const;
};

/// Node of a statistical decision tree. Every node keeps its label histogram
/// and smoothed distribution so any subtree can be collapsed into a leaf.
struct TreeNode {
  static constexpr std::size_t kLeaf = static_cast<std::size_t>(-1);

  std::size_t attribute = kLeaf;
  std::vector<std::vector<std::int32_t>> groups;  // value group per child
  std::vector<TreeNode> children;
  std::vector<std::int64_t> counts;
  std::vector<double> distribution;
  std::int64_t example_count = 0;

  bool is_leaf() const { return attribute == kLeaf; }
  std::size_t node_count() const;
  std::size_t leaf_count() const;
  std::size_t depth() const;
  /// Majority label, lowest index on ties.
  std::int32_t majority() const;
  /// Follows matching value groups; stops where no group holds the value.
  const TreeNode& route(const TrainingExample& example) const;
  std::int32_t classify(const TrainingExample& example) const { return route(example).majority(); }
  void make_leaf();

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Top-down induction. Throws ValidationError on an empty example set.
TreeNode grow_tree(std::span<const TrainingExample> examples, std::size_t class_size,
                   const LearnerParams& params);

std::int64_t misclassified(const TreeNode& tree, std::span<const TrainingExample> examples);

/// Weakest-link sequence from `tree` down to its root leaf, tree first.
std::vector<TreeNode> cost_complexity_sequence(const TreeNode& tree);

struct PruneResult {
  TreeNode tree;
  std::vector<std::string> warnings;
};

/// Member of the weakest-link sequence with the fewest holdout errors; ties
/// go to the smaller tree. An empty holdout returns the tree unpruned.
PruneResult prune_tree(const TreeNode& tree, std::span<const TrainingExample> holdout);

/// Per-class learning result.
struct LearnedTree {
  AmbiguityClass cls;
  TreeNode tree;
  std::vector<double> prior;  // smoothed root distribution
  std::size_t unpruned_nodes = 0;
  std::size_t growth_examples = 0;
  std::size_t holdout_examples = 0;
  std::int64_t unpruned_holdout_errors = 0;
  std::int64_t holdout_errors = 0;
};

/// Builds examples, draws a seeded holdout, grows and prunes one tree.
LearnedTree learn_class_tree(const AmbiguityClass& cls, const std::vector<TaggedSentence>& train,
                             const LearnerParams& params, std::uint64_t seed);

/// Classes eligible for learning: the top_k by example count among those
/// with at least min_examples examples.
std::vector<AmbiguityClass> select_classes(const Lexicon& lex, const TagSet& tagset,
                                           const LearnerParams& params);

/// Diagnostic dump: internal `(ATTR (values...) child ...)`, leaf
/// `[tag:prob ...; n]`.
void write_tree(std::ostream& out, const LearnedTree& learned, const TagSet& tagset,
                const Window& window);

}  // namespace reltag
