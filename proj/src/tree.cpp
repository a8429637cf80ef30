#include "reltag/tree.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <limits>
#include <map>
#include <cmath>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "reltag/error.hpp"
#include "reltag/random.hpp"

namespace reltag {

std::string attribute_name(const Window& window, std::size_t attribute) {
  const int off = window.offset(attribute);
  if (off == 0) return "word";
  return (off < 0 ? "left" : "right") + std::to_string(std::abs(off));
}

// ---------------------------------------------------------------- classes & examples

std::vector<AmbiguityClass> extract_ambiguity_classes(const Lexicon& lex, const TagSet& tagset) {
  std::map<std::vector<TagId>, AmbiguityClass> by_tags;
  for (const auto& [word, counts] : lex.entries()) {
    if (counts.size() < 2) continue;
    std::vector<TagId> tags;
    std::int64_t n = 0;
    for (const auto& [tag, c] : counts) {
      tags.push_back(tag);
      n += c;
    }
    auto& cls = by_tags[tags];
    cls.tags = tags;
    cls.member_words.push_back(word);  // lexicon iterates words in sorted order
    cls.example_count += n;
  }
  std::vector<AmbiguityClass> out;
  out.reserve(by_tags.size());
  for (auto& [tags, cls] : by_tags) out.push_back(std::move(cls));

  auto symbols = [&](const AmbiguityClass& c) {
    std::vector<std::string_view> s;
    for (TagId t : c.tags) s.push_back(tagset.symbol(t));
    return s;
  };
  std::stable_sort(out.begin(), out.end(), [&](const AmbiguityClass& a, const AmbiguityClass& b) {
    if (a.example_count != b.example_count) return a.example_count > b.example_count;
    return symbols(a) < symbols(b);
  });
  return out;
}

std::vector<TrainingExample> build_examples(const AmbiguityClass& cls, const std::vector<TaggedSentence>& train,
                                            const Window& window) {
  std::unordered_map<std::string_view, std::int32_t> member;
  for (std::size_t i = 0; i < cls.member_words.size(); ++i)
    member.emplace(cls.member_words[i], static_cast<std::int32_t>(i));

  std::vector<TrainingExample> out;
  for (const auto& s : train) {
    const auto n = static_cast<std::ptrdiff_t>(s.size());
    for (std::ptrdiff_t pos = 0; pos < n; ++pos) {
      const auto& tok = s[static_cast<std::size_t>(pos)];
      auto it = member.find(tok.word);
      if (it == member.end()) continue;
      auto label = std::find(cls.tags.begin(), cls.tags.end(), tok.tag);
      if (label == cls.tags.end()) continue;

      TrainingExample ex;
      ex.label = static_cast<std::int32_t>(label - cls.tags.begin());
      ex.values.resize(window.attribute_count());
      for (std::size_t a = 0; a < ex.values.size(); ++a) {
        const int off = window.offset(a);
        if (off == 0) {
          ex.values[a] = it->second;
          continue;
        }
        const std::ptrdiff_t p = pos + off;
        ex.values[a] = (p < 0 || p >= n) ? kOutOfSentence : s[static_cast<std::size_t>(p)].tag;
      }
      out.push_back(std::move(ex));
    }
  }
  return out;
}

// ---------------------------------------------------------------- statistics

std::vector<double> smoothed_distribution(std::span<const std::int64_t> counts) {
  const double m = static_cast<double>(counts.size());
  const std::int64_t n = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
  std::vector<double> p(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    p[i] = (static_cast<double>(counts[i]) + 1.0 / m) / (static_cast<double>(n) + 1.0);
  return p;
}

double classification_error(std::span<const double> distribution) {
  return 1.0 - *std::max_element(distribution.begin(), distribution.end());
}

namespace {

double entropy_term(double count, double n) {
  if (count <= 0.0) return 0.0;
  const double p = count / n;
  return -p * std::log2(p);
}

template <typename Index>
double partition_distance_over(std::span<const TrainingExample> examples, const Index& idx, std::size_t attribute) {
  // value -> per-label counts
  std::unordered_map<std::int32_t, std::vector<std::int64_t>> joint;
  std::vector<std::int64_t> label_counts;
  for (auto i : idx) {
    const auto& ex = examples[i];
    const auto label = static_cast<std::size_t>(ex.label);
    if (label >= label_counts.size()) label_counts.resize(label + 1, 0);
    auto& row = joint[ex.values[attribute]];
    if (label >= row.size()) row.resize(label + 1, 0);
    ++row[label];
  }
  const double n = static_cast<double>(idx.size());
  double h_joint = 0.0;
  double h_attr = 0.0;
  for (const auto& [value, row] : joint) {
    std::int64_t total = 0;
    for (std::size_t l = 0; l < row.size(); ++l) {
      h_joint += entropy_term(static_cast<double>(row[l]), n);
      total += row[l];
      label_counts[l] += row[l];
    }
    h_attr += entropy_term(static_cast<double>(total), n);
  }
  double h_class = 0.0;
  for (auto c : label_counts) h_class += entropy_term(static_cast<double>(c), n);
  if (h_joint <= 0.0) return 0.0;
  const double d = (h_joint - h_attr) + (h_joint - h_class);
  return std::clamp(d / h_joint, 0.0, 1.0);
}

struct AllIndices {
  std::size_t n;
  struct It {
    std::size_t i;
    std::size_t operator*() const { return i; }
    It& operator++() { ++i; return *this; }
    bool operator!=(const It& o) const { return i != o.i; }
  };
  It begin() const { return {0}; }
  It end() const { return {n}; }
  std::size_t size() const { return n; }
};

template <typename Index>
std::size_t select_attribute_over(std::span<const TrainingExample> examples, const Index& idx,
                                  std::span<const std::size_t> candidates) {
  if (candidates.empty()) throw ValidationError("select_attribute needs at least one candidate");
  std::vector<std::size_t> order(candidates.begin(), candidates.end());
  std::sort(order.begin(), order.end());
  std::size_t best = order.front();
  double best_d = partition_distance_over(examples, idx, best);
  for (std::size_t k = 1; k < order.size(); ++k) {
    const double d = partition_distance_over(examples, idx, order[k]);
    if (d < best_d - 1e-12) {
      best = order[k];
      best_d = d;
    }
  }
  return best;
}

}  // namespace

double partition_distance(std::span<const TrainingExample> examples, std::size_t attribute) {
  if (examples.empty()) throw ValidationError("partition_distance needs examples");
  return partition_distance_over(examples, AllIndices{examples.size()}, attribute);
}

std::size_t select_attribute(std::span<const TrainingExample> examples, std::span<const std::size_t> candidates) {
  return select_attribute_over(examples, AllIndices{examples.size()}, candidates);
}

double chi_square_smoothed(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  const double m = static_cast<double>(a.size());
  const double row_a = std::accumulate(a.begin(), a.end(), 0.0) + 1.0;
  const double row_b = std::accumulate(b.begin(), b.end(), 0.0) + 1.0;
  const double total = row_a + row_b;
  double chi2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double oa = static_cast<double>(a[i]) + 1.0 / m;
    const double ob = static_cast<double>(b[i]) + 1.0 / m;
    const double col = oa + ob;
    const double ea = row_a * col / total;
    const double eb = row_b * col / total;
    chi2 += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
  }
  return chi2;
}

double chi_square_critical(double alpha, int degrees_of_freedom) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("chi-square alpha must lie in (0,1)");
  if (degrees_of_freedom < 1) throw ValidationError("chi-square needs at least one degree of freedom");
  boost::math::chi_squared dist(degrees_of_freedom);
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

namespace {

std::vector<ValueSubset> merge_with_critical(std::vector<ValueSubset> groups, double parent_error, double critical) {
  while (groups.size() > 1) {
    std::size_t bi = 0;
    std::size_t bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < groups.size(); ++i) {
      for (std::size_t j = i + 1; j < groups.size(); ++j) {
        const double x = chi_square_smoothed(groups[i].counts, groups[j].counts);
        if (x < best) {
          best = x;
          bi = i;
          bj = j;
        }
      }
    }
    if (best >= critical) break;  // homogeneity rejected for every pair
    auto& into = groups[bi];
    auto& from = groups[bj];
    into.values.insert(into.values.end(), from.values.begin(), from.values.end());
    for (std::size_t l = 0; l < into.counts.size(); ++l) into.counts[l] += from.counts[l];
    groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(bj));
  }

  std::vector<ValueSubset> kept;
  ValueSubset residual;
  std::size_t residual_members = 0;
  for (auto& g : groups) {
    const auto dist = smoothed_distribution(g.counts);
    if (classification_error(dist) >= parent_error) {
      if (residual_members++ == 0) {
        residual = std::move(g);
      } else {
        residual.values.insert(residual.values.end(), g.values.begin(), g.values.end());
        for (std::size_t l = 0; l < residual.counts.size(); ++l) residual.counts[l] += g.counts[l];
      }
    } else {
      kept.push_back(std::move(g));
    }
  }
  if (residual_members) kept.push_back(std::move(residual));
  for (auto& g : kept) std::sort(g.values.begin(), g.values.end());
  std::sort(kept.begin(), kept.end(),
            [](const ValueSubset& a, const ValueSubset& b) { return a.values.front() < b.values.front(); });
  return kept;
}

}  // namespace

std::vector<ValueSubset> merge_branches(std::vector<ValueSubset> subsets, double parent_error, double alpha) {
  if (subsets.empty()) return subsets;
  const auto m = static_cast<int>(subsets.front().counts.size());
  return merge_with_critical(std::move(subsets), parent_error, chi_square_critical(alpha, std::max(1, m - 1)));
}

void LearnerParams::validate() const {
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) throw ValidationError("holdout fraction must lie in (0,1)");
  if (!(purity_threshold > 0.5 && purity_threshold <= 1.0)) throw ValidationError("purity threshold must lie in (0.5,1]");
  if (min_examples < 1) throw ValidationError("min examples must be at least 1");
  if (!(chi2_alpha > 0.0 && chi2_alpha < 1.0)) throw ValidationError("chi-square alpha must lie in (0,1)");
  if (window.left < 0 || window.right < 0) throw ValidationError("window sizes must be non-negative");
}

// ---------------------------------------------------------------- TreeNode

std::size_t TreeNode::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.node_count();
  return n;
}

std::size_t TreeNode::leaf_count() const {
  if (is_leaf()) return 1;
  std::size_t n = 0;
  for (const auto& c : children) n += c.leaf_count();
  return n;
}

std::size_t TreeNode::depth() const {
  std::size_t d = 0;
  for (const auto& c : children) d = std::max(d, 1 + c.depth());
  return d;
}

std::int32_t TreeNode::majority() const {
  return static_cast<std::int32_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

const TreeNode& TreeNode::route(const TrainingExample& example) const {
  const TreeNode* node = this;
  while (!node->is_leaf()) {
    const auto v = example.values[node->attribute];
    const TreeNode* next = nullptr;
    for (std::size_t g = 0; g < node->groups.size() && !next; ++g)
      if (std::binary_search(node->groups[g].begin(), node->groups[g].end(), v)) next = &node->children[g];
    if (!next) break;
    node = next;
  }
  return *node;
}

void TreeNode::make_leaf() {
  attribute = kLeaf;
  groups.clear();
  children.clear();
}

// ---------------------------------------------------------------- growing

namespace {

class Grower {
 public:
  Grower(std::span<const TrainingExample> examples, std::size_t class_size, const LearnerParams& params)
      : examples_(examples),
        class_size_(class_size),
        params_(params),
        critical_(chi_square_critical(params.chi2_alpha, static_cast<int>(std::max<std::size_t>(1, class_size - 1)))) {}

  TreeNode grow(const std::vector<std::size_t>& idx, std::vector<bool> used) {
    TreeNode node;
    node.counts.assign(class_size_, 0);
    for (auto i : idx) ++node.counts[static_cast<std::size_t>(examples_[i].label)];
    node.example_count = static_cast<std::int64_t>(idx.size());
    node.distribution = smoothed_distribution(node.counts);

    const auto n = node.example_count;
    if (n < params_.min_examples) return node;
    const auto top = *std::max_element(node.counts.begin(), node.counts.end());
    if (static_cast<double>(top) >= params_.purity_threshold * static_cast<double>(n)) return node;

    const double parent_error = classification_error(node.distribution);
    for (;;) {
      std::vector<std::size_t> candidates;
      for (std::size_t a = 0; a < used.size(); ++a)
        if (!used[a]) candidates.push_back(a);
      if (candidates.empty()) return node;

      const std::size_t attr = select_attribute_over(examples_, idx, candidates);
      used[attr] = true;

      std::map<std::int32_t, ValueSubset> by_value;
      for (auto i : idx) {
        const auto& ex = examples_[i];
        auto& sub = by_value[ex.values[attr]];
        if (sub.counts.empty()) {
          sub.values = {ex.values[attr]};
          sub.counts.assign(class_size_, 0);
        }
        ++sub.counts[static_cast<std::size_t>(ex.label)];
      }
      std::vector<ValueSubset> subsets;
      for (auto& [v, sub] : by_value) subsets.push_back(std::move(sub));
      auto groups = merge_with_critical(std::move(subsets), parent_error, critical_);
      // a single group is no split: the attribute is spent, try the next one
      if (groups.size() < 2) continue;

      node.attribute = attr;
      for (auto& g : groups) {
        std::vector<std::size_t> child_idx;
        for (auto i : idx)
          if (std::binary_search(g.values.begin(), g.values.end(), examples_[i].values[attr])) child_idx.push_back(i);
        node.children.push_back(grow(child_idx, used));
        node.groups.push_back(std::move(g.values));
      }
      return node;
    }
  }

 private:
  std::span<const TrainingExample> examples_;
  std::size_t class_size_;
  const LearnerParams& params_;
  double critical_;
};

}  // namespace

TreeNode grow_tree(std::span<const TrainingExample> examples, std::size_t class_size, const LearnerParams& params) {
  if (examples.empty()) throw ValidationError("cannot grow a tree from an empty example set");
  if (class_size < 2) throw ValidationError("an ambiguity class needs at least two tags");
  params.validate();
  std::vector<std::size_t> idx(examples.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<bool> used(examples.front().values.size(), false);
  return Grower(examples, class_size, params).grow(idx, std::move(used));
}

// ---------------------------------------------------------------- pruning

std::int64_t misclassified(const TreeNode& tree, std::span<const TrainingExample> examples) {
  std::int64_t errors = 0;
  for (const auto& ex : examples)
    if (tree.classify(ex) != ex.label) ++errors;
  return errors;
}

namespace {

std::int64_t resubstitution_error(const TreeNode& node) {
  return node.example_count - *std::max_element(node.counts.begin(), node.counts.end());
}

std::int64_t subtree_error(const TreeNode& node) {
  if (node.is_leaf()) return resubstitution_error(node);
  std::int64_t e = 0;
  for (const auto& c : node.children) e += subtree_error(c);
  return e;
}

void weakest_link(TreeNode& node, TreeNode*& best, double& best_alpha) {
  if (node.is_leaf()) return;
  const double alpha = static_cast<double>(resubstitution_error(node) - subtree_error(node)) /
                       static_cast<double>(node.leaf_count() - 1);
  if (alpha < best_alpha - 1e-12) {
    best_alpha = alpha;
    best = &node;
  }
  for (auto& c : node.children) weakest_link(c, best, best_alpha);
}

}  // namespace

std::vector<TreeNode> cost_complexity_sequence(const TreeNode& tree) {
  std::vector<TreeNode> seq{tree};
  TreeNode current = tree;
  while (!current.is_leaf()) {
    TreeNode* best = nullptr;
    double best_alpha = std::numeric_limits<double>::infinity();
    weakest_link(current, best, best_alpha);
    best->make_leaf();
    seq.push_back(current);
  }
  return seq;
}

PruneResult prune_tree(const TreeNode& tree, std::span<const TrainingExample> holdout) {
  PruneResult result{tree, {}};
  if (holdout.empty()) {
    result.warnings.emplace_back("empty holdout set; tree left unpruned");
    return result;
  }
  const auto seq = cost_complexity_sequence(tree);
  std::size_t best = 0;
  std::int64_t best_err = misclassified(seq[0], holdout);
  for (std::size_t k = 1; k < seq.size(); ++k) {
    const auto err = misclassified(seq[k], holdout);
    if (err <= best_err) {  // later members are smaller
      best = k;
      best_err = err;
    }
  }
  result.tree = seq[best];
  return result;
}

// ---------------------------------------------------------------- pipeline

LearnedTree learn_class_tree(const AmbiguityClass& cls, const std::vector<TaggedSentence>& train,
                             const LearnerParams& params, std::uint64_t seed) {
  params.validate();
  auto examples = build_examples(cls, train, params.window);

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  const auto n_hold = static_cast<std::size_t>(std::llround(static_cast<double>(examples.size()) * params.holdout_fraction));

  std::vector<std::size_t> hold_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_hold));
  std::vector<std::size_t> grow_idx(order.begin() + static_cast<std::ptrdiff_t>(n_hold), order.end());
  std::sort(hold_idx.begin(), hold_idx.end());
  std::sort(grow_idx.begin(), grow_idx.end());
  std::vector<TrainingExample> holdout;
  std::vector<TrainingExample> growth;
  for (auto i : hold_idx) holdout.push_back(examples[i]);
  for (auto i : grow_idx) growth.push_back(examples[i]);
  if (growth.empty()) throw ValidationError("ambiguity class has no growth examples");

  LearnedTree out;
  out.cls = cls;
  TreeNode grown = grow_tree(growth, cls.tags.size(), params);
  out.unpruned_nodes = grown.node_count();
  out.prior = grown.distribution;
  out.tree = prune_tree(grown, holdout).tree;
  out.unpruned_holdout_errors = misclassified(grown, holdout);
  out.holdout_errors = misclassified(out.tree, holdout);
  out.growth_examples = growth.size();
  out.holdout_examples = holdout.size();
  return out;
}

std::vector<AmbiguityClass> select_classes(const Lexicon& lex, const TagSet& tagset, const LearnerParams& params) {
  auto classes = extract_ambiguity_classes(lex, tagset);
  std::vector<AmbiguityClass> out;
  for (auto& c : classes) {
    if (out.size() >= params.top_k_classes) break;
    if (c.example_count < params.min_examples) break;  // ranked by count
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------- diagnostics

namespace {

void write_value(std::ostream& out, std::int32_t v, bool word_attr, const AmbiguityClass& cls, const TagSet& tagset) {
  if (v == kOutOfSentence) {
    out << kOutOfSentenceSymbol;
  } else if (word_attr) {
    out << '"' << cls.member_words[static_cast<std::size_t>(v)] << '"';
  } else {
    out << tagset.symbol(v);
  }
}

void write_node(std::ostream& out, const TreeNode& node, const AmbiguityClass& cls, const TagSet& tagset,
                const Window& window) {
  if (node.is_leaf()) {
    out << '[';
    for (std::size_t l = 0; l < node.distribution.size(); ++l) {
      if (l) out << ' ';
      out << tagset.symbol(cls.tags[l]) << ':' << node.distribution[l];
    }
    out << "; " << node.example_count << ']';
    return;
  }
  out << '(' << attribute_name(window, node.attribute);
  const bool word_attr = node.attribute == window.word_attribute();
  for (std::size_t g = 0; g < node.groups.size(); ++g) {
    out << " (";
    for (std::size_t k = 0; k < node.groups[g].size(); ++k) {
      if (k) out << ' ';
      write_value(out, node.groups[g][k], word_attr, cls, tagset);
    }
    out << ") ";
    write_node(out, node.children[g], cls, tagset, window);
  }
  out << ')';
}

}  // namespace

void write_tree(std::ostream& out, const LearnedTree& learned, const TagSet& tagset, const Window& window) {
  out << "class [";
  for (std::size_t i = 0; i < learned.cls.tags.size(); ++i) out << (i ? " " : "") << tagset.symbol(learned.cls.tags[i]);
  out << "] words=" << learned.cls.member_words.size() << " growth=" << learned.growth_examples
      << " holdout=" << learned.holdout_examples << " nodes=" << learned.tree.node_count() << '/'
      << learned.unpruned_nodes << '\n';
  write_node(out, learned.tree, learned.cls, tagset, window);
  out << '\n';
}

}  // namespace reltag
