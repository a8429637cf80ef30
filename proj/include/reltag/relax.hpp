#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "reltag/constraint.hpp"
#include "reltag/corpus.hpp"

namespace reltag {

/// Per-word candidate tags and their current weights. Candidate sets are
/// fixed for the life of a relaxation run; `lexical` keeps the initial
/// lexical probabilities for tie breaking.
struct WeightedLabelling {
  std::vector<std::vector<TagId>> candidates;
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> lexical;

  std::size_t size() const { return candidates.size(); }
  double weight_of(std::size_t position, TagId tag) const;
};

enum class SupportNormalization { kRational, kClamp };
enum class InitMode { kLexical, kRandom };

struct RelaxParams {
  int max_iterations = 50;
  double epsilon = 1e-3;
  SupportNormalization normalization = SupportNormalization::kRational;
  double divisor = 1.0;
  InitMode init = InitMode::kLexical;
  std::uint64_t seed = 0;  // random init only

  void validate() const;
};

WeightedLabelling init_weights(std::span<const std::string> words, const Lexicon& lex, const TagSet& tagset);

/// Same candidates, weights drawn uniformly and normalized.
WeightedLabelling init_random_weights(std::span<const std::string> words, const Lexicon& lex, const TagSet& tagset,
                                      std::uint64_t seed);

/// Σ over instantiations of every matching constraint of
/// compatibility × Π factor weights. Reference implementation built on
/// instantiate(); the relaxation loop uses a compiled equivalent.
double raw_support(const WeightedLabelling& labelling, const ConstraintSet& constraints,
                   std::span<const std::string> words, std::size_t i, std::size_t j);

/// Maps raw support into [-1, 1]: rational x/(1+|x|) or clamp, after
/// dividing by params.divisor.
double normalize_support(double raw, const RelaxParams& params);

struct UpdateResult {
  WeightedLabelling labelling;
  double max_change = 0.0;
  std::size_t frozen_words = 0;  // zero denominators left unchanged
};

/// p_j ← p_j (1 + S_j) / Σ_k p_k (1 + S_k) for every word.
UpdateResult update_step(const WeightedLabelling& labelling, const std::vector<std::vector<double>>& supports);

/// Weight-independent part of the support computation for one sentence:
/// every non-vanishing instantiation, bound to candidate indices.
class CompiledSentence {
 public:
  CompiledSentence(std::span<const std::string> words, const WeightedLabelling& labelling,
                   const ConstraintSet& constraints);

  double raw_support(const WeightedLabelling& labelling, std::size_t i, std::size_t j) const;
  std::size_t instantiation_count() const { return instantiations_.size(); }

 private:
  struct Factor {
    std::uint32_t position;
    std::uint32_t first;  // into candidate_pool_
    std::uint32_t count;
  };
  struct Instantiation {
    double compatibility;
    std::uint32_t first;  // into factors_
    std::uint32_t count;
  };

  std::vector<std::uint32_t> candidate_pool_;
  std::vector<Factor> factors_;
  std::vector<Instantiation> instantiations_;
  // instantiations for pair (i, j) are [offsets_[k], offsets_[k+1]) with k = pair_base_[i] + j
  std::vector<std::size_t> pair_base_;
  std::vector<std::size_t> offsets_;
};

struct RelaxDiagnostics {
  int iterations = 0;
  double max_change = 0.0;
  std::size_t instantiations = 0;
  std::size_t frozen_words = 0;
  bool converged = false;
};

struct RelaxResult {
  std::vector<TagId> tags;
  WeightedLabelling labelling;
  RelaxDiagnostics diagnostics;
};

/// Called after every update with the new labelling and the 1-based
/// iteration number.
using RelaxObserver = std::function<void(const WeightedLabelling&, int)>;

/// Iterates support → normalize → update until the largest weight change
/// drops below epsilon or max_iterations is reached. Output tags are the
/// argmax weight, ties broken by lexical probability and then tag order.
RelaxResult run(std::span<const std::string> words, const ConstraintSet& constraints, const Lexicon& lex,
                const TagSet& tagset, const RelaxParams& params, const RelaxObserver& observer = {});

/// Argmax with the tie rule used by run().
std::vector<TagId> best_tags(const WeightedLabelling& labelling);

}  // namespace reltag
