#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reltag/constraint.hpp"
#include "reltag/corpus.hpp"
#include "reltag/ngram.hpp"
#include "reltag/relax.hpp"

namespace reltag {

/// Which models a tagging run joins: any combination of bigram (B),
/// trigram (T), learned (C) and hand-written (H) constraints, or one of the
/// two baselines.
struct ModelCombination {
  enum class Baseline { kNone, kMostLikely, kHmm };

  bool bigrams = false;
  bool trigrams = false;
  bool learned = false;
  bool hand = false;
  Baseline baseline = Baseline::kNone;

  /// Accepts "ML", "HMM", letter strings such as "BTC" and comma lists such
  /// as "B,T,C". Throws ValidationError otherwise.
  static ModelCombination parse(std::string_view text);
  std::string label() const;
  bool uses_relaxation() const { return baseline == Baseline::kNone; }

  friend bool operator==(const ModelCombination&, const ModelCombination&) = default;
};

/// Constraint sources available to a run; absent sources are empty.
struct ModelResources {
  ConstraintSet bigrams;
  ConstraintSet trigrams;
  ConstraintSet learned;
  ConstraintSet hand;
  std::optional<TransitionModel> transitions;
};

/// Union of the selected constraint sets.
ConstraintSet join_models(const ModelCombination& combo, const ModelResources& resources);

/// Per-word argmax lexical probability; unknown words take the first
/// open-class tag. Ties go to tag order.
std::vector<TagId> tag_most_likely(std::span<const std::string> words, const Lexicon& lex, const TagSet& tagset);

/// Max-product decoding of Π p(t_i | t_{i-1}) p_lex(t_i | w_i). Ties are
/// broken toward earlier tag order, resolved from the last word backwards.
std::vector<TagId> tag_viterbi_bigram(std::span<const std::string> words, const Lexicon& lex, const TagSet& tagset,
                                      const TransitionModel& transitions);

/// Log score the Viterbi decoder maximizes, accumulated left to right.
double bigram_log_score(std::span<const std::string> words, std::span<const TagId> tags, const Lexicon& lex,
                        const TagSet& tagset, const TransitionModel& transitions);

/// A ready-to-run tagger for one model combination. Holds references; the
/// lexicon, tag set and constraint set must outlive it.
class Tagger {
 public:
  static Tagger most_likely(const Lexicon& lex, const TagSet& tagset);
  static Tagger viterbi(const Lexicon& lex, const TagSet& tagset, const TransitionModel& transitions);
  static Tagger relaxation(const Lexicon& lex, const TagSet& tagset, const ConstraintSet& constraints,
                           const RelaxParams& params);

  std::vector<TagId> tag(std::span<const std::string> words, RelaxDiagnostics* diagnostics = nullptr) const;

 private:
  enum class Kind { kMostLikely, kViterbi, kRelaxation };
  Tagger(Kind kind, const Lexicon& lex, const TagSet& tagset) : kind_(kind), lex_(&lex), tagset_(&tagset) {}

  Kind kind_;
  const Lexicon* lex_;
  const TagSet* tagset_;
  const ConstraintSet* constraints_ = nullptr;
  const TransitionModel* transitions_ = nullptr;
  RelaxParams params_;
};

std::vector<std::vector<std::string>> words_of(const std::vector<TaggedSentence>& sentences);

}  // namespace reltag
