#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "reltag/constraint.hpp"
#include "reltag/corpus.hpp"

namespace reltag {

/// Within-sentence tag n-gram counts plus the unigram and sentence-initial
/// counts the constraint and transition estimates need.
struct NgramTable {
  int order = 2;
  std::map<std::vector<TagId>, std::int64_t> counts;
  std::map<TagId, std::int64_t> unigrams;
  std::map<TagId, std::int64_t> starts;

  std::int64_t token_count() const;
  std::int64_t sentence_count() const;
  std::int64_t ngram_total() const;

  friend bool operator==(const NgramTable&, const NgramTable&) = default;
};

/// Counts consecutive tag sequences of length `order` (2 or 3) inside each
/// sentence. Only observed sequences are stored.
NgramTable collect_ngrams(const std::vector<TaggedSentence>& train, int order);

/// Pointwise mutual information log2(p(seq) / Π p(tag_i)) with relative
/// frequencies from the table.
double ngram_pmi(const NgramTable& table, const std::vector<TagId>& sequence, std::int64_t count);

/// One constraint per observed n-gram and anchor position; the other
/// members of the n-gram become explicit-offset context items.
std::vector<Constraint> ngrams_to_constraints(const NgramTable& table);

/// Add-one smoothed first-order transitions over a tag set of fixed size.
struct TransitionModel {
  std::vector<double> start;             // p(t | sentence start)
  std::vector<std::vector<double>> next;  // next[a][b] = p(b | a)
};

TransitionModel transition_probabilities(const NgramTable& table, std::size_t tag_count);

/// N-gram table file: `TAG [TAG [TAG]] count` per line, sorted by symbols.
/// Single tags are unigram counts and `<s> TAG` lines sentence starts.
void write_ngrams(std::ostream& out, const NgramTable& table, const TagSet& tagset);
NgramTable parse_ngrams(std::istream& in, TagSet& tagset);

}  // namespace reltag
