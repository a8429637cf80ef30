#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reltag/corpus.hpp"

namespace reltag {

/// Generator for synthetic tagged corpora: a Markov chain over tags (first
/// order, optionally overridden per tag pair by second-order rows),
/// per-tag word emissions and a sentence length distribution. Rows are
/// indexed by position in `tags`.
struct SynthSpec {
  std::vector<std::string> tags;
  std::vector<double> start;
  std::vector<std::vector<double>> transitions;
  // (t_{i-2}, t_{i-1}) -> distribution of t_i; pairs not listed use `transitions`
  std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> second_order;
  std::vector<std::vector<std::pair<std::string, double>>> emissions;
  std::vector<std::pair<std::size_t, double>> lengths;

  /// Every distribution must be non-negative and sum to 1 within 1e-9, and
  /// every length positive. Throws ValidationError.
  void validate() const;

  /// The tag set implied by `tags`, default open class applied.
  TagSet tagset() const;
};

/// JSON form:
///   {"tags": [..], "start": {TAG: p}, "transitions": {TAG: {TAG: p}},
///    "second_order": {"TAG TAG": {TAG: p}}, "emissions": {TAG: {word: p}},
///    "lengths": {"n": p}}
/// Missing row entries are 0. Throws ValidationError on structural errors;
/// normalization is checked by validate().
SynthSpec parse_synth_spec(const std::string& json_text);
SynthSpec read_synth_spec(const std::string& path);

/// Samples whole sentences until at least `tokens` tokens exist. Tag ids in
/// the output follow spec.tagset(). Deterministic per seed.
std::vector<TaggedSentence> generate_synthetic_corpus(const SynthSpec& spec, std::size_t tokens, std::uint64_t seed);

/// Expected share of each tag among generated tokens (exact, from the chain
/// and the length distribution).
std::vector<double> expected_tag_frequencies(const SynthSpec& spec);

/// Σ_w p(w) max_t p(t|w): the accuracy a most-likely tagger approaches when
/// trained and tested on unlimited data from this generator.
double expected_most_likely_accuracy(const SynthSpec& spec);

}  // namespace reltag
