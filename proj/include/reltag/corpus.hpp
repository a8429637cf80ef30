#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace reltag {

/// Index of a tag symbol inside a TagSet.
using TagId = std::int32_t;

/// Reserved symbol for "position outside the sentence". Never a TagSet member.
inline constexpr std::string_view kOutOfSentenceSymbol = "<OUT>";

/// Ordered inventory of tag symbols. Ids are positions in insertion order and
/// never change once assigned, so a TagSet can keep growing while other
/// structures hold ids into it. "Tag order" for tie breaking is id order.
class TagSet {
 public:
  TagSet() = default;
  explicit TagSet(std::vector<std::string> symbols);

  /// Returns the id of `symbol`, appending it if new.
  TagId add(std::string_view symbol);
  std::optional<TagId> find(std::string_view symbol) const;
  /// Like find() but throws ValidationError for unknown symbols.
  TagId id(std::string_view symbol) const;

  const std::string& symbol(TagId id) const { return symbols_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  bool contains(TagId id) const { return id >= 0 && static_cast<std::size_t>(id) < symbols_.size(); }

  /// Candidates for words missing from the lexicon, sorted by id.
  const std::vector<TagId>& open_class() const { return open_class_; }
  void set_open_class(std::vector<TagId> tags);
  /// Every tag whose symbol contains a letter or digit; drops punctuation tags
  /// such as `,` `:` `.` and quote tags.
  void set_default_open_class();

  static bool is_valid_symbol(std::string_view symbol);

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, TagId> index_;
  std::vector<TagId> open_class_;
};

struct Token {
  std::string word;
  TagId tag = -1;

  friend bool operator==(const Token&, const Token&) = default;
};

using TaggedSentence = std::vector<Token>;

enum class TagPolicy {
  kAccumulate,  // unknown tags are added to the TagSet
  kValidate,    // unknown tags are a parse error
};

/// Reads `word_TAG` tokens, one sentence per line. Tokens split at the last
/// underscore; blank lines are skipped.
std::vector<TaggedSentence> parse_tagged_corpus(std::istream& in, TagSet& tagset,
                                                TagPolicy policy = TagPolicy::kAccumulate);
std::vector<TaggedSentence> read_tagged_corpus(const std::string& path, TagSet& tagset,
                                               TagPolicy policy = TagPolicy::kAccumulate);
void write_tagged_corpus(std::ostream& out, const std::vector<TaggedSentence>& sentences,
                         const TagSet& tagset);

/// Whitespace-tokenized untagged text, one sentence per line.
std::vector<std::vector<std::string>> parse_raw_text(std::istream& in);

/// Word → tag → occurrence count. Word keys are case-sensitive.
class Lexicon {
 public:
  using TagCounts = std::map<TagId, std::int64_t>;
  using Entries = std::map<std::string, TagCounts, std::less<>>;

  void add(std::string_view word, TagId tag, std::int64_t count = 1);
  const TagCounts* find(std::string_view word) const;
  bool contains(std::string_view word) const { return find(word) != nullptr; }
  std::int64_t total(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }
  const Entries& entries() const { return entries_; }
  Entries& entries() { return entries_; }

  friend bool operator==(const Lexicon&, const Lexicon&) = default;

 private:
  Entries entries_;
};

Lexicon build_lexicon(const std::vector<TaggedSentence>& train);

/// Lexicon file: `word TAG count TAG count ...`, one word per line, tags in
/// symbol order.
void write_lexicon(std::ostream& out, const Lexicon& lex, const TagSet& tagset);
Lexicon parse_lexicon(std::istream& in, TagSet& tagset);

struct Correction {
  std::string word;
  std::vector<TagId> allowed;
};

/// Corrections file: `word TAG [TAG ...]` listing the tags to keep.
std::vector<Correction> parse_corrections(std::istream& in, const TagSet& tagset);

/// Drops every tag of a corrected word that is not in its allowed set.
/// Throws InvalidCorrection for unknown words or when nothing would remain.
Lexicon filter_lexicon(const Lexicon& lex, const std::vector<Correction>& corrections);

struct LexicalDistribution {
  std::vector<TagId> tags;  // ascending id
  std::vector<double> probs;
  bool known = false;
};

/// Relative frequencies for known words; uniform over the open class
/// otherwise. Throws ValidationError if the word is unknown and the open
/// class is empty.
LexicalDistribution lexical_distribution(const Lexicon& lex, const TagSet& tagset,
                                         std::string_view word);

/// Number of candidate tags the tagger will consider for `word`.
std::size_t candidate_count(const Lexicon& lex, const TagSet& tagset, std::string_view word);

struct SplitFractions {
  double train = 0.8;
  double tune = 0.1;
  double test = 0.1;
};

struct CorpusSplit {
  std::vector<TaggedSentence> train;
  std::vector<TaggedSentence> tune;
  std::vector<TaggedSentence> test;
  std::vector<std::string> warnings;
};

/// Seeded shuffle at sentence granularity. Each split keeps input order.
CorpusSplit split_corpus(const std::vector<TaggedSentence>& sentences,
                         const SplitFractions& fractions, std::uint64_t seed);

struct CorpusStats {
  std::size_t word_count = 0;
  std::size_t ambiguous_count = 0;
  double ambiguous_fraction = 0.0;
  double ambiguity_ratio_ambiguous = 0.0;
  double ambiguity_ratio_overall = 0.0;
};

/// Token-level ambiguity figures. Words missing from the lexicon count with
/// the open-class size.
CorpusStats corpus_stats(const std::vector<TaggedSentence>& sentences, const Lexicon& lex,
                         const TagSet& tagset);

}  // namespace reltag
