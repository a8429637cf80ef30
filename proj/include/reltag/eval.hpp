#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "reltag/corpus.hpp"

namespace reltag {

/// Accuracy over all tokens and over ambiguous tokens (two or more
/// candidate tags, unknown words included), plus the confusion tally:
/// errors[{gold, predicted}] counts words tagged `predicted` that should
/// have been `gold`.
struct EvalReport {
  std::int64_t tokens = 0;
  std::int64_t correct = 0;
  std::int64_t ambiguous_tokens = 0;
  std::int64_t ambiguous_correct = 0;
  std::map<std::pair<TagId, TagId>, std::int64_t> errors;

  double accuracy_overall() const { return tokens ? static_cast<double>(correct) / static_cast<double>(tokens) : 1.0; }
  double accuracy_ambiguous() const {
    return ambiguous_tokens ? static_cast<double>(ambiguous_correct) / static_cast<double>(ambiguous_tokens) : 1.0;
  }
  std::int64_t error_count() const { return tokens - correct; }
  std::int64_t confusion(TagId gold, TagId predicted) const;

  /// Adds another report's counts (evaluation over a union of sentences).
  void merge(const EvalReport& other);
};

/// Throws AlignmentError when sentence or token counts differ.
EvalReport evaluate(const std::vector<TaggedSentence>& gold, const std::vector<std::vector<TagId>>& predicted,
                    const Lexicon& lex, const TagSet& tagset);

/// Aligned `model  ambiguous  overall` table, one row per report.
void write_accuracy_table(std::ostream& out, const std::vector<std::pair<std::string, EvalReport>>& rows);

/// Most frequent XX/YY confusions, one column per report.
void write_error_table(std::ostream& out, const std::vector<std::pair<std::string, EvalReport>>& rows,
                       const TagSet& tagset, std::size_t limit = 10);

/// Machine-readable records: `eval model=.. tokens=.. ambiguous=.. overall=..`
/// and `error model=.. pair=XX/YY count=..`.
void write_eval_records(std::ostream& out, const std::string& model, const EvalReport& report, const TagSet& tagset);

}  // namespace reltag
