#include "reltag/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <set>

#include "reltag/error.hpp"

namespace reltag {

std::int64_t EvalReport::confusion(TagId gold, TagId predicted) const {
  auto it = errors.find({gold, predicted});
  return it == errors.end() ? 0 : it->second;
}

void EvalReport::merge(const EvalReport& o) {
  tokens += o.tokens;
  correct += o.correct;
  ambiguous_tokens += o.ambiguous_tokens;
  ambiguous_correct += o.ambiguous_correct;
  for (const auto& [k, v] : o.errors) errors[k] += v;
}

EvalReport evaluate(const std::vector<TaggedSentence>& gold, const std::vector<std::vector<TagId>>& predicted,
                    const Lexicon& lex, const TagSet& tagset) {
  if (gold.size() != predicted.size())
    throw AlignmentError("gold has " + std::to_string(gold.size()) + " sentences, prediction " +
                         std::to_string(predicted.size()));
  EvalReport r;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].size() != predicted[s].size())
      throw AlignmentError("sentence " + std::to_string(s + 1) + ": gold has " + std::to_string(gold[s].size()) +
                           " tokens, prediction " + std::to_string(predicted[s].size()));
    for (std::size_t i = 0; i < gold[s].size(); ++i) {
      const auto& tok = gold[s][i];
      const bool ok = tok.tag == predicted[s][i];
      const bool ambiguous = candidate_count(lex, tagset, tok.word) >= 2;
      ++r.tokens;
      r.correct += ok;
      if (ambiguous) {
        ++r.ambiguous_tokens;
        r.ambiguous_correct += ok;
      }
      if (!ok) ++r.errors[{tok.tag, predicted[s][i]}];
    }
  }
  return r;
}

namespace {

std::string percent(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * x);
  return buf;
}

}  // namespace

void write_accuracy_table(std::ostream& out, const std::vector<std::pair<std::string, EvalReport>>& rows) {
  std::size_t w = 5;
  for (const auto& [name, r] : rows) w = std::max(w, name.size());
  out << std::left << std::setw(static_cast<int>(w)) << "model" << "  " << std::right << std::setw(10) << "ambiguous"
      << "  " << std::setw(8) << "overall" << '\n';
  for (const auto& [name, r] : rows)
    out << std::left << std::setw(static_cast<int>(w)) << name << "  " << std::right << std::setw(10)
        << percent(r.accuracy_ambiguous()) << "  " << std::setw(8) << percent(r.accuracy_overall()) << '\n';
}

void write_error_table(std::ostream& out, const std::vector<std::pair<std::string, EvalReport>>& rows,
                       const TagSet& tagset, std::size_t limit) {
  // rank pairs by their total over all rows
  std::map<std::pair<TagId, TagId>, std::int64_t> total;
  for (const auto& [name, r] : rows)
    for (const auto& [k, v] : r.errors) total[k] += v;
  std::vector<std::pair<std::pair<TagId, TagId>, std::int64_t>> ranked(total.begin(), total.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > limit) ranked.resize(limit);

  auto pair_name = [&](const std::pair<TagId, TagId>& k) { return tagset.symbol(k.first) + "/" + tagset.symbol(k.second); };
  std::size_t w = 5;
  for (const auto& [k, v] : ranked) w = std::max(w, pair_name(k).size());
  out << std::left << std::setw(static_cast<int>(w)) << "error";
  for (const auto& [name, r] : rows) out << "  " << std::right << std::setw(static_cast<int>(std::max<std::size_t>(6, name.size()))) << name;
  out << '\n';
  for (const auto& [k, v] : ranked) {
    out << std::left << std::setw(static_cast<int>(w)) << pair_name(k);
    for (const auto& [name, r] : rows)
      out << "  " << std::right << std::setw(static_cast<int>(std::max<std::size_t>(6, name.size()))) << r.confusion(k.first, k.second);
    out << '\n';
  }
  out << std::left << std::setw(static_cast<int>(w)) << "Total";
  for (const auto& [name, r] : rows)
    out << "  " << std::right << std::setw(static_cast<int>(std::max<std::size_t>(6, name.size()))) << r.error_count();
  out << '\n';
}

void write_eval_records(std::ostream& out, const std::string& model, const EvalReport& r, const TagSet& tagset) {
  char buf[64];
  out << "eval model=" << model << " tokens=" << r.tokens << " ambiguous_tokens=" << r.ambiguous_tokens;
  std::snprintf(buf, sizeof buf, " ambiguous=%.6f overall=%.6f", r.accuracy_ambiguous(), r.accuracy_overall());
  out << buf << " errors=" << r.error_count() << '\n';
  for (const auto& [k, v] : r.errors)
    out << "error model=" << model << " pair=" << tagset.symbol(k.first) << '/' << tagset.symbol(k.second)
        << " count=" << v << '\n';
}

}  // namespace reltag
