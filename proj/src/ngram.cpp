#include "reltag/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "reltag/error.hpp"

namespace reltag {

namespace {

constexpr std::string_view kStartSymbol = "<s>";

std::int64_t sum_values(const std::map<TagId, std::int64_t>& m) {
  std::int64_t n = 0;
  for (const auto& [k, v] : m) n += v;
  return n;
}

}  // namespace

std::int64_t NgramTable::token_count() const { return sum_values(unigrams); }
std::int64_t NgramTable::sentence_count() const { return sum_values(starts); }

std::int64_t NgramTable::ngram_total() const {
  std::int64_t n = 0;
  for (const auto& [k, v] : counts) n += v;
  return n;
}

NgramTable collect_ngrams(const std::vector<TaggedSentence>& train, int order) {
  if (order != 2 && order != 3) throw ValidationError("n-gram order must be 2 or 3");
  NgramTable table;
  table.order = order;
  const auto n = static_cast<std::size_t>(order);
  std::vector<TagId> key(n);
  for (const auto& s : train) {
    if (s.empty()) continue;
    ++table.starts[s.front().tag];
    for (const auto& tok : s) ++table.unigrams[tok.tag];
    for (std::size_t i = 0; i + n <= s.size(); ++i) {
      for (std::size_t k = 0; k < n; ++k) key[k] = s[i + k].tag;
      ++table.counts[key];
    }
  }
  return table;
}

double ngram_pmi(const NgramTable& table, const std::vector<TagId>& sequence, std::int64_t count) {
  const double tokens = static_cast<double>(table.token_count());
  double log_p = std::log2(static_cast<double>(count) / static_cast<double>(table.ngram_total()));
  for (TagId t : sequence) {
    auto it = table.unigrams.find(t);
    if (it == table.unigrams.end() || it->second == 0) throw ValidationError("n-gram tag without unigram count");
    log_p -= std::log2(static_cast<double>(it->second) / tokens);
  }
  return log_p;
}

std::vector<Constraint> ngrams_to_constraints(const NgramTable& table) {
  if (table.counts.empty()) throw ValidationError("cannot build constraints from an empty n-gram table");
  const auto source = table.order == 2 ? ConstraintSource::kBigram : ConstraintSource::kTrigram;
  std::vector<Constraint> out;
  out.reserve(table.counts.size() * static_cast<std::size_t>(table.order));
  for (const auto& [seq, count] : table.counts) {
    const double pmi = ngram_pmi(table, seq, count);
    for (std::size_t anchor = 0; anchor < seq.size(); ++anchor) {
      Constraint c;
      c.source = source;
      c.compatibility = pmi;
      c.target_tag = seq[anchor];
      for (std::size_t k = 0; k < seq.size(); ++k) {
        if (k == anchor) continue;
        ContextItem item;
        item.offset = static_cast<int>(k) - static_cast<int>(anchor);
        item.test.tags = {seq[k]};
        (k < anchor ? c.left : c.right).push_back(std::move(item));
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

TransitionModel transition_probabilities(const NgramTable& table, std::size_t tag_count) {
  if (table.order != 2) throw ValidationError("transition probabilities need a bigram table");
  if (tag_count == 0) throw ValidationError("empty tag set");
  const double t = static_cast<double>(tag_count);
  TransitionModel model;
  model.start.assign(tag_count, 0.0);
  model.next.assign(tag_count, std::vector<double>(tag_count, 0.0));

  const double n_start = static_cast<double>(table.sentence_count());
  for (std::size_t b = 0; b < tag_count; ++b) {
    auto it = table.starts.find(static_cast<TagId>(b));
    const double c = it == table.starts.end() ? 0.0 : static_cast<double>(it->second);
    model.start[b] = (c + 1.0) / (n_start + t);
  }

  std::vector<std::vector<std::int64_t>> counts(tag_count, std::vector<std::int64_t>(tag_count, 0));
  std::vector<std::int64_t> row_total(tag_count, 0);
  for (const auto& [seq, c] : table.counts) {
    const auto a = static_cast<std::size_t>(seq[0]);
    const auto b = static_cast<std::size_t>(seq[1]);
    if (a >= tag_count || b >= tag_count) throw ValidationError("n-gram tag outside the tag set");
    counts[a][b] += c;
    row_total[a] += c;
  }
  for (std::size_t a = 0; a < tag_count; ++a)
    for (std::size_t b = 0; b < tag_count; ++b)
      model.next[a][b] = (static_cast<double>(counts[a][b]) + 1.0) / (static_cast<double>(row_total[a]) + t);
  return model;
}

void write_ngrams(std::ostream& out, const NgramTable& table, const TagSet& tagset) {
  std::vector<std::pair<std::vector<std::string>, std::int64_t>> lines;
  for (const auto& [t, c] : table.unigrams) lines.push_back({{tagset.symbol(t)}, c});
  for (const auto& [t, c] : table.starts) lines.push_back({{std::string(kStartSymbol), tagset.symbol(t)}, c});
  for (const auto& [seq, c] : table.counts) {
    std::vector<std::string> syms;
    for (TagId t : seq) syms.push_back(tagset.symbol(t));
    lines.push_back({std::move(syms), c});
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& [syms, c] : lines) {
    for (const auto& s : syms) out << s << ' ';
    out << c << '\n';
  }
}

NgramTable parse_ngrams(std::istream& in, TagSet& tagset) {
  NgramTable table;
  table.order = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::vector<std::string> f;
    for (std::string w; fields >> w;) f.push_back(std::move(w));
    if (f.empty()) continue;
    if (f.size() < 2 || f.size() > 4) throw ParseError("expected 'TAG [TAG [TAG]] count'", lineno);
    std::int64_t count = 0;
    try {
      std::size_t used = 0;
      count = std::stoll(f.back(), &used);
      if (used != f.back().size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("bad count '" + f.back() + "'", lineno, f.size());
    }
    if (count < 1) throw ParseError("counts must be positive", lineno, f.size());
    f.pop_back();
    auto tag = [&](const std::string& s, std::size_t col) {
      if (!TagSet::is_valid_symbol(s) || s == kStartSymbol) throw ParseError("invalid tag '" + s + "'", lineno, col);
      return tagset.add(s);
    };
    if (f.size() == 1) {
      table.unigrams[tag(f[0], 1)] += count;
    } else if (f.size() == 2 && f[0] == kStartSymbol) {
      table.starts[tag(f[1], 2)] += count;
    } else {
      const int order = static_cast<int>(f.size());
      if (table.order != 0 && table.order != order) throw ParseError("mixed n-gram orders", lineno);
      table.order = order;
      std::vector<TagId> seq;
      for (std::size_t k = 0; k < f.size(); ++k) seq.push_back(tag(f[k], k + 1));
      table.counts[seq] += count;
    }
  }
  if (table.order == 0) table.order = 2;
  return table;
}

}  // namespace reltag
