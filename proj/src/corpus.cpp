#include "reltag/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "reltag/error.hpp"
#include "reltag/random.hpp"

namespace reltag {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- TagSet

TagSet::TagSet(std::vector<std::string> symbols) {
  for (auto& s : symbols) {
    if (find(s)) throw ValidationError("duplicate tag '" + s + "'");
    add(s);
  }
}

bool TagSet::is_valid_symbol(std::string_view symbol) {
  if (symbol.empty() || symbol == kOutOfSentenceSymbol) return false;
  return std::none_of(symbol.begin(), symbol.end(), is_space);
}

TagId TagSet::add(std::string_view symbol) {
  if (auto id = find(symbol)) return *id;
  if (!is_valid_symbol(symbol)) throw ValidationError("invalid tag symbol '" + std::string(symbol) + "'");
  const auto id = static_cast<TagId>(symbols_.size());
  symbols_.emplace_back(symbol);
  index_.emplace(symbols_.back(), id);
  return id;
}

std::optional<TagId> TagSet::find(std::string_view symbol) const {
  auto it = index_.find(std::string(symbol));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TagId TagSet::id(std::string_view symbol) const {
  if (auto id = find(symbol)) return *id;
  throw ValidationError("unknown tag '" + std::string(symbol) + "'");
}

void TagSet::set_open_class(std::vector<TagId> tags) {
  for (TagId t : tags)
    if (!contains(t)) throw ValidationError("open-class tag id out of range");
  std::sort(tags.begin(), tags.end());
  tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
  open_class_ = std::move(tags);
}

void TagSet::set_default_open_class() {
  std::vector<TagId> open;
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    const auto& s = symbols_[i];
    if (std::any_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }))
      open.push_back(static_cast<TagId>(i));
  }
  open_class_ = std::move(open);
}

// ---------------------------------------------------------------- corpus I/O

std::vector<TaggedSentence> parse_tagged_corpus(std::istream& in, TagSet& tagset, TagPolicy policy) {
  std::vector<TaggedSentence> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fields = split_ws(line);
    if (fields.empty()) continue;
    TaggedSentence sentence;
    sentence.reserve(fields.size());
    for (std::size_t col = 0; col < fields.size(); ++col) {
      const std::string_view tok = fields[col];
      const auto us = tok.rfind('_');
      if (us == std::string_view::npos || us == 0 || us + 1 == tok.size())
        throw ParseError("malformed token '" + std::string(tok) + "' (expected word_TAG)", lineno, col + 1);
      const auto tag_sym = tok.substr(us + 1);
      TagId tag;
      if (policy == TagPolicy::kAccumulate) {
        if (!TagSet::is_valid_symbol(tag_sym))
          throw ParseError("invalid tag '" + std::string(tag_sym) + "'", lineno, col + 1);
        tag = tagset.add(tag_sym);
      } else {
        auto found = tagset.find(tag_sym);
        if (!found) throw ParseError("unknown tag '" + std::string(tag_sym) + "'", lineno, col + 1);
        tag = *found;
      }
      sentence.push_back(Token{std::string(tok.substr(0, us)), tag});
    }
    out.push_back(std::move(sentence));
  }
  return out;
}

std::vector<TaggedSentence> read_tagged_corpus(const std::string& path, TagSet& tagset, TagPolicy policy) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file '" + path + "'");
  return parse_tagged_corpus(in, tagset, policy);
}

void write_tagged_corpus(std::ostream& out, const std::vector<TaggedSentence>& sentences,
                         const TagSet& tagset) {
  for (const auto& s : sentences) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) out << ' ';
      out << s[i].word << '_' << tagset.symbol(s[i].tag);
    }
    out << '\n';
  }
}

std::vector<std::vector<std::string>> parse_raw_text(std::istream& in) {
  std::vector<std::vector<std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto fields = split_ws(line);
    if (fields.empty()) continue;
    out.emplace_back(fields.begin(), fields.end());
  }
  return out;
}

// ---------------------------------------------------------------- lexicon

void Lexicon::add(std::string_view word, TagId tag, std::int64_t count) {
  auto it = entries_.find(word);
  if (it == entries_.end()) it = entries_.emplace(std::string(word), TagCounts{}).first;
  it->second[tag] += count;
}

const Lexicon::TagCounts* Lexicon::find(std::string_view word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

std::int64_t Lexicon::total(std::string_view word) const {
  const auto* e = find(word);
  if (!e) return 0;
  std::int64_t n = 0;
  for (const auto& [tag, c] : *e) n += c;
  return n;
}

Lexicon build_lexicon(const std::vector<TaggedSentence>& train) {
  Lexicon lex;
  for (const auto& s : train)
    for (const auto& tok : s) lex.add(tok.word, tok.tag);
  return lex;
}

void write_lexicon(std::ostream& out, const Lexicon& lex, const TagSet& tagset) {
  std::vector<std::pair<std::string_view, std::int64_t>> row;
  for (const auto& [word, counts] : lex.entries()) {
    row.clear();
    for (const auto& [tag, c] : counts) row.emplace_back(tagset.symbol(tag), c);
    std::sort(row.begin(), row.end());
    out << word;
    for (const auto& [sym, c] : row) out << ' ' << sym << ' ' << c;
    out << '\n';
  }
}

Lexicon parse_lexicon(std::istream& in, TagSet& tagset) {
  Lexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto f = split_ws(line);
    if (f.empty()) continue;
    if (f.size() < 3 || f.size() % 2 == 0) throw ParseError("expected 'word TAG count [TAG count ...]'", lineno);
    if (lex.contains(f[0])) throw ParseError("duplicate lexicon entry '" + std::string(f[0]) + "'", lineno);
    for (std::size_t i = 1; i < f.size(); i += 2) {
      std::int64_t count = 0;
      try {
        std::size_t used = 0;
        count = std::stoll(std::string(f[i + 1]), &used);
        if (used != f[i + 1].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError("bad count '" + std::string(f[i + 1]) + "'", lineno, i + 2);
      }
      if (count < 1) throw ParseError("counts must be positive", lineno, i + 2);
      if (!TagSet::is_valid_symbol(f[i])) throw ParseError("invalid tag '" + std::string(f[i]) + "'", lineno, i + 1);
      lex.add(f[0], tagset.add(f[i]), count);
    }
  }
  return lex;
}

std::vector<Correction> parse_corrections(std::istream& in, const TagSet& tagset) {
  std::vector<Correction> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto f = split_ws(line);
    if (f.empty()) continue;
    if (f.size() < 2) throw ParseError("expected 'word TAG [TAG ...]'", lineno);
    Correction c{std::string(f[0]), {}};
    for (std::size_t i = 1; i < f.size(); ++i) {
      auto id = tagset.find(f[i]);
      if (!id) throw ParseError("unknown tag '" + std::string(f[i]) + "'", lineno, i + 1);
      c.allowed.push_back(*id);
    }
    out.push_back(std::move(c));
  }
  return out;
}

Lexicon filter_lexicon(const Lexicon& lex, const std::vector<Correction>& corrections) {
  Lexicon out = lex;
  for (const auto& c : corrections) {
    auto it = out.entries().find(c.word);
    if (it == out.entries().end()) throw InvalidCorrection("correction for unknown word '" + c.word + "'");
    Lexicon::TagCounts kept;
    for (const auto& [tag, count] : it->second)
      if (std::find(c.allowed.begin(), c.allowed.end(), tag) != c.allowed.end()) kept.emplace(tag, count);
    if (kept.empty()) throw InvalidCorrection("correction would delete every tag of '" + c.word + "'");
    it->second = std::move(kept);
  }
  return out;
}

LexicalDistribution lexical_distribution(const Lexicon& lex, const TagSet& tagset, std::string_view word) {
  LexicalDistribution d;
  if (const auto* e = lex.find(word)) {
    d.known = true;
    double total = 0.0;
    for (const auto& [tag, c] : *e) total += static_cast<double>(c);
    for (const auto& [tag, c] : *e) {
      d.tags.push_back(tag);
      d.probs.push_back(static_cast<double>(c) / total);
    }
    return d;
  }
  const auto& open = tagset.open_class();
  if (open.empty()) throw ValidationError("unknown word '" + std::string(word) + "' and empty open class");
  d.tags = open;
  d.probs.assign(open.size(), 1.0 / static_cast<double>(open.size()));
  return d;
}

std::size_t candidate_count(const Lexicon& lex, const TagSet& tagset, std::string_view word) {
  if (const auto* e = lex.find(word)) return e->size();
  return tagset.open_class().size();
}

// ---------------------------------------------------------------- splits & stats

CorpusSplit split_corpus(const std::vector<TaggedSentence>& sentences, const SplitFractions& f,
                         std::uint64_t seed) {
  if (!(f.train > 0 && f.tune > 0 && f.test > 0))
    throw ValidationError("split fractions must be positive");
  if (std::abs(f.train + f.tune + f.test - 1.0) > 1e-9) throw ValidationError("split fractions must sum to 1");

  const std::size_t n = sentences.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  const auto n_train = std::min(n, static_cast<std::size_t>(std::llround(static_cast<double>(n) * f.train)));
  const auto n_tune = std::min(n - n_train, static_cast<std::size_t>(std::llround(static_cast<double>(n) * f.tune)));

  auto take = [&](std::size_t from, std::size_t to) {
    std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(from),
                                 order.begin() + static_cast<std::ptrdiff_t>(to));
    std::sort(idx.begin(), idx.end());
    std::vector<TaggedSentence> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(sentences[i]);
    return out;
  };

  CorpusSplit split;
  split.train = take(0, n_train);
  split.tune = take(n_train, n_train + n_tune);
  split.test = take(n_train + n_tune, n);
  if (split.train.empty()) split.warnings.emplace_back("train split is empty");
  if (split.tune.empty()) split.warnings.emplace_back("tune split is empty");
  if (split.test.empty()) split.warnings.emplace_back("test split is empty");
  return split;
}

CorpusStats corpus_stats(const std::vector<TaggedSentence>& sentences, const Lexicon& lex,
                         const TagSet& tagset) {
  CorpusStats st;
  std::size_t tags_all = 0;
  std::size_t tags_amb = 0;
  for (const auto& s : sentences) {
    for (const auto& tok : s) {
      const auto k = candidate_count(lex, tagset, tok.word);
      ++st.word_count;
      tags_all += k;
      if (k >= 2) {
        ++st.ambiguous_count;
        tags_amb += k;
      }
    }
  }
  if (st.word_count) {
    st.ambiguous_fraction = static_cast<double>(st.ambiguous_count) / static_cast<double>(st.word_count);
    st.ambiguity_ratio_overall = static_cast<double>(tags_all) / static_cast<double>(st.word_count);
  }
  if (st.ambiguous_count)
    st.ambiguity_ratio_ambiguous = static_cast<double>(tags_amb) / static_cast<double>(st.ambiguous_count);
  return st;
}

}  // namespace reltag
