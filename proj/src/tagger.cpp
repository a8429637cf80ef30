#include "reltag/tagger.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "reltag/error.hpp"

namespace reltag {

ModelCombination ModelCombination::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ',' && !std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  ModelCombination m;
  if (s == "ML") {
    m.baseline = Baseline::kMostLikely;
    return m;
  }
  if (s == "HMM") {
    m.baseline = Baseline::kHmm;
    return m;
  }
  if (s.empty()) throw ValidationError("empty model combination");
  for (char c : s) {
    switch (c) {
      case 'B': m.bigrams = true; break;
      case 'T': m.trigrams = true; break;
      case 'C': m.learned = true; break;
      case 'H': m.hand = true; break;
      default: throw ValidationError("unknown model letter '" + std::string(1, c) + "' in '" + std::string(text) + "'");
    }
  }
  return m;
}

std::string ModelCombination::label() const {
  if (baseline == Baseline::kMostLikely) return "ML";
  if (baseline == Baseline::kHmm) return "HMM";
  std::string s;
  if (bigrams) s += 'B';
  if (trigrams) s += 'T';
  if (learned) s += 'C';
  if (hand) s += 'H';
  return s;
}

ConstraintSet join_models(const ModelCombination& combo, const ModelResources& r) {
  ConstraintSet out;
  if (combo.bigrams) out.append(r.bigrams);
  if (combo.trigrams) out.append(r.trigrams);
  if (combo.learned) out.append(r.learned);
  if (combo.hand) out.append(r.hand);
  return out;
}

std::vector<TagId> tag_most_likely(std::span<const std::string> words, const Lexicon& lex, const TagSet& tagset) {
  std::vector<TagId> out;
  out.reserve(words.size());
  for (const auto& w : words) {
    const auto d = lexical_distribution(lex, tagset, w);
    std::size_t best = 0;
    for (std::size_t k = 1; k < d.probs.size(); ++k)
      if (d.probs[k] > d.probs[best]) best = k;  // tags ascend, so ties keep the earlier tag
    out.push_back(d.tags[best]);
  }
  return out;
}

namespace {

double safe_log(double p) { return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity(); }

}  // namespace

std::vector<TagId> tag_viterbi_bigram(std::span<const std::string> words, const Lexicon& lex, const TagSet& tagset,
                                      const TransitionModel& tr) {
  const std::size_t n = words.size();
  if (n == 0) return {};
  std::vector<LexicalDistribution> lexd;
  lexd.reserve(n);
  for (const auto& w : words) lexd.push_back(lexical_distribution(lex, tagset, w));

  std::vector<std::vector<double>> delta(n);
  std::vector<std::vector<std::size_t>> back(n);
  {
    const auto& d = lexd[0];
    delta[0].resize(d.tags.size());
    for (std::size_t k = 0; k < d.tags.size(); ++k)
      delta[0][k] = safe_log(tr.start[static_cast<std::size_t>(d.tags[k])]) + safe_log(d.probs[k]);
  }
  for (std::size_t i = 1; i < n; ++i) {
    const auto& prev = lexd[i - 1];
    const auto& cur = lexd[i];
    delta[i].assign(cur.tags.size(), -std::numeric_limits<double>::infinity());
    back[i].assign(cur.tags.size(), 0);
    for (std::size_t k = 0; k < cur.tags.size(); ++k) {
      const auto t = static_cast<std::size_t>(cur.tags[k]);
      double best = -std::numeric_limits<double>::infinity();
      std::size_t arg = 0;
      for (std::size_t q = 0; q < prev.tags.size(); ++q) {
        const double s = delta[i - 1][q] + safe_log(tr.next[static_cast<std::size_t>(prev.tags[q])][t]);
        if (s > best) {
          best = s;
          arg = q;
        }
      }
      delta[i][k] = best + safe_log(cur.probs[k]);
      back[i][k] = arg;
    }
  }
  std::size_t k = 0;
  for (std::size_t q = 1; q < delta[n - 1].size(); ++q)
    if (delta[n - 1][q] > delta[n - 1][k]) k = q;
  std::vector<TagId> out(n);
  for (std::size_t i = n; i-- > 0;) {
    out[i] = lexd[i].tags[k];
    if (i) k = back[i][k];
  }
  return out;
}

double bigram_log_score(std::span<const std::string> words, std::span<const TagId> tags, const Lexicon& lex,
                        const TagSet& tagset, const TransitionModel& tr) {
  double s = 0.0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto d = lexical_distribution(lex, tagset, words[i]);
    auto it = std::find(d.tags.begin(), d.tags.end(), tags[i]);
    const double lp = it == d.tags.end() ? -std::numeric_limits<double>::infinity()
                                         : safe_log(d.probs[static_cast<std::size_t>(it - d.tags.begin())]);
    const auto t = static_cast<std::size_t>(tags[i]);
    if (i == 0) {
      s = safe_log(tr.start[t]) + lp;
    } else {
      s = (s + safe_log(tr.next[static_cast<std::size_t>(tags[i - 1])][t])) + lp;
    }
  }
  return s;
}

Tagger Tagger::most_likely(const Lexicon& lex, const TagSet& tagset) { return Tagger(Kind::kMostLikely, lex, tagset); }

Tagger Tagger::viterbi(const Lexicon& lex, const TagSet& tagset, const TransitionModel& transitions) {
  Tagger t(Kind::kViterbi, lex, tagset);
  t.transitions_ = &transitions;
  return t;
}

Tagger Tagger::relaxation(const Lexicon& lex, const TagSet& tagset, const ConstraintSet& constraints,
                          const RelaxParams& params) {
  params.validate();
  Tagger t(Kind::kRelaxation, lex, tagset);
  t.constraints_ = &constraints;
  t.params_ = params;
  return t;
}

std::vector<TagId> Tagger::tag(std::span<const std::string> words, RelaxDiagnostics* diagnostics) const {
  switch (kind_) {
    case Kind::kMostLikely: return tag_most_likely(words, *lex_, *tagset_);
    case Kind::kViterbi: return tag_viterbi_bigram(words, *lex_, *tagset_, *transitions_);
    case Kind::kRelaxation: {
      auto r = run(words, *constraints_, *lex_, *tagset_, params_);
      if (diagnostics) *diagnostics = r.diagnostics;
      return std::move(r.tags);
    }
  }
  return {};
}

std::vector<std::vector<std::string>> words_of(const std::vector<TaggedSentence>& sentences) {
  std::vector<std::vector<std::string>> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) {
    std::vector<std::string> w;
    w.reserve(s.size());
    for (const auto& tok : s) w.push_back(tok.word);
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace reltag
