#include "reltag/relax.hpp"

#include <algorithm>
#include <cmath>

#include "reltag/error.hpp"
#include "reltag/random.hpp"

namespace reltag {

double WeightedLabelling::weight_of(std::size_t position, TagId tag) const {
  const auto& c = candidates[position];
  auto it = std::find(c.begin(), c.end(), tag);
  return it == c.end() ? 0.0 : weights[position][static_cast<std::size_t>(it - c.begin())];
}

void RelaxParams::validate() const {
  if (max_iterations < 1) throw ValidationError("max iterations must be at least 1");
  if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be non-negative");
  if (!(divisor > 0.0) || !std::isfinite(divisor)) throw ValidationError("support divisor must be positive");
}

WeightedLabelling init_weights(std::span<const std::string> words, const Lexicon& lex, const TagSet& tagset) {
  WeightedLabelling l;
  l.candidates.reserve(words.size());
  l.weights.reserve(words.size());
  for (const auto& w : words) {
    auto d = lexical_distribution(lex, tagset, w);
    l.candidates.push_back(std::move(d.tags));
    l.lexical.push_back(d.probs);
    l.weights.push_back(std::move(d.probs));
  }
  return l;
}

WeightedLabelling init_random_weights(std::span<const std::string> words, const Lexicon& lex, const TagSet& tagset,
                                      std::uint64_t seed) {
  auto l = init_weights(words, lex, tagset);
  Rng rng(seed);
  for (auto& w : l.weights) {
    double total = 0.0;
    for (auto& x : w) total += (x = 0.05 + rng.uniform());
    for (auto& x : w) x /= total;
  }
  return l;
}

double raw_support(const WeightedLabelling& labelling, const ConstraintSet& constraints,
                   std::span<const std::string> words, std::size_t i, std::size_t j) {
  const TagId tag = labelling.candidates[i][j];
  double support = 0.0;
  for (auto idx : constraints.lookup(words[i], tag)) {
    const auto& c = constraints.constraints()[idx];
    for (const auto& factors : instantiate(c, words, i, tag)) {
      double influence = c.compatibility;
      for (const auto& f : factors) {
        double mass = 0.0;
        const auto& cand = labelling.candidates[f.position];
        for (std::size_t k = 0; k < cand.size(); ++k) {
          const bool in_set = std::binary_search(f.tags.begin(), f.tags.end(), cand[k]);
          if (in_set != f.negated) mass += labelling.weights[f.position][k];
        }
        influence *= mass;
      }
      support += influence;
    }
  }
  return support;
}

double normalize_support(double raw, const RelaxParams& params) {
  const double x = raw / params.divisor;
  if (params.normalization == SupportNormalization::kClamp) return std::clamp(x, -1.0, 1.0);
  return x / (1.0 + std::abs(x));
}

UpdateResult update_step(const WeightedLabelling& labelling, const std::vector<std::vector<double>>& supports) {
  UpdateResult r{labelling, 0.0, 0};
  for (std::size_t i = 0; i < labelling.size(); ++i) {
    const auto& p = labelling.weights[i];
    if (p.size() < 2) continue;
    const auto& s = supports[i];
    double denom = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) denom += p[k] * (1.0 + s[k]);
    if (!(denom > 0.0)) {
      ++r.frozen_words;
      continue;
    }
    auto& out = r.labelling.weights[i];
    for (std::size_t k = 0; k < p.size(); ++k) {
      out[k] = p[k] * (1.0 + s[k]) / denom;
      r.max_change = std::max(r.max_change, std::abs(out[k] - p[k]));
    }
  }
  return r;
}

// ---------------------------------------------------------------- compiled supports

namespace {

// Enumerates bindings like instantiate() but resolves tag tests to candidate
// indices on the fly and abandons a binding as soon as a factor can only be 0.
class Compiler {
 public:
  struct PendingFactor {
    std::uint32_t position;
    std::vector<std::uint32_t> indices;
  };

  Compiler(std::span<const std::string> words, const WeightedLabelling& labelling)
      : words_(words), labelling_(labelling) {}

  template <typename Emit>
  void run(const Constraint& c, std::size_t target, Emit&& emit) {
    left_.assign(c.left.rbegin(), c.left.rend());
    right_ = &c.right;
    current_.clear();
    target_ = static_cast<std::ptrdiff_t>(target);
    side(left_, 0, target_, -1, [&] {
      const std::size_t mark = current_.size();
      side(*right_, 0, target_, +1, [&] { emit(current_); });
      current_.resize(mark);
    });
  }

 private:
  bool bind(const ContextItem& item, std::ptrdiff_t pos) {
    const auto n = static_cast<std::ptrdiff_t>(words_.size());
    const auto& t = item.test;
    if (pos < 0 || pos >= n) return t.kind == TestKind::kTags && t.out_of_sentence;
    const auto p = static_cast<std::size_t>(pos);
    if (t.kind == TestKind::kWords) return std::find(t.words.begin(), t.words.end(), words_[p]) != t.words.end();
    PendingFactor f{static_cast<std::uint32_t>(p), {}};
    const auto& cand = labelling_.candidates[p];
    for (std::size_t k = 0; k < cand.size(); ++k) {
      const bool in_set = std::binary_search(t.tags.begin(), t.tags.end(), cand[k]);
      if (in_set != (t.kind == TestKind::kNotTags)) f.indices.push_back(static_cast<std::uint32_t>(k));
    }
    if (f.indices.empty()) return false;  // factor is identically zero
    current_.push_back(std::move(f));
    return true;
  }

  template <typename Next>
  void side(const std::vector<ContextItem>& items, std::size_t k, std::ptrdiff_t cursor, int dir, Next&& next) {
    if (k == items.size()) {
      next();
      return;
    }
    const auto& item = items[k];
    const std::size_t mark = current_.size();
    if (item.offset || !item.repeated) {
      const std::ptrdiff_t pos = item.offset ? target_ + *item.offset : cursor + dir;
      if (bind(item, pos)) side(items, k + 1, pos, dir, next);
      current_.resize(mark);
      return;
    }
    const auto n = static_cast<std::ptrdiff_t>(words_.size());
    std::ptrdiff_t end = cursor;
    for (;;) {
      side(items, k + 1, end, dir, next);
      const std::ptrdiff_t nxt = end + dir;
      if (nxt < 0 || nxt >= n || !bind(item, nxt)) break;
      end = nxt;
    }
    current_.resize(mark);
  }

  std::span<const std::string> words_;
  const WeightedLabelling& labelling_;
  std::vector<ContextItem> left_;
  const std::vector<ContextItem>* right_ = nullptr;
  std::vector<PendingFactor> current_;
  std::ptrdiff_t target_ = 0;
};

}  // namespace

CompiledSentence::CompiledSentence(std::span<const std::string> words, const WeightedLabelling& labelling,
                                   const ConstraintSet& constraints) {
  Compiler compiler(words, labelling);
  pair_base_.reserve(words.size());
  offsets_.push_back(0);
  for (std::size_t i = 0; i < words.size(); ++i) {
    pair_base_.push_back(offsets_.size() - 1);
    const auto& cand = labelling.candidates[i];
    for (std::size_t j = 0; j < cand.size(); ++j) {
      // singleton words never change, their supports are irrelevant
      if (cand.size() > 1) {
        for (auto idx : constraints.lookup(words[i], cand[j])) {
          const auto& c = constraints.constraints()[idx];
          if (!c.applies_to_word(words[i])) continue;
          compiler.run(c, i, [&](const std::vector<Compiler::PendingFactor>& factors) {
            Instantiation inst{c.compatibility, static_cast<std::uint32_t>(factors_.size()),
                               static_cast<std::uint32_t>(factors.size())};
            for (const auto& f : factors) {
              factors_.push_back({f.position, static_cast<std::uint32_t>(candidate_pool_.size()),
                                  static_cast<std::uint32_t>(f.indices.size())});
              candidate_pool_.insert(candidate_pool_.end(), f.indices.begin(), f.indices.end());
            }
            instantiations_.push_back(inst);
          });
        }
      }
      offsets_.push_back(instantiations_.size());
    }
  }
}

double CompiledSentence::raw_support(const WeightedLabelling& labelling, std::size_t i, std::size_t j) const {
  const std::size_t k = pair_base_[i] + j;
  double support = 0.0;
  for (std::size_t r = offsets_[k]; r < offsets_[k + 1]; ++r) {
    const auto& inst = instantiations_[r];
    double influence = inst.compatibility;
    for (std::uint32_t f = inst.first; f < inst.first + inst.count; ++f) {
      const auto& fac = factors_[f];
      const auto& w = labelling.weights[fac.position];
      double mass = 0.0;
      for (std::uint32_t q = fac.first; q < fac.first + fac.count; ++q) mass += w[candidate_pool_[q]];
      influence *= mass;
    }
    support += influence;
  }
  return support;
}

// ---------------------------------------------------------------- driver

std::vector<TagId> best_tags(const WeightedLabelling& labelling) {
  std::vector<TagId> out(labelling.size());
  for (std::size_t i = 0; i < labelling.size(); ++i) {
    const auto& c = labelling.candidates[i];
    const auto& w = labelling.weights[i];
    const auto& lex = labelling.lexical[i];
    std::size_t best = 0;
    for (std::size_t k = 1; k < c.size(); ++k) {
      if (w[k] > w[best] || (w[k] == w[best] && (lex[k] > lex[best] || (lex[k] == lex[best] && c[k] < c[best]))))
        best = k;
    }
    out[i] = c[best];
  }
  return out;
}

RelaxResult run(std::span<const std::string> words, const ConstraintSet& constraints, const Lexicon& lex,
                const TagSet& tagset, const RelaxParams& params, const RelaxObserver& observer) {
  params.validate();
  RelaxResult result;
  WeightedLabelling labelling = params.init == InitMode::kRandom
                                    ? init_random_weights(words, lex, tagset, params.seed)
                                    : init_weights(words, lex, tagset);
  const CompiledSentence compiled(words, labelling, constraints);
  result.diagnostics.instantiations = compiled.instantiation_count();

  std::vector<std::vector<double>> supports(labelling.size());
  for (std::size_t i = 0; i < labelling.size(); ++i) supports[i].assign(labelling.candidates[i].size(), 0.0);

  for (int iter = 1; iter <= params.max_iterations; ++iter) {
    for (std::size_t i = 0; i < labelling.size(); ++i) {
      if (labelling.candidates[i].size() < 2) continue;
      for (std::size_t j = 0; j < labelling.candidates[i].size(); ++j)
        supports[i][j] = normalize_support(compiled.raw_support(labelling, i, j), params);
    }
    auto step = update_step(labelling, supports);
    labelling = std::move(step.labelling);
    result.diagnostics.iterations = iter;
    result.diagnostics.max_change = step.max_change;
    result.diagnostics.frozen_words += step.frozen_words;
    if (observer) observer(labelling, iter);
    if (step.max_change < params.epsilon) {
      result.diagnostics.converged = true;
      break;
    }
  }
  result.tags = best_tags(labelling);
  result.labelling = std::move(labelling);
  return result;
}

}  // namespace reltag
