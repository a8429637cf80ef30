#include "reltag/parallel.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "reltag/random.hpp"

namespace reltag {

namespace {

// Exceptions must not escape an OpenMP region; keep the first and rethrow.
class FirstError {
 public:
  template <typename F>
  void guard(F&& f) noexcept {
    try {
      f();
    } catch (...) {
#pragma omp critical(reltag_first_error)
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

}  // namespace

CorpusTagging tag_corpus_serial(const Tagger& tagger, const std::vector<std::vector<std::string>>& sentences) {
  CorpusTagging out;
  out.tags.resize(sentences.size());
  out.diagnostics.resize(sentences.size());
  for (std::size_t s = 0; s < sentences.size(); ++s) out.tags[s] = tagger.tag(sentences[s], &out.diagnostics[s]);
  return out;
}

CorpusTagging tag_corpus(const Tagger& tagger, const std::vector<std::vector<std::string>>& sentences) {
  CorpusTagging out;
  out.tags.resize(sentences.size());
  out.diagnostics.resize(sentences.size());
  FirstError err;
  const auto n = static_cast<std::ptrdiff_t>(sentences.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t s = 0; s < n; ++s) {
    const auto k = static_cast<std::size_t>(s);
    err.guard([&] { out.tags[k] = tagger.tag(sentences[k], &out.diagnostics[k]); });
  }
  err.rethrow();
  return out;
}

std::vector<LearnedTree> learn_trees_serial(const std::vector<AmbiguityClass>& classes,
                                            const std::vector<TaggedSentence>& train, const LearnerParams& params,
                                            std::uint64_t seed) {
  std::vector<LearnedTree> out;
  out.reserve(classes.size());
  for (std::size_t k = 0; k < classes.size(); ++k)
    out.push_back(learn_class_tree(classes[k], train, params, derive_seed(seed, k)));
  return out;
}

std::vector<LearnedTree> learn_trees(const std::vector<AmbiguityClass>& classes,
                                     const std::vector<TaggedSentence>& train, const LearnerParams& params,
                                     std::uint64_t seed) {
  std::vector<LearnedTree> out(classes.size());
  FirstError err;
  const auto n = static_cast<std::ptrdiff_t>(classes.size());
  // class sizes are very uneven; hand them out one at a time
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t s = 0; s < n; ++s) {
    const auto k = static_cast<std::size_t>(s);
    err.guard([&] { out[k] = learn_class_tree(classes[k], train, params, derive_seed(seed, k)); });
  }
  err.rethrow();
  return out;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace reltag
