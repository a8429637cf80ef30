#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reltag/relax.hpp"
#include "reltag/tagger.hpp"
#include "reltag/tree.hpp"

namespace reltag {

struct CorpusTagging {
  std::vector<std::vector<TagId>> tags;
  std::vector<RelaxDiagnostics> diagnostics;  // one per sentence; default for baselines
};

/// Tags sentences one after another. Reference for tag_corpus().
CorpusTagging tag_corpus_serial(const Tagger& tagger, const std::vector<std::vector<std::string>>& sentences);

/// Same result as tag_corpus_serial(), sentences distributed over OpenMP
/// threads.
CorpusTagging tag_corpus(const Tagger& tagger, const std::vector<std::vector<std::string>>& sentences);

/// One tree per class; class k draws its holdout with derive_seed(seed, k),
/// so the output does not depend on scheduling.
std::vector<LearnedTree> learn_trees_serial(const std::vector<AmbiguityClass>& classes,
                                            const std::vector<TaggedSentence>& train, const LearnerParams& params,
                                            std::uint64_t seed);

std::vector<LearnedTree> learn_trees(const std::vector<AmbiguityClass>& classes,
                                     const std::vector<TaggedSentence>& train, const LearnerParams& params,
                                     std::uint64_t seed);

/// Threads OpenMP would use; 1 when built without OpenMP.
int max_threads();

}  // namespace reltag
