#pragma once

#include <cstdint>
#include <string>

namespace meme::fixtures {

/// Generate a deterministic desk-scale fixture under `out_dir`:
///   corpus.csv    40-sample multimodal corpus (all five categories,
///                 every level represented at least 5 times)
///   images/       solid-color and checkerboard PNGs for most samples
///   emotion.csv   precomputed facial-emotion vectors for some samples
///   pos.tsv, synonyms.tsv, paraphrases.tsv
///   ratings.csv   100-item 4-rater agreement fixture
/// Everything is a pure function of `seed`.
void generate(const std::string& out_dir, uint64_t seed);

}  // namespace meme::fixtures
