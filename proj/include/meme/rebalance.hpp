#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace meme::rebalance {

/// weight_c = N / (k * N_c); total effective mass is preserved.
struct ClassWeights {
    std::vector<double> weights;  // one per class
};

/// phrase (1-3 lowercase tokens) -> candidate replacement phrases
using ParaphraseLexicon = std::map<std::vector<std::string>, std::vector<std::string>>;

struct MissingClass : std::runtime_error {
    explicit MissingClass(int c)
        : std::runtime_error("class " + std::to_string(c) + " has no samples") {}
};
struct ClassTooSmall : std::runtime_error {
    explicit ClassTooSmall(int c)
        : std::runtime_error("class " + std::to_string(c) + " needs >= 2 samples for SMOTE") {}
};
struct BadK : std::runtime_error {
    BadK() : std::runtime_error("k_neighbors must be >= 1") {}
};

ClassWeights class_weights(const std::vector<int>& labels, int k);

struct SmoteResult {
    std::vector<std::vector<double>> X;  // originals first, verbatim, then synthetics
    std::vector<int> y;
};

/// Oversample every minority class up to the majority count by
/// interpolating toward one of the k Euclidean nearest same-class
/// neighbors: x_new = x + lambda (x_nn - x), lambda uniform in [0,1].
SmoteResult smote(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                  int k_neighbors, uint64_t seed);

/// A training sample as seen by the augmenter: tokenized text plus the
/// dense feature block that synthetic copies inherit verbatim.
struct AugmentSample {
    std::string id;
    std::vector<std::string> tokens;
    int label = 0;
    std::vector<double> dense;
};

/// Phrase-replacement augmentation. Per copy, tokens are scanned
/// left-to-right with longest lexicon match; each match is replaced with
/// probability p_replace by a uniformly chosen replacement. Copies with
/// no actual replacement are dropped. Per-sample seeds are derived from
/// (seed, sample id) so the output is order- and schedule-independent.
std::vector<AugmentSample> augment(const std::vector<AugmentSample>& samples,
                                   const ParaphraseLexicon& lex, double p_replace,
                                   int copies, uint64_t seed);

/// UTF-8 TSV: phrase<TAB>replacement1|replacement2|...
ParaphraseLexicon load_paraphrase_lexicon(const std::string& path);

}  // namespace meme::rebalance
