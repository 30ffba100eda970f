#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "meme/classifier.hpp"
#include "meme/corpus.hpp"
#include "meme/evaluation.hpp"
#include "meme/image.hpp"
#include "meme/rebalance.hpp"
#include "meme/text.hpp"

namespace meme::pipeline {

struct FeatureFlags {
    bool tfidf = true;
    bool stylistic = true;
    bool ambiguity = true;
    bool image = true;    // HSV means, contrast, colourfulness, PAD (8 dims)
    bool emotion = true;  // facial-emotion 7-vector
};

struct RebalanceFlags {
    bool balanced = false;
    bool smote = false;
    bool augment = false;
    int smote_k = 5;
    double p_replace = 0.5;
    int copies = 1;
};

struct PipelineConfig {
    FeatureFlags features;
    RebalanceFlags rebalance;
    int min_df = 1;
    clf::TrainConfig train;
};

struct Lexicons {
    text::PosLexicon pos;
    text::SynonymLexicon synonyms;
    rebalance::ParaphraseLexicon paraphrases;
};

/// Fold-independent raw material for one sample: clean tokens plus the
/// dense block in the fixed order stylistic(7), ambiguity(3), image(8),
/// emotion(7), with disabled blocks omitted.
struct SampleFeatures {
    std::string id;
    text::CleanText clean;
    std::vector<double> dense;
};

/// Extract per-sample features; images are loaded from sample.image_ref
/// and samples without one get zeros for the image block.
std::vector<SampleFeatures> extract_features(const corpus::Dataset& d,
                                             const Lexicons& lexicons,
                                             const img::EmotionTable& emotions,
                                             const FeatureFlags& flags);

/// Names of the dense columns under a flag set, in assembly order.
std::vector<std::string> dense_feature_names(const FeatureFlags& flags);

/// Per-column z-scoring fitted on training rows; zero-variance columns
/// pass through centered only.
struct Standardizer {
    std::vector<double> mean, stddev;
    void fit(const std::vector<std::vector<double>>& rows);
    std::vector<double> transform(const std::vector<double>& row) const;
};

/// Records which sample indices each fitted statistic saw, so tests can
/// prove no test-fold index ever leaks into a fit.
struct LeakageAudit {
    struct Event {
        std::string stage;  // "augment", "tfidf", "scaler", "smote"
        int fold;
        std::vector<int> sample_indices;
    };
    std::mutex mu;
    std::vector<Event> events;

    void record(const std::string& stage, int fold, std::vector<int> indices);
};

struct FittedPipeline {
    PipelineConfig config;
    text::TfidfModel tfidf;
    Standardizer scaler;
    clf::LRModel model;

    std::vector<double> vectorize(const SampleFeatures& s) const;
    int predict(const SampleFeatures& s) const;

    std::string to_json() const;
    static FittedPipeline from_json(const std::string& json_text);
};

/// Fit the full pipeline on the given training rows (augmentation ->
/// tfidf/scaler fit -> assembly -> SMOTE -> weighted training).
/// `indices` are positions into `features`/`labels`; `fold` and `audit`
/// are optional instrumentation.
FittedPipeline train_pipeline(const std::vector<SampleFeatures>& features,
                              const std::vector<int>& labels, int n_classes,
                              const std::vector<int>& indices, const PipelineConfig& config,
                              const Lexicons& lexicons, uint64_t seed,
                              LeakageAudit* audit = nullptr, int fold = -1);

/// Stratified k-fold cross validation of the pipeline for one category.
/// Folds may run on up to `jobs` threads; per-fold seeds are derived
/// from (seed, fold) so results do not depend on the schedule.
eval::CVReport cross_validate(const corpus::Dataset& d, corpus::Category category,
                              const PipelineConfig& config, int k, uint64_t seed,
                              const Lexicons& lexicons, const img::EmotionTable& emotions,
                              int jobs = 1, LeakageAudit* audit = nullptr);

/// The 8-row grid over {balanced, augmentation, image_features} on top
/// of the tfidf + stylistic + ambiguity base, one cross_validate each,
/// for every requested category.
std::vector<eval::AblationRow> ablation(const corpus::Dataset& d,
                                        const std::vector<corpus::Category>& categories,
                                        const PipelineConfig& base_config, int k,
                                        uint64_t seed, const Lexicons& lexicons,
                                        const img::EmotionTable& emotions, int jobs = 1);

}  // namespace meme::pipeline
