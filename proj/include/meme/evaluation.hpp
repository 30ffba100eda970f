#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace meme::eval {

struct ConfusionMatrix {
    int k = 0;
    std::vector<long> counts;  // k*k, rows = gold, cols = predicted

    explicit ConfusionMatrix(int k_) : k(k_), counts(static_cast<size_t>(k_) * k_, 0) {}
    ConfusionMatrix(int k_, const std::vector<int>& gold, const std::vector<int>& pred);

    long& at(int gold, int pred) { return counts[static_cast<size_t>(gold) * k + pred]; }
    long at(int gold, int pred) const { return counts[static_cast<size_t>(gold) * k + pred]; }
    long total() const;
};

struct ClassScore {
    double precision = 0, recall = 0, f1 = 0;
};

struct Metrics {
    double accuracy = 0;
    double macro_f1 = 0;  // unweighted mean over all k classes, absent classes score 0
    std::vector<ClassScore> per_class;
};

struct EmptyMatrix : std::runtime_error {
    EmptyMatrix() : std::runtime_error("confusion matrix has no samples") {}
};
struct DegenerateInput : std::runtime_error {
    DegenerateInput() : std::runtime_error("kappa needs >= 2 raters and >= 2 categories") {}
};
struct LengthMismatch : std::runtime_error {
    LengthMismatch() : std::runtime_error("label vectors differ in length") {}
};
struct MissingScore : std::runtime_error {
    explicit MissingScore(const std::string& what)
        : std::runtime_error("missing score: " + what) {}
};

Metrics metrics(const ConfusionMatrix& cm);

struct FoldScore {
    double macro_f1 = 0, accuracy = 0;
};

struct CVReport {
    std::string category;
    std::vector<FoldScore> folds;
    double mean_f1 = 0, std_f1 = 0;
    double mean_acc = 0, std_acc = 0;

    void finalize();  // recompute mean and population std from folds
    std::string to_json() const;
};

struct AblationRow {
    bool balanced = false, augmentation = false, image_features = false;
    std::string descriptor() const;
    std::map<std::string, FoldScore> per_category;  // mean scores per category
};

std::string ablation_to_json(const std::vector<AblationRow>& rows);
std::string ablation_to_text(const std::vector<AblationRow>& rows);

/// Items x raters categorical ratings.
struct RatingsMatrix {
    int n_raters = 0;
    int k = 0;  // level count
    std::vector<std::vector<int>> rows;  // one row per item
};

/// Free-marginal multi-rater kappa:
///   P_o = mean_i sum_j n_ij (n_ij - 1) / (n (n - 1)),  kappa = (P_o - 1/k) / (1 - 1/k)
double randolph_kappa(const RatingsMatrix& r);

/// argmax macro-F1 per category, ties to the lexicographically first model.
std::map<std::string, std::string> select_best(
    const std::map<std::string, std::map<std::string, double>>& model_category_f1);

struct AnnotatorRow {
    std::string name;
    double macro_f1 = 0, accuracy = 0;
};

struct AnnotatorReport {
    std::vector<AnnotatorRow> annotators;
    AnnotatorRow average;  // unweighted mean over annotators
    AnnotatorRow model;
    std::string to_json() const;
    std::string to_text() const;
};

/// Score each annotator column and the model predictions against gold.
AnnotatorReport annotator_report(const RatingsMatrix& ratings, const std::vector<int>& gold,
                                 const std::vector<int>& model_preds);

}  // namespace meme::eval
