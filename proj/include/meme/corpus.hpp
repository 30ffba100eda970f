#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace meme::corpus {

enum class Category { Sentiment = 0, Humour, Sarcasm, Offensive, Motivational };

constexpr int kNumCategories = 5;

const char* category_name(Category c);
Category category_from_name(const std::string& name);

struct LabelSchema {
    Category category;
    std::vector<std::string> levels;  // ordered, unique

    int level_index(const std::string& level) const;  // -1 when unknown
    int size() const { return static_cast<int>(levels.size()); }
};

/// The five scaled (Task C) schemas, levels as printed in the corpus.
std::vector<LabelSchema> full_schemas();

/// Humour/sarcasm/offensive collapsed to binary; sentiment and
/// motivational unchanged.
std::vector<LabelSchema> binary_schemas();

struct Sample {
    std::string id;
    std::string text;
    std::optional<std::string> image_ref;
    int labels[kNumCategories];  // level index per category
};

struct Dataset {
    std::vector<Sample> samples;
    std::vector<LabelSchema> schema;

    size_t size() const { return samples.size(); }
    const LabelSchema& schema_for(Category c) const {
        return schema[static_cast<int>(c)];
    }
};

struct LevelStat {
    std::string level;
    long count;
    double pct;  // percentage, rounded half-up to 2 decimals
};

struct DistributionReport {
    std::map<std::string, std::vector<LevelStat>> per_category;
    std::string to_json() const;
    std::string to_text() const;
};

struct MissingColumn : std::runtime_error {
    explicit MissingColumn(const std::string& col)
        : std::runtime_error("missing column: " + col) {}
};
struct UnknownLabel : std::runtime_error {
    UnknownLabel(size_t row, const std::string& category, const std::string& value)
        : std::runtime_error("unknown label '" + value + "' for " + category +
                             " at row " + std::to_string(row)) {}
};
struct DuplicateId : std::runtime_error {
    explicit DuplicateId(const std::string& id)
        : std::runtime_error("duplicate id: " + id) {}
};
struct EmptyDataset : std::runtime_error {
    EmptyDataset() : std::runtime_error("dataset is empty") {}
};
struct RatioSumInvalid : std::runtime_error {
    RatioSumInvalid() : std::runtime_error("split ratios must be positive and sum to 1") {}
};
struct KTooLarge : std::runtime_error {
    KTooLarge() : std::runtime_error("fold count outside [2, N]") {}
};

/// Load a corpus CSV with header
/// id,image,text,sentiment,humour,sarcasm,offensive,motivational.
/// When image_dir is given, image_ref is set for rows whose image file
/// exists under it.
Dataset load_dataset(const std::string& csv_path,
                     const std::optional<std::string>& image_dir = std::nullopt);

DistributionReport distribution_report(const Dataset& d);

/// Collapse the scaled humour/sarcasm/offensive labels to binary:
/// the base ("not_*") level maps to 0, everything else to 1.
Dataset collapse_to_binary(const Dataset& d);

struct SplitResult {
    Dataset train, val, test;
};

SplitResult stratified_split(const Dataset& d, double train_ratio, double val_ratio,
                             double test_ratio, Category stratify_on, uint64_t seed);

struct Fold {
    std::vector<int> train_indices;
    std::vector<int> test_indices;
};

std::vector<Fold> kfold(const Dataset& d, int k, Category stratify_on, uint64_t seed);

}  // namespace meme::corpus
