#include "meme/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "meme/csv.hpp"
#include "meme/rng.hpp"

namespace meme::corpus {

namespace {

const char* kCategoryNames[kNumCategories] = {"sentiment", "humour", "sarcasm",
                                              "offensive", "motivational"};

double round2(double x) { return std::floor(x * 100.0 + 0.5) / 100.0; }

}  // namespace

const char* category_name(Category c) { return kCategoryNames[static_cast<int>(c)]; }

Category category_from_name(const std::string& name) {
    for (int i = 0; i < kNumCategories; ++i) {
        if (name == kCategoryNames[i]) return static_cast<Category>(i);
    }
    throw std::runtime_error("unknown category: " + name);
}

int LabelSchema::level_index(const std::string& level) const {
    for (size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] == level) return static_cast<int>(i);
    }
    return -1;
}

std::vector<LabelSchema> full_schemas() {
    return {
        {Category::Sentiment, {"negative", "neutral", "positive"}},
        {Category::Humour, {"not_funny", "funny", "very_funny", "hilarious"}},
        {Category::Sarcasm,
         {"not_sarcastic", "general", "twisted_meaning", "very_twisted"}},
        {Category::Offensive,
         {"not_offensive", "slight_offensive", "very_offensive", "hateful_offensive"}},
        {Category::Motivational, {"not_motivational", "motivational"}},
    };
}

std::vector<LabelSchema> binary_schemas() {
    return {
        {Category::Sentiment, {"negative", "neutral", "positive"}},
        {Category::Humour, {"not_funny", "funny"}},
        {Category::Sarcasm, {"not_sarcastic", "sarcastic"}},
        {Category::Offensive, {"not_offensive", "offensive"}},
        {Category::Motivational, {"not_motivational", "motivational"}},
    };
}

Dataset load_dataset(const std::string& csv_path,
                     const std::optional<std::string>& image_dir) {
    auto rows = csv::parse_file(csv_path);
    if (rows.empty()) throw MissingColumn("id");

    const std::vector<std::string> expected = {"id",      "image",     "text",
                                               "sentiment", "humour",  "sarcasm",
                                               "offensive", "motivational"};
    const auto& header = rows[0];
    for (size_t i = 0; i < expected.size(); ++i) {
        if (i >= header.size() || header[i] != expected[i]) {
            throw MissingColumn(expected[i]);
        }
    }

    Dataset d;
    d.schema = full_schemas();
    std::set<std::string> seen_ids;
    for (size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() < expected.size()) throw MissingColumn("row " + std::to_string(r));
        Sample s;
        s.id = row[0];
        if (!seen_ids.insert(s.id).second) throw DuplicateId(s.id);
        s.text = row[2];
        for (int c = 0; c < kNumCategories; ++c) {
            const std::string& value = row[3 + c];
            int idx = d.schema[c].level_index(value);
            if (idx < 0) throw UnknownLabel(r, kCategoryNames[c], value);
            s.labels[c] = idx;
        }
        if (image_dir && !row[1].empty()) {
            auto path = std::filesystem::path(*image_dir) / row[1];
            if (std::filesystem::exists(path)) s.image_ref = path.string();
        }
        d.samples.push_back(std::move(s));
    }
    return d;
}

DistributionReport distribution_report(const Dataset& d) {
    if (d.samples.empty()) throw EmptyDataset();
    DistributionReport report;
    const double n = static_cast<double>(d.samples.size());
    for (int c = 0; c < kNumCategories; ++c) {
        const auto& schema = d.schema[c];
        std::vector<long> counts(schema.levels.size(), 0);
        for (const auto& s : d.samples) ++counts[s.labels[c]];
        std::vector<LevelStat> stats;
        for (size_t l = 0; l < schema.levels.size(); ++l) {
            stats.push_back({schema.levels[l], counts[l], round2(100.0 * counts[l] / n)});
        }
        report.per_category[kCategoryNames[c]] = std::move(stats);
    }
    return report;
}

std::string DistributionReport::to_json() const {
    nlohmann::ordered_json j;
    for (int c = 0; c < kNumCategories; ++c) {
        const char* name = kCategoryNames[c];
        auto it = per_category.find(name);
        if (it == per_category.end()) continue;
        nlohmann::ordered_json cat;
        for (const auto& stat : it->second) {
            cat[stat.level] = {{"count", stat.count}, {"pct", stat.pct}};
        }
        j[name] = cat;
    }
    return j.dump(2);
}

std::string DistributionReport::to_text() const {
    std::ostringstream os;
    for (int c = 0; c < kNumCategories; ++c) {
        const char* name = kCategoryNames[c];
        auto it = per_category.find(name);
        if (it == per_category.end()) continue;
        os << name << "\n";
        for (const auto& stat : it->second) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "  %-20s %6ld  %6.2f%%\n",
                          stat.level.c_str(), stat.count, stat.pct);
            os << buf;
        }
    }
    return os.str();
}

Dataset collapse_to_binary(const Dataset& d) {
    Dataset out;
    out.schema = binary_schemas();
    out.samples = d.samples;
    for (auto& s : out.samples) {
        for (Category c : {Category::Humour, Category::Sarcasm, Category::Offensive}) {
            int ci = static_cast<int>(c);
            const auto& levels = d.schema[ci].levels;
            // level 0 of the full schema is the base "not_*" level except
            // for sarcasm where the corpus ordering puts not_sarcastic first
            // as well; binary = 0 iff the label is the "not_*" level.
            const std::string& value = levels[s.labels[ci]];
            s.labels[ci] = (value.rfind("not_", 0) == 0) ? 0 : 1;
        }
    }
    return out;
}

namespace {

// Deterministic per-level shuffle used by both splitters.
std::vector<std::vector<int>> indices_by_level(const Dataset& d, Category cat,
                                               uint64_t seed) {
    int ci = static_cast<int>(cat);
    int n_levels = d.schema[ci].size();
    std::vector<std::vector<int>> groups(n_levels);
    for (size_t i = 0; i < d.samples.size(); ++i) {
        groups[d.samples[i].labels[ci]].push_back(static_cast<int>(i));
    }
    for (int l = 0; l < n_levels; ++l) {
        auto g = rng::make(rng::mix(seed, static_cast<uint64_t>(l)));
        std::shuffle(groups[l].begin(), groups[l].end(), g);
    }
    return groups;
}

Dataset subset(const Dataset& d, const std::vector<int>& indices) {
    Dataset out;
    out.schema = d.schema;
    out.samples.reserve(indices.size());
    for (int i : indices) out.samples.push_back(d.samples[i]);
    return out;
}

}  // namespace

SplitResult stratified_split(const Dataset& d, double train_ratio, double val_ratio,
                             double test_ratio, Category stratify_on, uint64_t seed) {
    const double ratios[3] = {train_ratio, val_ratio, test_ratio};
    double sum = ratios[0] + ratios[1] + ratios[2];
    if (std::abs(sum - 1.0) > 1e-9 || ratios[0] < 0 || ratios[1] < 0 || ratios[2] < 0) {
        throw RatioSumInvalid();
    }

    std::vector<int> parts[3];
    for (auto& group : indices_by_level(d, stratify_on, seed)) {
        size_t n = group.size();
        size_t counts[3];
        double fracs[3];
        size_t assigned = 0;
        for (int p = 0; p < 3; ++p) {
            double exact = n * ratios[p];
            counts[p] = static_cast<size_t>(std::floor(exact));
            fracs[p] = exact - counts[p];
            assigned += counts[p];
        }
        // distribute the remainder by largest fractional part, ties to the
        // earlier split; a level too small to reach every split lands in train
        while (assigned < n) {
            int best = 0;
            for (int p = 1; p < 3; ++p) {
                if (fracs[p] > fracs[best] + 1e-12) best = p;
            }
            ++counts[best];
            fracs[best] = -1.0;
            ++assigned;
        }
        size_t pos = 0;
        for (int p = 0; p < 3; ++p) {
            for (size_t i = 0; i < counts[p]; ++i) parts[p].push_back(group[pos++]);
        }
    }
    for (auto& part : parts) std::sort(part.begin(), part.end());
    return {subset(d, parts[0]), subset(d, parts[1]), subset(d, parts[2])};
}

std::vector<Fold> kfold(const Dataset& d, int k, Category stratify_on, uint64_t seed) {
    const int n = static_cast<int>(d.samples.size());
    if (k < 2 || k > n) throw KTooLarge();

    std::vector<std::vector<int>> test_sets(k);
    int next_fold = 0;
    for (const auto& group : indices_by_level(d, stratify_on, seed)) {
        for (int idx : group) {
            test_sets[next_fold].push_back(idx);
            next_fold = (next_fold + 1) % k;
        }
    }

    std::vector<Fold> folds(k);
    for (int f = 0; f < k; ++f) {
        std::sort(test_sets[f].begin(), test_sets[f].end());
        folds[f].test_indices = test_sets[f];
        for (int i = 0; i < n; ++i) {
            if (!std::binary_search(test_sets[f].begin(), test_sets[f].end(), i)) {
                folds[f].train_indices.push_back(i);
            }
        }
    }
    return folds;
}

}  // namespace meme::corpus
