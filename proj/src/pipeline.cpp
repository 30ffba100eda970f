#include "meme/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <nlohmann/json.hpp>

#include "meme/image_io.hpp"
#include "meme/rng.hpp"

namespace meme::pipeline {

std::vector<std::string> dense_feature_names(const FeatureFlags& flags) {
    std::vector<std::string> names;
    if (flags.stylistic) {
        for (const char* n : {"n_words", "n_noun", "n_verb", "n_adj", "r_noun", "r_verb",
                              "r_adj"}) {
            names.push_back(n);
        }
    }
    if (flags.ambiguity) {
        for (const char* n : {"mean_synset_len", "max_synset_len", "synset_gap"}) {
            names.push_back(n);
        }
    }
    if (flags.image) {
        for (const char* n : {"h_image", "s_image", "v_image", "rms_contrast",
                              "colourfulness", "pleasure", "arousal", "dominance"}) {
            names.push_back(n);
        }
    }
    if (flags.emotion) {
        for (const char* n : img::kEmotionNames) names.push_back(n);
    }
    return names;
}

std::vector<SampleFeatures> extract_features(const corpus::Dataset& d,
                                             const Lexicons& lexicons,
                                             const img::EmotionTable& emotions,
                                             const FeatureFlags& flags) {
    std::vector<SampleFeatures> out;
    out.reserve(d.samples.size());
    for (const auto& sample : d.samples) {
        SampleFeatures f;
        f.id = sample.id;
        f.clean = text::preprocess(sample.text);

        if (flags.stylistic) {
            auto tags = text::pos_tag(f.clean, lexicons.pos);
            auto s = text::stylistic_features(f.clean, tags);
            for (double v : {static_cast<double>(s.n_words), static_cast<double>(s.n_noun),
                             static_cast<double>(s.n_verb), static_cast<double>(s.n_adj),
                             s.r_noun, s.r_verb, s.r_adj}) {
                f.dense.push_back(v);
            }
        }
        if (flags.ambiguity) {
            auto a = text::ambiguity_features(f.clean, lexicons.synonyms);
            f.dense.push_back(a.mean_synset_len);
            f.dense.push_back(static_cast<double>(a.max_synset_len));
            f.dense.push_back(a.synset_gap);
        }
        if (flags.image || flags.emotion) {
            std::optional<img::PixelGrid> grid;
            if (flags.image && sample.image_ref) grid = io::load_image(*sample.image_ref);
            img::ImageFeatures feats =
                img::image_features(grid, img::attach_emotion(emotions, sample.id));
            if (flags.image) {
                for (int i = 0; i < 8; ++i) f.dense.push_back(feats[i]);
            }
            if (flags.emotion) {
                for (int i = 8; i < img::kImageFeatureDim; ++i) f.dense.push_back(feats[i]);
            }
        }
        out.push_back(std::move(f));
    }
    return out;
}

void Standardizer::fit(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) {
        mean.clear();
        stddev.clear();
        return;
    }
    const size_t dim = rows[0].size();
    const double n = static_cast<double>(rows.size());
    mean.assign(dim, 0.0);
    stddev.assign(dim, 0.0);
    for (const auto& row : rows) {
        for (size_t j = 0; j < dim; ++j) mean[j] += row[j];
    }
    for (size_t j = 0; j < dim; ++j) mean[j] /= n;
    for (const auto& row : rows) {
        for (size_t j = 0; j < dim; ++j) {
            stddev[j] += (row[j] - mean[j]) * (row[j] - mean[j]);
        }
    }
    for (size_t j = 0; j < dim; ++j) {
        stddev[j] = std::sqrt(stddev[j] / n);
        if (stddev[j] == 0.0) stddev[j] = 1.0;  // constant column, center only
    }
}

std::vector<double> Standardizer::transform(const std::vector<double>& row) const {
    std::vector<double> out(row.size());
    for (size_t j = 0; j < row.size(); ++j) out[j] = (row[j] - mean[j]) / stddev[j];
    return out;
}

void LeakageAudit::record(const std::string& stage, int fold, std::vector<int> indices) {
    std::lock_guard<std::mutex> lock(mu);
    events.push_back({stage, fold, std::move(indices)});
}

namespace {

std::vector<double> assemble_row(const text::TfidfModel& tfidf, const Standardizer& scaler,
                                 const PipelineConfig& config, const text::CleanText& clean,
                                 const std::vector<double>& dense) {
    std::vector<double> row;
    if (config.features.tfidf) {
        row.assign(tfidf.dim(), 0.0);
        for (const auto& [col, value] : text::transform_tfidf(tfidf, clean)) row[col] = value;
    }
    if (!dense.empty()) {
        for (double v : scaler.transform(dense)) row.push_back(v);
    }
    return row;
}

}  // namespace

std::vector<double> FittedPipeline::vectorize(const SampleFeatures& s) const {
    return assemble_row(tfidf, scaler, config, s.clean, s.dense);
}

int FittedPipeline::predict(const SampleFeatures& s) const {
    return clf::predict(model, vectorize(s));
}

FittedPipeline train_pipeline(const std::vector<SampleFeatures>& features,
                              const std::vector<int>& labels, int n_classes,
                              const std::vector<int>& indices, const PipelineConfig& config,
                              const Lexicons& lexicons, uint64_t seed, LeakageAudit* audit,
                              int fold) {
    // 1. text-level augmentation on the training rows only
    std::vector<rebalance::AugmentSample> train_rows;
    train_rows.reserve(indices.size());
    for (int i : indices) {
        train_rows.push_back(
            {features[i].id, features[i].clean.tokens, labels[i], features[i].dense});
    }
    if (config.rebalance.augment) {
        if (audit) audit->record("augment", fold, indices);
        train_rows = rebalance::augment(train_rows, lexicons.paraphrases,
                                        config.rebalance.p_replace, config.rebalance.copies,
                                        rng::mix(seed, uint64_t{1}));
    }

    FittedPipeline fitted;
    fitted.config = config;

    // 2. fit vectorizers on the (possibly augmented) training text
    if (config.features.tfidf) {
        if (audit) audit->record("tfidf", fold, indices);
        std::vector<text::CleanText> docs;
        docs.reserve(train_rows.size());
        for (const auto& row : train_rows) docs.push_back({row.tokens});
        fitted.tfidf = text::fit_tfidf(docs, config.min_df);
    }
    {
        if (audit) audit->record("scaler", fold, indices);
        std::vector<std::vector<double>> dense_rows;
        dense_rows.reserve(train_rows.size());
        for (const auto& row : train_rows) dense_rows.push_back(row.dense);
        fitted.scaler.fit(dense_rows);
    }

    // 3. assemble the design matrix
    std::vector<std::vector<double>> X;
    std::vector<int> y;
    X.reserve(train_rows.size());
    for (const auto& row : train_rows) {
        X.push_back(assemble_row(fitted.tfidf, fitted.scaler, config, {row.tokens}, row.dense));
        y.push_back(row.label);
    }

    // 4. feature-space resampling
    if (config.rebalance.smote) {
        if (audit) audit->record("smote", fold, indices);
        auto resampled = rebalance::smote(X, y, config.rebalance.smote_k,
                                          rng::mix(seed, uint64_t{2}));
        X = std::move(resampled.X);
        y = std::move(resampled.y);
    }

    // 5. weighted training
    clf::TrainConfig train_cfg = config.train;
    if (config.rebalance.balanced) {
        // class_weights requires every class present; classes missing from
        // this training fold get weight 0 contributions anyway
        std::vector<long> counts(n_classes, 0);
        for (int label : y) ++counts[label];
        std::vector<double> per_class(n_classes, 0.0);
        const double n = static_cast<double>(y.size());
        for (int c = 0; c < n_classes; ++c) {
            if (counts[c] > 0) per_class[c] = n / (n_classes * static_cast<double>(counts[c]));
        }
        train_cfg.sample_weights.clear();
        for (int label : y) train_cfg.sample_weights.push_back(per_class[label]);
    }

    clf::Matrix design(static_cast<int>(X.size()), X.empty() ? 0 : static_cast<int>(X[0].size()));
    for (size_t i = 0; i < X.size(); ++i) {
        std::copy(X[i].begin(), X[i].end(), design.row(static_cast<int>(i)));
    }
    fitted.model = clf::fit(design, y, train_cfg);
    return fitted;
}

eval::CVReport cross_validate(const corpus::Dataset& d, corpus::Category category,
                              const PipelineConfig& config, int k, uint64_t seed,
                              const Lexicons& lexicons, const img::EmotionTable& emotions,
                              int jobs, LeakageAudit* audit) {
    const int ci = static_cast<int>(category);
    const int n_classes = d.schema[ci].size();

    auto features = extract_features(d, lexicons, emotions, config.features);
    std::vector<int> labels;
    labels.reserve(d.samples.size());
    for (const auto& s : d.samples) labels.push_back(s.labels[ci]);

    auto folds = corpus::kfold(d, k, category, seed);

    eval::CVReport report;
    report.category = corpus::category_name(category);
    report.folds.resize(folds.size());

    auto run_fold = [&](int f) {
        const auto& fold = folds[f];
        uint64_t fold_seed = rng::mix(seed, static_cast<uint64_t>(f + 100));
        FittedPipeline fitted = train_pipeline(features, labels, n_classes,
                                               fold.train_indices, config, lexicons,
                                               fold_seed, audit, f);
        std::vector<int> gold, pred;
        for (int i : fold.test_indices) {
            gold.push_back(labels[i]);
            pred.push_back(fitted.predict(features[i]));
        }
        eval::Metrics m = eval::metrics(eval::ConfusionMatrix(n_classes, gold, pred));
        report.folds[f] = {m.macro_f1, m.accuracy};
    };

    jobs = std::max(1, jobs);
    if (jobs == 1) {
        for (size_t f = 0; f < folds.size(); ++f) run_fold(static_cast<int>(f));
    } else {
        std::vector<std::thread> workers;
        std::atomic<int> next{0};
        int n_workers = std::min<int>(jobs, static_cast<int>(folds.size()));
        for (int w = 0; w < n_workers; ++w) {
            workers.emplace_back([&] {
                for (int f = next.fetch_add(1); f < static_cast<int>(folds.size());
                     f = next.fetch_add(1)) {
                    run_fold(f);
                }
            });
        }
        for (auto& worker : workers) worker.join();
    }

    report.finalize();
    return report;
}

std::vector<eval::AblationRow> ablation(const corpus::Dataset& d,
                                        const std::vector<corpus::Category>& categories,
                                        const PipelineConfig& base_config, int k,
                                        uint64_t seed, const Lexicons& lexicons,
                                        const img::EmotionTable& emotions, int jobs) {
    // fixed row order: base, +balanced, +augmentation, +image,
    // +balanced+augmentation, +balanced+image, +augmentation+image, all three
    static const bool kGrid[8][3] = {{false, false, false}, {true, false, false},
                                     {false, true, false},  {false, false, true},
                                     {true, true, false},   {true, false, true},
                                     {false, true, true},   {true, true, true}};

    std::vector<eval::AblationRow> rows;
    for (const auto& [balanced, augmentation, image_features] : kGrid) {
        eval::AblationRow row;
        row.balanced = balanced;
        row.augmentation = augmentation;
        row.image_features = image_features;

        PipelineConfig config = base_config;
        config.features.tfidf = true;
        config.features.stylistic = true;
        config.features.ambiguity = true;
        config.features.image = image_features;
        config.features.emotion = image_features;
        config.rebalance.balanced = balanced;
        config.rebalance.augment = augmentation;

        for (corpus::Category category : categories) {
            auto report = cross_validate(d, category, config, k, seed, lexicons, emotions, jobs);
            row.per_category[corpus::category_name(category)] = {report.mean_f1,
                                                                 report.mean_acc};
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string FittedPipeline::to_json() const {
    nlohmann::ordered_json j;
    j["config"] = {{"features",
                    {{"tfidf", config.features.tfidf},
                     {"stylistic", config.features.stylistic},
                     {"ambiguity", config.features.ambiguity},
                     {"image", config.features.image},
                     {"emotion", config.features.emotion}}},
                   {"rebalance",
                    {{"balanced", config.rebalance.balanced},
                     {"smote", config.rebalance.smote},
                     {"augment", config.rebalance.augment},
                     {"smote_k", config.rebalance.smote_k},
                     {"p_replace", config.rebalance.p_replace},
                     {"copies", config.rebalance.copies}}},
                   {"min_df", config.min_df}};
    nlohmann::ordered_json vocab;
    for (const auto& [gram, col] : tfidf.vocabulary) vocab[gram] = col;
    j["tfidf"] = {{"vocabulary", vocab}, {"idf", tfidf.idf}, {"n_docs", tfidf.n_docs}};
    j["scaler"] = {{"mean", scaler.mean}, {"stddev", scaler.stddev}};
    j["model"] = nlohmann::ordered_json::parse(model.to_json());
    return j.dump(2);
}

FittedPipeline FittedPipeline::from_json(const std::string& json_text) {
    auto j = nlohmann::json::parse(json_text);
    FittedPipeline p;
    const auto& jf = j.at("config").at("features");
    p.config.features = {jf.at("tfidf"), jf.at("stylistic"), jf.at("ambiguity"),
                         jf.at("image"), jf.at("emotion")};
    const auto& jr = j.at("config").at("rebalance");
    p.config.rebalance.balanced = jr.at("balanced");
    p.config.rebalance.smote = jr.at("smote");
    p.config.rebalance.augment = jr.at("augment");
    p.config.rebalance.smote_k = jr.at("smote_k");
    p.config.rebalance.p_replace = jr.at("p_replace");
    p.config.rebalance.copies = jr.at("copies");
    p.config.min_df = j.at("config").at("min_df");
    for (const auto& [gram, col] : j.at("tfidf").at("vocabulary").items()) {
        p.tfidf.vocabulary[gram] = col.get<int>();
    }
    p.tfidf.idf = j.at("tfidf").at("idf").get<std::vector<double>>();
    p.tfidf.n_docs = j.at("tfidf").at("n_docs").get<long>();
    p.scaler.mean = j.at("scaler").at("mean").get<std::vector<double>>();
    p.scaler.stddev = j.at("scaler").at("stddev").get<std::vector<double>>();
    p.model = clf::LRModel::from_json(j.at("model").dump());
    return p;
}

}  // namespace meme::pipeline
