#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "meme/fixtures.hpp"
#include "meme/pipeline.hpp"

using namespace meme;
namespace fs = std::filesystem;

namespace {

struct Fixture {
    corpus::Dataset data;
    pipeline::Lexicons lexicons;
    img::EmotionTable emotions;
};

const Fixture& fixture() {
    static Fixture f = [] {
        const std::string dir = "test_tmp/fixture";
        fixtures::generate(dir, 5);
        Fixture out;
        out.data = corpus::load_dataset(dir + "/corpus.csv", dir + "/images");
        out.lexicons.pos = text::load_pos_lexicon(dir + "/pos.tsv");
        out.lexicons.synonyms = text::load_synonym_lexicon(dir + "/synonyms.tsv");
        out.lexicons.paraphrases = rebalance::load_paraphrase_lexicon(dir + "/paraphrases.tsv");
        out.emotions = img::load_emotion_table(dir + "/emotion.csv");
        return out;
    }();
    return f;
}

pipeline::PipelineConfig fast_config() {
    pipeline::PipelineConfig c;
    c.train.lambda = 1e-3;
    c.train.max_iters = 200;
    return c;
}

// 60-sample corpus whose text determines sentiment exactly
corpus::Dataset separable_dataset() {
    const char* kClassWord[3] = {"terrible", "plain", "wonderful"};
    auto schemas = corpus::full_schemas();
    fs::create_directories("test_tmp");
    std::string csv = "id,image,text,sentiment,humour,sarcasm,offensive,motivational\n";
    for (int i = 0; i < 60; ++i) {
        int c = i % 3;
        csv += "s" + std::to_string(i) + ",,filler " + kClassWord[c] + " words," +
               schemas[0].levels[c] + ",funny,general,not_offensive,motivational\n";
    }
    std::ofstream("test_tmp/separable.csv") << csv;
    return corpus::load_dataset("test_tmp/separable.csv");
}

}  // namespace

TEST_CASE("extract_features dense width matches the declared names") {
    const auto& f = fixture();
    pipeline::FeatureFlags flags;
    auto names = pipeline::dense_feature_names(flags);
    CHECK(names.size() == 7 + 3 + 8 + 7);
    auto features = pipeline::extract_features(f.data, f.lexicons, f.emotions, flags);
    REQUIRE(features.size() == 40);
    for (const auto& s : features) CHECK(s.dense.size() == names.size());

    flags.image = false;
    flags.emotion = false;
    auto text_only = pipeline::extract_features(f.data, f.lexicons, f.emotions, flags);
    CHECK(text_only[0].dense.size() == 10);
    CHECK(pipeline::dense_feature_names(flags).size() == 10);
}

TEST_CASE("samples without an image get a zero image block") {
    const auto& f = fixture();
    pipeline::FeatureFlags flags;
    auto features = pipeline::extract_features(f.data, f.lexicons, f.emotions, flags);
    for (size_t i = 0; i < f.data.samples.size(); ++i) {
        if (f.data.samples[i].image_ref) continue;
        // image block sits after stylistic(7) + ambiguity(3)
        for (int j = 10; j < 18; ++j) CHECK(features[i].dense[j] == 0.0);
    }
}

TEST_CASE("standardizer normalizes training columns") {
    pipeline::Standardizer s;
    s.fit({{1.0, 5.0}, {3.0, 5.0}});
    CHECK(s.mean[0] == doctest::Approx(2.0));
    CHECK(s.stddev[0] == doctest::Approx(1.0));
    CHECK(s.transform({1.0, 5.0})[0] == doctest::Approx(-1.0));
    // constant column: centered only
    CHECK(s.stddev[1] == 1.0);
    CHECK(s.transform({0.0, 6.0})[1] == doctest::Approx(1.0));
}

TEST_CASE("no fitted statistic ever sees a test-fold sample") {
    const auto& f = fixture();
    auto config = fast_config();
    config.rebalance.balanced = true;
    config.rebalance.smote = true;
    config.rebalance.smote_k = 2;
    config.rebalance.augment = true;

    pipeline::LeakageAudit audit;
    auto report = cross_validate(f.data, corpus::Category::Sentiment, config, 4, 11,
                                 f.lexicons, f.emotions, 1, &audit);
    CHECK(report.folds.size() == 4);

    auto folds = corpus::kfold(f.data, 4, corpus::Category::Sentiment, 11);
    std::set<std::string> stages_seen;
    CHECK_FALSE(audit.events.empty());
    for (const auto& e : audit.events) {
        stages_seen.insert(e.stage);
        REQUIRE(e.fold >= 0);
        REQUIRE(e.fold < 4);
        std::set<int> test_set(folds[e.fold].test_indices.begin(),
                               folds[e.fold].test_indices.end());
        for (int i : e.sample_indices) CHECK(test_set.count(i) == 0);
    }
    CHECK(stages_seen == std::set<std::string>{"augment", "tfidf", "scaler", "smote"});
}

TEST_CASE("cross_validate is deterministic and schedule independent") {
    const auto& f = fixture();
    auto config = fast_config();
    config.rebalance.balanced = true;
    config.rebalance.augment = true;

    auto a = cross_validate(f.data, corpus::Category::Humour, config, 4, 7, f.lexicons,
                            f.emotions, 1);
    auto b = cross_validate(f.data, corpus::Category::Humour, config, 4, 7, f.lexicons,
                            f.emotions, 1);
    auto threaded = cross_validate(f.data, corpus::Category::Humour, config, 4, 7, f.lexicons,
                                   f.emotions, 2);
    CHECK(a.to_json() == b.to_json());
    CHECK(a.to_json() == threaded.to_json());

    auto other_seed = cross_validate(f.data, corpus::Category::Humour, config, 4, 8,
                                     f.lexicons, f.emotions, 1);
    CHECK(other_seed.to_json() != a.to_json());
}

TEST_CASE("cross_validate learns a separable text problem") {
    auto d = separable_dataset();
    pipeline::Lexicons empty_lexicons;
    img::EmotionTable no_emotions;
    auto config = fast_config();
    config.features.image = false;
    config.features.emotion = false;

    auto report = cross_validate(d, corpus::Category::Sentiment, config, 5, 3,
                                 empty_lexicons, no_emotions, 1);
    CHECK(report.mean_acc >= 0.95);
    CHECK(report.mean_f1 >= 0.95);
}

TEST_CASE("ablation emits the fixed eight-row grid") {
    const auto& f = fixture();
    auto config = fast_config();
    config.train.max_iters = 60;  // keep the 8x cv affordable
    auto rows = pipeline::ablation(f.data, {corpus::Category::Sentiment}, config, 3, 9,
                                   f.lexicons, f.emotions, 2);
    REQUIRE(rows.size() == 8);

    std::set<std::string> descriptors;
    for (const auto& row : rows) {
        descriptors.insert(row.descriptor());
        CHECK(row.per_category.count("sentiment") == 1);
    }
    CHECK(descriptors.size() == 8);

    CHECK(rows[0].descriptor() == "tfidf+dense_text");
    CHECK(rows[1].balanced);
    CHECK_FALSE(rows[1].augmentation);
    CHECK(rows[2].augmentation);
    CHECK(rows[3].image_features);
    CHECK((rows[7].balanced && rows[7].augmentation && rows[7].image_features));
}

TEST_CASE("augmentation rows collapse onto their base rows without paraphrases") {
    const auto& f = fixture();
    pipeline::Lexicons no_paraphrases = f.lexicons;
    no_paraphrases.paraphrases.clear();
    auto config = fast_config();
    config.train.max_iters = 60;
    auto rows = pipeline::ablation(f.data, {corpus::Category::Motivational}, config, 3, 21,
                                   no_paraphrases, f.emotions, 2);
    REQUIRE(rows.size() == 8);
    auto same = [](const eval::AblationRow& x, const eval::AblationRow& y) {
        const auto& a = x.per_category.at("motivational");
        const auto& b = y.per_category.at("motivational");
        return a.macro_f1 == b.macro_f1 && a.accuracy == b.accuracy;
    };
    CHECK(same(rows[2], rows[0]));  // +augmentation vs base
    CHECK(same(rows[4], rows[1]));  // +balanced+augmentation vs +balanced
    CHECK(same(rows[6], rows[3]));  // +augmentation+image vs +image
    CHECK(same(rows[7], rows[5]));
}

TEST_CASE("balanced weighting never lowers minority predictions here") {
    // one dense feature, 20 majority points left of 5 overlapping minority
    std::vector<pipeline::SampleFeatures> features;
    std::vector<int> labels;
    std::vector<int> indices;
    for (int i = 0; i < 20; ++i) {
        features.push_back({"maj" + std::to_string(i), {}, {static_cast<double>(i)}});
        labels.push_back(0);
        indices.push_back(static_cast<int>(indices.size()));
    }
    for (int i = 0; i < 5; ++i) {
        features.push_back({"min" + std::to_string(i), {}, {14.0 + i}});
        labels.push_back(1);
        indices.push_back(static_cast<int>(indices.size()));
    }

    pipeline::PipelineConfig config;
    config.features = {false, false, false, false, false};
    config.train.lambda = 1e-3;
    pipeline::Lexicons none;

    auto count_minority = [&](bool balanced) {
        auto c = config;
        c.rebalance.balanced = balanced;
        auto fitted = pipeline::train_pipeline(features, labels, 2, indices, c, none, 1);
        int n = 0;
        for (const auto& s : features) n += fitted.predict(s);
        return n;
    };
    int with = count_minority(true), without = count_minority(false);
    CHECK(with >= without);
    CHECK(with >= 1);
}

TEST_CASE("fitted pipeline round trips through json") {
    const auto& f = fixture();
    auto features = pipeline::extract_features(f.data, f.lexicons, f.emotions,
                                               fast_config().features);
    std::vector<int> labels;
    for (const auto& s : f.data.samples) labels.push_back(s.labels[0]);
    std::vector<int> indices;
    for (int i = 0; i < 30; ++i) indices.push_back(i);

    auto config = fast_config();
    config.rebalance.balanced = true;
    auto fitted = pipeline::train_pipeline(features, labels, 3, indices, config, f.lexicons, 4);

    auto restored = pipeline::FittedPipeline::from_json(fitted.to_json());
    CHECK(restored.tfidf.vocabulary == fitted.tfidf.vocabulary);
    CHECK(restored.scaler.mean == fitted.scaler.mean);
    for (const auto& s : features) {
        CHECK(restored.predict(s) == fitted.predict(s));
        CHECK(restored.vectorize(s) == fitted.vectorize(s));
    }
}
