#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "meme/corpus.hpp"
#include "meme/csv.hpp"
#include "meme/evaluation.hpp"
#include "meme/fixtures.hpp"
#include "meme/image.hpp"
#include "meme/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Overwrite-on-success: write to a temp file, then rename into place.
void atomic_write(const std::string& path, const std::string& content) {
    if (path == "-" || path.empty()) {
        std::cout << content;
        return;
    }
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << content;
    }
    fs::rename(tmp, target);
}

struct CommonOpts {
    std::string data;
    std::string images;
    std::string emotion;
    std::string pos_lex, syn_lex, para_lex;
    std::string category = "sentiment";
    std::string out = "-";
    uint64_t seed = 0;
    int folds = 10;
    int jobs = 1;
    bool binary = false;
    std::string config;  // JSON config file, applied before CLI flags

    meme::pipeline::PipelineConfig pipeline;
};

void add_data_options(CLI::App* cmd, CommonOpts& o, bool with_images = true) {
    cmd->add_option("--data", o.data, "corpus CSV")->check(CLI::ExistingFile);
    if (with_images) {
        cmd->add_option("--images", o.images, "image directory")->check(CLI::ExistingDirectory);
        cmd->add_option("--emotion", o.emotion, "precomputed emotion table CSV")
            ->check(CLI::ExistingFile);
    }
}

void add_lexicon_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--pos-lex", o.pos_lex, "POS lexicon TSV")->check(CLI::ExistingFile);
    cmd->add_option("--syn-lex", o.syn_lex, "synonym lexicon TSV")->check(CLI::ExistingFile);
    cmd->add_option("--para-lex", o.para_lex, "paraphrase lexicon TSV")
        ->check(CLI::ExistingFile);
}

void add_pipeline_options(CLI::App* cmd, CommonOpts& o) {
    auto& p = o.pipeline;
    cmd->add_option("--config", o.config, "JSON config file (explicit flags override)")
        ->check(CLI::ExistingFile);
    cmd->add_flag("--no-tfidf", [&p](int64_t) { p.features.tfidf = false; },
                  "disable TFIDF features");
    cmd->add_flag("--no-stylistic", [&p](int64_t) { p.features.stylistic = false; },
                  "disable stylistic features");
    cmd->add_flag("--no-ambiguity", [&p](int64_t) { p.features.ambiguity = false; },
                  "disable ambiguity features");
    cmd->add_flag("--no-image", [&p](int64_t) { p.features.image = false; },
                  "disable image features");
    cmd->add_flag("--no-emotion", [&p](int64_t) { p.features.emotion = false; },
                  "disable emotion features");
    cmd->add_flag("--balanced", p.rebalance.balanced, "balanced class weights");
    cmd->add_flag("--smote", p.rebalance.smote, "SMOTE oversampling");
    cmd->add_flag("--augment", p.rebalance.augment, "paraphrase augmentation");
    cmd->add_option("--smote-k", p.rebalance.smote_k, "SMOTE neighbor count")
        ->capture_default_str();
    cmd->add_option("--p-replace", p.rebalance.p_replace,
                    "augmentation replacement probability")
        ->capture_default_str();
    cmd->add_option("--copies", p.rebalance.copies, "augmentation copies per sample")
        ->capture_default_str();
    cmd->add_option("--min-df", p.min_df, "TFIDF minimum document frequency")->capture_default_str();
    cmd->add_option("--lambda", p.train.lambda, "L2 strength")->capture_default_str();
    cmd->add_option("--learning-rate", p.train.learning_rate, "initial GD step")
        ->capture_default_str();
    cmd->add_option("--max-iters", p.train.max_iters, "GD iteration cap")->capture_default_str();
    cmd->add_option("--tol", p.train.tol, "relative loss-change stop")->capture_default_str();
}

meme::pipeline::Lexicons load_lexicons(const CommonOpts& o) {
    meme::pipeline::Lexicons lex;
    if (!o.pos_lex.empty()) lex.pos = meme::text::load_pos_lexicon(o.pos_lex);
    if (!o.syn_lex.empty()) lex.synonyms = meme::text::load_synonym_lexicon(o.syn_lex);
    if (!o.para_lex.empty()) {
        lex.paraphrases = meme::rebalance::load_paraphrase_lexicon(o.para_lex);
    }
    return lex;
}

meme::img::EmotionTable load_emotions(const CommonOpts& o) {
    if (o.emotion.empty()) return {};
    return meme::img::load_emotion_table(o.emotion);
}

meme::corpus::Dataset load_data(const CommonOpts& o) {
    if (o.data.empty()) throw std::invalid_argument("--data is required");
    if (!fs::exists(o.data)) throw std::invalid_argument("no such file: " + o.data);
    std::optional<std::string> images;
    if (!o.images.empty()) images = o.images;
    auto d = meme::corpus::load_dataset(o.data, images);
    if (o.binary) d = meme::corpus::collapse_to_binary(d);
    return d;
}

meme::eval::RatingsMatrix load_ratings(const std::string& path,
                                       const meme::corpus::LabelSchema& schema,
                                       std::vector<int>* gold_out,
                                       std::vector<std::string>* ids_out) {
    auto rows = meme::csv::parse_file(path);
    if (rows.size() < 2 || rows[0].size() < 4 || rows[0][0] != "item_id" ||
        rows[0][1] != "gold") {
        throw std::runtime_error("ratings file needs header item_id,gold,rater1,...");
    }
    meme::eval::RatingsMatrix m;
    m.n_raters = static_cast<int>(rows[0].size()) - 2;
    m.k = schema.size();
    for (size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != rows[0].size()) {
            throw std::runtime_error("short ratings row " + std::to_string(r));
        }
        auto to_index = [&](const std::string& s) {
            int idx = schema.level_index(s);
            if (idx < 0) throw std::runtime_error("unknown label in ratings file: " + s);
            return idx;
        };
        if (ids_out) ids_out->push_back(row[0]);
        if (gold_out) gold_out->push_back(to_index(row[1]));
        std::vector<int> item;
        for (int a = 0; a < m.n_raters; ++a) item.push_back(to_index(row[2 + a]));
        m.rows.push_back(std::move(item));
    }
    return m;
}

// JSON config file; explicit CLI flags override these values because the
// file is applied before parsing.
void apply_config_file(CommonOpts& o, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    nlohmann::json j = nlohmann::json::parse(in);

    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("data", o.data);
    get("images", o.images);
    get("emotion", o.emotion);
    get("pos_lex", o.pos_lex);
    get("syn_lex", o.syn_lex);
    get("para_lex", o.para_lex);
    get("category", o.category);
    get("out", o.out);
    get("seed", o.seed);
    get("folds", o.folds);
    get("jobs", o.jobs);
    get("binary", o.binary);
    if (j.contains("features")) {
        const auto& f = j.at("features");
        auto& p = o.pipeline.features;
        if (f.contains("tfidf")) p.tfidf = f.at("tfidf").get<bool>();
        if (f.contains("stylistic")) p.stylistic = f.at("stylistic").get<bool>();
        if (f.contains("ambiguity")) p.ambiguity = f.at("ambiguity").get<bool>();
        if (f.contains("image")) p.image = f.at("image").get<bool>();
        if (f.contains("emotion")) p.emotion = f.at("emotion").get<bool>();
    }
    if (j.contains("rebalance")) {
        const auto& r = j.at("rebalance");
        auto& p = o.pipeline.rebalance;
        if (r.contains("balanced")) p.balanced = r.at("balanced").get<bool>();
        if (r.contains("smote")) p.smote = r.at("smote").get<bool>();
        if (r.contains("augment")) p.augment = r.at("augment").get<bool>();
        if (r.contains("smote_k")) p.smote_k = r.at("smote_k").get<int>();
        if (r.contains("p_replace")) p.p_replace = r.at("p_replace").get<double>();
        if (r.contains("copies")) p.copies = r.at("copies").get<int>();
    }
    if (j.contains("min_df")) o.pipeline.min_df = j.at("min_df").get<int>();
    if (j.contains("train")) {
        const auto& t = j.at("train");
        auto& cfg = o.pipeline.train;
        if (t.contains("lambda")) cfg.lambda = t.at("lambda").get<double>();
        if (t.contains("learning_rate")) cfg.learning_rate = t.at("learning_rate").get<double>();
        if (t.contains("max_iters")) cfg.max_iters = t.at("max_iters").get<int>();
        if (t.contains("tol")) cfg.tol = t.at("tol").get<double>();
    }
}

std::vector<int> all_indices(size_t n) {
    std::vector<int> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = static_cast<int>(i);
    return idx;
}

int run_stats(const CommonOpts& o) {
    auto d = load_data(o);
    auto report = meme::corpus::distribution_report(d);
    atomic_write(o.out, report.to_json() + "\n");
    if (o.out != "-") std::cout << report.to_text();
    return 0;
}

int run_featurize(const CommonOpts& o) {
    auto d = load_data(o);
    auto lexicons = load_lexicons(o);
    auto emotions = load_emotions(o);
    auto features =
        meme::pipeline::extract_features(d, lexicons, emotions, o.pipeline.features);

    std::string out = "id";
    for (const auto& name : meme::pipeline::dense_feature_names(o.pipeline.features)) {
        out += "," + name;
    }
    for (int c = 0; c < meme::corpus::kNumCategories; ++c) {
        out += std::string(",") + meme::corpus::category_name(static_cast<meme::corpus::Category>(c));
    }
    out += "\n";
    char buf[48];
    for (size_t i = 0; i < features.size(); ++i) {
        out += meme::csv::escape_field(features[i].id);
        for (double v : features[i].dense) {
            std::snprintf(buf, sizeof(buf), ",%.12g", v);
            out += buf;
        }
        for (int c = 0; c < meme::corpus::kNumCategories; ++c) {
            out += "," + d.schema[c].levels[d.samples[i].labels[c]];
        }
        out += "\n";
    }
    atomic_write(o.out, out);
    return 0;
}

int run_train(const CommonOpts& o) {
    auto d = load_data(o);
    auto lexicons = load_lexicons(o);
    auto emotions = load_emotions(o);
    auto category = meme::corpus::category_from_name(o.category);
    int ci = static_cast<int>(category);

    auto features =
        meme::pipeline::extract_features(d, lexicons, emotions, o.pipeline.features);
    std::vector<int> labels;
    for (const auto& s : d.samples) labels.push_back(s.labels[ci]);

    auto fitted = meme::pipeline::train_pipeline(features, labels, d.schema[ci].size(),
                                                 all_indices(d.size()), o.pipeline, lexicons,
                                                 o.seed);
    atomic_write(o.out, fitted.to_json() + "\n");
    std::cout << "trained " << o.category << " model: k=" << fitted.model.k
              << " d=" << fitted.model.d << " final_loss=" << fitted.model.final_loss << "\n";
    return 0;
}

int run_eval(const CommonOpts& o, const std::string& model_path) {
    std::ifstream in(model_path);
    if (!in) throw std::runtime_error("cannot open model: " + model_path);
    std::string json_text((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
    auto fitted = meme::pipeline::FittedPipeline::from_json(json_text);

    auto d = load_data(o);
    auto lexicons = load_lexicons(o);
    auto emotions = load_emotions(o);
    auto category = meme::corpus::category_from_name(o.category);
    int ci = static_cast<int>(category);

    auto features =
        meme::pipeline::extract_features(d, lexicons, emotions, fitted.config.features);
    std::vector<int> gold, pred;
    for (size_t i = 0; i < d.size(); ++i) {
        gold.push_back(d.samples[i].labels[ci]);
        pred.push_back(fitted.predict(features[i]));
    }
    int k = d.schema[ci].size();
    meme::eval::ConfusionMatrix cm(k, gold, pred);
    auto m = meme::eval::metrics(cm);

    ordered_json j;
    j["category"] = o.category;
    j["accuracy"] = m.accuracy;
    j["macro_f1"] = m.macro_f1;
    ordered_json per_class = ordered_json::array();
    for (int c = 0; c < k; ++c) {
        per_class.push_back({{"level", d.schema[ci].levels[c]},
                             {"precision", m.per_class[c].precision},
                             {"recall", m.per_class[c].recall},
                             {"f1", m.per_class[c].f1}});
    }
    j["per_class"] = per_class;
    j["confusion"] = cm.counts;
    atomic_write(o.out, j.dump(2) + "\n");
    std::printf("%s: macro_f1 %.4f accuracy %.4f\n", o.category.c_str(), m.macro_f1,
                m.accuracy);
    return 0;
}

int run_cv(const CommonOpts& o) {
    auto d = load_data(o);
    auto lexicons = load_lexicons(o);
    auto emotions = load_emotions(o);

    std::vector<meme::corpus::Category> categories;
    if (o.category == "all") {
        for (int c = 0; c < meme::corpus::kNumCategories; ++c) {
            categories.push_back(static_cast<meme::corpus::Category>(c));
        }
    } else {
        categories.push_back(meme::corpus::category_from_name(o.category));
    }

    ordered_json out = ordered_json::array();
    for (auto category : categories) {
        auto report = meme::pipeline::cross_validate(d, category, o.pipeline, o.folds, o.seed,
                                                     lexicons, emotions, o.jobs);
        out.push_back(ordered_json::parse(report.to_json()));
        std::printf("%-13s mean macro_f1 %.4f (std %.4f)  mean acc %.4f (std %.4f)\n",
                    report.category.c_str(), report.mean_f1, report.std_f1, report.mean_acc,
                    report.std_acc);
    }
    atomic_write(o.out, out.dump(2) + "\n");
    return 0;
}

int run_ablate(const CommonOpts& o) {
    auto d = load_data(o);
    auto lexicons = load_lexicons(o);
    auto emotions = load_emotions(o);

    std::vector<meme::corpus::Category> categories;
    for (int c = 0; c < meme::corpus::kNumCategories; ++c) {
        categories.push_back(static_cast<meme::corpus::Category>(c));
    }

    auto rows = meme::pipeline::ablation(d, categories, o.pipeline, o.folds, o.seed, lexicons,
                                         emotions, o.jobs);
    atomic_write(o.out, meme::eval::ablation_to_json(rows) + "\n");
    std::cout << meme::eval::ablation_to_text(rows);
    return 0;
}

int run_kappa(const CommonOpts& o, const std::string& ratings_path) {
    auto schemas = o.binary ? meme::corpus::binary_schemas() : meme::corpus::full_schemas();
    auto category = meme::corpus::category_from_name(o.category);
    auto ratings = load_ratings(ratings_path, schemas[static_cast<int>(category)], nullptr,
                                nullptr);
    double kappa = meme::eval::randolph_kappa(ratings);
    ordered_json j{{"category", o.category},
                   {"n_items", ratings.rows.size()},
                   {"n_raters", ratings.n_raters},
                   {"kappa", kappa}};
    atomic_write(o.out, j.dump(2) + "\n");
    std::printf("randolph kappa (%s): %.4f\n", o.category.c_str(), kappa);
    return 0;
}

int run_annotator_report(const CommonOpts& o, const std::string& ratings_path,
                         const std::string& preds_path) {
    auto schemas = o.binary ? meme::corpus::binary_schemas() : meme::corpus::full_schemas();
    const auto& schema = schemas[static_cast<int>(meme::corpus::category_from_name(o.category))];

    std::vector<int> gold;
    std::vector<std::string> ids;
    auto ratings = load_ratings(ratings_path, schema, &gold, &ids);

    auto pred_rows = meme::csv::parse_file(preds_path);
    if (pred_rows.size() < 2 || pred_rows[0].size() < 2) {
        throw std::runtime_error("predictions file needs header item_id,pred");
    }
    std::map<std::string, int> preds_by_id;
    for (size_t r = 1; r < pred_rows.size(); ++r) {
        int idx = schema.level_index(pred_rows[r][1]);
        if (idx < 0) {
            throw std::runtime_error("unknown label in predictions: " + pred_rows[r][1]);
        }
        preds_by_id[pred_rows[r][0]] = idx;
    }
    std::vector<int> preds;
    for (const auto& id : ids) {
        auto it = preds_by_id.find(id);
        if (it == preds_by_id.end()) throw std::runtime_error("missing prediction for " + id);
        preds.push_back(it->second);
    }

    auto report = meme::eval::annotator_report(ratings, gold, preds);
    atomic_write(o.out, report.to_json() + "\n");
    std::cout << report.to_text();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multimodal meme affect classification toolkit"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string model_path, ratings_path, preds_path, fixtures_dir, config_path;

    // config file is applied before option definition so explicit flags win
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                apply_config_file(o, argv[i + 1]);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 1;
            }
        }
    }

    auto* stats = app.add_subcommand("stats", "label distribution report");
    add_data_options(stats, o, false);
    stats->add_flag("--binary", o.binary, "collapse scaled labels to binary");
    stats->add_option("--out", o.out, "output JSON path ('-' for stdout)");

    auto* featurize = app.add_subcommand("featurize", "dump per-sample dense features as CSV");
    add_data_options(featurize, o);
    add_lexicon_options(featurize, o);
    add_pipeline_options(featurize, o);
    featurize->add_option("--out", o.out, "output CSV path");

    auto* train = app.add_subcommand("train", "train a model on the full input corpus");
    add_data_options(train, o);
    add_lexicon_options(train, o);
    add_pipeline_options(train, o);
    train->add_option("--category", o.category, "target category")->capture_default_str();
    train->add_flag("--binary", o.binary, "collapse scaled labels to binary");
    train->add_option("--seed", o.seed, "master seed")->capture_default_str();
    train->add_option("--out", o.out, "model JSON path")->required();

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a trained model on a corpus");
    add_data_options(eval_cmd, o);
    add_lexicon_options(eval_cmd, o);
    eval_cmd->add_option("--model", model_path, "model JSON from 'train'")
        ->required()
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--category", o.category, "target category")->capture_default_str();
    eval_cmd->add_flag("--binary", o.binary, "collapse scaled labels to binary");
    eval_cmd->add_option("--out", o.out, "metrics JSON path");

    auto* cv = app.add_subcommand("cv", "stratified k-fold cross validation");
    add_data_options(cv, o);
    add_lexicon_options(cv, o);
    add_pipeline_options(cv, o);
    cv->add_option("--category", o.category, "category or 'all'")->capture_default_str();
    cv->add_flag("--binary", o.binary, "collapse scaled labels to binary");
    cv->add_option("--folds", o.folds, "fold count")->capture_default_str();
    cv->add_option("--seed", o.seed, "master seed")->capture_default_str();
    cv->add_option("--jobs", o.jobs, "max concurrent folds")->capture_default_str();
    cv->add_option("--out", o.out, "report JSON path");

    auto* ablate = app.add_subcommand("ablate", "8-row ablation grid over all categories");
    add_data_options(ablate, o);
    add_lexicon_options(ablate, o);
    add_pipeline_options(ablate, o);
    ablate->add_flag("--binary", o.binary, "collapse scaled labels to binary");
    ablate->add_option("--folds", o.folds, "fold count")->capture_default_str();
    ablate->add_option("--seed", o.seed, "master seed")->capture_default_str();
    ablate->add_option("--jobs", o.jobs, "max concurrent folds")->capture_default_str();
    ablate->add_option("--out", o.out, "report JSON path");

    auto* kappa = app.add_subcommand("kappa", "free-marginal multi-rater agreement");
    kappa->add_option("--ratings", ratings_path, "ratings CSV (item_id,gold,rater1,...)")
        ->required()
        ->check(CLI::ExistingFile);
    kappa->add_option("--category", o.category, "category of the ratings")
        ->capture_default_str();
    kappa->add_flag("--binary", o.binary, "interpret labels against the binary schema");
    kappa->add_option("--out", o.out, "output JSON path");

    auto* annot = app.add_subcommand("annotator-report",
                                     "per-annotator scores vs gold plus a model row");
    annot->add_option("--ratings", ratings_path, "ratings CSV")
        ->required()
        ->check(CLI::ExistingFile);
    annot->add_option("--preds", preds_path, "model predictions CSV (item_id,pred)")
        ->required()
        ->check(CLI::ExistingFile);
    annot->add_option("--category", o.category, "category of the ratings")
        ->capture_default_str();
    annot->add_flag("--binary", o.binary, "interpret labels against the binary schema");
    annot->add_option("--out", o.out, "output JSON path");

    auto* gen = app.add_subcommand("gen-fixtures", "emit a deterministic synthetic corpus");
    gen->add_option("--out", fixtures_dir, "output directory")->required();
    gen->add_option("--seed", o.seed, "master seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (stats->parsed()) return run_stats(o);
        if (featurize->parsed()) return run_featurize(o);
        if (train->parsed()) return run_train(o);
        if (eval_cmd->parsed()) return run_eval(o, model_path);
        if (cv->parsed()) return run_cv(o);
        if (ablate->parsed()) return run_ablate(o);
        if (kappa->parsed()) return run_kappa(o, ratings_path);
        if (annot->parsed()) return run_annotator_report(o, ratings_path, preds_path);
        if (gen->parsed()) {
            meme::fixtures::generate(fixtures_dir, o.seed);
            std::cout << "fixtures written to " << fixtures_dir << "\n";
            return 0;
        }
    } catch (const meme::corpus::MissingColumn& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const meme::corpus::UnknownLabel& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const meme::corpus::DuplicateId& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
