#include "meme/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace meme::eval {

ConfusionMatrix::ConfusionMatrix(int k_, const std::vector<int>& gold,
                                 const std::vector<int>& pred)
    : ConfusionMatrix(k_) {
    if (gold.size() != pred.size()) throw LengthMismatch();
    for (size_t i = 0; i < gold.size(); ++i) ++at(gold[i], pred[i]);
}

long ConfusionMatrix::total() const {
    long t = 0;
    for (long c : counts) t += c;
    return t;
}

Metrics metrics(const ConfusionMatrix& cm) {
    const long n = cm.total();
    if (n == 0) throw EmptyMatrix();

    Metrics m;
    long diag = 0;
    double f1_sum = 0;
    for (int c = 0; c < cm.k; ++c) {
        long tp = cm.at(c, c);
        long fp = 0, fn = 0;
        for (int r = 0; r < cm.k; ++r) {
            if (r != c) {
                fp += cm.at(r, c);
                fn += cm.at(c, r);
            }
        }
        diag += tp;
        ClassScore s;
        s.precision = (tp + fp) ? static_cast<double>(tp) / (tp + fp) : 0.0;
        s.recall = (tp + fn) ? static_cast<double>(tp) / (tp + fn) : 0.0;
        s.f1 = (s.precision + s.recall > 0)
                   ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
                   : 0.0;
        f1_sum += s.f1;
        m.per_class.push_back(s);
    }
    m.accuracy = static_cast<double>(diag) / n;
    m.macro_f1 = f1_sum / cm.k;
    return m;
}

void CVReport::finalize() {
    const double n = static_cast<double>(folds.size());
    mean_f1 = mean_acc = std_f1 = std_acc = 0;
    if (folds.empty()) return;
    for (const auto& f : folds) {
        mean_f1 += f.macro_f1;
        mean_acc += f.accuracy;
    }
    mean_f1 /= n;
    mean_acc /= n;
    for (const auto& f : folds) {
        std_f1 += (f.macro_f1 - mean_f1) * (f.macro_f1 - mean_f1);
        std_acc += (f.accuracy - mean_acc) * (f.accuracy - mean_acc);
    }
    std_f1 = std::sqrt(std_f1 / n);
    std_acc = std::sqrt(std_acc / n);
}

std::string CVReport::to_json() const {
    nlohmann::ordered_json j;
    j["category"] = category;
    nlohmann::ordered_json folds_json = nlohmann::ordered_json::array();
    for (const auto& f : folds) {
        folds_json.push_back({{"macro_f1", f.macro_f1}, {"accuracy", f.accuracy}});
    }
    j["folds"] = folds_json;
    j["mean"] = {{"macro_f1", mean_f1}, {"accuracy", mean_acc}};
    j["std"] = {{"macro_f1", std_f1}, {"accuracy", std_acc}};
    return j.dump(2);
}

std::string AblationRow::descriptor() const {
    std::string d = "tfidf+dense_text";
    if (balanced) d += " + balanced";
    if (augmentation) d += " + augmentation";
    if (image_features) d += " + image_features";
    return d;
}

std::string ablation_to_json(const std::vector<AblationRow>& rows) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json r;
        r["descriptor"] = row.descriptor();
        r["balanced"] = row.balanced;
        r["augmentation"] = row.augmentation;
        r["image_features"] = row.image_features;
        nlohmann::ordered_json scores;
        for (const auto& [category, score] : row.per_category) {
            scores[category] = {{"macro_f1", score.macro_f1}, {"accuracy", score.accuracy}};
        }
        r["scores"] = scores;
        j.push_back(r);
    }
    return j.dump(2);
}

std::string ablation_to_text(const std::vector<AblationRow>& rows) {
    std::ostringstream os;
    std::vector<std::string> categories;
    if (!rows.empty()) {
        for (const auto& [category, _] : rows.front().per_category) categories.push_back(category);
    }
    os << std::left;
    char buf[160];
    std::string header = "Features";
    std::snprintf(buf, sizeof(buf), "%-58s", header.c_str());
    os << buf;
    for (const auto& category : categories) {
        std::snprintf(buf, sizeof(buf), " | %-12s F1/Acc", category.c_str());
        os << buf;
    }
    os << "\n";
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof(buf), "%-58s", row.descriptor().c_str());
        os << buf;
        for (const auto& category : categories) {
            const auto& s = row.per_category.at(category);
            std::snprintf(buf, sizeof(buf), " | %6.2f / %6.2f     ", 100 * s.macro_f1,
                          100 * s.accuracy);
            os << buf;
        }
        os << "\n";
    }
    return os.str();
}

double randolph_kappa(const RatingsMatrix& r) {
    if (r.n_raters < 2 || r.k < 2 || r.rows.empty()) throw DegenerateInput();
    const double n = r.n_raters;
    double p_obs = 0;
    for (const auto& item : r.rows) {
        std::vector<int> counts(r.k, 0);
        for (int rating : item) ++counts[rating];
        double agree = 0;
        for (int c : counts) agree += static_cast<double>(c) * (c - 1);
        p_obs += agree / (n * (n - 1));
    }
    p_obs /= static_cast<double>(r.rows.size());
    const double p_chance = 1.0 / r.k;
    return (p_obs - p_chance) / (1.0 - p_chance);
}

std::map<std::string, std::string> select_best(
    const std::map<std::string, std::map<std::string, double>>& model_category_f1) {
    // collect the category universe and check completeness
    std::map<std::string, std::string> plan;
    std::vector<std::string> categories;
    for (const auto& [model, scores] : model_category_f1) {
        for (const auto& [category, _] : scores) {
            if (std::find(categories.begin(), categories.end(), category) == categories.end()) {
                categories.push_back(category);
            }
        }
    }
    for (const auto& category : categories) {
        std::string best;
        double best_f1 = -1;
        for (const auto& [model, scores] : model_category_f1) {  // lexicographic order
            auto it = scores.find(category);
            if (it == scores.end()) throw MissingScore(model + "/" + category);
            if (it->second > best_f1) {
                best_f1 = it->second;
                best = model;
            }
        }
        plan[category] = best;
    }
    return plan;
}

namespace {

FoldScore score_against(const std::vector<int>& gold, const std::vector<int>& pred, int k) {
    Metrics m = metrics(ConfusionMatrix(k, gold, pred));
    return {m.macro_f1, m.accuracy};
}

}  // namespace

AnnotatorReport annotator_report(const RatingsMatrix& ratings, const std::vector<int>& gold,
                                 const std::vector<int>& model_preds) {
    if (ratings.rows.size() != gold.size() || gold.size() != model_preds.size()) {
        throw LengthMismatch();
    }

    int k = ratings.k;
    AnnotatorReport report;
    for (int a = 0; a < ratings.n_raters; ++a) {
        std::vector<int> preds;
        preds.reserve(gold.size());
        for (const auto& row : ratings.rows) preds.push_back(row[a]);
        FoldScore s = score_against(gold, preds, k);
        report.annotators.push_back({"annotator" + std::to_string(a + 1), s.macro_f1, s.accuracy});
    }
    report.average.name = "average";
    for (const auto& row : report.annotators) {
        report.average.macro_f1 += row.macro_f1;
        report.average.accuracy += row.accuracy;
    }
    report.average.macro_f1 /= ratings.n_raters;
    report.average.accuracy /= ratings.n_raters;

    FoldScore ms = score_against(gold, model_preds, k);
    report.model = {"model", ms.macro_f1, ms.accuracy};
    return report;
}

std::string AnnotatorReport::to_json() const {
    nlohmann::ordered_json j;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    auto emit = [](const AnnotatorRow& r) {
        return nlohmann::ordered_json{
            {"name", r.name}, {"macro_f1", r.macro_f1}, {"accuracy", r.accuracy}};
    };
    for (const auto& r : annotators) rows.push_back(emit(r));
    j["annotators"] = rows;
    j["average"] = emit(average);
    j["model"] = emit(model);
    return j.dump(2);
}

std::string AnnotatorReport::to_text() const {
    std::ostringstream os;
    char buf[96];
    auto line = [&](const AnnotatorRow& r) {
        std::snprintf(buf, sizeof(buf), "%-12s  F1 %6.2f  Acc %6.2f\n", r.name.c_str(),
                      100 * r.macro_f1, 100 * r.accuracy);
        os << buf;
    };
    for (const auto& r : annotators) line(r);
    line(average);
    line(model);
    return os.str();
}

}  // namespace meme::eval
