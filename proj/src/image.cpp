#include "meme/image.hpp"

#include <algorithm>
#include <cmath>

#include "meme/csv.hpp"

namespace meme::img {

namespace {

struct Hsv {
    double h, s, v;
};

Hsv rgb_to_hsv(const Rgb& p) {
    double r = p.r / 255.0, g = p.g / 255.0, b = p.b / 255.0;
    double maxc = std::max({r, g, b});
    double minc = std::min({r, g, b});
    double delta = maxc - minc;

    Hsv out{0.0, 0.0, maxc};
    if (maxc > 0.0) out.s = delta / maxc;
    if (delta > 0.0) {
        double h;
        if (maxc == r) h = std::fmod((g - b) / delta, 6.0);
        else if (maxc == g) h = (b - r) / delta + 2.0;
        else h = (r - g) / delta + 4.0;
        h *= 60.0;
        if (h < 0) h += 360.0;
        out.h = h / 360.0;
    }
    return out;
}

}  // namespace

HsvMeans hsv_means(const PixelGrid& p) {
    if (p.pixels.empty()) throw EmptyImage();
    double sh = 0, ss = 0, sv = 0;
    for (const auto& px : p.pixels) {
        Hsv hsv = rgb_to_hsv(px);
        sh += hsv.h;
        ss += hsv.s;
        sv += hsv.v;
    }
    double n = static_cast<double>(p.pixels.size());
    return {sh / n, ss / n, sv / n};
}

double rms_contrast(const PixelGrid& p) {
    if (p.pixels.empty()) throw EmptyImage();
    std::vector<double> values;
    values.reserve(p.pixels.size());
    for (const auto& px : p.pixels) {
        values.push_back(std::max({px.r, px.g, px.b}) / 255.0);
    }
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) return 0.0;  // constant image, exactly zero
    double n = static_cast<double>(values.size());
    double mean = 0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0;
    for (double v : values) var += (v - mean) * (v - mean);
    return std::sqrt(var / n);
}

double colourfulness(const PixelGrid& p) {
    if (p.pixels.empty()) throw EmptyImage();
    double s_rg = 0, s_rg2 = 0, s_yb = 0, s_yb2 = 0;
    for (const auto& px : p.pixels) {
        double rg = static_cast<double>(px.r) - px.g;
        double yb = 0.5 * (static_cast<double>(px.r) + px.g) - px.b;
        s_rg += rg;
        s_rg2 += rg * rg;
        s_yb += yb;
        s_yb2 += yb * yb;
    }
    double n = static_cast<double>(p.pixels.size());
    double mu_rg = s_rg / n, mu_yb = s_yb / n;
    double var_rg = std::max(0.0, s_rg2 / n - mu_rg * mu_rg);
    double var_yb = std::max(0.0, s_yb2 / n - mu_yb * mu_yb);
    return std::sqrt(var_rg + var_yb) + 0.3 * std::sqrt(mu_rg * mu_rg + mu_yb * mu_yb);
}

PadScores pad_scores(double s_mean, double v_mean) {
    if (s_mean < 0 || s_mean > 1 || v_mean < 0 || v_mean > 1) {
        throw DomainError("pad_scores inputs must lie in [0,1]");
    }
    return {0.69 * v_mean + 0.22 * s_mean,
            -0.31 * v_mean + 0.60 * s_mean,
            0.76 * v_mean + 0.32 * s_mean};
}

EmotionVec attach_emotion(const EmotionTable& tbl, const std::string& id) {
    auto it = tbl.find(id);
    if (it != tbl.end()) return it->second;
    EmotionVec uniform;
    uniform.fill(1.0 / 7.0);
    return uniform;
}

ImageFeatures image_features(const std::optional<PixelGrid>& p, const EmotionVec& emotion) {
    ImageFeatures f{};
    if (p) {
        HsvMeans hsv = hsv_means(*p);
        PadScores pad = pad_scores(hsv.s, hsv.v);
        f[0] = hsv.h;
        f[1] = hsv.s;
        f[2] = hsv.v;
        f[3] = rms_contrast(*p);
        f[4] = colourfulness(*p);
        f[5] = pad.pleasure;
        f[6] = pad.arousal;
        f[7] = pad.dominance;
    }
    for (int i = 0; i < 7; ++i) f[8 + i] = emotion[i];
    return f;
}

EmotionTable load_emotion_table(const std::string& path) {
    auto rows = csv::parse_file(path);
    if (rows.empty()) throw std::runtime_error("empty emotion table: " + path);

    const std::vector<std::string> expected = {"id",      "angry", "disgusted", "fearful",
                                               "happy",   "neutral", "sad",     "surprised"};
    for (size_t i = 0; i < expected.size(); ++i) {
        if (i >= rows[0].size() || rows[0][i] != expected[i]) {
            throw std::runtime_error("bad emotion table header in " + path);
        }
    }

    EmotionTable tbl;
    for (size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() < 8) throw std::runtime_error("short emotion row " + std::to_string(r));
        EmotionVec v;
        double sum = 0;
        for (int i = 0; i < 7; ++i) {
            v[i] = std::stod(row[1 + i]);
            if (v[i] < 0) {
                throw std::runtime_error("negative emotion entry at row " + std::to_string(r));
            }
            sum += v[i];
        }
        if (std::abs(sum - 1.0) > 1e-6) {
            throw std::runtime_error("emotion row " + std::to_string(r) +
                                     " does not sum to 1");
        }
        tbl[row[0]] = v;
    }
    return tbl;
}

}  // namespace meme::img
