#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace meme::img {

struct Rgb {
    uint8_t r, g, b;
};

struct PixelGrid {
    int width = 0, height = 0;
    std::vector<Rgb> pixels;  // row-major, width*height entries

    size_t size() const { return pixels.size(); }
};

using EmotionVec = std::array<double, 7>;  // angry..surprised, sums to 1

constexpr const char* kEmotionNames[7] = {"angry",   "disgusted", "fearful", "happy",
                                          "neutral", "sad",       "surprised"};

/// Precomputed facial-emotion outputs keyed by sample id.
using EmotionTable = std::map<std::string, EmotionVec>;

constexpr int kImageFeatureDim = 15;

/// [H, S, V, rms_contrast, colourfulness, P, A, D, emotion x7]
using ImageFeatures = std::array<double, kImageFeatureDim>;

struct EmptyImage : std::runtime_error {
    EmptyImage() : std::runtime_error("image has no pixels") {}
};
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct HsvMeans {
    double h, s, v;  // H in [0,1) (degrees/360), S and V in [0,1]
};

/// Arithmetic mean of per-pixel HSV; hue of achromatic pixels counts as 0.
HsvMeans hsv_means(const PixelGrid& p);

/// Population standard deviation of the per-pixel V channel.
double rms_contrast(const PixelGrid& p);

/// Opponent-channel colourfulness on the 0-255 scale:
/// sqrt(sigma_rg^2 + sigma_yb^2) + 0.3 sqrt(mu_rg^2 + mu_yb^2)
/// with rg = R-G, yb = (R+G)/2 - B.
double colourfulness(const PixelGrid& p);

struct PadScores {
    double pleasure, arousal, dominance;
};

/// Linear brightness/saturation regressions:
/// P = 0.69 V + 0.22 S, A = -0.31 V + 0.60 S, D = 0.76 V + 0.32 S.
PadScores pad_scores(double s_mean, double v_mean);

/// Lookup with uniform (1/7 each) fallback for unknown ids.
EmotionVec attach_emotion(const EmotionTable& tbl, const std::string& id);

/// Assemble the 15-dim block; a missing image zeroes the first 8 entries.
ImageFeatures image_features(const std::optional<PixelGrid>& p, const EmotionVec& emotion);

/// CSV with header id,angry,disgusted,fearful,happy,neutral,sad,surprised.
/// Rows with negative entries or a sum off 1 by more than 1e-6 are rejected.
EmotionTable load_emotion_table(const std::string& path);

}  // namespace meme::img
