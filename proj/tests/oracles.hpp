// Independent brute-force reference implementations used to cross-check
// the library. These deliberately share no code with meme_core.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

struct Scores {
    double accuracy;
    double macro_f1;
};

/// Metrics straight from the label vectors, no confusion matrix.
inline Scores score(const std::vector<int>& gold, const std::vector<int>& pred, int k) {
    const double n = static_cast<double>(gold.size());
    long correct = 0;
    for (size_t i = 0; i < gold.size(); ++i) {
        if (gold[i] == pred[i]) ++correct;
    }

    double f1_sum = 0;
    for (int c = 0; c < k; ++c) {
        long tp = 0, pred_c = 0, gold_c = 0;
        for (size_t i = 0; i < gold.size(); ++i) {
            if (pred[i] == c) ++pred_c;
            if (gold[i] == c) ++gold_c;
            if (gold[i] == c && pred[i] == c) ++tp;
        }
        double p = pred_c ? static_cast<double>(tp) / pred_c : 0.0;
        double r = gold_c ? static_cast<double>(tp) / gold_c : 0.0;
        f1_sum += (p + r > 0) ? 2 * p * r / (p + r) : 0.0;
    }
    return {correct / n, f1_sum / k};
}

/// Randolph kappa by counting agreeing rater pairs per item.
inline double randolph_kappa(const std::vector<std::vector<int>>& items, int k) {
    double total = 0;
    for (const auto& ratings : items) {
        long agree = 0, pairs = 0;
        for (size_t a = 0; a < ratings.size(); ++a) {
            for (size_t b = a + 1; b < ratings.size(); ++b) {
                ++pairs;
                if (ratings[a] == ratings[b]) ++agree;
            }
        }
        total += static_cast<double>(agree) / pairs;
    }
    double p_obs = total / items.size();
    double p_exp = 1.0 / k;
    return (p_obs - p_exp) / (1.0 - p_exp);
}

}  // namespace oracle
