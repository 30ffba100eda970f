#include "meme/rebalance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "meme/rng.hpp"

namespace meme::rebalance {

ClassWeights class_weights(const std::vector<int>& labels, int k) {
    std::vector<long> counts(k, 0);
    for (int label : labels) ++counts[label];
    for (int c = 0; c < k; ++c) {
        if (counts[c] == 0) throw MissingClass(c);
    }
    ClassWeights w;
    const double n = static_cast<double>(labels.size());
    for (int c = 0; c < k; ++c) w.weights.push_back(n / (k * counts[c]));
    return w;
}

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        double diff = a[i] - b[i];
        d += diff * diff;
    }
    return d;
}

}  // namespace

SmoteResult smote(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                  int k_neighbors, uint64_t seed) {
    if (k_neighbors < 1) throw BadK();

    int n_classes = 0;
    for (int label : y) n_classes = std::max(n_classes, label + 1);
    std::vector<std::vector<int>> by_class(n_classes);
    for (size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(static_cast<int>(i));

    size_t majority = 0;
    for (const auto& members : by_class) majority = std::max(majority, members.size());

    SmoteResult out{X, y};
    for (int c = 0; c < n_classes; ++c) {
        const auto& members = by_class[c];
        size_t need = majority - members.size();
        if (need == 0) continue;
        if (members.size() < 2) throw ClassTooSmall(c);

        // brute-force kNN within the class, ties broken by index
        int n_neighbors = std::min<int>(k_neighbors, static_cast<int>(members.size()) - 1);
        std::vector<std::vector<int>> nn(members.size());
        for (size_t i = 0; i < members.size(); ++i) {
            std::vector<std::pair<double, int>> dists;
            for (size_t j = 0; j < members.size(); ++j) {
                if (j == i) continue;
                dists.emplace_back(sq_dist(X[members[i]], X[members[j]]), members[j]);
            }
            std::sort(dists.begin(), dists.end());
            for (int t = 0; t < n_neighbors; ++t) nn[i].push_back(dists[t].second);
        }

        auto g = rng::make(rng::mix(seed, static_cast<uint64_t>(c)));
        std::uniform_int_distribution<size_t> pick_base(0, members.size() - 1);
        std::uniform_int_distribution<int> pick_nn(0, n_neighbors - 1);
        std::uniform_real_distribution<double> pick_lambda(0.0, 1.0);
        for (size_t s = 0; s < need; ++s) {
            size_t bi = pick_base(g);
            const auto& base = X[members[bi]];
            const auto& neighbor = X[nn[bi][pick_nn(g)]];
            double lambda = pick_lambda(g);
            std::vector<double> synth(base.size());
            for (size_t d = 0; d < base.size(); ++d) {
                synth[d] = base[d] + lambda * (neighbor[d] - base[d]);
            }
            out.X.push_back(std::move(synth));
            out.y.push_back(c);
        }
    }
    return out;
}

std::vector<AugmentSample> augment(const std::vector<AugmentSample>& samples,
                                   const ParaphraseLexicon& lex, double p_replace,
                                   int copies, uint64_t seed) {
    if (p_replace < 0 || p_replace > 1) {
        throw std::invalid_argument("p_replace must lie in [0,1]");
    }
    if (copies < 0) throw std::invalid_argument("copies must be >= 0");

    size_t max_phrase_len = 0;
    for (const auto& [phrase, reps] : lex) max_phrase_len = std::max(max_phrase_len, phrase.size());

    std::vector<AugmentSample> out = samples;
    for (const auto& sample : samples) {
        auto g = rng::make(rng::mix(seed, sample.id));
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        for (int copy = 0; copy < copies; ++copy) {
            std::vector<std::string> tokens;
            bool replaced = false;
            size_t i = 0;
            while (i < sample.tokens.size()) {
                // longest match first
                size_t longest = std::min(max_phrase_len, sample.tokens.size() - i);
                const std::vector<std::string>* replacement = nullptr;
                size_t match_len = 0;
                for (size_t len = longest; len >= 1; --len) {
                    std::vector<std::string> phrase(sample.tokens.begin() + i,
                                                    sample.tokens.begin() + i + len);
                    auto it = lex.find(phrase);
                    if (it != lex.end()) {
                        replacement = &it->second;
                        match_len = len;
                        break;
                    }
                }
                if (replacement && coin(g) < p_replace) {
                    std::uniform_int_distribution<size_t> pick(0, replacement->size() - 1);
                    std::istringstream ss((*replacement)[pick(g)]);
                    std::string word;
                    while (ss >> word) tokens.push_back(word);
                    replaced = true;
                    i += match_len;
                } else {
                    tokens.push_back(sample.tokens[i]);
                    ++i;
                }
            }
            if (!replaced) continue;
            AugmentSample synth = sample;
            synth.id = sample.id + "_aug" + std::to_string(copy);
            synth.tokens = std::move(tokens);
            out.push_back(std::move(synth));
        }
    }
    return out;
}

ParaphraseLexicon load_paraphrase_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open paraphrase lexicon: " + path);
    ParaphraseLexicon lex;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw std::runtime_error("malformed paraphrase line: " + line);
        }
        std::vector<std::string> phrase;
        {
            std::istringstream ss(line.substr(0, tab));
            std::string word;
            while (ss >> word) phrase.push_back(word);
        }
        std::vector<std::string> replacements;
        {
            std::istringstream ss(line.substr(tab + 1));
            std::string rep;
            while (std::getline(ss, rep, '|')) {
                if (!rep.empty()) replacements.push_back(rep);
            }
        }
        if (phrase.empty() || phrase.size() > 3 || replacements.empty()) {
            throw std::runtime_error("bad paraphrase entry: " + line);
        }
        lex[phrase] = std::move(replacements);
    }
    return lex;
}

}  // namespace meme::rebalance
