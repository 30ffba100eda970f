#include "meme/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

namespace meme::clf {

namespace {

// softmax of logits, numerically shifted by the row max
void softmax_inplace(std::vector<double>& z) {
    double zmax = *std::max_element(z.begin(), z.end());
    double sum = 0;
    for (double& v : z) {
        v = std::exp(v - zmax);
        sum += v;
    }
    for (double& v : z) v /= sum;
}

std::vector<double> logits(const Matrix& w, const std::vector<double>& b, const double* x) {
    std::vector<double> z(w.rows);
    for (int c = 0; c < w.rows; ++c) {
        double dot = b[c];
        const double* wr = w.row(c);
        for (int j = 0; j < w.cols; ++j) dot += wr[j] * x[j];
        z[c] = dot;
    }
    return z;
}

}  // namespace

LossGrad loss_and_gradient(const Matrix& w, const std::vector<double>& b, const Matrix& x,
                           const std::vector<int>& y, const std::vector<double>& weights,
                           double lambda) {
    const int n = x.rows, d = x.cols, k = w.rows;
    if (w.cols != d || static_cast<int>(b.size()) != k ||
        static_cast<int>(y.size()) != n ||
        (!weights.empty() && static_cast<int>(weights.size()) != n)) {
        throw ShapeMismatch();
    }
    for (double v : x.data) {
        if (!std::isfinite(v)) throw NonFiniteInput();
    }

    double weight_sum = 0;
    for (int i = 0; i < n; ++i) weight_sum += weights.empty() ? 1.0 : weights[i];

    LossGrad out{0.0, Matrix(k, d), std::vector<double>(k, 0.0)};
    for (int i = 0; i < n; ++i) {
        double wi = (weights.empty() ? 1.0 : weights[i]) / weight_sum;
        std::vector<double> p = logits(w, b, x.row(i));
        softmax_inplace(p);
        out.loss += wi * -std::log(std::max(p[y[i]], 1e-300));
        for (int c = 0; c < k; ++c) {
            double delta = wi * (p[c] - (c == y[i] ? 1.0 : 0.0));
            out.grad_b[c] += delta;
            double* gr = out.grad_w.row(c);
            const double* xr = x.row(i);
            for (int j = 0; j < d; ++j) gr[j] += delta * xr[j];
        }
    }

    double w_norm_sq = 0;
    for (double v : w.data) w_norm_sq += v * v;
    out.loss += 0.5 * lambda * w_norm_sq;
    for (size_t t = 0; t < w.data.size(); ++t) out.grad_w.data[t] += lambda * w.data[t];
    return out;
}

LRModel fit(const Matrix& x, const std::vector<int>& y, const TrainConfig& cfg) {
    const int n = x.rows, d = x.cols;
    if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (cfg.tol <= 0) throw std::invalid_argument("tol must be > 0");

    int k = 0;
    for (int label : y) k = std::max(k, label + 1);
    {
        std::vector<bool> present(k, false);
        for (int label : y) present[label] = true;
        int distinct = static_cast<int>(std::count(present.begin(), present.end(), true));
        if (distinct < 2) throw SingleClass();
    }

    LRModel m;
    m.k = k;
    m.d = d;
    m.W = Matrix(k, d);
    m.b.assign(k, 0.0);
    m.config = cfg;

    LossGrad cur = loss_and_gradient(m.W, m.b, x, y, cfg.sample_weights, cfg.lambda);
    if (!std::isfinite(cur.loss)) throw NonFiniteLoss();

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        double step = cfg.learning_rate;
        Matrix w_next;
        std::vector<double> b_next;
        LossGrad next{std::numeric_limits<double>::infinity(), {}, {}};
        bool accepted = false;
        for (int halving = 0; halving <= 30; ++halving) {
            w_next = m.W;
            b_next = m.b;
            for (size_t t = 0; t < w_next.data.size(); ++t) {
                w_next.data[t] -= step * cur.grad_w.data[t];
            }
            for (int c = 0; c < k; ++c) b_next[c] -= step * cur.grad_b[c];
            next = loss_and_gradient(w_next, b_next, x, y, cfg.sample_weights, cfg.lambda);
            if (std::isfinite(next.loss) && next.loss <= cur.loss) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        double rel_change = std::abs(cur.loss - next.loss) / std::max(1.0, std::abs(cur.loss));
        m.W = std::move(w_next);
        m.b = std::move(b_next);
        cur = std::move(next);
        m.trace.push_back(cur.loss);
        if (rel_change < cfg.tol) break;
    }
    if (!std::isfinite(cur.loss)) throw NonFiniteLoss();
    m.final_loss = cur.loss;
    return m;
}

std::vector<double> predict_proba(const LRModel& m, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != m.d) throw ShapeMismatch();
    std::vector<double> z = logits(m.W, m.b, x.data());
    softmax_inplace(z);
    return z;
}

int predict(const LRModel& m, const std::vector<double>& x) {
    std::vector<double> p = predict_proba(m, x);
    int best = 0;
    for (int c = 1; c < m.k; ++c) {
        if (p[c] > p[best]) best = c;
    }
    return best;
}

std::string LRModel::to_json() const {
    nlohmann::ordered_json j;
    j["k"] = k;
    j["d"] = d;
    j["W"] = W.data;
    j["b"] = b;
    j["config"] = {{"lambda", config.lambda},
                   {"learning_rate", config.learning_rate},
                   {"max_iters", config.max_iters},
                   {"tol", config.tol}};
    j["final_loss"] = final_loss;
    return j.dump(2);
}

LRModel LRModel::from_json(const std::string& json_text) {
    auto j = nlohmann::json::parse(json_text);
    LRModel m;
    m.k = j.at("k").get<int>();
    m.d = j.at("d").get<int>();
    m.W = Matrix(m.k, m.d);
    m.W.data = j.at("W").get<std::vector<double>>();
    if (m.W.data.size() != static_cast<size_t>(m.k) * m.d) throw ShapeMismatch();
    m.b = j.at("b").get<std::vector<double>>();
    if (m.b.size() != static_cast<size_t>(m.k)) throw ShapeMismatch();
    const auto& cfg = j.at("config");
    m.config.lambda = cfg.at("lambda").get<double>();
    m.config.learning_rate = cfg.at("learning_rate").get<double>();
    m.config.max_iters = cfg.at("max_iters").get<int>();
    m.config.tol = cfg.at("tol").get<double>();
    m.final_loss = j.at("final_loss").get<double>();
    return m;
}

}  // namespace meme::clf
