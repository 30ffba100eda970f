#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace meme::clf {

/// Row-major dense matrix.
struct Matrix {
    int rows = 0, cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
    const double* row(int r) const { return data.data() + static_cast<size_t>(r) * cols; }
    double* row(int r) { return data.data() + static_cast<size_t>(r) * cols; }
};

struct TrainConfig {
    double lambda = 1.0;         // L2 strength on W (bias unpenalized)
    double learning_rate = 1.0;  // initial step, halved on backtracking
    int max_iters = 500;
    double tol = 1e-6;           // relative loss-change stopping threshold
    std::vector<double> sample_weights;  // empty = uniform
};

struct LRModel {
    Matrix W;               // k x d
    std::vector<double> b;  // k
    int k = 0, d = 0;
    std::vector<double> trace;  // loss after each accepted step, non-increasing
    TrainConfig config;
    double final_loss = 0;

    std::string to_json() const;
    static LRModel from_json(const std::string& json_text);
};

struct ShapeMismatch : std::runtime_error {
    ShapeMismatch() : std::runtime_error("inconsistent shapes") {}
};
struct NonFiniteInput : std::runtime_error {
    NonFiniteInput() : std::runtime_error("non-finite value in input") {}
};
struct SingleClass : std::runtime_error {
    SingleClass() : std::runtime_error("training data must contain >= 2 classes") {}
};
struct NonFiniteLoss : std::runtime_error {
    NonFiniteLoss() : std::runtime_error("loss became non-finite") {}
};

struct LossGrad {
    double loss;
    Matrix grad_w;                // k x d
    std::vector<double> grad_b;   // k
};

/// Weighted cross-entropy with L2 on W:
///   loss = (1/sum w) sum_i w_i (-log softmax(W x_i + b)[y_i]) + (lambda/2) |W|_F^2
LossGrad loss_and_gradient(const Matrix& w, const std::vector<double>& b, const Matrix& x,
                           const std::vector<int>& y, const std::vector<double>& weights,
                           double lambda);

/// Full-batch gradient descent from zero with step-halving backtracking
/// (up to 30 halvings per iteration). Deterministic.
LRModel fit(const Matrix& x, const std::vector<int>& y, const TrainConfig& cfg);

std::vector<double> predict_proba(const LRModel& m, const std::vector<double>& x);

/// Argmax of predict_proba, ties broken by lowest class index.
int predict(const LRModel& m, const std::vector<double>& x);

}  // namespace meme::clf
