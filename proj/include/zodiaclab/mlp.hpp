#pragma once

// Single-hidden-layer perceptron: rectifier hidden layer, softmax output,
// mean cross-entropy loss, mini-batch gradient descent. Weights start
// Glorot-uniform in [-sqrt(6/(fan_in+fan_out)), +sqrt(6/(fan_in+fan_out))],
// biases at zero. Stream (seed, 0) supplies the init draws (w1 row-major,
// then w2 row-major) followed by the per-epoch shuffles.

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "zodiaclab/errors.hpp"
#include "zodiaclab/features.hpp"
#include "zodiaclab/model.hpp"
#include "zodiaclab/rng.hpp"

namespace zodiaclab {
namespace mlp_detail {

struct Gradients {
    std::vector<double> w1, b1, w2, b2;

    explicit Gradients(const MlpModel& model)
        : w1(model.w1.size(), 0.0),
          b1(model.b1.size(), 0.0),
          w2(model.w2.size(), 0.0),
          b2(model.b2.size(), 0.0) {}

    void reset() {
        std::fill(w1.begin(), w1.end(), 0.0);
        std::fill(b1.begin(), b1.end(), 0.0);
        std::fill(w2.begin(), w2.end(), 0.0);
        std::fill(b2.begin(), b2.end(), 0.0);
    }
};

// Mean cross-entropy over `rows` with full backprop gradients. Shared by the
// training loop and the finite-difference tests. relu'(0) is defined as 0.
inline double loss_and_gradient(const FeatureMatrix& X, std::span<const std::size_t> rows,
                                const MlpModel& model, Gradients& grads) {
    grads.reset();
    const int d = model.width;
    const int H = model.hidden_units;
    const int K = model.num_classes;

    std::vector<double> pre(static_cast<std::size_t>(H));
    std::vector<double> hidden(static_cast<std::size_t>(H));
    std::vector<double> probs(static_cast<std::size_t>(K));
    std::vector<double> dhidden(static_cast<std::size_t>(H));

    double loss = 0.0;
    for (const auto r : rows) {
        const auto x = X.row(r);
        for (int h = 0; h < H; ++h) {
            const double* w = model.w1.data() + static_cast<std::size_t>(h) * d;
            double z = model.b1[static_cast<std::size_t>(h)];
            for (int j = 0; j < d; ++j) z += w[j] * x[static_cast<std::size_t>(j)];
            pre[static_cast<std::size_t>(h)] = z;
            hidden[static_cast<std::size_t>(h)] = z > 0.0 ? z : 0.0;
        }
        for (int k = 0; k < K; ++k) {
            const double* w = model.w2.data() + static_cast<std::size_t>(k) * H;
            double s = model.b2[static_cast<std::size_t>(k)];
            for (int h = 0; h < H; ++h) s += w[h] * hidden[static_cast<std::size_t>(h)];
            probs[static_cast<std::size_t>(k)] = s;
        }
        softmax_inplace(probs);
        const auto y = static_cast<std::size_t>(X.labels[r].index);
        loss -= std::log(probs[y]);

        probs[y] -= 1.0;  // dL/dscores for this sample
        std::fill(dhidden.begin(), dhidden.end(), 0.0);
        for (int k = 0; k < K; ++k) {
            const double dscore = probs[static_cast<std::size_t>(k)];
            const double* w = model.w2.data() + static_cast<std::size_t>(k) * H;
            double* gw = grads.w2.data() + static_cast<std::size_t>(k) * H;
            for (int h = 0; h < H; ++h) {
                gw[h] += dscore * hidden[static_cast<std::size_t>(h)];
                dhidden[static_cast<std::size_t>(h)] += dscore * w[h];
            }
            grads.b2[static_cast<std::size_t>(k)] += dscore;
        }
        for (int h = 0; h < H; ++h) {
            if (pre[static_cast<std::size_t>(h)] <= 0.0) continue;
            const double dz = dhidden[static_cast<std::size_t>(h)];
            double* gw = grads.w1.data() + static_cast<std::size_t>(h) * d;
            for (int j = 0; j < d; ++j) gw[j] += dz * x[static_cast<std::size_t>(j)];
            grads.b1[static_cast<std::size_t>(h)] += dz;
        }
    }

    const double inv_n = 1.0 / static_cast<double>(rows.size());
    for (double& g : grads.w1) g *= inv_n;
    for (double& g : grads.b1) g *= inv_n;
    for (double& g : grads.w2) g *= inv_n;
    for (double& g : grads.b2) g *= inv_n;
    return loss * inv_n;
}

inline void init_glorot(std::vector<double>& weights, int fan_in, int fan_out, Pcg32& rng) {
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    for (double& w : weights) w = rng.uniform_real(-bound, bound);
}

}  // namespace mlp_detail

inline TrainedModel train_mlp(const FeatureMatrix& X, const TrainConfig& config) {
    config.validate();
    if (X.rows == 0) throw std::invalid_argument("train_mlp: empty matrix");
    const auto& settings = config.mlp;
    const int d = X.width();
    const int K = X.num_classes;
    const int H = settings.hidden_units;

    MlpModel model;
    model.num_classes = K;
    model.width = d;
    model.hidden_units = H;
    model.w1.resize(static_cast<std::size_t>(H) * static_cast<std::size_t>(d));
    model.b1.assign(static_cast<std::size_t>(H), 0.0);
    model.w2.resize(static_cast<std::size_t>(K) * static_cast<std::size_t>(H));
    model.b2.assign(static_cast<std::size_t>(K), 0.0);

    Pcg32 rng(config.seed, 0);
    mlp_detail::init_glorot(model.w1, d, H, rng);
    mlp_detail::init_glorot(model.w2, H, K, rng);

    std::vector<std::size_t> order(X.rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    mlp_detail::Gradients grads(model);

    for (int epoch = 0; epoch < settings.epochs; ++epoch) {
        shuffle(order, rng);
        double epoch_loss = 0.0;
        std::size_t seen = 0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(settings.batch_size)) {
            const auto count =
                std::min(static_cast<std::size_t>(settings.batch_size), order.size() - start);
            const auto batch = std::span<const std::size_t>(order).subspan(start, count);
            double batch_loss = 0.0;
            try {
                batch_loss = mlp_detail::loss_and_gradient(X, batch, model, grads);
            } catch (const std::domain_error&) {
                throw divergence_error("mlp",
                                       "non-finite scores at epoch " + std::to_string(epoch));
            }
            epoch_loss += batch_loss * static_cast<double>(count);
            seen += count;
            const double lr = settings.learning_rate;
            for (std::size_t i = 0; i < model.w1.size(); ++i) model.w1[i] -= lr * grads.w1[i];
            for (std::size_t i = 0; i < model.b1.size(); ++i) model.b1[i] -= lr * grads.b1[i];
            for (std::size_t i = 0; i < model.w2.size(); ++i) model.w2[i] -= lr * grads.w2[i];
            for (std::size_t i = 0; i < model.b2.size(); ++i) model.b2[i] -= lr * grads.b2[i];
        }
        if (!std::isfinite(epoch_loss / static_cast<double>(seen))) {
            throw divergence_error("mlp", "non-finite loss at epoch " + std::to_string(epoch));
        }
    }
    return TrainedModel{config, std::move(model)};
}

}  // namespace zodiaclab
