#pragma once

// Multinomial logistic regression trained with mini-batch gradient descent on
// mean softmax cross-entropy plus an L2 weight penalty. Weights start at zero
// (the objective is convex, so no symmetry breaking is needed); the only
// randomness is the per-epoch batch order, drawn from stream (seed, 0).

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
namespace logreg_detail {

// Mean cross-entropy over `rows` plus (l2/2)*||W||^2, with gradients written to
// grad_w / grad_b. Shared by the training loop and the finite-difference tests.
inline double loss_and_gradient(const FeatureMatrix& X, std::span<const std::size_t> rows,
                                int num_classes, std::span<const double> weights,
                                std::span<const double> biases, double l2,
                                std::span<double> grad_w, std::span<double> grad_b) {
    const int d = X.width();
    const auto K = static_cast<std::size_t>(num_classes);
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    std::fill(grad_b.begin(), grad_b.end(), 0.0);

    std::vector<double> probs(K);
    double loss = 0.0;
    for (const auto r : rows) {
        const auto x = X.row(r);
        for (std::size_t k = 0; k < K; ++k) {
            const double* w = weights.data() + k * static_cast<std::size_t>(d);
            double s = biases[k];
            for (int j = 0; j < d; ++j) s += w[j] * x[static_cast<std::size_t>(j)];
            probs[k] = s;
        }
        softmax_inplace(probs);
        const auto y = static_cast<std::size_t>(X.labels[r].index);
        loss -= std::log(probs[y]);
        probs[y] -= 1.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double coef = probs[k];
            if (coef == 0.0) continue;
            double* g = grad_w.data() + k * static_cast<std::size_t>(d);
            for (int j = 0; j < d; ++j) g[j] += coef * x[static_cast<std::size_t>(j)];
            grad_b[k] += coef;
        }
    }

    const double inv_n = 1.0 / static_cast<double>(rows.size());
    loss *= inv_n;
    for (double& g : grad_w) g *= inv_n;
    for (double& g : grad_b) g *= inv_n;

    double weight_norm_sq = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        weight_norm_sq += weights[i] * weights[i];
        grad_w[i] += l2 * weights[i];
    }
    return loss + 0.5 * l2 * weight_norm_sq;
}

}  // namespace logreg_detail

inline TrainedModel train_logreg(const FeatureMatrix& X, const TrainConfig& config) {
    config.validate();
    if (X.rows == 0) throw std::invalid_argument("train_logreg: empty matrix");
    const auto& settings = config.logreg;
    const int d = X.width();
    const int K = X.num_classes;

    LogRegModel model;
    model.num_classes = K;
    model.width = d;
    model.weights.assign(static_cast<std::size_t>(K) * static_cast<std::size_t>(d), 0.0);
    model.biases.assign(static_cast<std::size_t>(K), 0.0);

    Pcg32 rng(config.seed, 0);
    std::vector<std::size_t> order(X.rows);
    std::iota(order.begin(), order.end(), std::size_t{0});

    std::vector<double> grad_w(model.weights.size());
    std::vector<double> grad_b(model.biases.size());

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
                batch_loss = logreg_detail::loss_and_gradient(
                    X, batch, K, model.weights, model.biases, settings.l2_penalty, grad_w, grad_b);
            } catch (const std::domain_error&) {
                throw divergence_error("logreg",
                                       "non-finite scores at epoch " + std::to_string(epoch));
            }
            epoch_loss += batch_loss * static_cast<double>(count);
            seen += count;
            for (std::size_t i = 0; i < model.weights.size(); ++i) {
                model.weights[i] -= settings.learning_rate * grad_w[i];
            }
            for (std::size_t i = 0; i < model.biases.size(); ++i) {
                model.biases[i] -= settings.learning_rate * grad_b[i];
            }
        }
        if (!std::isfinite(epoch_loss / static_cast<double>(seen))) {
            throw divergence_error("logreg", "non-finite loss at epoch " + std::to_string(epoch));
        }
    }
    return TrainedModel{config, std::move(model)};
}

}  // namespace zodiaclab
