#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "zodiaclab/eval.hpp"
#include "zodiaclab/mlp.hpp"
#include "test_helpers.hpp"

using namespace zodiaclab;
using test_helpers::make_matrix;
using test_helpers::relative_error;

namespace {

TrainConfig mlp_config(int hidden, double lr, int epochs, int batch) {
    TrainConfig config;
    config.kind = ModelKind::Mlp;
    config.seed = 6;
    config.mlp.hidden_units = hidden;
    config.mlp.learning_rate = lr;
    config.mlp.epochs = epochs;
    config.mlp.batch_size = batch;
    return config;
}

}  // namespace

TEST_CASE("zero epochs still yield normalized probability rows") {
    auto X = make_matrix({{0.4, -1.2}, {2.0, 0.1}, {-0.7, 0.9}}, {0, 1, 2}, 3);
    const auto model = train_mlp(X, mlp_config(8, 0.1, 0, 4));
    const auto probs = predict_proba(model, X);
    for (std::size_t r = 0; r < probs.rows; ++r) {
        double sum = 0.0;
        for (const double p : probs.row(r)) {
            REQUIRE(p > 0.0);
            sum += p;
        }
        REQUIRE(std::abs(sum - 1.0) < 1e-12);
    }
    // identical inputs map to identical outputs
    auto Y = make_matrix({{0.4, -1.2}, {0.4, -1.2}}, {0, 0}, 3);
    const auto dup = predict_proba(model, Y);
    for (int k = 0; k < 3; ++k) {
        REQUIRE(dup.row(0)[static_cast<std::size_t>(k)] == dup.row(1)[static_cast<std::size_t>(k)]);
    }
}

TEST_CASE("glorot initialization stays inside its bound and biases start at zero") {
    auto X = make_matrix({{0.0, 0.0, 0.0, 0.0}}, {0}, 5);
    const auto model = train_mlp(X, mlp_config(16, 0.1, 0, 1));
    const auto& m = std::get<MlpModel>(model.model);
    const double bound1 = std::sqrt(6.0 / (4 + 16));
    for (const double w : m.w1) {
        REQUIRE(std::abs(w) <= bound1);
    }
    const double bound2 = std::sqrt(6.0 / (16 + 5));
    for (const double w : m.w2) {
        REQUIRE(std::abs(w) <= bound2);
    }
    for (const double b : m.b1) REQUIRE(b == 0.0);
    for (const double b : m.b2) REQUIRE(b == 0.0);
}

TEST_CASE("backprop matches central finite differences on a 5-sample batch") {
    Pcg32 rng(626, 0);
    for (int instance = 0; instance < 10; ++instance) {
        const int n = 5;
        const int d = 4;
        const int K = 3;
        const int H = 5;

        std::vector<std::vector<double>> rows;
        std::vector<int> labels;
        for (int i = 0; i < n; ++i) {
            std::vector<double> row;
            for (int j = 0; j < d; ++j) row.push_back(rng.uniform_real(-2.0, 2.0));
            rows.push_back(std::move(row));
            labels.push_back(static_cast<int>(rng.uniform_int(K)));
        }
        auto X = make_matrix(rows, labels, K);

        MlpModel model;
        model.num_classes = K;
        model.width = d;
        model.hidden_units = H;
        model.w1.resize(static_cast<std::size_t>(H) * d);
        model.b1.resize(static_cast<std::size_t>(H));
        model.w2.resize(static_cast<std::size_t>(K) * H);
        model.b2.resize(static_cast<std::size_t>(K));
        for (double& w : model.w1) w = rng.uniform_real(-1.0, 1.0);
        for (double& b : model.b1) b = rng.uniform_real(-0.5, 0.5);
        for (double& w : model.w2) w = rng.uniform_real(-1.0, 1.0);
        for (double& b : model.b2) b = rng.uniform_real(-0.5, 0.5);

        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), std::size_t{0});

        mlp_detail::Gradients grads(model);
        mlp_detail::loss_and_gradient(X, all, model, grads);

        mlp_detail::Gradients scratch(model);
        const double h = 1e-5;
        const auto loss_of = [&](const MlpModel& m) {
            return mlp_detail::loss_and_gradient(X, all, m, scratch);
        };

        const auto check_block = [&](std::vector<double> MlpModel::*block,
                                     const std::vector<double>& analytic) {
            auto& values = model.*block;
            // probe every fourth parameter to keep the suite quick
            for (std::size_t i = 0; i < values.size(); i += 4) {
                auto plus = model;
                auto minus = model;
                (plus.*block)[i] += h;
                (minus.*block)[i] -= h;
                const double fd = (loss_of(plus) - loss_of(minus)) / (2.0 * h);
                INFO("instance " << instance << " coordinate " << i);
                REQUIRE(relative_error(fd, analytic[i]) < 1e-4);
            }
        };
        check_block(&MlpModel::w1, grads.w1);
        check_block(&MlpModel::b1, grads.b1);
        check_block(&MlpModel::w2, grads.w2);
        check_block(&MlpModel::b2, grads.b2);
    }
}

TEST_CASE("xor becomes learnable with eight hidden units") {
    auto X = test_helpers::xor_matrix();
    const auto model = train_mlp(X, mlp_config(8, 0.3, 3000, 4));
    REQUIRE(accuracy(predict(model, X), X.labels) == 1.0);
}

TEST_CASE("training is deterministic") {
    auto X = make_matrix({{0.1, 0.2}, {0.5, -0.4}, {-1.0, 0.7}, {0.9, 0.9}}, {0, 1, 1, 0}, 2);
    const auto config = mlp_config(6, 0.05, 40, 2);
    const auto a = train_mlp(X, config);
    const auto b = train_mlp(X, config);
    REQUIRE(std::get<MlpModel>(a.model).w1 == std::get<MlpModel>(b.model).w1);
    REQUIRE(std::get<MlpModel>(a.model).w2 == std::get<MlpModel>(b.model).w2);
    REQUIRE(std::get<MlpModel>(a.model).b1 == std::get<MlpModel>(b.model).b1);
    REQUIRE(std::get<MlpModel>(a.model).b2 == std::get<MlpModel>(b.model).b2);
}

TEST_CASE("an absurd learning rate raises a divergence error") {
    auto X = make_matrix({{1e3, -1e3}, {-1e3, 1e3}}, {0, 1}, 2);
    auto config = mlp_config(4, 1e18, 400, 1);
    REQUIRE_THROWS_AS(train_mlp(X, config), divergence_error);
}
