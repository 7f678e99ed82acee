#pragma once

#include "zodiaclab/forest.hpp"
#include "zodiaclab/logreg.hpp"
#include "zodiaclab/mlp.hpp"

namespace zodiaclab {

// Dispatch on the configured model kind. n_threads only affects forest tree
// building and never the result.
inline TrainedModel train_model(const FeatureMatrix& X, const TrainConfig& config,
                                unsigned n_threads = 0) {
    switch (config.kind) {
        case ModelKind::LogReg: return train_logreg(X, config);
        case ModelKind::Forest: return train_forest(X, config, n_threads);
        case ModelKind::Mlp: return train_mlp(X, config);
    }
    throw std::invalid_argument("train_model: unknown model kind");
}

}  // namespace zodiaclab
