#pragma once

#include <cstdint>
#include <utility>

#include "skycast/models.hpp"
#include "skycast/windows.hpp"

namespace skycast {

struct TrainConfig {
    double learning_rate = 0.1;
    long long epochs = 2500;
    std::uint64_t seed = 0;
    double epoch_scale = 1.0; // desk-scale runs shrink the epoch grid uniformly
};

// round(epochs * epoch_scale)
long long scaled_epochs(const TrainConfig& config);

inline double mse_loss(double yhat, double y) {
    double e = yhat - y;
    return e * e;
}

// Flat gradient, aligned entry-for-entry with param_values() order.
using GradientSet = Vector;

GradientSet backprop_feedforward(const FeedforwardParams& params, const Vector& x, double y);
GradientSet bptt(const LstmParams& params, const Vector& window, double y);
GradientSet bptt(const LstmPcParams& params, const Vector& window, double y);
GradientSet model_gradient(const ModelParams& params, const Vector& window, double y);

// w' = w - lr * g for every trainable scalar.
void sgd_update(ModelParams& params, const GradientSet& grads, double lr);

// Seeded uniform init: weights in [-r, r] with r = sqrt(6 / (fan_in + fan_out)),
// drawn tensor-by-tensor in param_values() order; biases start at zero.
ModelParams init_params(ModelKind kind, std::size_t input_width, std::uint64_t seed,
                        std::size_t lstm_hidden = 4);

struct LossHistory {
    std::vector<double> epoch_mse;
};

// Per-sample SGD in chronological order, no shuffling.
std::pair<ModelParams, LossHistory> train_iterative(ModelKind kind, const SampleSet& samples,
                                                    const TrainConfig& config,
                                                    std::size_t lstm_hidden = 4);

// Random frozen hidden layer (W, b uniform in [-1, 1]); output weights solved in
// closed form via ridge-stabilized normal equations.
ElmParams elm_fit(const SampleSet& samples, std::size_t n_hidden, std::uint64_t seed);

// Three random-restart members with seeds derived from base_seed.
ElmEnsemble fit_elm_ensemble(const SampleSet& samples, std::size_t n_hidden,
                             std::uint64_t base_seed);

double elm_ensemble_predict(const SampleSet& samples, std::size_t n_hidden,
                            std::uint64_t base_seed, const Vector& x);

} // namespace skycast
