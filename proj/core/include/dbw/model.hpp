#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dbw/data.hpp"
#include "dbw/matrix.hpp"
#include "dbw/weighting.hpp"

namespace dbw {

/// Feed-forward binary classifier: ReLU hidden layers, single sigmoid output.
struct ModelConfig {
    std::size_t input_dim = 0;
    std::vector<std::size_t> hidden_layers = {64};
    std::uint64_t seed = 0;
};

struct Layer {
    Matrix weights;  // out x in
    std::vector<double> bias;
};

struct ModelParams {
    std::vector<Layer> layers;
};

/// Gradients share the parameter layout.
using Gradients = ModelParams;

struct AdamState {
    std::vector<Layer> first_moment;
    std::vector<Layer> second_moment;
    std::uint64_t t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static AdamState zeros_like(const ModelParams& params);
};

struct TrainConfig {
    double learning_rate = 0.001;
    std::size_t batch_size = 32;
    std::size_t epochs = 100;
    std::uint64_t shuffle_seed = 0;
};

struct EpochStats {
    double weighted_train_loss = 0.0;
    double validation_loss = 0.0;
    double validation_accuracy = 0.0;
};

using TrainHistory = std::vector<EpochStats>;

// He-uniform hidden layers, Glorot-uniform output, zero biases; seeded.
ModelParams init_params(const ModelConfig& cfg);

// Per-row sigmoid probabilities in (0,1).
std::vector<double> forward(const ModelParams& params, const FeatureMatrix& X);

// (1/N) * sum_i w_i * [-y_i log p_i - (1-y_i) log(1-p_i)], probs clipped
// to [1e-12, 1-1e-12] before the logs.
double weighted_bce_loss(const std::vector<double>& probs, const std::vector<int>& labels,
                         const std::vector<double>& weights);

// Exact gradients of the weighted batch loss (1/B) * sum w_i * l_i.
Gradients backward(const ModelParams& params, const FeatureMatrix& X_batch,
                   const std::vector<int>& y_batch, const std::vector<double>& w_batch);

// Standard Adam update with bias correction; increments state.t.
void adam_step(ModelParams& params, const Gradients& grads, AdamState& state, double lr);

struct TrainResult {
    ModelParams params;
    TrainHistory history;
};

// Full weighted minibatch training loop: epochs x ceil(N/B) Adam steps,
// per-epoch shuffle, weights ride with their samples. No early stopping.
// `on_step`, when set, observes the parameters after every Adam step.
TrainResult train(const DatasetSplit& split, const WeightVector& weights,
                  const ModelConfig& mcfg, const TrainConfig& tcfg,
                  const std::function<void(const ModelParams&)>& on_step = nullptr);

std::vector<double> predict_proba(const ModelParams& params, const FeatureMatrix& X);

// Versioned JSON checkpoint (layer shapes + row-major parameter arrays).
std::string params_to_json(const ModelParams& params);
ModelParams params_from_json(const std::string& json_text);

}  // namespace dbw
