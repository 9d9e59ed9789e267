#include "dbw/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace dbw {

namespace {

constexpr double kProbClip = 1e-12;

double stable_sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

std::vector<std::size_t> layer_widths(const ModelConfig& cfg) {
    std::vector<std::size_t> widths;
    widths.push_back(cfg.input_dim);
    for (auto w : cfg.hidden_layers) widths.push_back(w);
    widths.push_back(1);
    return widths;
}

// Forward pass keeping pre-activations and activations for backprop.
struct ForwardTrace {
    std::vector<std::vector<double>> activations;  // [0] = input row
    std::vector<std::vector<double>> pre;          // per layer
};

ForwardTrace forward_row(const ModelParams& params, std::span<const double> x) {
    ForwardTrace tr;
    tr.activations.emplace_back(x.begin(), x.end());
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const Layer& layer = params.layers[l];
        const auto& in = tr.activations.back();
        std::vector<double> z(layer.bias);
        for (std::size_t o = 0; o < layer.weights.rows; ++o) {
            double s = 0.0;
            const auto w = layer.weights.row(o);
            for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * in[k];
            z[o] += s;
        }
        tr.pre.push_back(z);
        const bool last = l + 1 == params.layers.size();
        std::vector<double> a(z.size());
        for (std::size_t o = 0; o < z.size(); ++o)
            a[o] = last ? stable_sigmoid(z[o]) : std::max(0.0, z[o]);
        tr.activations.push_back(std::move(a));
    }
    return tr;
}

ModelParams zeros_like_params(const ModelParams& params) {
    ModelParams z;
    for (const auto& layer : params.layers) {
        Layer l;
        l.weights = Matrix(layer.weights.rows, layer.weights.cols);
        l.bias.assign(layer.bias.size(), 0.0);
        z.layers.push_back(std::move(l));
    }
    return z;
}

}  // namespace

AdamState AdamState::zeros_like(const ModelParams& params) {
    AdamState s;
    s.first_moment = zeros_like_params(params).layers;
    s.second_moment = zeros_like_params(params).layers;
    return s;
}

ModelParams init_params(const ModelConfig& cfg) {
    if (cfg.input_dim < 1) throw std::invalid_argument("init_params: input_dim must be >= 1");
    for (auto w : cfg.hidden_layers)
        if (w < 1) throw std::invalid_argument("init_params: hidden widths must be >= 1");

    const auto widths = layer_widths(cfg);
    std::mt19937_64 rng(cfg.seed);
    ModelParams params;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        const std::size_t fan_in = widths[l];
        const std::size_t fan_out = widths[l + 1];
        const bool output_layer = l + 2 == widths.size();
        const double bound =
            output_layer ? std::sqrt(6.0 / static_cast<double>(fan_in + fan_out))
                         : std::sqrt(6.0 / static_cast<double>(fan_in));
        std::uniform_real_distribution<double> uni(-bound, bound);
        Layer layer;
        layer.weights = Matrix(fan_out, fan_in);
        for (double& v : layer.weights.data) v = uni(rng);
        layer.bias.assign(fan_out, 0.0);
        params.layers.push_back(std::move(layer));
    }
    return params;
}

std::vector<double> forward(const ModelParams& params, const FeatureMatrix& X) {
    if (params.layers.empty()) throw std::invalid_argument("forward: uninitialized model");
    if (X.cols != params.layers.front().weights.cols)
        throw std::invalid_argument("forward: feature dimension mismatch");
    std::vector<double> probs(X.rows);
    for (std::size_t i = 0; i < X.rows; ++i)
        probs[i] = forward_row(params, X.row(i)).activations.back()[0];
    return probs;
}

double weighted_bce_loss(const std::vector<double>& probs, const std::vector<int>& labels,
                         const std::vector<double>& weights) {
    if (probs.size() != labels.size() || probs.size() != weights.size())
        throw std::invalid_argument("weighted_bce_loss: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double p = std::clamp(probs[i], kProbClip, 1.0 - kProbClip);
        const double l = labels[i] == 1 ? -std::log(p) : -std::log(1.0 - p);
        sum += weights[i] * l;
    }
    return sum / static_cast<double>(probs.size());
}

Gradients backward(const ModelParams& params, const FeatureMatrix& X_batch,
                   const std::vector<int>& y_batch, const std::vector<double>& w_batch) {
    const std::size_t batch = X_batch.rows;
    if (y_batch.size() != batch || w_batch.size() != batch)
        throw std::invalid_argument("backward: batch length mismatch");
    if (X_batch.cols != params.layers.front().weights.cols)
        throw std::invalid_argument("backward: feature dimension mismatch");

    Gradients grads = zeros_like_params(params);
    const std::size_t n_layers = params.layers.size();
    for (std::size_t i = 0; i < batch; ++i) {
        const ForwardTrace tr = forward_row(params, X_batch.row(i));
        const double p = tr.activations.back()[0];
        // d(loss)/d(logit) for sigmoid + BCE, scaled by the sample weight.
        std::vector<double> delta{w_batch[i] * (p - static_cast<double>(y_batch[i])) /
                                  static_cast<double>(batch)};
        for (std::size_t l = n_layers; l-- > 0;) {
            const Layer& layer = params.layers[l];
            Layer& g = grads.layers[l];
            const auto& a_prev = tr.activations[l];
            for (std::size_t o = 0; o < layer.weights.rows; ++o) {
                g.bias[o] += delta[o];
                auto gw = g.weights.row(o);
                for (std::size_t k = 0; k < gw.size(); ++k) gw[k] += delta[o] * a_prev[k];
            }
            if (l == 0) break;
            std::vector<double> prev_delta(layer.weights.cols, 0.0);
            for (std::size_t o = 0; o < layer.weights.rows; ++o) {
                const auto w = layer.weights.row(o);
                for (std::size_t k = 0; k < w.size(); ++k) prev_delta[k] += w[k] * delta[o];
            }
            const auto& z_prev = tr.pre[l - 1];
            for (std::size_t k = 0; k < prev_delta.size(); ++k)
                if (z_prev[k] <= 0.0) prev_delta[k] = 0.0;  // ReLU gate
            delta = std::move(prev_delta);
        }
    }
    return grads;
}

void adam_step(ModelParams& params, const Gradients& grads, AdamState& state, double lr) {
    for (const auto& layer : grads.layers) {
        for (double g : layer.weights.data)
            if (!std::isfinite(g))
                throw std::runtime_error("adam_step: non-finite gradient, aborting run");
        for (double g : layer.bias)
            if (!std::isfinite(g))
                throw std::runtime_error("adam_step: non-finite gradient, aborting run");
    }
    state.t += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    auto update = [&](double& theta, double g, double& m, double& v) {
        m = state.beta1 * m + (1.0 - state.beta1) * g;
        v = state.beta2 * v + (1.0 - state.beta2) * g * g;
        theta -= lr * (m / bc1) / (std::sqrt(v / bc2) + state.epsilon);
    };
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        auto& pl = params.layers[l];
        const auto& gl = grads.layers[l];
        auto& ml = state.first_moment[l];
        auto& vl = state.second_moment[l];
        for (std::size_t k = 0; k < pl.weights.data.size(); ++k)
            update(pl.weights.data[k], gl.weights.data[k], ml.weights.data[k],
                   vl.weights.data[k]);
        for (std::size_t k = 0; k < pl.bias.size(); ++k)
            update(pl.bias[k], gl.bias[k], ml.bias[k], vl.bias[k]);
    }
}

TrainResult train(const DatasetSplit& split, const WeightVector& weights,
                  const ModelConfig& mcfg, const TrainConfig& tcfg,
                  const std::function<void(const ModelParams&)>& on_step) {
    const Dataset& tr = split.train;
    const std::size_t n = tr.n_samples();
    if (weights.weights.size() != n)
        throw std::invalid_argument("train: weight vector length != train set size");
    ModelConfig cfg = mcfg;
    if (cfg.input_dim == 0) cfg.input_dim = tr.n_features();
    if (cfg.input_dim != tr.n_features())
        throw std::invalid_argument("train: model input_dim != feature count");

    TrainResult result;
    result.params = init_params(cfg);
    AdamState state = AdamState::zeros_like(result.params);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 shuffle_rng(tcfg.shuffle_seed);

    const std::size_t B = tcfg.batch_size;
    for (std::size_t epoch = 0; epoch < tcfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        for (std::size_t start = 0; start < n; start += B) {
            const std::size_t end = std::min(start + B, n);
            const std::size_t bs = end - start;
            FeatureMatrix Xb(bs, tr.n_features());
            std::vector<int> yb(bs);
            std::vector<double> wb(bs);
            for (std::size_t k = 0; k < bs; ++k) {
                const std::size_t src = order[start + k];
                const auto row = tr.features.row(src);
                std::copy(row.begin(), row.end(), Xb.row(k).begin());
                yb[k] = tr.labels[src];
                wb[k] = weights.weights[src];
            }
            const Gradients g = backward(result.params, Xb, yb, wb);
            adam_step(result.params, g, state, tcfg.learning_rate);
            if (on_step) on_step(result.params);
        }

        EpochStats stats;
        stats.weighted_train_loss =
            weighted_bce_loss(forward(result.params, tr.features), tr.labels, weights.weights);
        if (split.validation.n_samples() > 0) {
            const auto vp = forward(result.params, split.validation.features);
            const std::vector<double> ones(vp.size(), 1.0);
            stats.validation_loss = weighted_bce_loss(vp, split.validation.labels, ones);
            std::size_t correct = 0;
            for (std::size_t i = 0; i < vp.size(); ++i)
                correct += (vp[i] >= 0.5 ? 1 : 0) == split.validation.labels[i];
            stats.validation_accuracy =
                static_cast<double>(correct) / static_cast<double>(vp.size());
        } else {
            stats.validation_loss = std::numeric_limits<double>::quiet_NaN();
            stats.validation_accuracy = std::numeric_limits<double>::quiet_NaN();
        }
        result.history.push_back(stats);
    }
    return result;
}

std::vector<double> predict_proba(const ModelParams& params, const FeatureMatrix& X) {
    return forward(params, X);
}

std::string params_to_json(const ModelParams& params) {
    nlohmann::json j;
    j["format"] = "dbw-mlp-v1";
    for (const auto& layer : params.layers) {
        nlohmann::json l;
        l["rows"] = layer.weights.rows;
        l["cols"] = layer.weights.cols;
        l["weights"] = layer.weights.data;
        l["bias"] = layer.bias;
        j["layers"].push_back(std::move(l));
    }
    return j.dump();
}

ModelParams params_from_json(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    if (j.value("format", "") != "dbw-mlp-v1")
        throw std::runtime_error("checkpoint: unknown format tag");
    ModelParams params;
    for (const auto& l : j.at("layers")) {
        Layer layer;
        layer.weights = Matrix(l.at("rows").get<std::size_t>(), l.at("cols").get<std::size_t>());
        layer.weights.data = l.at("weights").get<std::vector<double>>();
        layer.bias = l.at("bias").get<std::vector<double>>();
        if (layer.weights.data.size() != layer.weights.rows * layer.weights.cols ||
            layer.bias.size() != layer.weights.rows)
            throw std::runtime_error("checkpoint: inconsistent layer shapes");
        params.layers.push_back(std::move(layer));
    }
    return params;
}

}  // namespace dbw
