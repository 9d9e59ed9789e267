#include <benchmark/benchmark.h>

#include <random>

#include "dbw/distance.hpp"
#include "dbw/model.hpp"
#include "dbw/weighting.hpp"

namespace {

dbw::FeatureMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    dbw::FeatureMatrix X(rows, cols);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    for (auto& v : X.data) v = g(rng);
    return X;
}

dbw::FeatureMatrix random_binary(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    dbw::FeatureMatrix X(rows, cols);
    std::mt19937_64 rng(seed);
    for (auto& v : X.data) v = static_cast<double>(rng() % 2);
    return X;
}

void BM_pairwise_euclidean(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto train = random_matrix(n, 30, 1);
    const auto test = random_matrix(n / 4, 30, 2);
    for (auto _ : state) {
        auto D = dbw::pairwise_distances(train, test, dbw::MetricKind::Euclidean);
        benchmark::DoNotOptimize(D.values.data.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * (n / 4)));
}

void BM_pairwise_hamming(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto train = random_binary(n, 30, 3);
    const auto test = random_binary(n / 4, 30, 4);
    for (auto _ : state) {
        auto D = dbw::pairwise_distances(train, test, dbw::MetricKind::Hamming);
        benchmark::DoNotOptimize(D.values.data.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * (n / 4)));
}

void BM_compute_weights_exp(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto train = random_matrix(n, 30, 5);
    const auto test = random_matrix(n / 4, 30, 6);
    const auto D = dbw::pairwise_distances(train, test, dbw::MetricKind::Euclidean);
    const auto scheme = dbw::WeightScheme::exp_decay(1.0);
    for (auto _ : state) {
        auto w = dbw::compute_weights(D, scheme);
        benchmark::DoNotOptimize(w.weights.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * (n / 4)));
}

void BM_forward_backward(benchmark::State& state) {
    const auto batch = static_cast<std::size_t>(state.range(0));
    dbw::ModelConfig cfg;
    cfg.input_dim = 30;
    cfg.hidden_layers = {64};
    cfg.seed = 7;
    const auto params = dbw::init_params(cfg);
    const auto X = random_matrix(batch, 30, 8);
    std::vector<int> y(batch);
    std::vector<double> w(batch, 1.0);
    std::mt19937_64 rng(9);
    for (auto& v : y) v = static_cast<int>(rng() % 2);
    for (auto _ : state) {
        auto g = dbw::backward(params, X, y, w);
        benchmark::DoNotOptimize(g.layers.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(batch));
}

void BM_adam_step(benchmark::State& state) {
    dbw::ModelConfig cfg;
    cfg.input_dim = 30;
    cfg.hidden_layers = {64};
    cfg.seed = 11;
    auto params = dbw::init_params(cfg);
    const auto X = random_matrix(32, 30, 12);
    std::vector<int> y(32);
    std::vector<double> w(32, 1.0);
    std::mt19937_64 rng(13);
    for (auto& v : y) v = static_cast<int>(rng() % 2);
    const auto grads = dbw::backward(params, X, y, w);
    auto adam = dbw::AdamState::zeros_like(params);
    for (auto _ : state) {
        dbw::adam_step(params, grads, adam, 0.001);
        benchmark::DoNotOptimize(params.layers.data());
    }
}

}  // namespace

BENCHMARK(BM_pairwise_euclidean)->Arg(256)->Arg(1024);
BENCHMARK(BM_pairwise_hamming)->Arg(256)->Arg(1024);
BENCHMARK(BM_compute_weights_exp)->Arg(256)->Arg(1024);
BENCHMARK(BM_forward_backward)->Arg(32)->Arg(256);
BENCHMARK(BM_adam_step);

BENCHMARK_MAIN();
