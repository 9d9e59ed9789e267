#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "dbw/weighting.hpp"
#include "doctest.h"

using dbw::DistanceMatrix;
using dbw::WeightScheme;

namespace {

DistanceMatrix make_D(std::size_t n, std::size_t m, const std::vector<double>& values) {
    DistanceMatrix D;
    D.values = dbw::Matrix(n, m);
    D.values.data = values;
    return D;
}

DistanceMatrix random_D(std::mt19937_64& rng, std::size_t n, std::size_t m,
                        double lo = 0.0, double hi = 5.0) {
    DistanceMatrix D;
    D.values = dbw::Matrix(n, m);
    std::uniform_real_distribution<double> u(lo, hi);
    for (auto& v : D.values.data) v = u(rng);
    return D;
}

// Independent termwise evaluation of the mean-of-exponentials weight.
std::vector<double> exp_decay_oracle(const DistanceMatrix& D, double lambda) {
    std::vector<double> w(D.n_train());
    for (std::size_t i = 0; i < D.n_train(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < D.n_test(); ++j)
            acc += std::exp(-lambda * D.values.at(i, j));
        w[i] = acc / static_cast<double>(D.n_test());
    }
    return w;
}

}  // namespace

TEST_CASE("exp decay hand-evaluated 2x2 example") {
    const auto D = make_D(2, 2, {0, 1, 2, 3});
    const auto w = dbw::compute_weights(D, WeightScheme::exp_decay(1.0));
    CHECK(w.weights[0] == doctest::Approx((1.0 + std::exp(-1.0)) / 2.0).epsilon(1e-12));
    CHECK(w.weights[1] ==
          doctest::Approx((std::exp(-2.0) + std::exp(-3.0)) / 2.0).epsilon(1e-12));
    CHECK(w.weights[0] == doctest::Approx(0.6839397).epsilon(1e-6));
    CHECK(w.weights[1] == doctest::Approx(0.0925612).epsilon(1e-5));
}

TEST_CASE("all-zero distances give unit weights") {
    const auto D = make_D(3, 2, {0, 0, 0, 0, 0, 0});
    const auto w = dbw::compute_weights(D, WeightScheme::exp_decay(0.9));
    for (double v : w.weights) CHECK(v == 1.0);
}

TEST_CASE("tiny lambda approaches the uniform scheme") {
    std::mt19937_64 rng(3);
    const auto D = random_D(rng, 10, 5);
    const auto w = dbw::compute_weights(D, WeightScheme::exp_decay(1e-12));
    for (double v : w.weights) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("idw hand-evaluated example") {
    const auto D = make_D(1, 2, {1, 2});
    const auto w = dbw::compute_weights(D, WeightScheme::idw(2.0, 1e-8));
    CHECK(w.weights[0] ==
          doctest::Approx((1.0 / (1.0 + 1e-8) + 1.0 / (4.0 + 1e-8)) / 2.0).epsilon(1e-12));
    CHECK(w.weights[0] == doctest::Approx(0.625).epsilon(1e-6));
}

TEST_CASE("idw stays finite at zero distance") {
    const auto D = make_D(2, 2, {0, 0.5, 0, 0});
    const auto w = dbw::compute_weights(D, WeightScheme::idw(2.0, 1e-8));
    for (double v : w.weights) {
        CHECK(std::isfinite(v));
        CHECK(v > 0.0);
    }
}

TEST_CASE("scheme parameter validation") {
    CHECK_THROWS_AS(WeightScheme::exp_decay(0.0), std::invalid_argument);
    CHECK_THROWS_AS(WeightScheme::exp_decay(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(WeightScheme::idw(0.0), std::invalid_argument);
    CHECK_THROWS_AS(WeightScheme::idw(2.0, 0.0), std::invalid_argument);
    auto D = make_D(1, 1, {std::numeric_limits<double>::infinity()});
    CHECK_THROWS_AS(dbw::compute_weights(D, WeightScheme::exp_decay(1.0)),
                    std::invalid_argument);
}

TEST_CASE("oracle equivalence on random matrices") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto D = random_D(rng, 50, 20);
        for (double lambda : {0.5, 1.0, 2.0}) {
            const auto w = dbw::compute_weights(D, WeightScheme::exp_decay(lambda));
            const auto oracle = exp_decay_oracle(D, lambda);
            for (std::size_t i = 0; i < w.weights.size(); ++i)
                CHECK(std::abs(w.weights[i] - oracle[i]) <= 1e-12);
        }
    }
}

TEST_CASE("bounds, dominance and lambda monotonicity") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const auto D = random_D(rng, 12, 6, 0.01, 4.0);
        const auto w1 = dbw::compute_weights(D, WeightScheme::exp_decay(0.7));
        const auto w2 = dbw::compute_weights(D, WeightScheme::exp_decay(1.4));
        for (std::size_t i = 0; i < 12; ++i) {
            CHECK(w1.weights[i] > 0.0);
            CHECK(w1.weights[i] <= 1.0);
            CHECK(w2.weights[i] < w1.weights[i]);  // larger lambda, smaller weight
        }

        // Row dominated elementwise must not get a larger weight, both schemes.
        auto D2 = D;
        for (std::size_t j = 0; j < 6; ++j)
            D2.values.at(1, j) = D2.values.at(0, j) + 0.5;
        for (const auto scheme : {WeightScheme::exp_decay(0.8), WeightScheme::idw()}) {
            const auto w = dbw::compute_weights(D2, scheme);
            CHECK(w.weights[0] >= w.weights[1]);
        }
    }
}

TEST_CASE("increasing one distance strictly decreases that weight") {
    std::mt19937_64 rng(21);
    const auto D = random_D(rng, 8, 4, 0.0, 3.0);
    auto D2 = D;
    D2.values.at(3, 2) += 1.0;
    const auto scheme = WeightScheme::exp_decay(1.0);
    const auto w = dbw::compute_weights(D, scheme);
    const auto w2 = dbw::compute_weights(D2, scheme);
    CHECK(w2.weights[3] < w.weights[3]);
    for (std::size_t i = 0; i < 8; ++i)
        if (i != 3) CHECK(w2.weights[i] == w.weights[i]);
}

TEST_CASE("uniform scheme accepts an empty placeholder matrix") {
    DistanceMatrix D;
    D.values = dbw::Matrix(4, 0);
    const auto w = dbw::compute_weights(D, WeightScheme::uniform());
    REQUIRE(w.weights.size() == 4);
    for (double v : w.weights) CHECK(v == 1.0);
}

TEST_CASE("normalize_mean_one") {
    dbw::WeightVector w;
    w.weights = {2, 2, 2};
    auto n = dbw::normalize_mean_one(w);
    CHECK(n.normalized);
    for (double v : n.weights) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    w.weights = {1, 3};
    n = dbw::normalize_mean_one(w);
    CHECK(n.weights[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(n.weights[1] == doctest::Approx(1.5).epsilon(1e-12));

    // ordering preserved for random vectors
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> u(0.01, 10.0);
    w.weights.resize(30);
    for (auto& v : w.weights) v = u(rng);
    n = dbw::normalize_mean_one(w);
    double mean = std::accumulate(n.weights.begin(), n.weights.end(), 0.0) / 30.0;
    CHECK(std::abs(mean - 1.0) <= 1e-12);
    for (std::size_t i = 0; i < 30; ++i)
        for (std::size_t j = 0; j < 30; ++j)
            CHECK((w.weights[i] < w.weights[j]) == (n.weights[i] < n.weights[j]));

    dbw::WeightVector zero;
    zero.weights = {1e-320, 1e-320};
    CHECK_THROWS_AS(dbw::normalize_mean_one(zero), std::domain_error);
}
