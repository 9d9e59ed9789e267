#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "dbw/metrics.hpp"
#include "doctest.h"

namespace {

// O(n^2) pair-counting oracle for the rank-based AUC.
double auc_bruteforce(const std::vector<double>& scores, const std::vector<int>& labels) {
    double num = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            ++pairs;
            if (scores[i] > scores[j]) num += 1.0;
            else if (scores[i] == scores[j]) num += 0.5;
        }
    }
    return num / static_cast<double>(pairs);
}

}  // namespace

TEST_CASE("confusion counts and boundary convention") {
    auto c = dbw::confusion_at_threshold({0.9, 0.1}, {1, 0}, 0.5);
    CHECK(c.tp == 1);
    CHECK(c.tn == 1);
    CHECK(c.fp == 0);
    CHECK(c.fn == 0);

    // score exactly at the threshold counts as positive
    c = dbw::confusion_at_threshold({0.5}, {0}, 0.5);
    CHECK(c.fp == 1);

    c = dbw::confusion_at_threshold({0.1, 0.2, 0.3}, {1, 0, 1}, 0.9);
    CHECK(c.tp == 0);
    CHECK(c.fp == 0);
    CHECK(c.fn == 2);
    CHECK(c.tn == 1);
}

TEST_CASE("precision/recall/f1/accuracy conventions") {
    dbw::ConfusionCounts none{0, 0, 3, 4};
    auto r = dbw::precision_recall_f1_accuracy(none);
    CHECK(r.precision == 0.0);
    CHECK(r.recall == 0.0);
    CHECK(r.f1 == 0.0);

    dbw::ConfusionCounts perfect{5, 0, 5, 0};
    r = dbw::precision_recall_f1_accuracy(perfect);
    CHECK(r.precision == 1.0);
    CHECK(r.recall == 1.0);
    CHECK(r.f1 == 1.0);
    CHECK(r.accuracy == 1.0);

    dbw::ConfusionCounts mixed{1, 1, 1, 1};
    r = dbw::precision_recall_f1_accuracy(mixed);
    CHECK(r.precision == 0.5);
    CHECK(r.recall == 0.5);
    CHECK(r.f1 == 0.5);
    CHECK(r.accuracy == 0.5);

    CHECK_THROWS_AS(dbw::precision_recall_f1_accuracy({0, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("auc edge cases") {
    CHECK(dbw::roc_auc({0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0}) == 1.0);
    CHECK(dbw::roc_auc({0.4, 0.6}, {1, 0}) == 0.0);
    CHECK(dbw::roc_auc({0.5, 0.5, 0.5}, {1, 0, 1}) == 0.5);
    CHECK_THROWS_AS(dbw::roc_auc({0.5, 0.6}, {1, 1}), std::domain_error);
}

TEST_CASE("auc rank statistic equals brute force with ties") {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> score_bucket(0, 9);  // force ties
    std::bernoulli_distribution lab(0.4);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 20 + trial * 16;
        std::vector<double> scores(n);
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = score_bucket(rng) / 10.0;
            labels[i] = lab(rng) ? 1 : 0;
        }
        if (std::count(labels.begin(), labels.end(), 1) == 0) labels[0] = 1;
        if (std::count(labels.begin(), labels.end(), 0) == 0) labels[0] = 0;
        CHECK(std::abs(dbw::roc_auc(scores, labels) - auc_bruteforce(scores, labels)) <=
              1e-12);
    }
}

TEST_CASE("auc invariances") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::bernoulli_distribution lab(0.5);
    std::vector<double> scores(200);
    std::vector<int> labels(200);
    for (std::size_t i = 0; i < 200; ++i) {
        scores[i] = u(rng);
        labels[i] = lab(rng) ? 1 : 0;
    }
    const double base = dbw::roc_auc(scores, labels);

    // strictly monotone transform leaves AUC unchanged
    auto transformed = scores;
    for (double& s : transformed) s = std::exp(3.0 * s) + 1.0;
    CHECK(dbw::roc_auc(transformed, labels) == doctest::Approx(base).epsilon(1e-12));

    // score negation complements AUC
    auto negated = scores;
    for (double& s : negated) s = -s;
    CHECK(base + dbw::roc_auc(negated, labels) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("evaluate report consistency") {
    const std::vector<double> scores{0.9, 0.6, 0.4, 0.2};
    const std::vector<int> labels{1, 0, 1, 0};
    const auto r = dbw::evaluate(scores, labels);
    CHECK(r.n_test == 4);
    CHECK(r.threshold == 0.5);
    const auto c = dbw::confusion_at_threshold(scores, labels, 0.5);
    const auto prfa = dbw::precision_recall_f1_accuracy(c);
    CHECK(r.accuracy == prfa.accuracy);
    if (r.precision + r.recall > 0)
        CHECK(r.f1 == doctest::Approx(2 * r.precision * r.recall /
                                      (r.precision + r.recall)).epsilon(1e-12));
}
