#pragma once

#include <span>
#include <string>

#include "dbw/matrix.hpp"

namespace dbw {

enum class MetricKind { Euclidean, Hamming, Cosine, Jaccard };

MetricKind metric_from_string(const std::string& name);
std::string metric_to_string(MetricKind kind);

/// N x M train-to-test distances under one metric.
struct DistanceMatrix {
    Matrix values;
    MetricKind metric = MetricKind::Euclidean;

    std::size_t n_train() const { return values.rows; }
    std::size_t n_test() const { return values.cols; }
};

// Scalar distance between two equal-length feature vectors.
// Hamming is normalized by feature count; Jaccard requires {0,1} inputs.
double distance(MetricKind kind, std::span<const double> a, std::span<const double> b);

// values[i][j] = distance(kind, train.row(i), test.row(j)), bit-identical
// to the scalar call.
DistanceMatrix pairwise_distances(const FeatureMatrix& train, const FeatureMatrix& test,
                                  MetricKind kind);

}  // namespace dbw
