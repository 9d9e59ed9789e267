#pragma once

#include <string>
#include <vector>

#include "dbw/distance.hpp"

namespace dbw {

/// Per-sample loss-weighting scheme.
struct WeightScheme {
    enum class Tag { Uniform, ExpDecay, InverseDistance } tag = Tag::Uniform;
    double lambda = 1.0;    // ExpDecay decay rate, > 0
    double p = 2.0;         // IDW exponent, > 0
    double epsilon = 1e-8;  // IDW zero-distance guard, > 0

    static WeightScheme uniform() { return {Tag::Uniform, 0, 0, 0}; }
    static WeightScheme exp_decay(double lambda);
    static WeightScheme idw(double p = 2.0, double epsilon = 1e-8);

    std::string name() const;
};

struct WeightVector {
    std::vector<double> weights;
    WeightScheme scheme;
    bool normalized = false;
};

// ExpDecay: w_i = (1/M) * sum_j exp(-lambda * D[i][j])
// InverseDistance: w_i = (1/M) * sum_j 1 / (D[i][j]^p + epsilon)
// Uniform: all ones (D may be an N x 0 placeholder).
WeightVector compute_weights(const DistanceMatrix& D, const WeightScheme& scheme);

// Rescale so the mean is exactly 1; relative ordering preserved.
WeightVector normalize_mean_one(const WeightVector& w);

}  // namespace dbw
