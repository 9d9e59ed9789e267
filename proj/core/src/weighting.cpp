#include "dbw/weighting.hpp"

#include <cmath>
#include <stdexcept>

namespace dbw {

WeightScheme WeightScheme::exp_decay(double lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("exp_decay scheme requires lambda > 0");
    WeightScheme s;
    s.tag = Tag::ExpDecay;
    s.lambda = lambda;
    return s;
}

WeightScheme WeightScheme::idw(double p, double epsilon) {
    if (!(p > 0.0) || !(epsilon > 0.0))
        throw std::invalid_argument("idw scheme requires p > 0 and epsilon > 0");
    WeightScheme s;
    s.tag = Tag::InverseDistance;
    s.p = p;
    s.epsilon = epsilon;
    return s;
}

std::string WeightScheme::name() const {
    switch (tag) {
        case Tag::Uniform: return "uniform";
        case Tag::ExpDecay: return "exp_decay";
        case Tag::InverseDistance: return "idw";
    }
    return "?";
}

WeightVector compute_weights(const DistanceMatrix& D, const WeightScheme& scheme) {
    const std::size_t n = D.n_train();
    const std::size_t m = D.n_test();
    if (n < 1) throw std::invalid_argument("compute_weights: empty distance matrix");

    WeightVector out;
    out.scheme = scheme;
    out.weights.assign(n, 1.0);
    if (scheme.tag == WeightScheme::Tag::Uniform) return out;

    if (m < 1) throw std::invalid_argument("compute_weights: need at least one test sample");
    for (double d : D.values.data)
        if (!std::isfinite(d))
            throw std::invalid_argument("compute_weights: non-finite distance entry");

    // Fixed left-to-right summation over j for bit-reproducibility.
    if (scheme.tag == WeightScheme::Tag::ExpDecay) {
        if (!(scheme.lambda > 0.0))
            throw std::invalid_argument("compute_weights: lambda must be > 0");
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j)
                s += std::exp(-scheme.lambda * D.values.at(i, j));
            out.weights[i] = s / static_cast<double>(m);
        }
    } else {
        if (!(scheme.p > 0.0) || !(scheme.epsilon > 0.0))
            throw std::invalid_argument("compute_weights: p and epsilon must be > 0");
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j)
                s += 1.0 / (std::pow(D.values.at(i, j), scheme.p) + scheme.epsilon);
            out.weights[i] = s / static_cast<double>(m);
        }
    }
    return out;
}

WeightVector normalize_mean_one(const WeightVector& w) {
    const std::size_t n = w.weights.size();
    if (n == 0) throw std::invalid_argument("normalize_mean_one: empty weight vector");
    double sum = 0.0;
    for (double v : w.weights) sum += v;
    const double mean = sum / static_cast<double>(n);
    if (!std::isfinite(mean) || mean <= 1e-300)
        throw std::domain_error("normalize_mean_one: degenerate (all-near-zero) weights");
    WeightVector out = w;
    for (double& v : out.weights) v /= mean;
    out.normalized = true;
    return out;
}

}  // namespace dbw
