#include "dbw/distance.hpp"

#include <cmath>
#include <stdexcept>

namespace dbw {

MetricKind metric_from_string(const std::string& name) {
    if (name == "euclidean") return MetricKind::Euclidean;
    if (name == "hamming") return MetricKind::Hamming;
    if (name == "cosine") return MetricKind::Cosine;
    if (name == "jaccard") return MetricKind::Jaccard;
    throw std::invalid_argument("unknown distance metric: " + name);
}

std::string metric_to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::Euclidean: return "euclidean";
        case MetricKind::Hamming: return "hamming";
        case MetricKind::Cosine: return "cosine";
        case MetricKind::Jaccard: return "jaccard";
    }
    return "?";
}

namespace {

double euclidean(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s);
}

double hamming(std::span<const double> a, std::span<const double> b) {
    std::size_t diff = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k] != b[k]) ++diff;
    return static_cast<double>(diff) / static_cast<double>(a.size());
}

// Zero-vector convention: distance 1 to a nonzero vector, 0 to another zero.
double cosine(std::span<const double> a, std::span<const double> b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        dot += a[k] * b[k];
        na += a[k] * a[k];
        nb += b[k] * b[k];
    }
    if (na == 0.0 && nb == 0.0) return 0.0;
    if (na == 0.0 || nb == 0.0) return 1.0;
    double c = dot / (std::sqrt(na) * std::sqrt(nb));
    if (c > 1.0) c = 1.0;
    if (c < -1.0) c = -1.0;
    return 1.0 - c;
}

bool is_binary(double v) { return v == 0.0 || v == 1.0; }

double jaccard(std::span<const double> a, std::span<const double> b) {
    std::size_t inter = 0, uni = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (!is_binary(a[k]) || !is_binary(b[k]))
            throw std::invalid_argument("jaccard distance requires binary {0,1} vectors");
        const bool pa = a[k] == 1.0, pb = b[k] == 1.0;
        if (pa && pb) ++inter;
        if (pa || pb) ++uni;
    }
    if (uni == 0) return 0.0;
    return 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

double distance(MetricKind kind, std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("distance: dimension mismatch (" +
                                    std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    switch (kind) {
        case MetricKind::Euclidean: return euclidean(a, b);
        case MetricKind::Hamming: return hamming(a, b);
        case MetricKind::Cosine: return cosine(a, b);
        case MetricKind::Jaccard: return jaccard(a, b);
    }
    throw std::logic_error("unreachable metric kind");
}

DistanceMatrix pairwise_distances(const FeatureMatrix& train, const FeatureMatrix& test,
                                  MetricKind kind) {
    if (train.cols != test.cols)
        throw std::invalid_argument("pairwise_distances: feature dimension mismatch");
    DistanceMatrix out;
    out.metric = kind;
    out.values = Matrix(train.rows, test.rows);
    for (std::size_t i = 0; i < train.rows; ++i) {
        const auto a = train.row(i);
        for (std::size_t j = 0; j < test.rows; ++j)
            out.values.at(i, j) = distance(kind, a, test.row(j));
    }
    return out;
}

}  // namespace dbw
