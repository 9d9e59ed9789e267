#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "dbw/data.hpp"

namespace dbw {

namespace {

Dataset take_rows(const Dataset& ds, const std::vector<std::size_t>& idx) {
    Dataset out;
    out.name = ds.name;
    out.feature_kinds = ds.feature_kinds;
    out.feature_names = ds.feature_names;
    out.features = Matrix(idx.size(), ds.features.cols);
    out.labels.resize(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const auto src = ds.features.row(idx[r]);
        std::copy(src.begin(), src.end(), out.features.row(r).begin());
        out.labels[r] = ds.labels[idx[r]];
    }
    if (ds.binary_view) {
        FeatureMatrix bv(idx.size(), ds.binary_view->cols);
        for (std::size_t r = 0; r < idx.size(); ++r) {
            const auto src = ds.binary_view->row(idx[r]);
            std::copy(src.begin(), src.end(), bv.row(r).begin());
        }
        out.binary_view = std::move(bv);
    }
    return out;
}

}  // namespace

DatasetSplit stratified_split(const Dataset& ds, double test_fraction,
                              double validation_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("test_fraction must be in (0,1)");
    if (!(validation_fraction >= 0.0 && validation_fraction < 1.0))
        throw std::invalid_argument("validation_fraction must be in [0,1)");

    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < ds.n_samples(); ++i)
        by_class[ds.labels[i]].push_back(i);

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> test_idx, val_idx, train_idx;
    for (auto& cls : by_class) {
        std::shuffle(cls.begin(), cls.end(), rng);
        const std::size_t n_c = cls.size();
        const auto n_test = static_cast<std::size_t>(
            std::lround(test_fraction * static_cast<double>(n_c)));
        const std::size_t rest = n_c - n_test;
        const auto n_val = static_cast<std::size_t>(
            std::lround(validation_fraction * static_cast<double>(rest)));
        const std::size_t n_train = rest - n_val;
        if (n_train < 2)
            throw std::invalid_argument(
                "stratified_split: fractions leave fewer than 2 training samples in a class");
        test_idx.insert(test_idx.end(), cls.begin(), cls.begin() + n_test);
        val_idx.insert(val_idx.end(), cls.begin() + n_test, cls.begin() + n_test + n_val);
        train_idx.insert(train_idx.end(), cls.begin() + n_test + n_val, cls.end());
    }
    std::sort(test_idx.begin(), test_idx.end());
    std::sort(val_idx.begin(), val_idx.end());
    std::sort(train_idx.begin(), train_idx.end());

    DatasetSplit split;
    split.train = take_rows(ds, train_idx);
    split.validation = take_rows(ds, val_idx);
    Dataset test = take_rows(ds, test_idx);
    split.test_features = std::move(test.features);
    split.test_binary_view = std::move(test.binary_view);
    split.test_labels = std::move(test.labels);
    split.test_fraction = test_fraction;
    split.validation_fraction = validation_fraction;
    split.seed = seed;
    return split;
}

Dataset synthesize(const SynthSpec& spec) {
    if (spec.n_samples < 4 || spec.n_features < 1)
        throw std::invalid_argument("synthesize: need n_samples >= 4 and n_features >= 1");
    if (!(spec.class_balance > 0.0 && spec.class_balance < 1.0))
        throw std::invalid_argument("synthesize: class_balance must be in (0,1)");
    if (!(spec.class_separation >= 0.0))
        throw std::invalid_argument("synthesize: class_separation must be >= 0");
    if (!(spec.label_noise >= 0.0 && spec.label_noise < 0.5))
        throw std::invalid_argument("synthesize: label_noise must be in [0, 0.5)");

    const std::size_t n = spec.n_samples;
    auto n_pos = static_cast<std::size_t>(
        std::lround(spec.class_balance * static_cast<double>(n)));
    n_pos = std::clamp<std::size_t>(n_pos, 1, n - 1);

    Dataset ds;
    ds.name = spec.name;
    ds.features = Matrix(n, spec.n_features);
    ds.labels.resize(n);
    ds.feature_kinds.assign(spec.n_features, FeatureKind::Continuous);
    for (std::size_t c = 0; c < spec.n_features; ++c)
        ds.feature_names.push_back("f" + std::to_string(c));

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double half = 0.5 * spec.class_separation;
    for (std::size_t i = 0; i < n; ++i) {
        const bool pos = i < n_pos;
        auto row = ds.features.row(i);
        for (std::size_t c = 0; c < spec.n_features; ++c) row[c] = gauss(rng);
        row[0] += pos ? half : -half;
        ds.labels[i] = pos ? 1 : 0;
    }
    if (spec.label_noise > 0.0) {
        std::bernoulli_distribution flip(spec.label_noise);
        for (std::size_t i = 0; i < n; ++i)
            if (flip(rng)) ds.labels[i] = 1 - ds.labels[i];
    }
    const auto pos_count = static_cast<std::size_t>(
        std::count(ds.labels.begin(), ds.labels.end(), 1));
    if (pos_count == 0 || pos_count == n)
        throw std::runtime_error("synthesize: label noise produced a single-class dataset");
    return ds;
}

}  // namespace dbw
