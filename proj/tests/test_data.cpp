#include <algorithm>
#include <cmath>
#include <set>

#include "dbw/data.hpp"
#include "doctest.h"

using dbw::Dataset;
using dbw::PreprocessPolicy;
using dbw::RawTable;

namespace {

PreprocessPolicy basic_policy(const std::string& label = "y",
                              const std::string& positive = "1") {
    PreprocessPolicy p;
    p.label_column = label;
    p.positive_label = positive;
    return p;
}

}  // namespace

TEST_CASE("parse_csv basics and missing markers") {
    const auto t = dbw::parse_csv("a,b\n1,x\n2,?", {"?"});
    REQUIRE(t.n_rows == 2);
    REQUIRE(t.columns.size() == 2);
    CHECK(t.columns[0].numeric);
    CHECK_FALSE(t.columns[1].numeric);
    CHECK_FALSE(t.columns[1].missing[0]);
    CHECK(t.columns[1].missing[1]);
}

TEST_CASE("parse_csv error reporting") {
    CHECK_THROWS_WITH_AS(dbw::parse_csv("a,b\n1,2\n3", {}), doctest::Contains("ragged row 1"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(dbw::parse_csv("a,a\n1,2", {}), doctest::Contains("duplicate"),
                         std::runtime_error);
    CHECK_THROWS_AS(dbw::load_csv("/nonexistent/file.csv", {}), std::runtime_error);
}

TEST_CASE("median imputation") {
    const auto t = dbw::parse_csv("x,y\n1,0\n,1\n3,0\n4,1", {""});
    auto policy = basic_policy();
    policy.numeric_scaling = dbw::NumericScaling::None;
    const Dataset ds = dbw::preprocess(t, policy);
    // median of {1,3,4} is 3
    CHECK(ds.features.at(0, 0) == 1.0);
    CHECK(ds.features.at(1, 0) == 3.0);
    CHECK(ds.features.at(2, 0) == 3.0);
    CHECK(ds.features.at(3, 0) == 4.0);
}

TEST_CASE("one-hot encoding of categoricals") {
    const auto t = dbw::parse_csv("c,y\nred,0\nblue,1\nred,0\nblue,1", {""});
    const Dataset ds = dbw::preprocess(t, basic_policy());
    REQUIRE(ds.n_features() == 2);
    CHECK(ds.feature_kinds[0] == dbw::FeatureKind::BinaryIndicator);
    CHECK(ds.feature_names[0] == "c=blue");
    CHECK(ds.feature_names[1] == "c=red");
    for (std::size_t r = 0; r < 4; ++r)
        CHECK(ds.features.at(r, 0) + ds.features.at(r, 1) == 1.0);
}

TEST_CASE("z-scoring yields mean 0 and std 1") {
    const auto t = dbw::parse_csv("x,y\n1,0\n2,1\n3,0\n4,1\n10,0\n7,1", {""});
    const Dataset ds = dbw::preprocess(t, basic_policy());
    double mean = 0.0;
    for (std::size_t r = 0; r < 6; ++r) mean += ds.features.at(r, 0);
    mean /= 6.0;
    double var = 0.0;
    for (std::size_t r = 0; r < 6; ++r)
        var += (ds.features.at(r, 0) - mean) * (ds.features.at(r, 0) - mean);
    var /= 6.0;
    CHECK(std::abs(mean) <= 1e-9);
    CHECK(std::abs(std::sqrt(var) - 1.0) <= 1e-9);
}

TEST_CASE("zero-variance column dropped, not fatal") {
    const auto t = dbw::parse_csv("x,z,y\n1,5,0\n2,5,1\n3,5,0\n4,5,1", {""});
    const Dataset ds = dbw::preprocess(t, basic_policy());
    CHECK(ds.n_features() == 1);
    CHECK(ds.feature_names[0] == "x");
}

TEST_CASE("label handling errors") {
    const auto t = dbw::parse_csv("x,y\n1,0\n2,0", {""});
    CHECK_THROWS_AS(dbw::preprocess(t, basic_policy()), std::runtime_error);
    CHECK_THROWS_AS(dbw::preprocess(t, basic_policy("missing_label")), std::invalid_argument);
}

TEST_CASE("median-threshold binary view") {
    const auto t = dbw::parse_csv("x,y\n1,0\n2,1\n3,0\n4,1\n5,0\n6,1", {""});
    auto policy = basic_policy();
    policy.continuous_binarization = dbw::Binarization::MedianThreshold;
    const Dataset ds = dbw::preprocess(t, policy);
    REQUIRE(ds.binary_view.has_value());
    for (double v : ds.binary_view->data) CHECK((v == 0.0 || v == 1.0));
    // exactly the values above the median are 1
    std::size_t ones = 0;
    for (double v : ds.binary_view->data) ones += v == 1.0;
    CHECK(ones == 3);
}

TEST_CASE("policy json parsing") {
    const auto p = dbw::policy_from_json_text(R"({
        "label_column": "class", "positive_label": "yes",
        "categorical_columns": ["c1"],
        "numeric_imputation": "median", "categorical_imputation": "mode",
        "numeric_scaling": "none", "categorical_encoding": "onehot",
        "continuous_binarization_for_set_metrics": "median_threshold"})");
    CHECK(p.label_column == "class");
    CHECK(p.positive_label == "yes");
    CHECK(p.numeric_scaling == dbw::NumericScaling::None);
    CHECK(p.continuous_binarization == dbw::Binarization::MedianThreshold);
    CHECK_THROWS_AS(dbw::policy_from_json_text(R"({"label_column":"y","positive_label":"1",
        "numeric_imputation":"mean"})"),
                    std::invalid_argument);
}

TEST_CASE("stratified split arithmetic") {
    dbw::SynthSpec spec;
    spec.n_samples = 100;
    spec.n_features = 3;
    spec.class_balance = 0.3;
    spec.class_separation = 1.0;
    spec.seed = 1;
    const Dataset ds = dbw::synthesize(spec);
    REQUIRE(std::count(ds.labels.begin(), ds.labels.end(), 1) == 30);

    const auto split = dbw::stratified_split(ds, 0.5, 0.2, 7);
    CHECK(split.test_labels.size() == 50);
    CHECK(std::count(split.test_labels.begin(), split.test_labels.end(), 1) == 15);
    CHECK(split.validation.n_samples() == 10);
    CHECK(split.train.n_samples() == 40);
    CHECK(split.test_labels.size() + split.validation.n_samples() +
              split.train.n_samples() == 100);
}

TEST_CASE("split determinism") {
    dbw::SynthSpec spec;
    spec.n_samples = 80;
    spec.n_features = 2;
    spec.class_balance = 0.4;
    spec.seed = 5;
    const Dataset ds = dbw::synthesize(spec);
    const auto a = dbw::stratified_split(ds, 0.3, 0.2, 99);
    const auto b = dbw::stratified_split(ds, 0.3, 0.2, 99);
    CHECK(a.train.features.data == b.train.features.data);
    CHECK(a.validation.features.data == b.validation.features.data);
    CHECK(a.test_features.data == b.test_features.data);
    CHECK(a.test_labels == b.test_labels);

    const auto c = dbw::stratified_split(ds, 0.3, 0.2, 100);
    CHECK(a.train.features.data != c.train.features.data);
}

TEST_CASE("stratification error at most one sample per class per part") {
    dbw::SynthSpec spec;
    spec.n_samples = 137;
    spec.n_features = 2;
    spec.class_balance = 0.23;
    spec.seed = 8;
    const Dataset ds = dbw::synthesize(spec);
    const double frac = 0.37;
    const auto split = dbw::stratified_split(ds, frac, 0.2, 3);
    const auto n_pos_total = std::count(ds.labels.begin(), ds.labels.end(), 1);
    const auto n_pos_test = std::count(split.test_labels.begin(), split.test_labels.end(), 1);
    CHECK(std::abs(n_pos_test - frac * static_cast<double>(n_pos_total)) <= 1.0);
}

TEST_CASE("infeasible split is rejected") {
    dbw::SynthSpec spec;
    spec.n_samples = 20;
    spec.n_features = 2;
    spec.class_balance = 0.1;  // 2 positives
    spec.seed = 2;
    const Dataset ds = dbw::synthesize(spec);
    CHECK_THROWS_AS(dbw::stratified_split(ds, 0.9, 0.0, 1), std::invalid_argument);
}

TEST_CASE("synthesize determinism and balance") {
    dbw::SynthSpec spec;
    spec.n_samples = 1000;
    spec.n_features = 4;
    spec.class_balance = 0.1;
    spec.seed = 42;
    const Dataset a = dbw::synthesize(spec);
    const Dataset b = dbw::synthesize(spec);
    CHECK(a.features.data == b.features.data);
    CHECK(a.labels == b.labels);
    CHECK(std::count(a.labels.begin(), a.labels.end(), 1) == 100);

    spec.label_noise = 0.1;
    const Dataset c = dbw::synthesize(spec);
    const auto flipped = std::count(c.labels.begin(), c.labels.end(), 1);
    CHECK(flipped != 100);  // noise actually applied
    for (double v : c.features.data) CHECK(std::isfinite(v));
}

TEST_CASE("synthesize spec validation") {
    dbw::SynthSpec spec;
    spec.n_samples = 100;
    spec.n_features = 2;
    spec.class_balance = 1.5;
    CHECK_THROWS_AS(dbw::synthesize(spec), std::invalid_argument);
    spec.class_balance = 0.5;
    spec.label_noise = 0.7;
    CHECK_THROWS_AS(dbw::synthesize(spec), std::invalid_argument);
}
