#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dbw/matrix.hpp"

namespace dbw {

/// One parsed CSV column. Cells are kept as raw strings; `numeric` marks
/// columns whose every non-missing cell parses as a real number.
struct RawColumn {
    std::string name;
    std::vector<std::string> cells;
    std::vector<bool> missing;
    bool numeric = false;
};

struct RawTable {
    std::vector<RawColumn> columns;
    std::size_t n_rows = 0;

    const RawColumn* find(const std::string& name) const;
};

enum class NumericScaling { ZScore, None };
enum class Binarization { MedianThreshold, None };

/// Fully-resolved preprocessing policy; no defaults are filled in at apply time.
struct PreprocessPolicy {
    std::string label_column;
    std::string positive_label;
    std::vector<std::string> categorical_columns;  // force categorical treatment
    NumericScaling numeric_scaling = NumericScaling::ZScore;
    Binarization continuous_binarization = Binarization::None;
    // numeric imputation is median, categorical imputation is mode,
    // categorical encoding is one-hot; these are the only supported modes
    // and are spelled out in the policy JSON for explicitness.
};

PreprocessPolicy policy_from_json_text(const std::string& json_text);
PreprocessPolicy policy_from_json_file(const std::string& path);

enum class FeatureKind : std::uint8_t { Continuous, BinaryIndicator };

struct Dataset {
    FeatureMatrix features;           // N x F, finite
    std::vector<int> labels;          // {0,1}^N, both classes present
    std::vector<FeatureKind> feature_kinds;
    std::vector<std::string> feature_names;
    std::string name;
    // Median-thresholded view of continuous features for Hamming/Jaccard;
    // present only when the policy asks for it.
    std::optional<FeatureMatrix> binary_view;

    std::size_t n_samples() const { return features.rows; }
    std::size_t n_features() const { return features.cols; }
};

struct DatasetSplit {
    Dataset train;
    Dataset validation;
    FeatureMatrix test_features;
    std::optional<FeatureMatrix> test_binary_view;
    std::vector<int> test_labels;  // consumed only by the metrics stage
    double test_fraction = 0.0;
    double validation_fraction = 0.0;
    std::uint64_t seed = 0;
};

struct SynthSpec {
    std::size_t n_samples = 0;
    std::size_t n_features = 0;
    double class_balance = 0.5;     // positive fraction, in (0,1)
    double class_separation = 0.0;  // gap between class means, first coordinate
    double label_noise = 0.0;       // independent flip probability, [0, 0.5)
    std::uint64_t seed = 0;
    std::string name = "synthetic";
};

SynthSpec synth_spec_from_json_text(const std::string& json_text);

// Parse a CSV file with a header row. Cells equal to any marker become missing.
RawTable load_csv(const std::string& path, const std::set<std::string>& missing_markers);
RawTable parse_csv(const std::string& text, const std::set<std::string>& missing_markers,
                   const std::string& origin = "<memory>");

// Impute, one-hot encode, scale, and map labels per the policy.
// Scaling statistics are pooled over the full table (computed before any split).
Dataset preprocess(const RawTable& raw, const PreprocessPolicy& policy,
                   const std::string& dataset_name = "dataset");

// Class-stratified, seeded, deterministic three-way split.
DatasetSplit stratified_split(const Dataset& ds, double test_fraction,
                              double validation_fraction, std::uint64_t seed);

// Two Gaussian clouds with identity covariance, seeded and deterministic.
Dataset synthesize(const SynthSpec& spec);

}  // namespace dbw
