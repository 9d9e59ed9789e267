#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "dbw/data.hpp"
#include "json.hpp"

namespace dbw {

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n == 0) throw std::runtime_error("median of empty column");
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string mode_of(const RawColumn& col) {
    std::map<std::string, std::size_t> counts;  // ordered map: ties break lexicographically
    for (std::size_t r = 0; r < col.cells.size(); ++r)
        if (!col.missing[r]) ++counts[col.cells[r]];
    if (counts.empty()) throw std::runtime_error("mode of all-missing column " + col.name);
    std::string best;
    std::size_t best_n = 0;
    for (const auto& [value, n] : counts)
        if (n > best_n) { best = value; best_n = n; }
    return best;
}

bool numeric_equal(const std::string& a, const std::string& b) {
    try {
        std::size_t pa = 0, pb = 0;
        const double va = std::stod(a, &pa);
        const double vb = std::stod(b, &pb);
        return pa == a.size() && pb == b.size() && va == vb;
    } catch (...) {
        return false;
    }
}

}  // namespace

Dataset preprocess(const RawTable& raw, const PreprocessPolicy& policy,
                   const std::string& dataset_name) {
    const RawColumn* label_col = raw.find(policy.label_column);
    if (!label_col)
        throw std::invalid_argument("label column '" + policy.label_column +
                                    "' not found in table");
    for (const auto& name : policy.categorical_columns)
        if (!raw.find(name))
            throw std::invalid_argument("categorical column '" + name + "' not found");

    const std::size_t n = raw.n_rows;
    if (n == 0) throw std::invalid_argument("cannot preprocess an empty table");

    Dataset ds;
    ds.name = dataset_name;

    // Labels first: explicit positive mapping, string or numeric equality.
    ds.labels.resize(n);
    std::size_t n_pos = 0;
    for (std::size_t r = 0; r < n; ++r) {
        if (label_col->missing[r])
            throw std::runtime_error("missing label value at row " + std::to_string(r));
        const std::string& v = label_col->cells[r];
        const bool pos = v == policy.positive_label || numeric_equal(v, policy.positive_label);
        ds.labels[r] = pos ? 1 : 0;
        n_pos += pos;
    }
    if (n_pos == 0 || n_pos == n)
        throw std::runtime_error("labels are single-class after mapping positive_label='" +
                                 policy.positive_label + "'");

    // Build feature columns: imputed continuous columns, then one-hot blocks,
    // in the table's column order.
    std::vector<std::vector<double>> cols;
    std::vector<FeatureKind> kinds;
    std::vector<std::string> names;

    auto is_forced_categorical = [&](const std::string& name) {
        return std::find(policy.categorical_columns.begin(), policy.categorical_columns.end(),
                         name) != policy.categorical_columns.end();
    };

    for (const auto& col : raw.columns) {
        if (col.name == policy.label_column) continue;
        const bool categorical = is_forced_categorical(col.name) || !col.numeric;
        if (!categorical) {
            std::vector<double> present;
            for (std::size_t r = 0; r < n; ++r)
                if (!col.missing[r]) present.push_back(std::stod(col.cells[r]));
            const double med = median_of(present);
            std::vector<double> values(n);
            for (std::size_t r = 0; r < n; ++r)
                values[r] = col.missing[r] ? med : std::stod(col.cells[r]);
            cols.push_back(std::move(values));
            kinds.push_back(FeatureKind::Continuous);
            names.push_back(col.name);
        } else {
            const std::string fill = mode_of(col);
            std::vector<std::string> categories;
            for (std::size_t r = 0; r < n; ++r) {
                const std::string& v = col.missing[r] ? fill : col.cells[r];
                if (std::find(categories.begin(), categories.end(), v) == categories.end())
                    categories.push_back(v);
            }
            std::sort(categories.begin(), categories.end());
            for (const auto& cat : categories) {
                std::vector<double> indicator(n, 0.0);
                for (std::size_t r = 0; r < n; ++r) {
                    const std::string& v = col.missing[r] ? fill : col.cells[r];
                    if (v == cat) indicator[r] = 1.0;
                }
                cols.push_back(std::move(indicator));
                kinds.push_back(FeatureKind::BinaryIndicator);
                names.push_back(col.name + "=" + cat);
            }
        }
    }

    // Z-score continuous columns with pooled (full-table) statistics.
    // Zero-variance columns are dropped, not an error.
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (kinds[c] == FeatureKind::Continuous &&
            policy.numeric_scaling == NumericScaling::ZScore) {
            double mean = 0.0;
            for (double v : cols[c]) mean += v;
            mean /= static_cast<double>(n);
            double var = 0.0;
            for (double v : cols[c]) var += (v - mean) * (v - mean);
            var /= static_cast<double>(n);
            if (var == 0.0) {
                std::fprintf(stderr, "warning: dropping zero-variance column '%s'\n",
                             names[c].c_str());
                continue;
            }
            const double sd = std::sqrt(var);
            for (double& v : cols[c]) v = (v - mean) / sd;
        }
        keep.push_back(c);
    }

    ds.features = Matrix(n, keep.size());
    ds.feature_kinds.reserve(keep.size());
    ds.feature_names.reserve(keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) {
        const std::size_t c = keep[k];
        for (std::size_t r = 0; r < n; ++r) ds.features.at(r, k) = cols[c][r];
        ds.feature_kinds.push_back(kinds[c]);
        ds.feature_names.push_back(names[c]);
    }
    for (double v : ds.features.data)
        if (!std::isfinite(v))
            throw std::runtime_error("non-finite feature value after preprocessing");

    if (policy.continuous_binarization == Binarization::MedianThreshold) {
        FeatureMatrix bin(n, ds.features.cols);
        for (std::size_t c = 0; c < ds.features.cols; ++c) {
            if (ds.feature_kinds[c] == FeatureKind::BinaryIndicator) {
                for (std::size_t r = 0; r < n; ++r) bin.at(r, c) = ds.features.at(r, c);
            } else {
                std::vector<double> v(n);
                for (std::size_t r = 0; r < n; ++r) v[r] = ds.features.at(r, c);
                const double med = median_of(v);
                for (std::size_t r = 0; r < n; ++r)
                    bin.at(r, c) = ds.features.at(r, c) > med ? 1.0 : 0.0;
            }
        }
        ds.binary_view = std::move(bin);
    }
    return ds;
}

namespace {

PreprocessPolicy policy_from_json(const nlohmann::json& j) {
    PreprocessPolicy p;
    p.label_column = j.at("label_column").get<std::string>();
    p.positive_label = j.at("positive_label").get<std::string>();
    if (j.contains("categorical_columns"))
        p.categorical_columns = j["categorical_columns"].get<std::vector<std::string>>();
    if (j.value("numeric_imputation", "median") != "median")
        throw std::invalid_argument("numeric_imputation: only 'median' is supported");
    if (j.value("categorical_imputation", "mode") != "mode")
        throw std::invalid_argument("categorical_imputation: only 'mode' is supported");
    if (j.value("categorical_encoding", "onehot") != "onehot")
        throw std::invalid_argument("categorical_encoding: only 'onehot' is supported");
    const std::string scaling = j.value("numeric_scaling", "zscore");
    if (scaling == "zscore") p.numeric_scaling = NumericScaling::ZScore;
    else if (scaling == "none") p.numeric_scaling = NumericScaling::None;
    else throw std::invalid_argument("numeric_scaling must be 'zscore' or 'none'");
    const std::string bin = j.value("continuous_binarization_for_set_metrics", "none");
    if (bin == "median_threshold") p.continuous_binarization = Binarization::MedianThreshold;
    else if (bin == "none") p.continuous_binarization = Binarization::None;
    else
        throw std::invalid_argument(
            "continuous_binarization_for_set_metrics must be 'median_threshold' or 'none'");
    return p;
}

}  // namespace

PreprocessPolicy policy_from_json_text(const std::string& json_text) {
    return policy_from_json(nlohmann::json::parse(json_text));
}

PreprocessPolicy policy_from_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open policy file: " + path);
    nlohmann::json j;
    f >> j;
    return policy_from_json(j);
}

SynthSpec synth_spec_from_json_text(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    SynthSpec s;
    s.n_samples = j.at("n_samples").get<std::size_t>();
    s.n_features = j.at("n_features").get<std::size_t>();
    s.class_balance = j.at("class_balance").get<double>();
    s.class_separation = j.at("class_separation").get<double>();
    s.label_noise = j.value("label_noise", 0.0);
    s.seed = j.value("seed", 0ULL);
    s.name = j.value("name", "synthetic");
    return s;
}

}  // namespace dbw
