#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dbw/data.hpp"
#include "dbw/distance.hpp"
#include "dbw/metrics.hpp"
#include "dbw/model.hpp"
#include "dbw/weighting.hpp"

namespace dbw {

/// Where the experiment's rows come from: a CSV + policy, or a synthetic spec.
struct DatasetSource {
    std::string name;
    std::optional<std::string> csv_path;
    std::optional<PreprocessPolicy> policy;
    std::set<std::string> missing_markers = {"", "?"};
    std::optional<SynthSpec> synth;
};

struct SchemeSpec {
    WeightScheme scheme;
    bool normalize_mean_one = false;
};

struct ExperimentConfig {
    DatasetSource dataset;
    MetricKind metric = MetricKind::Euclidean;
    std::vector<SchemeSpec> schemes;
    std::vector<double> test_fractions = {0.1, 0.5, 0.9};
    double validation_fraction = 0.2;
    std::size_t n_runs = 5;
    std::uint64_t base_seed = 42;
    std::vector<std::size_t> hidden_layers = {64};
    TrainConfig training;
    std::string output_dir = "out";
    bool emit_markdown = false;
    std::size_t workers = 1;  // DBW_WORKERS env overrides
};

ExperimentConfig experiment_config_from_json_file(const std::string& path);
ExperimentConfig experiment_config_from_json_text(const std::string& json_text);

struct RunResult {
    std::string dataset;
    std::string scheme;
    double test_fraction = 0.0;
    std::size_t run = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    EvalReport report;
    double wall_time_s = 0.0;
    double weight_min = 0.0, weight_mean = 0.0, weight_max = 0.0;
};

struct AggregateRow {
    std::string dataset;
    std::string scheme;
    double test_fraction = 0.0;
    std::size_t n_runs = 0;
    EvalReport mean;  // arithmetic mean over constituent runs
    double wall_time_s = 0.0;
};

struct ReportTable {
    std::vector<RunResult> runs;
    std::vector<AggregateRow> aggregates;
};

// Seed offsets: cell seed = base_seed + run; split uses the cell seed,
// model init uses cell seed + 10000, shuffle uses cell seed + 20000.
// Schemes within a (test_fraction, run) cell therefore share split and
// model seeds, making scheme comparisons paired.
Dataset prepare_dataset(const ExperimentConfig& cfg);

RunResult run_single(const ExperimentConfig& cfg, const Dataset& prepared,
                     const SchemeSpec& scheme, double test_fraction, std::size_t run_index);
RunResult run_single(const ExperimentConfig& cfg, const SchemeSpec& scheme,
                     double test_fraction, std::size_t run_index);

ReportTable run_experiment(const ExperimentConfig& cfg);

// Writes details.csv, aggregate.csv, failures.csv (when any cell failed)
// and optionally aggregate.md into output_dir. Floats use 6 decimal places.
void emit_report(const ReportTable& table, const std::string& output_dir, bool markdown);

std::string format_fixed6(double v);

}  // namespace dbw
