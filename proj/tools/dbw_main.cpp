// Command-line front end: run experiments, inspect weight vectors,
// generate synthetic datasets, and score prediction files.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dbw/harness.hpp"

namespace {

dbw::FeatureMatrix numeric_matrix_from_csv(const std::string& path) {
    const dbw::RawTable t = dbw::load_csv(path, {""});
    if (t.n_rows == 0) throw std::runtime_error(path + ": no data rows");
    dbw::FeatureMatrix m(t.n_rows, t.columns.size());
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (!t.columns[c].numeric)
            throw std::runtime_error(path + ": column '" + t.columns[c].name +
                                     "' is not numeric");
        for (std::size_t r = 0; r < t.n_rows; ++r)
            m.at(r, c) = std::stod(t.columns[c].cells[r]);
    }
    return m;
}

std::vector<double> column_from_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::vector<double> out;
    std::string line;
    bool first = true;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            out.push_back(std::stod(line));
        } catch (...) {
            if (first) { first = false; continue; }  // tolerate a header line
            throw std::runtime_error(path + ": non-numeric line '" + line + "'");
        }
        first = false;
    }
    if (out.empty()) throw std::runtime_error(path + ": no values");
    return out;
}

int cmd_run(const std::string& config_path, bool markdown) {
    const auto cfg = dbw::experiment_config_from_json_file(config_path);
    const auto table = dbw::run_experiment(cfg);
    dbw::emit_report(table, cfg.output_dir, markdown || cfg.emit_markdown);
    std::size_t failed = 0;
    for (const auto& r : table.runs) failed += !r.ok;
    std::fprintf(stderr, "wrote %s (%zu runs, %zu failed)\n", cfg.output_dir.c_str(),
                 table.runs.size(), failed);
    return 0;
}

int cmd_weights(const std::string& train_path, const std::string& test_path,
                const std::string& metric, const std::string& scheme, double lambda,
                double p, double epsilon, bool normalize, const std::string& out_path) {
    const auto train = numeric_matrix_from_csv(train_path);
    const auto test = numeric_matrix_from_csv(test_path);
    dbw::WeightScheme ws;
    if (scheme == "uniform") ws = dbw::WeightScheme::uniform();
    else if (scheme == "exp_decay") ws = dbw::WeightScheme::exp_decay(lambda);
    else if (scheme == "idw") ws = dbw::WeightScheme::idw(p, epsilon);
    else throw CLI::ValidationError("--scheme must be uniform, exp_decay or idw");

    const auto D = dbw::pairwise_distances(train, test, dbw::metric_from_string(metric));
    auto w = dbw::compute_weights(D, ws);
    if (normalize) w = dbw::normalize_mean_one(w);

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot write: " + out_path);
        os = &file;
    }
    *os << "index,weight\n";
    for (std::size_t i = 0; i < w.weights.size(); ++i)
        *os << i << ',' << dbw::format_fixed6(w.weights[i]) << '\n';
    return 0;
}

int cmd_synth(const std::string& spec_path, const std::string& out_path) {
    std::ifstream f(spec_path);
    if (!f) throw std::runtime_error("cannot open spec file: " + spec_path);
    std::ostringstream ss;
    ss << f.rdbuf();
    const dbw::Dataset ds = dbw::synthesize(dbw::synth_spec_from_json_text(ss.str()));

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write: " + out_path);
    for (std::size_t c = 0; c < ds.n_features(); ++c) out << ds.feature_names[c] << ',';
    out << "label\n";
    for (std::size_t r = 0; r < ds.n_samples(); ++r) {
        for (std::size_t c = 0; c < ds.n_features(); ++c)
            out << dbw::format_fixed6(ds.features.at(r, c)) << ',';
        out << ds.labels[r] << '\n';
    }
    std::fprintf(stderr, "wrote %s: %zu samples, %zu features\n", out_path.c_str(),
                 ds.n_samples(), ds.n_features());
    return 0;
}

int cmd_eval(const std::string& scores_path, const std::string& labels_path) {
    const auto scores = column_from_csv(scores_path);
    const auto raw_labels = column_from_csv(labels_path);
    std::vector<int> labels;
    for (double v : raw_labels) {
        if (v != 0.0 && v != 1.0)
            throw std::runtime_error(labels_path + ": labels must be 0 or 1");
        labels.push_back(static_cast<int>(v));
    }
    const auto r = dbw::evaluate(scores, labels);
    std::cout << "precision,recall,auc,f1,accuracy\n"
              << dbw::format_fixed6(r.precision) << ',' << dbw::format_fixed6(r.recall) << ','
              << dbw::format_fixed6(r.auc) << ',' << dbw::format_fixed6(r.f1) << ','
              << dbw::format_fixed6(r.accuracy) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distance-based sample weighting for tabular classification"};
    app.require_subcommand(1);

    std::string config_path;
    bool markdown = false;
    auto* run = app.add_subcommand("run", "Run a full experiment from a JSON config");
    run->add_option("--config", config_path, "Experiment config file")->required();
    run->add_flag("--markdown", markdown, "Also write aggregate.md");

    std::string train_path, test_path, metric = "euclidean", scheme = "exp_decay";
    double lambda = 1.0, p = 2.0, epsilon = 1e-8;
    bool normalize = false;
    std::string weights_out;
    auto* weights = app.add_subcommand("weights", "Emit a weight vector as CSV");
    weights->add_option("--train", train_path, "Training feature CSV")->required();
    weights->add_option("--test", test_path, "Test feature CSV")->required();
    weights->add_option("--metric", metric, "euclidean|hamming|cosine|jaccard");
    weights->add_option("--scheme", scheme, "uniform|exp_decay|idw");
    weights->add_option("--lambda", lambda, "Decay rate for exp_decay");
    weights->add_option("--p", p, "Exponent for idw");
    weights->add_option("--epsilon", epsilon, "Zero-distance guard for idw");
    weights->add_flag("--normalize", normalize, "Rescale to mean 1");
    weights->add_option("--out", weights_out, "Output file (default stdout)");

    std::string spec_path, synth_out;
    auto* synth = app.add_subcommand("synth", "Write a synthetic dataset CSV");
    synth->add_option("--spec", spec_path, "Synthesis spec JSON")->required();
    synth->add_option("--out", synth_out, "Output CSV path")->required();

    std::string scores_path, labels_path;
    auto* eval = app.add_subcommand("eval", "Compute metrics from score/label files");
    eval->add_option("--scores", scores_path, "Score file, one value per line")->required();
    eval->add_option("--labels", labels_path, "Label file, one 0/1 per line")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (*run) return cmd_run(config_path, markdown);
        if (*weights)
            return cmd_weights(train_path, test_path, metric, scheme, lambda, p, epsilon,
                               normalize, weights_out);
        if (*synth) return cmd_synth(spec_path, synth_out);
        if (*eval) return cmd_eval(scores_path, labels_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
