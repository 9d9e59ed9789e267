#include "dbw/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace dbw {

namespace {

constexpr std::uint64_t kInitSeedOffset = 10000;
constexpr std::uint64_t kShuffleSeedOffset = 20000;

SchemeSpec scheme_from_json(const nlohmann::json& j) {
    SchemeSpec spec;
    const std::string name = j.at("scheme").get<std::string>();
    if (name == "uniform") {
        spec.scheme = WeightScheme::uniform();
    } else if (name == "exp_decay") {
        spec.scheme = WeightScheme::exp_decay(j.at("lambda").get<double>());
    } else if (name == "idw") {
        spec.scheme = WeightScheme::idw(j.value("p", 2.0), j.value("epsilon", 1e-8));
    } else {
        throw std::invalid_argument("unknown weighting scheme: " + name);
    }
    spec.normalize_mean_one = j.value("normalize_mean_one", false);
    return spec;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    const auto& d = j.at("dataset");
    cfg.dataset.name = d.at("name").get<std::string>();
    if (d.contains("synth")) {
        cfg.dataset.synth = synth_spec_from_json_text(d["synth"].dump());
        cfg.dataset.synth->name = cfg.dataset.name;
    } else {
        cfg.dataset.csv_path = d.at("csv").get<std::string>();
        cfg.dataset.policy = policy_from_json_text(d.at("policy").dump());
        if (d.contains("missing_markers")) {
            cfg.dataset.missing_markers.clear();
            for (const auto& m : d["missing_markers"])
                cfg.dataset.missing_markers.insert(m.get<std::string>());
        }
    }
    cfg.metric = metric_from_string(j.value("metric", "euclidean"));
    if (j.contains("schemes")) {
        cfg.schemes.clear();
        for (const auto& s : j["schemes"]) cfg.schemes.push_back(scheme_from_json(s));
    } else {
        cfg.schemes = {{WeightScheme::uniform(), false},
                       {WeightScheme::exp_decay(1.0), false},
                       {WeightScheme::idw(), false}};
    }
    if (cfg.schemes.empty()) throw std::invalid_argument("config: schemes must be non-empty");
    if (j.contains("test_fractions"))
        cfg.test_fractions = j["test_fractions"].get<std::vector<double>>();
    if (cfg.test_fractions.empty())
        throw std::invalid_argument("config: test_fractions must be non-empty");
    cfg.validation_fraction = j.value("validation_fraction", 0.2);
    cfg.n_runs = j.value("n_runs", std::size_t{5});
    if (cfg.n_runs < 1) throw std::invalid_argument("config: n_runs must be >= 1");
    cfg.base_seed = j.value("base_seed", std::uint64_t{42});
    if (j.contains("model") && j["model"].contains("hidden_layers"))
        cfg.hidden_layers = j["model"]["hidden_layers"].get<std::vector<std::size_t>>();
    if (j.contains("training")) {
        const auto& t = j["training"];
        cfg.training.learning_rate = t.value("learning_rate", 0.001);
        cfg.training.batch_size = t.value("batch_size", std::size_t{32});
        cfg.training.epochs = t.value("epochs", std::size_t{100});
    }
    cfg.output_dir = j.value("output_dir", "out");
    cfg.emit_markdown = j.value("emit_markdown", false);
    cfg.workers = j.value("workers", std::size_t{1});
    return cfg;
}

std::size_t effective_workers(const ExperimentConfig& cfg) {
    if (const char* env = std::getenv("DBW_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(cfg.workers, 1);
}

// Distance inputs: metrics over sets use the median-threshold view when the
// policy produced one; training always sees the real features.
const FeatureMatrix& train_distance_view(const Dataset& train, MetricKind metric) {
    const bool set_metric = metric == MetricKind::Hamming || metric == MetricKind::Jaccard;
    if (set_metric && train.binary_view) return *train.binary_view;
    return train.features;
}

const FeatureMatrix& test_distance_view(const DatasetSplit& split, MetricKind metric) {
    const bool set_metric = metric == MetricKind::Hamming || metric == MetricKind::Jaccard;
    if (set_metric && split.test_binary_view) return *split.test_binary_view;
    return split.test_features;
}

}  // namespace

ExperimentConfig experiment_config_from_json_text(const std::string& json_text) {
    return config_from_json(nlohmann::json::parse(json_text));
}

ExperimentConfig experiment_config_from_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    f >> j;
    return config_from_json(j);
}

Dataset prepare_dataset(const ExperimentConfig& cfg) {
    if (cfg.dataset.synth) return synthesize(*cfg.dataset.synth);
    if (!cfg.dataset.csv_path || !cfg.dataset.policy)
        throw std::invalid_argument("dataset source needs either synth or csv+policy");
    const RawTable raw = load_csv(*cfg.dataset.csv_path, cfg.dataset.missing_markers);
    Dataset ds = preprocess(raw, *cfg.dataset.policy, cfg.dataset.name);
    std::fprintf(stderr, "loaded %s: %zu rows, %zu raw columns -> %zu features\n",
                 cfg.dataset.name.c_str(), raw.n_rows, raw.columns.size(), ds.n_features());
    return ds;
}

RunResult run_single(const ExperimentConfig& cfg, const Dataset& prepared,
                     const SchemeSpec& scheme, double test_fraction, std::size_t run_index) {
    RunResult res;
    res.dataset = prepared.name;
    res.scheme = scheme.scheme.name();
    res.test_fraction = test_fraction;
    res.run = run_index;
    res.seed = cfg.base_seed + run_index;

    const auto start = std::chrono::steady_clock::now();
    try {
        const DatasetSplit split =
            stratified_split(prepared, test_fraction, cfg.validation_fraction, res.seed);

        WeightVector w;
        if (scheme.scheme.tag == WeightScheme::Tag::Uniform) {
            DistanceMatrix placeholder;
            placeholder.values = Matrix(split.train.n_samples(), 0);
            w = compute_weights(placeholder, scheme.scheme);
        } else {
            const DistanceMatrix D =
                pairwise_distances(train_distance_view(split.train, cfg.metric),
                                   test_distance_view(split, cfg.metric), cfg.metric);
            w = compute_weights(D, scheme.scheme);
        }
        if (scheme.normalize_mean_one) w = normalize_mean_one(w);

        res.weight_min = *std::min_element(w.weights.begin(), w.weights.end());
        res.weight_max = *std::max_element(w.weights.begin(), w.weights.end());
        double sum = 0.0;
        for (double v : w.weights) sum += v;
        res.weight_mean = sum / static_cast<double>(w.weights.size());

        ModelConfig mcfg;
        mcfg.input_dim = split.train.n_features();
        mcfg.hidden_layers = cfg.hidden_layers;
        mcfg.seed = res.seed + kInitSeedOffset;
        TrainConfig tcfg = cfg.training;
        tcfg.shuffle_seed = res.seed + kShuffleSeedOffset;

        const TrainResult trained = train(split, w, mcfg, tcfg);
        const auto probs = predict_proba(trained.params, split.test_features);
        res.report = evaluate(probs, split.test_labels);
        res.ok = true;
    } catch (const std::exception& e) {
        res.ok = false;
        res.error = e.what();
    }
    res.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

RunResult run_single(const ExperimentConfig& cfg, const SchemeSpec& scheme,
                     double test_fraction, std::size_t run_index) {
    return run_single(cfg, prepare_dataset(cfg), scheme, test_fraction, run_index);
}

ReportTable run_experiment(const ExperimentConfig& cfg) {
    const Dataset prepared = prepare_dataset(cfg);

    struct Cell {
        std::size_t scheme_idx;
        double fraction;
        std::size_t run;
    };
    std::vector<Cell> cells;  // canonical order: scheme, fraction, run
    for (std::size_t s = 0; s < cfg.schemes.size(); ++s)
        for (double f : cfg.test_fractions)
            for (std::size_t r = 0; r < cfg.n_runs; ++r) cells.push_back({s, f, r});

    ReportTable table;
    table.runs.resize(cells.size());
    const std::size_t workers = std::min(effective_workers(cfg), cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= cells.size()) return;
            const Cell& c = cells[k];
            table.runs[k] =
                run_single(cfg, prepared, cfg.schemes[c.scheme_idx], c.fraction, c.run);
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Aggregate over successful runs per (dataset, scheme, fraction).
    for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
        for (double f : cfg.test_fractions) {
            AggregateRow agg;
            agg.dataset = prepared.name;
            agg.scheme = cfg.schemes[s].scheme.name();
            agg.test_fraction = f;
            for (const auto& r : table.runs) {
                if (!r.ok || r.scheme != agg.scheme || r.test_fraction != f) continue;
                agg.n_runs += 1;
                agg.mean.precision += r.report.precision;
                agg.mean.recall += r.report.recall;
                agg.mean.f1 += r.report.f1;
                agg.mean.auc += r.report.auc;
                agg.mean.accuracy += r.report.accuracy;
                agg.wall_time_s += r.wall_time_s;
            }
            if (agg.n_runs > 0) {
                const double n = static_cast<double>(agg.n_runs);
                agg.mean.precision /= n;
                agg.mean.recall /= n;
                agg.mean.f1 /= n;
                agg.mean.auc /= n;
                agg.mean.accuracy /= n;
                agg.wall_time_s /= n;
            }
            table.aggregates.push_back(std::move(agg));
        }
    }
    return table;
}

std::string format_fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

void emit_report(const ReportTable& table, const std::string& output_dir, bool markdown) {
    if (table.runs.empty()) throw std::invalid_argument("emit_report: empty report table");
    std::filesystem::create_directories(output_dir);
    const auto path = [&](const char* name) {
        return (std::filesystem::path(output_dir) / name).string();
    };

    {
        std::ofstream f(path("details.csv"), std::ios::binary);
        if (!f) throw std::runtime_error("cannot write details.csv");
        f << "dataset,scheme,test_fraction,run,seed,precision,recall,auc,f1,accuracy,"
             "wall_time_s\n";
        for (const auto& r : table.runs) {
            if (!r.ok) continue;
            f << r.dataset << ',' << r.scheme << ',' << format_fixed6(r.test_fraction) << ','
              << r.run << ',' << r.seed << ',' << format_fixed6(r.report.precision) << ','
              << format_fixed6(r.report.recall) << ',' << format_fixed6(r.report.auc) << ','
              << format_fixed6(r.report.f1) << ',' << format_fixed6(r.report.accuracy) << ','
              << format_fixed6(r.wall_time_s) << '\n';
        }
    }
    {
        std::ofstream f(path("aggregate.csv"), std::ios::binary);
        if (!f) throw std::runtime_error("cannot write aggregate.csv");
        f << "dataset,scheme,test_fraction,n_runs,precision,recall,auc,f1,accuracy,"
             "wall_time_s\n";
        for (const auto& a : table.aggregates) {
            f << a.dataset << ',' << a.scheme << ',' << format_fixed6(a.test_fraction) << ','
              << a.n_runs << ',' << format_fixed6(a.mean.precision) << ','
              << format_fixed6(a.mean.recall) << ',' << format_fixed6(a.mean.auc) << ','
              << format_fixed6(a.mean.f1) << ',' << format_fixed6(a.mean.accuracy) << ','
              << format_fixed6(a.wall_time_s) << '\n';
        }
    }
    bool any_failed = false;
    for (const auto& r : table.runs) any_failed |= !r.ok;
    if (any_failed) {
        std::ofstream f(path("failures.csv"), std::ios::binary);
        f << "dataset,scheme,test_fraction,run,seed,error\n";
        for (const auto& r : table.runs) {
            if (r.ok) continue;
            std::string msg = r.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            f << r.dataset << ',' << r.scheme << ',' << format_fixed6(r.test_fraction) << ','
              << r.run << ',' << r.seed << ',' << msg << '\n';
        }
    }
    if (markdown) {
        std::ofstream f(path("aggregate.md"), std::ios::binary);
        f << "| dataset | scheme | test_fraction | n_runs | precision | recall | auc | f1 | "
             "accuracy |\n";
        f << "|---|---|---|---|---|---|---|---|---|\n";
        for (const auto& a : table.aggregates) {
            f << "| " << a.dataset << " | " << a.scheme << " | "
              << format_fixed6(a.test_fraction) << " | " << a.n_runs << " | "
              << format_fixed6(a.mean.precision) << " | " << format_fixed6(a.mean.recall)
              << " | " << format_fixed6(a.mean.auc) << " | " << format_fixed6(a.mean.f1)
              << " | " << format_fixed6(a.mean.accuracy) << " |\n";
        }
    }
}

}  // namespace dbw
