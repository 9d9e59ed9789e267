#pragma once

#include <cstddef>
#include <vector>

namespace dbw {

struct ConfusionCounts {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::size_t total() const { return tp + fp + tn + fn; }
};

struct EvalReport {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double auc = 0.0;
    double accuracy = 0.0;
    double threshold = 0.5;
    std::size_t n_test = 0;
};

// Prediction is positive iff score >= threshold.
ConfusionCounts confusion_at_threshold(const std::vector<double>& scores,
                                       const std::vector<int>& labels, double threshold);

struct PrfA {
    double precision, recall, f1, accuracy;
};

// 0/0 divisions resolve to 0.
PrfA precision_recall_f1_accuracy(const ConfusionCounts& c);

// Mann-Whitney AUC via average ranks; ties count half. Requires both classes.
double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels);

EvalReport evaluate(const std::vector<double>& scores, const std::vector<int>& labels,
                    double threshold = 0.5);

}  // namespace dbw
