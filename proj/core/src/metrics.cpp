#include "dbw/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dbw {

ConfusionCounts confusion_at_threshold(const std::vector<double>& scores,
                                       const std::vector<int>& labels, double threshold) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("confusion_at_threshold: length mismatch");
    ConfusionCounts c;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool pred = scores[i] >= threshold;
        const bool truth = labels[i] == 1;
        if (pred && truth) ++c.tp;
        else if (pred && !truth) ++c.fp;
        else if (!pred && truth) ++c.fn;
        else ++c.tn;
    }
    return c;
}

PrfA precision_recall_f1_accuracy(const ConfusionCounts& c) {
    if (c.total() == 0)
        throw std::invalid_argument("precision_recall_f1_accuracy: empty counts");
    const auto ratio = [](std::size_t num, std::size_t den) {
        return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    PrfA r{};
    r.precision = ratio(c.tp, c.tp + c.fp);
    r.recall = ratio(c.tp, c.tp + c.fn);
    r.f1 = (r.precision + r.recall) == 0.0
               ? 0.0
               : 2.0 * r.precision * r.recall / (r.precision + r.recall);
    r.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    return r;
}

double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("roc_auc: length mismatch");
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (int y : labels) n_pos += y == 1;
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw std::domain_error("roc_auc: undefined for single-class labels");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Average ranks over tie groups (1-based ranks).
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }

    double rank_sum_pos = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        if (labels[k] == 1) rank_sum_pos += rank[k];
    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n_neg);
    return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

EvalReport evaluate(const std::vector<double>& scores, const std::vector<int>& labels,
                    double threshold) {
    const auto c = confusion_at_threshold(scores, labels, threshold);
    const auto prfa = precision_recall_f1_accuracy(c);
    EvalReport r;
    r.precision = prfa.precision;
    r.recall = prfa.recall;
    r.f1 = prfa.f1;
    r.accuracy = prfa.accuracy;
    r.auc = roc_auc(scores, labels);
    r.threshold = threshold;
    r.n_test = scores.size();
    return r;
}

}  // namespace dbw
