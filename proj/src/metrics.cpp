#include "ciu/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "ciu/errors.hpp"

namespace ciu {

Confusion confusion(std::span<const int> gold, std::span<const int> pred) {
  if (gold.size() != pred.size() || gold.empty()) {
    throw LengthMismatch("confusion: gold and pred must be equal, nonzero length");
  }
  Confusion c;
  for (size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] == 1) {
      pred[i] == 1 ? ++c.tp : ++c.fn;
    } else {
      pred[i] == 1 ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

Prf prf1_accuracy(const Confusion& c) {
  Prf m;
  m.precision = (c.tp + c.fp) > 0
                    ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp)
                    : 0.0;
  m.recall = (c.tp + c.fn) > 0
                 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn)
                 : 0.0;
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  m.accuracy = c.total() > 0
                   ? static_cast<double>(c.tp + c.tn) /
                         static_cast<double>(c.total())
                   : 0.0;
  return m;
}

double roc_auc(std::span<const int> gold, std::span<const double> scores) {
  if (gold.size() != scores.size() || gold.empty()) {
    throw LengthMismatch("roc_auc: gold and scores must be equal, nonzero length");
  }
  const long pos = std::count(gold.begin(), gold.end(), 1);
  const long neg = static_cast<long>(gold.size()) - pos;
  if (pos == 0 || neg == 0) {
    throw SingleClassEval("roc_auc: both classes must be present");
  }

  std::vector<size_t> order(gold.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });

  // Midranks over tie groups; AUC from the positive rank sum.
  double pos_rank_sum = 0.0;
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
    for (size_t k = i; k < j; ++k) {
      if (gold[order[k]] == 1) pos_rank_sum += midrank;
    }
    i = j;
  }
  const double p = static_cast<double>(pos);
  const double n = static_cast<double>(neg);
  return (pos_rank_sum - p * (p + 1.0) / 2.0) / (p * n);
}

std::vector<int> threshold_labels(std::span<const double> scores,
                                  double threshold) {
  std::vector<int> labels(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) {
    labels[i] = scores[i] >= threshold ? 1 : 0;
  }
  return labels;
}

MetricRow metric_row(std::span<const int> gold, std::span<const double> scores,
                     double threshold, std::string model, std::string task,
                     std::string config_fingerprint) {
  const std::vector<int> pred = threshold_labels(scores, threshold);
  const Prf m = prf1_accuracy(confusion(gold, pred));
  MetricRow row;
  row.model = std::move(model);
  row.task = std::move(task);
  row.config_fingerprint = std::move(config_fingerprint);
  row.accuracy = m.accuracy;
  row.precision = m.precision;
  row.recall = m.recall;
  row.f1 = m.f1;
  row.auc = roc_auc(gold, scores);
  return row;
}

}  // namespace ciu
