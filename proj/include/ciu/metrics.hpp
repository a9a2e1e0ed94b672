#pragma once

#include <span>
#include <string>
#include <vector>

namespace ciu {

struct Confusion {
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;
  long total() const { return tp + fp + tn + fn; }
};

// Positive class = 1.
Confusion confusion(std::span<const int> gold, std::span<const int> pred);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
};

// Zero-denominator convention: precision/recall/f1 are 0 when undefined.
Prf prf1_accuracy(const Confusion& c);

// Mann-Whitney AUC with midrank tie handling:
// P(score+ > score-) + 0.5 * P(tie). Throws SingleClassEval.
double roc_auc(std::span<const int> gold, std::span<const double> scores);

struct MetricRow {
  std::string model;
  std::string task;
  std::string config_fingerprint;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auc = 0.0;
};

MetricRow metric_row(std::span<const int> gold, std::span<const double> scores,
                     double threshold, std::string model, std::string task,
                     std::string config_fingerprint);

std::vector<int> threshold_labels(std::span<const double> scores,
                                  double threshold);

}  // namespace ciu
