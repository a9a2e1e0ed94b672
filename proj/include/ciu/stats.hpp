#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ciu {

// Two systems evaluated on identical test items, grouped by transcript.
struct PairedRun {
  std::vector<int> gold;
  std::vector<int> pred_a;
  std::vector<int> pred_b;
  std::vector<double> scores_a;
  std::vector<double> scores_b;
  std::vector<std::string> groups;

  void validate() const;  // throws ValidationError
};

struct BootstrapCi {
  double delta_f1 = 0.0;  // F1(a) - F1(b) on the original data
  double ci_low = 0.0;    // empirical 2.5 percentile over resamples
  double ci_high = 0.0;   // empirical 97.5 percentile
};

// Resamples whole groups (transcripts) with replacement; instances are never
// resampled individually. Deterministic in (run, B, seed); each resample's
// draws come from an independent stream of (seed, resample index).
BootstrapCi grouped_bootstrap_delta_f1(const PairedRun& run, int B,
                                       uint64_t seed);

// Exposed for construction audits: the group indices drawn per resample.
std::vector<std::vector<size_t>> bootstrap_group_draws(size_t n_groups, int B,
                                                       uint64_t seed);

// Sorted distinct group keys; used to interpret bootstrap_group_draws.
std::vector<std::string> distinct_groups(std::span<const std::string> groups);

// Exact two-sided binomial test on the discordant counts when b+c <= 25,
// chi-square with continuity correction above.
double mcnemar(const PairedRun& run);
double mcnemar_counts(long b, long c);

struct DelongResult {
  double auc_a = 0.0;
  double auc_b = 0.0;
  double delta_auc = 0.0;  // equals roc_auc(a) - roc_auc(b) exactly
  double p = 1.0;
};

// Paired DeLong test for correlated AUCs (structural components estimator,
// two-sided normal p). Identical scorers give p = 1 and delta 0 exactly.
DelongResult delong(const PairedRun& run);

// Step-down adjustment: sorted ascending, adjusted_i = max_{j<=i}
// (m-j+1)*p_j, capped at 1.
std::map<std::string, double> holm_bonferroni(
    const std::map<std::string, double>& p_values);

struct StatsReport {
  std::string comparison;
  double delta_f1 = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double mcnemar_p = 1.0;
  double delta_auc = 0.0;
  double delong_p = 1.0;
  double holm_adjusted_p = 1.0;
};

}  // namespace ciu
