#include "ciu/stats.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "ciu/errors.hpp"
#include "ciu/metrics.hpp"
#include "ciu/rng.hpp"

namespace ciu {

namespace {

double f1_on_subset(std::span<const int> gold, std::span<const int> pred,
                    std::span<const size_t> indices) {
  long tp = 0, fp = 0, fn = 0;
  for (const size_t i : indices) {
    if (gold[i] == 1) {
      pred[i] == 1 ? ++tp : ++fn;
    } else if (pred[i] == 1) {
      ++fp;
    }
  }
  const double precision =
      (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  const double recall =
      (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  return (precision + recall) > 0.0
             ? 2.0 * precision * recall / (precision + recall)
             : 0.0;
}

// Linear-interpolation quantile of a sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const size_t lo = static_cast<size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[lo + 1] - sorted[lo]) * frac;
}

// Two-sided normal tail from |z|.
double normal_two_sided_p(double z) {
  return std::erfc(std::abs(z) / std::sqrt(2.0));
}

}  // namespace

void PairedRun::validate() const {
  const size_t n = gold.size();
  if (n == 0 || pred_a.size() != n || pred_b.size() != n ||
      scores_a.size() != n || scores_b.size() != n || groups.size() != n) {
    throw ValidationError("PairedRun: all sequences must have equal nonzero length");
  }
}

std::vector<std::string> distinct_groups(std::span<const std::string> groups) {
  std::vector<std::string> out(groups.begin(), groups.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::vector<size_t>> bootstrap_group_draws(size_t n_groups, int B,
                                                       uint64_t seed) {
  std::vector<std::vector<size_t>> draws(static_cast<size_t>(B));
  for (int b = 0; b < B; ++b) {
    Rng rng = derive_rng(seed, static_cast<uint64_t>(b));
    auto& d = draws[static_cast<size_t>(b)];
    d.resize(n_groups);
    for (size_t g = 0; g < n_groups; ++g) d[g] = static_cast<size_t>(rng.below(n_groups));
  }
  return draws;
}

BootstrapCi grouped_bootstrap_delta_f1(const PairedRun& run, int B,
                                       uint64_t seed) {
  run.validate();
  if (B < 100) throw ValidationError("bootstrap: B must be >= 100");
  const std::vector<std::string> keys = distinct_groups(run.groups);
  if (keys.size() < 2) {
    throw TooFewGroups("bootstrap: need at least 2 distinct groups");
  }

  // Instance indices per group, in corpus order.
  std::unordered_map<std::string_view, size_t> group_index;
  for (size_t g = 0; g < keys.size(); ++g) group_index.emplace(keys[g], g);
  std::vector<std::vector<size_t>> members(keys.size());
  for (size_t i = 0; i < run.groups.size(); ++i) {
    members[group_index.at(run.groups[i])].push_back(i);
  }

  std::vector<size_t> all(run.gold.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  BootstrapCi out;
  out.delta_f1 = f1_on_subset(run.gold, run.pred_a, all) -
                 f1_on_subset(run.gold, run.pred_b, all);

  const auto draws = bootstrap_group_draws(keys.size(), B, seed);
  std::vector<double> deltas;
  deltas.reserve(static_cast<size_t>(B));
  std::vector<size_t> resample;
  for (const auto& draw : draws) {
    resample.clear();
    for (const size_t g : draw) {
      // Whole transcripts only; a group's instances enter as a block.
      resample.insert(resample.end(), members[g].begin(), members[g].end());
    }
    deltas.push_back(f1_on_subset(run.gold, run.pred_a, resample) -
                     f1_on_subset(run.gold, run.pred_b, resample));
  }
  std::sort(deltas.begin(), deltas.end());
  out.ci_low = quantile_sorted(deltas, 0.025);
  out.ci_high = quantile_sorted(deltas, 0.975);
  return out;
}

double mcnemar_counts(long b, long c) {
  const long n = b + c;
  if (n == 0) return 1.0;
  if (n <= 25) {
    // Exact two-sided binomial: terms are dyadic rationals, sums are exact.
    const long k = std::max(b, c);
    double tail = 0.0;
    double coef = 1.0;  // C(n, i) walked downward from i = n
    for (long i = n; i >= k; --i) {
      tail += coef;
      coef = coef * static_cast<double>(i) / static_cast<double>(n - i + 1);
    }
    const double p = 2.0 * tail * std::pow(0.5, static_cast<double>(n));
    return std::min(1.0, p);
  }
  const double x = std::pow(std::abs(static_cast<double>(b - c)) - 1.0, 2.0) /
                   static_cast<double>(n);
  // Chi-square with 1 df survival = two-sided normal tail at sqrt(x).
  return normal_two_sided_p(std::sqrt(x));
}

double mcnemar(const PairedRun& run) {
  run.validate();
  long b = 0, c = 0;
  for (size_t i = 0; i < run.gold.size(); ++i) {
    const bool a_right = run.pred_a[i] == run.gold[i];
    const bool b_right = run.pred_b[i] == run.gold[i];
    if (a_right && !b_right) ++b;
    if (!a_right && b_right) ++c;
  }
  return mcnemar_counts(b, c);
}

DelongResult delong(const PairedRun& run) {
  run.validate();
  std::vector<size_t> pos, neg;
  for (size_t i = 0; i < run.gold.size(); ++i) {
    (run.gold[i] == 1 ? pos : neg).push_back(i);
  }
  if (pos.empty() || neg.empty()) {
    throw SingleClassEval("delong: both classes must be present");
  }
  const size_t m = pos.size();
  const size_t n = neg.size();

  const auto psi = [](double sp, double sn) {
    if (sp > sn) return 1.0;
    if (sp == sn) return 0.5;
    return 0.0;
  };

  // Structural components V10 (per positive) and V01 (per negative).
  std::vector<double> v10_a(m, 0.0), v10_b(m, 0.0), v01_a(n, 0.0), v01_b(n, 0.0);
  for (size_t ip = 0; ip < m; ++ip) {
    for (size_t in = 0; in < n; ++in) {
      const double pa = psi(run.scores_a[pos[ip]], run.scores_a[neg[in]]);
      const double pb = psi(run.scores_b[pos[ip]], run.scores_b[neg[in]]);
      v10_a[ip] += pa;
      v10_b[ip] += pb;
      v01_a[in] += pa;
      v01_b[in] += pb;
    }
  }
  for (double& v : v10_a) v /= static_cast<double>(n);
  for (double& v : v10_b) v /= static_cast<double>(n);
  for (double& v : v01_a) v /= static_cast<double>(m);
  for (double& v : v01_b) v /= static_cast<double>(m);

  DelongResult res;
  res.auc_a = roc_auc(run.gold, run.scores_a);
  res.auc_b = roc_auc(run.gold, run.scores_b);
  res.delta_auc = res.auc_a - res.auc_b;

  const auto covariance = [](const std::vector<double>& u,
                             const std::vector<double>& v) {
    const size_t k = u.size();
    if (k < 2) return 0.0;
    double mu = 0.0, mv = 0.0;
    for (size_t i = 0; i < k; ++i) {
      mu += u[i];
      mv += v[i];
    }
    mu /= static_cast<double>(k);
    mv /= static_cast<double>(k);
    double s = 0.0;
    for (size_t i = 0; i < k; ++i) s += (u[i] - mu) * (v[i] - mv);
    return s / static_cast<double>(k - 1);
  };

  const double s10 = covariance(v10_a, v10_a) + covariance(v10_b, v10_b) -
                     2.0 * covariance(v10_a, v10_b);
  const double s01 = covariance(v01_a, v01_a) + covariance(v01_b, v01_b) -
                     2.0 * covariance(v01_a, v01_b);
  const double var = s10 / static_cast<double>(m) + s01 / static_cast<double>(n);
  if (var <= 1e-24) {
    res.p = res.delta_auc == 0.0 ? 1.0 : 0.0;
    return res;
  }
  res.p = normal_two_sided_p(res.delta_auc / std::sqrt(var));
  return res;
}

std::map<std::string, double> holm_bonferroni(
    const std::map<std::string, double>& p_values) {
  for (const auto& [name, p] : p_values) {
    if (p < 0.0 || p > 1.0) {
      throw ValidationError("holm: p for '" + name + "' outside [0,1]");
    }
  }
  std::vector<std::pair<double, std::string>> sorted;
  sorted.reserve(p_values.size());
  for (const auto& [name, p] : p_values) sorted.emplace_back(p, name);
  std::sort(sorted.begin(), sorted.end());

  const size_t m = sorted.size();
  std::map<std::string, double> adjusted;
  double running = 0.0;
  for (size_t i = 0; i < m; ++i) {
    running = std::max(running, static_cast<double>(m - i) * sorted[i].first);
    adjusted[sorted[i].second] = std::min(1.0, running);
  }
  return adjusted;
}

}  // namespace ciu
