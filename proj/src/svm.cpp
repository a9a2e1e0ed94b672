#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>

#include "ciu/models.hpp"
#include "ciu/rng.hpp"

namespace ciu::detail {

// Pegasos-style hinge-loss subgradient descent. eta_t = 1/(lambda*t), so the
// per-step decay factor is exactly (1 - 1/t); it is applied through a scalar
// multiplier to keep each step O(nnz).
LinearSvmState train_svm_linear(const ModelSpec& spec,
                                const FeatureMatrix& data) {
  const std::vector<size_t> order = canonical_order(data);
  const size_t n = order.size();
  const double lambda = 1.0 / (spec.svm_linear.c * static_cast<double>(n));

  std::vector<double> v(data.dim, 0.0);
  double scale = 1.0;
  double bias = 0.0;
  long t = 0;

  Rng rng = derive_rng(spec.seed, 0);
  std::vector<size_t> schedule(n);
  for (size_t i = 0; i < n; ++i) schedule[i] = i;

  for (int epoch = 0; epoch < spec.svm_linear.epochs; ++epoch) {
    rng.shuffle(schedule);
    for (const size_t pos : schedule) {
      const SparseVector& x = data.rows[order[pos]];
      const double y = data.targets[order[pos]] == 1 ? 1.0 : -1.0;
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      double wx = 0.0;
      for (const auto& [f, val] : x.entries) wx += v[f] * val;
      const double margin = y * (scale * wx + bias);
      if (t > 1) scale *= 1.0 - 1.0 / static_cast<double>(t);
      if (margin < 1.0) {
        const double step = eta * y / scale;
        for (const auto& [f, val] : x.entries) v[f] += step * val;
        bias += eta * y;
      }
      if (scale < 1e-100) {  // keep the factored form well away from denormals
        for (double& w : v) w *= scale;
        scale = 1.0;
      }
    }
  }

  LinearSvmState state;
  state.bias = bias;
  for (uint32_t f = 0; f < data.dim; ++f) {
    const double w = scale * v[f];
    if (w != 0.0) state.weights.emplace_back(f, w);
  }
  return state;
}

namespace {

// LRU cache of RBF kernel rows (float), keyed by instance index.
class KernelCache {
 public:
  KernelCache(const std::vector<const SparseVector*>& rows, double gamma,
              size_t max_bytes)
      : rows_(rows), gamma_(gamma) {
    max_rows_ = std::max<size_t>(2, max_bytes / (rows.size() * sizeof(float)));
  }

  const std::vector<float>& row(size_t i) {
    auto it = cache_.find(i);
    if (it != cache_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second.first);
      return it->second.second;
    }
    if (cache_.size() >= max_rows_) {
      cache_.erase(lru_.back());
      lru_.pop_back();
    }
    std::vector<float> krow(rows_.size());
    for (size_t s = 0; s < rows_.size(); ++s) {
      krow[s] = static_cast<float>(
          std::exp(-gamma_ * squared_distance(*rows_[i], *rows_[s])));
    }
    lru_.push_front(i);
    auto [ins, _] = cache_.emplace(i, std::pair(lru_.begin(), std::move(krow)));
    return ins->second.second;
  }

 private:
  const std::vector<const SparseVector*>& rows_;
  double gamma_;
  size_t max_rows_;
  std::list<size_t> lru_;
  std::unordered_map<size_t, std::pair<std::list<size_t>::iterator,
                                       std::vector<float>>> cache_;
};

constexpr double kTau = 1e-12;

}  // namespace

// SMO with second-order working-set selection (libsvm-style), equal C for
// both classes. On hitting the iteration cap the current dual iterate is
// kept: the model remains usable, just short of the KKT tolerance.
RbfSvmState train_svm_rbf(const ModelSpec& spec, const FeatureMatrix& data) {
  const std::vector<size_t> order = canonical_order(data);
  const size_t n = order.size();
  std::vector<const SparseVector*> rows(n);
  std::vector<double> y(n);
  size_t total_nnz = 0;
  for (size_t i = 0; i < n; ++i) {
    rows[i] = &data.rows[order[i]];
    y[i] = data.targets[order[i]] == 1 ? 1.0 : -1.0;
    total_nnz += rows[i]->nnz();
  }

  double gamma = spec.svm_rbf.gamma;
  if (gamma <= 0.0) {
    // Auto: reciprocal of the mean active dimensions per training vector.
    const double mean_nnz =
        static_cast<double>(total_nnz) / static_cast<double>(n);
    gamma = mean_nnz > 0.0 ? 1.0 / mean_nnz : 1.0;
  }

  const double c = spec.svm_rbf.c;
  const double tol = spec.svm_rbf.tol;
  const long max_iter =
      spec.svm_rbf.max_iter > 0
          ? spec.svm_rbf.max_iter
          : std::max<long>(100000, 20 * static_cast<long>(n));

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);
  KernelCache cache(rows, gamma, size_t{320} << 20);

  for (long iter = 0; iter < max_iter; ++iter) {
    // i: most violating index in I_up.
    double gmax = -std::numeric_limits<double>::infinity();
    size_t i = n;
    for (size_t s = 0; s < n; ++s) {
      const bool in_up = y[s] > 0.0 ? alpha[s] < c : alpha[s] > 0.0;
      if (in_up && -y[s] * grad[s] > gmax) {
        gmax = -y[s] * grad[s];
        i = s;
      }
    }
    if (i == n) break;
    const std::vector<float>& ki = cache.row(i);

    // j: best second-order decrease among I_low with violation.
    double gmin = std::numeric_limits<double>::infinity();
    double best_obj = std::numeric_limits<double>::infinity();
    size_t j = n;
    for (size_t s = 0; s < n; ++s) {
      const bool in_low = y[s] > 0.0 ? alpha[s] > 0.0 : alpha[s] < c;
      if (!in_low) continue;
      const double neg_yg = -y[s] * grad[s];
      gmin = std::min(gmin, neg_yg);
      const double grad_diff = gmax - neg_yg;
      if (grad_diff > 0.0) {
        double quad = 2.0 - 2.0 * static_cast<double>(ki[s]);
        if (quad <= 0.0) quad = kTau;
        const double obj = -(grad_diff * grad_diff) / quad;
        if (obj < best_obj) {
          best_obj = obj;
          j = s;
        }
      }
    }
    if (gmax - gmin <= tol || j == n) break;
    const std::vector<float>& kj = cache.row(j);

    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    double quad = 2.0 - 2.0 * static_cast<double>(ki[j]);
    if (quad <= 0.0) quad = kTau;
    if (y[i] != y[j]) {
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = diff; }
      } else {
        if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = -diff; }
      }
      if (diff > 0.0) {
        if (alpha[i] > c) { alpha[i] = c; alpha[j] = c - diff; }
      } else {
        if (alpha[j] > c) { alpha[j] = c; alpha[i] = c + diff; }
      }
    } else {
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) { alpha[i] = c; alpha[j] = sum - c; }
      } else {
        if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = sum; }
      }
      if (sum > c) {
        if (alpha[j] > c) { alpha[j] = c; alpha[i] = sum - c; }
      } else {
        if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = sum; }
      }
    }

    const double dai = alpha[i] - old_ai;
    const double daj = alpha[j] - old_aj;
    if (dai == 0.0 && daj == 0.0) break;  // numerically stuck
    for (size_t s = 0; s < n; ++s) {
      grad[s] += y[i] * y[s] * static_cast<double>(ki[s]) * dai +
                 y[j] * y[s] * static_cast<double>(kj[s]) * daj;
    }
  }

  // Bias from the KKT conditions (free SVs if any, else the midpoint of the
  // feasible interval).
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  long nr_free = 0;
  for (size_t s = 0; s < n; ++s) {
    const double yg = y[s] * grad[s];
    if (alpha[s] >= c) {
      if (y[s] < 0.0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha[s] <= 0.0) {
      if (y[s] > 0.0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++nr_free;
      sum_free += yg;
    }
  }
  const double rho = nr_free > 0 ? sum_free / static_cast<double>(nr_free)
                                 : 0.5 * (ub + lb);

  RbfSvmState state;
  state.gamma = gamma;
  state.bias = -rho;
  for (size_t s = 0; s < n; ++s) {
    if (alpha[s] > 0.0) {
      state.support.push_back(*rows[s]);
      state.coef.push_back(alpha[s] * y[s]);
    }
  }
  return state;
}

}  // namespace ciu::detail
