#include <algorithm>
#include <cmath>

#include "ciu/models.hpp"

namespace ciu::detail {

KnnState train_knn(const ModelSpec& spec, const FeatureMatrix& data) {
  KnnState s;
  s.k = spec.knn.k;
  const std::vector<size_t> order = canonical_order(data);
  s.points.reserve(order.size());
  s.labels.reserve(order.size());
  s.norms.reserve(order.size());
  for (const size_t i : order) {
    s.points.push_back(data.rows[i]);
    s.labels.push_back(data.targets[i]);
    s.norms.push_back(std::sqrt(squared_norm(data.rows[i])));
  }
  return s;
}

// Fraction of the k nearest neighbors (cosine distance) labeled positive.
// Distance ties break toward the lower canonical ordinal.
double score_state(const KnnState& s, const SparseVector& x) {
  const size_t n = s.points.size();
  const size_t k = std::min(static_cast<size_t>(s.k), n);
  const double x_norm = std::sqrt(squared_norm(x));

  // Max-heap of the current k best (distance, ordinal) pairs.
  std::vector<std::pair<double, size_t>> heap;
  heap.reserve(k + 1);
  for (size_t i = 0; i < n; ++i) {
    const double d = cosine_distance(x, s.points[i], x_norm, s.norms[i]);
    if (heap.size() < k) {
      heap.emplace_back(d, i);
      std::push_heap(heap.begin(), heap.end());
    } else if (std::pair(d, i) < heap.front()) {
      std::pop_heap(heap.begin(), heap.end());
      heap.back() = {d, i};
      std::push_heap(heap.begin(), heap.end());
    }
  }
  long votes = 0;
  for (const auto& [d, i] : heap) votes += s.labels[i];
  return static_cast<double>(votes) / static_cast<double>(k);
}

}  // namespace ciu::detail
