#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace ciu {

// One instance's feature vector: index-sorted (index, value) pairs, zero
// values omitted. All distance/kernel math walks the nonzero supports only.
struct SparseVector {
  std::vector<std::pair<uint32_t, double>> entries;
  uint32_t dim = 0;

  size_t nnz() const { return entries.size(); }

  double at(uint32_t index) const {
    auto it = std::lower_bound(
        entries.begin(), entries.end(), index,
        [](const auto& e, uint32_t i) { return e.first < i; });
    return (it != entries.end() && it->first == index) ? it->second : 0.0;
  }
};

inline SparseVector make_sparse(
    uint32_t dim, std::vector<std::pair<uint32_t, double>> entries) {
  std::sort(entries.begin(), entries.end());
  std::erase_if(entries, [](const auto& e) { return e.second == 0.0; });
  return SparseVector{std::move(entries), dim};
}

inline double dot(const SparseVector& a, const SparseVector& b) {
  double s = 0.0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() && ib != b.entries.end()) {
    if (ia->first == ib->first) {
      s += ia->second * ib->second;
      ++ia;
      ++ib;
    } else if (ia->first < ib->first) {
      ++ia;
    } else {
      ++ib;
    }
  }
  return s;
}

inline double squared_norm(const SparseVector& a) {
  double s = 0.0;
  for (const auto& [i, v] : a.entries) s += v * v;
  return s;
}

inline double squared_distance(const SparseVector& a, const SparseVector& b) {
  double s = 0.0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() && ib != b.entries.end()) {
    if (ia->first == ib->first) {
      const double d = ia->second - ib->second;
      s += d * d;
      ++ia;
      ++ib;
    } else if (ia->first < ib->first) {
      s += ia->second * ia->second;
      ++ia;
    } else {
      s += ib->second * ib->second;
      ++ib;
    }
  }
  for (; ia != a.entries.end(); ++ia) s += ia->second * ia->second;
  for (; ib != b.entries.end(); ++ib) s += ib->second * ib->second;
  return s;
}

// Cosine distance in [0, 2]. A zero vector is at distance 1 from everything.
inline double cosine_distance(const SparseVector& a, const SparseVector& b,
                              double norm_a, double norm_b) {
  if (norm_a == 0.0 || norm_b == 0.0) return 1.0;
  return 1.0 - dot(a, b) / (norm_a * norm_b);
}

inline double cosine_distance(const SparseVector& a, const SparseVector& b) {
  return cosine_distance(a, b, std::sqrt(squared_norm(a)),
                         std::sqrt(squared_norm(b)));
}

// Content order: deterministic total order independent of how callers happen
// to arrange training instances.
inline bool content_less(const SparseVector& a, const SparseVector& b) {
  return std::lexicographical_compare(a.entries.begin(), a.entries.end(),
                                      b.entries.begin(), b.entries.end());
}

}  // namespace ciu
