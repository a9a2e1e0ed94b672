#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ciu/labels.hpp"
#include "ciu/sparse.hpp"

namespace ciu {

// Dense handcrafted slots appended after the hashed region.
inline constexpr uint32_t kHandcraftedDims = 7;

// Ablation switches for the shared token-in-context feature space.
struct FeatureConfig {
  bool use_token_char = true;
  bool use_context_char = true;
  bool use_handcrafted = true;
  int context_window = 1;  // 0, 1 or 2 neighbor tokens per side
  int ngram_min = 1;
  int ngram_max = 3;
  uint32_t hash_dim = 1u << 18;  // power of two, >= 2^10

  void validate() const;  // throws ValidationError
  uint32_t feature_dim() const { return hash_dim + kHandcraftedDims; }

  // Flat key=value document; fingerprint = FNV-1a of the serialized form,
  // recorded in every report row.
  std::string serialize() const;
  static FeatureConfig deserialize(const std::vector<std::string>& lines);
  std::string fingerprint() const;
};

// All contiguous substrings of length n_min..n_max, no padding sentinels.
// Multiset semantics: repeated grams appear repeatedly.
std::vector<std::string> char_ngrams(std::string_view surface, int n_min,
                                     int n_max);

// Lightweight linguistic cues for the target token.
struct HandcraftedBlock {
  double token_length = 0.0;
  bool is_function_word = false;
  bool contains_digit = false;
  double vowel_ratio = 0.0;     // aeiou share of the surface, in [0,1]
  bool repeats_previous = false;  // surface equals previous token in utterance
  double utterance_position = 0.0;  // token_index / max(1, n-1), in [0,1]
  bool is_single_char = false;
};

HandcraftedBlock handcrafted_block(std::span<const std::string> utterance,
                                   size_t target_index);

bool is_function_word(std::string_view surface);

// One token-in-context under a config. Hashed token grams, offset-tagged
// hashed neighbor grams within the window, and the dense handcrafted block;
// colliding grams sum their counts.
SparseVector featurize(std::span<const std::string> utterance,
                       size_t target_index, const FeatureConfig& config);

struct FeatureMatrix {
  std::vector<SparseVector> rows;
  std::vector<int> targets;
  std::vector<std::string> groups;
  uint32_t dim = 0;
  std::string config_fingerprint;
};

// One vector per task-view instance, corpus order preserved. Context comes
// from the full cleaned utterance (including non-word tokens).
FeatureMatrix featurize_dataset(const LabeledCorpus& corpus,
                                const TaskView& view,
                                const FeatureConfig& config);

}  // namespace ciu
