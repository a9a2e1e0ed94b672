#include "ciu/featurize.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>
#include <unordered_set>

#include "ciu/errors.hpp"
#include "ciu/hashing.hpp"
#include "ciu/textio.hpp"

namespace ciu {

namespace {

// Closed-class stoplist backing the is_function_word cue.
const std::unordered_set<std::string_view>& function_words() {
  static const std::unordered_set<std::string_view> words = {
      "a",    "an",   "the",  "and",  "or",    "but",   "if",    "so",
      "of",   "in",   "on",   "at",   "by",    "to",    "for",   "with",
      "from", "as",   "than", "then", "that",  "this",  "these", "those",
      "is",   "are",  "was",  "were", "be",    "been",  "being", "am",
      "do",   "does", "did",  "have", "has",   "had",   "will",  "would",
      "can",  "could", "he",  "she",  "it",    "they",  "we",    "you",
      "i",    "me",   "him",  "her",  "them",  "us",    "my",    "your",
      "his",  "its",  "their", "our", "not",   "no",    "there", "here",
      "what", "when", "who",  "how",  "up",    "down",  "out",   "into"};
  return words;
}

uint32_t bucket_of(std::string_view tagged, uint32_t hash_dim) {
  return static_cast<uint32_t>(fnv1a64(tagged) & (hash_dim - 1));
}

// Hashed gram accumulator. The tag namespaces target grams away from
// context grams of each signed offset.
struct Accumulator {
  std::unordered_map<uint32_t, double> counts;

  void add(uint32_t index, double value) { counts[index] += value; }

  SparseVector finish(uint32_t dim) const {
    SparseVector v;
    v.dim = dim;
    v.entries.reserve(counts.size());
    for (const auto& [i, c] : counts) {
      if (c != 0.0) v.entries.emplace_back(i, c);
    }
    std::sort(v.entries.begin(), v.entries.end());
    return v;
  }
};

void add_grams(Accumulator& acc, std::string_view surface,
               std::string_view tag, const FeatureConfig& cfg) {
  std::string tagged;
  const int len = static_cast<int>(surface.size());
  for (int n = cfg.ngram_min; n <= cfg.ngram_max; ++n) {
    for (int start = 0; start + n <= len; ++start) {
      tagged.assign(tag);
      tagged += '\x1F';
      tagged.append(surface.substr(static_cast<size_t>(start),
                                   static_cast<size_t>(n)));
      acc.add(bucket_of(tagged, cfg.hash_dim), 1.0);
    }
  }
}

}  // namespace

void FeatureConfig::validate() const {
  if (context_window < 0 || context_window > 2) {
    throw ValidationError("context_window must be 0, 1 or 2");
  }
  if (ngram_min < 1 || ngram_max < ngram_min) {
    throw ValidationError("bad n-gram range");
  }
  if (hash_dim < (1u << 10) || !std::has_single_bit(hash_dim)) {
    throw ValidationError("hash_dim must be a power of two >= 1024");
  }
}

std::string FeatureConfig::serialize() const {
  std::string out;
  out += "use_token_char = " + std::to_string(use_token_char ? 1 : 0) + "\n";
  out += "use_context_char = " + std::to_string(use_context_char ? 1 : 0) + "\n";
  out += "use_handcrafted = " + std::to_string(use_handcrafted ? 1 : 0) + "\n";
  out += "context_window = " + std::to_string(context_window) + "\n";
  out += "ngram_min = " + std::to_string(ngram_min) + "\n";
  out += "ngram_max = " + std::to_string(ngram_max) + "\n";
  out += "hash_dim = " + std::to_string(hash_dim) + "\n";
  return out;
}

FeatureConfig FeatureConfig::deserialize(
    const std::vector<std::string>& lines) {
  FeatureConfig cfg;
  for (const std::string& raw : lines) {
    const std::string line = strip(raw);
    if (line.empty() || line[0] == '#') continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("feature config: expected 'key = value', got '" +
                            line + "'");
    }
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key == "use_token_char") cfg.use_token_char = parse_long(value, key) != 0;
    else if (key == "use_context_char") cfg.use_context_char = parse_long(value, key) != 0;
    else if (key == "use_handcrafted") cfg.use_handcrafted = parse_long(value, key) != 0;
    else if (key == "context_window") cfg.context_window = static_cast<int>(parse_long(value, key));
    else if (key == "ngram_min") cfg.ngram_min = static_cast<int>(parse_long(value, key));
    else if (key == "ngram_max") cfg.ngram_max = static_cast<int>(parse_long(value, key));
    else if (key == "hash_dim") cfg.hash_dim = static_cast<uint32_t>(parse_long(value, key));
    else throw ValidationError("feature config: unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

std::string FeatureConfig::fingerprint() const {
  return hex64(fnv1a64(serialize()));
}

std::vector<std::string> char_ngrams(std::string_view surface, int n_min,
                                     int n_max) {
  std::vector<std::string> grams;
  const int len = static_cast<int>(surface.size());
  for (int n = n_min; n <= n_max; ++n) {
    for (int start = 0; start + n <= len; ++start) {
      grams.emplace_back(surface.substr(static_cast<size_t>(start),
                                        static_cast<size_t>(n)));
    }
  }
  return grams;
}

bool is_function_word(std::string_view surface) {
  return function_words().contains(surface);
}

HandcraftedBlock handcrafted_block(std::span<const std::string> utterance,
                                   size_t target_index) {
  const std::string& surface = utterance[target_index];
  HandcraftedBlock block;
  block.token_length = static_cast<double>(surface.size());
  block.is_function_word = is_function_word(surface);
  block.contains_digit = std::any_of(surface.begin(), surface.end(),
                                     [](char c) { return c >= '0' && c <= '9'; });
  if (!surface.empty()) {
    size_t vowels = 0;
    for (const char c : surface) {
      if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') ++vowels;
    }
    block.vowel_ratio = static_cast<double>(vowels) /
                        static_cast<double>(surface.size());
  }
  block.repeats_previous =
      target_index > 0 && utterance[target_index - 1] == surface;
  const size_t n = utterance.size();
  block.utterance_position =
      n > 1 ? static_cast<double>(target_index) / static_cast<double>(n - 1)
            : 0.0;
  block.is_single_char = surface.size() == 1;
  return block;
}

SparseVector featurize(std::span<const std::string> utterance,
                       size_t target_index, const FeatureConfig& config) {
  Accumulator acc;
  if (config.use_token_char) {
    add_grams(acc, utterance[target_index], "t", config);
  }
  if (config.use_context_char && config.context_window > 0) {
    for (int off = -config.context_window; off <= config.context_window;
         ++off) {
      if (off == 0) continue;
      const long pos = static_cast<long>(target_index) + off;
      if (pos < 0 || pos >= static_cast<long>(utterance.size())) continue;
      const std::string tag =
          (off > 0 ? "c+" : "c") + std::to_string(off);
      add_grams(acc, utterance[static_cast<size_t>(pos)], tag, config);
    }
  }
  if (config.use_handcrafted) {
    const HandcraftedBlock b = handcrafted_block(utterance, target_index);
    const uint32_t base = config.hash_dim;
    acc.add(base + 0, b.token_length);
    acc.add(base + 1, b.is_function_word ? 1.0 : 0.0);
    acc.add(base + 2, b.contains_digit ? 1.0 : 0.0);
    acc.add(base + 3, b.vowel_ratio);
    acc.add(base + 4, b.repeats_previous ? 1.0 : 0.0);
    acc.add(base + 5, b.utterance_position);
    acc.add(base + 6, b.is_single_char ? 1.0 : 0.0);
  }
  return acc.finish(config.feature_dim());
}

FeatureMatrix featurize_dataset(const LabeledCorpus& corpus,
                                const TaskView& view,
                                const FeatureConfig& config) {
  config.validate();
  if (view.token_indices.empty()) {
    throw EmptyTask("featurize_dataset: empty task view");
  }

  // Utterance runs over the full corpus; read off each instance's context.
  struct Run {
    size_t begin = 0;
    std::vector<std::string> surfaces;
  };
  std::vector<Run> runs;
  std::vector<size_t> run_of(corpus.tokens.size());
  std::vector<size_t> pos_of(corpus.tokens.size());
  for (size_t i = 0; i < corpus.tokens.size(); ++i) {
    const LabeledToken& t = corpus.tokens[i];
    const bool new_run =
        runs.empty() || corpus.tokens[i - 1].transcript_id != t.transcript_id ||
        corpus.tokens[i - 1].utterance_index != t.utterance_index;
    if (new_run) runs.push_back(Run{i, {}});
    run_of[i] = runs.size() - 1;
    pos_of[i] = runs.back().surfaces.size();
    runs.back().surfaces.push_back(t.surface);
  }

  FeatureMatrix matrix;
  matrix.dim = config.feature_dim();
  matrix.config_fingerprint = config.fingerprint();
  matrix.rows.reserve(view.token_indices.size());
  matrix.targets = view.targets;
  matrix.groups = view.groups;
  for (const size_t token_index : view.token_indices) {
    const Run& run = runs[run_of[token_index]];
    matrix.rows.push_back(
        featurize(run.surfaces, pos_of[token_index], config));
  }
  return matrix;
}

}  // namespace ciu
