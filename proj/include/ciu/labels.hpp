#pragma once

#include <string>
#include <vector>

#include "ciu/chat.hpp"

namespace ciu {

struct LabeledToken {
  std::string transcript_id;
  int utterance_index = 0;
  int token_index = 0;
  std::string surface;
  int word = 0;  // 0/1
  int ciu = 0;   // 0/1; ciu=1 requires word=1
};

// Gold-labeled corpus, sorted by (transcript_id, utterance_index,
// token_index) which matches the ingest token-table ordering.
struct LabeledCorpus {
  std::vector<LabeledToken> tokens;
  std::vector<std::string> transcript_ids;  // distinct, sorted
};

// Tab-separated, UTF-8, LF endings, header:
// transcript_id  utterance_index  token_index  surface  word  ciu
LabeledCorpus parse_labels(const std::vector<std::string>& lines);
LabeledCorpus load_labels(const std::string& path);
std::string labels_tsv(const LabeledCorpus& corpus);
void save_labels(const std::string& path, const LabeledCorpus& corpus);

// One LabeledToken per token-table row; surfaces must agree.
// Throws MissingLabel / SurfaceMismatch.
LabeledCorpus join_tokens_labels(const std::vector<TokenRow>& token_table,
                                 const LabeledCorpus& labels);

enum class Task { kWord, kCiu };
std::string_view task_name(Task t);
Task task_from_name(std::string_view name);

// Instances of one classification task. WORD: every token, target = word
// flag. CIU: gold-word tokens only, target = ciu flag.
struct TaskView {
  Task task = Task::kWord;
  std::vector<size_t> token_indices;  // into LabeledCorpus::tokens
  std::vector<int> targets;
  std::vector<std::string> groups;  // transcript_id per instance
};

TaskView task_view(const LabeledCorpus& corpus, Task task);

}  // namespace ciu
