#include "ciu/labels.hpp"

#include <algorithm>
#include <tuple>

#include "ciu/errors.hpp"
#include "ciu/textio.hpp"

namespace ciu {

namespace {

constexpr std::string_view kHeader =
    "transcript_id\tutterance_index\ttoken_index\tsurface\tword\tciu";

auto key_of(const LabeledToken& t) {
  return std::tie(t.transcript_id, t.utterance_index, t.token_index);
}

std::string key_string(std::string_view tid, int ui, int ti) {
  return std::string(tid) + ":" + std::to_string(ui) + ":" + std::to_string(ti);
}

int parse_flag(std::string_view field, std::string_view what,
               std::string_view key) {
  if (field == "0") return 0;
  if (field == "1") return 1;
  throw NonBinaryFlag("label row " + std::string(key) + ": " +
                      std::string(what) + " must be 0 or 1, got '" +
                      std::string(field) + "'");
}

std::vector<std::string> distinct_ids(const std::vector<LabeledToken>& tokens) {
  std::vector<std::string> ids;
  for (const auto& t : tokens) {
    if (ids.empty() || ids.back() != t.transcript_id)
      ids.push_back(t.transcript_id);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace

LabeledCorpus parse_labels(const std::vector<std::string>& lines) {
  if (lines.empty() || lines[0] != kHeader) {
    throw ValidationError("label file: missing or wrong header row");
  }
  LabeledCorpus corpus;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split(lines[i], '\t');
    if (f.size() != 6) {
      throw ValidationError("label file line " + std::to_string(i + 1) +
                            ": expected 6 fields, got " +
                            std::to_string(f.size()));
    }
    LabeledToken t;
    t.transcript_id = f[0];
    t.utterance_index = static_cast<int>(parse_long(f[1], "utterance_index"));
    t.token_index = static_cast<int>(parse_long(f[2], "token_index"));
    t.surface = f[3];
    const std::string key =
        key_string(t.transcript_id, t.utterance_index, t.token_index);
    t.word = parse_flag(f[4], "word", key);
    t.ciu = parse_flag(f[5], "ciu", key);
    if (t.ciu == 1 && t.word == 0) {
      throw LabelConstraintViolation("label row " + key +
                                     ": ciu=1 requires word=1");
    }
    corpus.tokens.push_back(std::move(t));
  }
  std::sort(corpus.tokens.begin(), corpus.tokens.end(),
            [](const LabeledToken& a, const LabeledToken& b) {
              return key_of(a) < key_of(b);
            });
  for (size_t i = 1; i < corpus.tokens.size(); ++i) {
    if (key_of(corpus.tokens[i - 1]) == key_of(corpus.tokens[i])) {
      const auto& t = corpus.tokens[i];
      throw DuplicateKey(
          "duplicate label key " +
          key_string(t.transcript_id, t.utterance_index, t.token_index));
    }
  }
  corpus.transcript_ids = distinct_ids(corpus.tokens);
  return corpus;
}

LabeledCorpus load_labels(const std::string& path) {
  return parse_labels(read_lines(path));
}

std::string labels_tsv(const LabeledCorpus& corpus) {
  std::string out(kHeader);
  out += '\n';
  for (const auto& t : corpus.tokens) {
    out += t.transcript_id;
    out += '\t';
    out += std::to_string(t.utterance_index);
    out += '\t';
    out += std::to_string(t.token_index);
    out += '\t';
    out += t.surface;
    out += '\t';
    out += std::to_string(t.word);
    out += '\t';
    out += std::to_string(t.ciu);
    out += '\n';
  }
  return out;
}

void save_labels(const std::string& path, const LabeledCorpus& corpus) {
  write_file(path, labels_tsv(corpus));
}

LabeledCorpus join_tokens_labels(const std::vector<TokenRow>& token_table,
                                 const LabeledCorpus& labels) {
  LabeledCorpus out;
  size_t li = 0;
  for (const TokenRow& row : token_table) {
    const auto row_key = std::tie(row.transcript_id, row.utterance_index,
                                  row.token_index);
    while (li < labels.tokens.size() && key_of(labels.tokens[li]) < row_key)
      ++li;
    if (li >= labels.tokens.size() || key_of(labels.tokens[li]) != row_key) {
      throw MissingLabel("no label for token " +
                         key_string(row.transcript_id, row.utterance_index,
                                    row.token_index));
    }
    const LabeledToken& lab = labels.tokens[li];
    if (lab.surface != row.surface) {
      throw SurfaceMismatch(
          "surface mismatch at " +
          key_string(row.transcript_id, row.utterance_index, row.token_index) +
          ": token table has '" + row.surface + "', labels have '" +
          lab.surface + "'");
    }
    out.tokens.push_back(lab);
  }
  out.transcript_ids = distinct_ids(out.tokens);
  return out;
}

std::string_view task_name(Task t) {
  return t == Task::kWord ? "WORD" : "CIU";
}

Task task_from_name(std::string_view name) {
  if (name == "WORD") return Task::kWord;
  if (name == "CIU") return Task::kCiu;
  throw ValidationError("unknown task '" + std::string(name) +
                        "' (expected WORD or CIU)");
}

TaskView task_view(const LabeledCorpus& corpus, Task task) {
  TaskView view;
  view.task = task;
  for (size_t i = 0; i < corpus.tokens.size(); ++i) {
    const LabeledToken& t = corpus.tokens[i];
    if (task == Task::kCiu && t.word != 1) continue;
    view.token_indices.push_back(i);
    view.targets.push_back(task == Task::kWord ? t.word : t.ciu);
    view.groups.push_back(t.transcript_id);
  }
  if (view.token_indices.empty()) {
    throw EmptyTask(std::string("no instances for task ") +
                    std::string(task_name(task)));
  }
  return view;
}

}  // namespace ciu
