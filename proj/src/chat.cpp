#include "ciu/chat.hpp"

#include <algorithm>

#include "ciu/errors.hpp"
#include "ciu/textio.hpp"

namespace ciu {

namespace {

bool is_ascii_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

// Non-ASCII bytes are treated as letters so UTF-8 content survives.
bool is_word_char(char c) {
  return is_ascii_alnum(c) || static_cast<unsigned char>(c) >= 0x80;
}

// Drops "[...]" code spans (error codes, retracing markers, comments)
// including their contents, and CHAT timing bullets (0x15 ... 0x15).
std::string strip_code_spans(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  int bracket_depth = 0;
  bool in_bullet = false;
  for (const char c : text) {
    if (in_bullet) {
      if (c == '\x15') in_bullet = false;
      continue;
    }
    if (c == '\x15') {
      in_bullet = true;
      continue;
    }
    if (c == '[') {
      ++bracket_depth;
      continue;
    }
    if (c == ']') {
      if (bracket_depth > 0) --bracket_depth;
      continue;
    }
    if (bracket_depth == 0) {
      out.push_back(c);
    }
  }
  return out;
}

// One whitespace-delimited chunk -> cleaned surface, or "" to drop.
std::string clean_token(std::string_view chunk) {
  if (chunk.empty()) return {};
  // Fillers, fragments and events transcribed with a "&" prefix.
  if (chunk.front() == '&') return {};
  std::string t;
  t.reserve(chunk.size());
  for (const char c : chunk) {
    if (c == '(' || c == ')' || c == '<' || c == '>') continue;  // omission/retrace delimiters
    if (c == '@') break;  // "form@marker" codes: keep the form only
    t.push_back(c);
  }
  t = lower_ascii(t);
  // Strip surrounding punctuation; internal apostrophes/hyphens survive.
  size_t b = 0;
  size_t e = t.size();
  while (b < e && !is_word_char(t[b])) ++b;
  while (e > b && !is_word_char(t[e - 1])) --e;
  return t.substr(b, e - b);
}

}  // namespace

std::vector<std::string> clean_utterance(std::string_view raw_text,
                                         const CleanOptions& opts) {
  const std::string no_codes = strip_code_spans(raw_text);
  std::vector<std::string> tokens;
  size_t i = 0;
  const size_t n = no_codes.size();
  while (i < n) {
    while (i < n && std::isspace(static_cast<unsigned char>(no_codes[i]))) ++i;
    size_t j = i;
    while (j < n && !std::isspace(static_cast<unsigned char>(no_codes[j]))) ++j;
    if (j > i) {
      std::string tok = clean_token(std::string_view(no_codes).substr(i, j - i));
      if (!tok.empty() && tok != "xxx" &&
          std::find(opts.fillers.begin(), opts.fillers.end(), tok) ==
              opts.fillers.end()) {
        tokens.push_back(std::move(tok));
      }
    }
    i = j;
  }
  return tokens;
}

std::string path_stem(std::string_view path) {
  const size_t slash = path.find_last_of("/\\");
  std::string_view base =
      (slash == std::string_view::npos) ? path : path.substr(slash + 1);
  const size_t dot = base.find_last_of('.');
  if (dot != std::string_view::npos && dot > 0) base = base.substr(0, dot);
  return std::string(base);
}

Transcript parse_chat(const RawChatFile& file, const CleanOptions& opts) {
  // Join continuation lines to the tier above.
  std::vector<std::string> logical;
  for (size_t li = 0; li < file.lines.size(); ++li) {
    std::string line = file.lines[li];
    if (li == 0 && line.rfind("\xEF\xBB\xBF", 0) == 0) line = line.substr(3);
    if (!line.empty() && (line.front() == '\t' || line.front() == ' ')) {
      if (logical.empty()) {
        throw MalformedTier(file.path + ": continuation line " +
                            std::to_string(li + 1) + " has no tier to join");
      }
      logical.back() += " " + strip(line);
    } else {
      logical.push_back(std::move(line));
    }
  }

  Transcript out;
  out.transcript_id = path_stem(file.path);
  for (const std::string& line : logical) {
    if (line.empty()) continue;
    const char head = line.front();
    if (head == '@' || head == '%') continue;
    if (head != '*') continue;  // stray non-tier text carries no speech
    const size_t colon = line.find(':');
    if (colon == std::string::npos) {
      throw MalformedTier(file.path + ": tier line without colon: " + line);
    }
    const std::string speaker = line.substr(1, colon - 1);
    if (speaker.empty() ||
        speaker.find_first_of(" \t") != std::string::npos) {
      throw MalformedTier(file.path + ": bad speaker code in: " + line);
    }
    if (speaker != "PAR") continue;
    Utterance utt;
    utt.index = static_cast<int>(out.utterances.size());
    utt.raw_text = strip(line.substr(colon + 1));
    utt.tokens = clean_utterance(utt.raw_text, opts);
    out.utterances.push_back(std::move(utt));
  }
  if (out.utterances.empty()) {
    throw EmptyTranscript(file.path + ": no *PAR: tiers found");
  }
  return out;
}

RawChatFile read_chat_file(const std::string& path) {
  return RawChatFile{path, read_lines(path)};
}

std::vector<TokenRow> tokenize_corpus(
    const std::vector<Transcript>& transcripts) {
  std::vector<TokenRow> rows;
  for (const Transcript& t : transcripts) {
    for (const Utterance& u : t.utterances) {
      for (size_t k = 0; k < u.tokens.size(); ++k) {
        rows.push_back(TokenRow{t.transcript_id, u.index,
                                static_cast<int>(k), u.tokens[k]});
      }
    }
  }
  return rows;
}

std::string token_table_tsv(const std::vector<TokenRow>& rows) {
  std::string out = "transcript_id\tutterance_index\ttoken_index\tsurface\n";
  for (const TokenRow& r : rows) {
    out += r.transcript_id;
    out += '\t';
    out += std::to_string(r.utterance_index);
    out += '\t';
    out += std::to_string(r.token_index);
    out += '\t';
    out += r.surface;
    out += '\n';
  }
  return out;
}

std::vector<TokenRow> parse_token_table_tsv(
    const std::vector<std::string>& lines) {
  if (lines.empty() ||
      lines[0] != "transcript_id\tutterance_index\ttoken_index\tsurface") {
    throw ValidationError("token table: missing or wrong header row");
  }
  std::vector<TokenRow> rows;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split(lines[i], '\t');
    if (f.size() != 4) {
      throw ValidationError("token table line " + std::to_string(i + 1) +
                            ": expected 4 fields, got " +
                            std::to_string(f.size()));
    }
    rows.push_back(TokenRow{f[0],
                            static_cast<int>(parse_long(f[1], "utterance_index")),
                            static_cast<int>(parse_long(f[2], "token_index")),
                            f[3]});
  }
  return rows;
}

}  // namespace ciu
