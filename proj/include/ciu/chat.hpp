#pragma once

#include <string>
#include <vector>

namespace ciu {

// Raw CHAT (.cha) file: text lines in source order.
struct RawChatFile {
  std::string path;
  std::vector<std::string> lines;
};

struct Utterance {
  int index = 0;  // 0-based ordinal among participant tiers
  std::string raw_text;
  std::vector<std::string> tokens;
};

// Participant-only view of one transcript.
struct Transcript {
  std::string transcript_id;
  std::vector<Utterance> utterances;
};

struct TokenRow {
  std::string transcript_id;
  int utterance_index = 0;
  int token_index = 0;
  std::string surface;
};

struct CleanOptions {
  // Filler forms dropped during cleaning, matched after lowercasing.
  // "&"-prefixed CHAT forms (fillers, fragments, events) are always dropped.
  std::vector<std::string> fillers = {"uh", "um", "er", "eh", "hm", "mhm"};
};

// Cleans one participant tier into lowercase surface tokens: drops fillers,
// "xxx", "&"-prefixed forms, bracketed code spans, punctuation and timing
// cues; keeps internal apostrophes and hyphenated compounds.
std::vector<std::string> clean_utterance(std::string_view raw_text,
                                         const CleanOptions& opts = {});

// Participant ("*PAR:") tiers only; "@" headers, "%" tiers and other
// speakers are dropped. Continuation lines (leading tab) join the tier
// above before filtering. Throws MalformedTier / EmptyTranscript.
Transcript parse_chat(const RawChatFile& file, const CleanOptions& opts = {});

RawChatFile read_chat_file(const std::string& path);

// Flat token table in corpus order.
std::vector<TokenRow> tokenize_corpus(const std::vector<Transcript>& transcripts);

// Tab-separated, LF line endings, header row.
std::string token_table_tsv(const std::vector<TokenRow>& rows);
std::vector<TokenRow> parse_token_table_tsv(const std::vector<std::string>& lines);

// File stem: basename without the final extension.
std::string path_stem(std::string_view path);

}  // namespace ciu
