#pragma once

#include <compare>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hcoref {

enum class Animacy { Animate, Inanimate, Unknown };

// A token's membership in one gold mention. A token may belong to several
// mentions (nested named entities), so tokens carry a sorted list of tags.
struct CorefTag {
  int chain_id = 0;
  int mention_index = 0;  // index of the mention within its chain

  auto operator<=>(const CorefTag&) const = default;
};

// One line of the 13-column corpus format. Annotation columns that hold the
// null marker "-" are stored as empty strings.
struct Token {
  std::string form;
  std::string lemma;     // "root of the token" column, kept verbatim
  std::string original;  // "original token" column, kept verbatim
  std::string pos_coarse;
  std::string pos_fine;
  std::string ner;         // 13-tag set
  std::string ner_coarse;  // 3-tag set
  Animacy animacy = Animacy::Unknown;
  std::string phrase_type;
  int sent_index = 0;
  int token_index = 0;
  int doc_token_index = 0;
  std::vector<CorefTag> coref;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  int index = 0;
  std::vector<Token> tokens;

  bool operator==(const Sentence&) const = default;
};

// Token span inside one sentence; `end` is inclusive.
struct Span {
  int sent = 0;
  int start = 0;
  int end = 0;

  int length() const { return end - start + 1; }
  bool contains(const Span& o) const {
    return sent == o.sent && start <= o.start && o.end <= end;
  }
  bool overlaps(const Span& o) const {
    return sent == o.sent && start <= o.end && o.start <= end;
  }

  auto operator<=>(const Span&) const = default;
};

struct GoldChain {
  int chain_id = 0;
  std::vector<Span> spans;  // sorted by document position

  bool operator==(const GoldChain&) const = default;
};

struct Document {
  std::string doc_id;
  std::vector<Sentence> sentences;
  std::vector<GoldChain> gold_chains;  // sorted by chain_id

  bool operator==(const Document&) const = default;

  int token_count() const;
  const Token& token(int sent, int index) const {
    return sentences[sent].tokens[index];
  }
  int doc_position(int sent, int index) const {
    return sentences[sent].tokens[index].doc_token_index;
  }
  // Space-joined token forms of a span.
  std::string text(const Span& span) const;
};

// Parses the column format. Documents are delimited by "#begin document" /
// "#end document" lines or by a change of the document-name column; blank
// lines separate sentences. Lines with more than 13 columns are accepted and a
// warning is appended to `warnings` when it is non-null.
std::vector<Document> parse_conll(std::string_view text,
                                  std::vector<std::string>* warnings = nullptr);

std::string write_conll(std::span<const Document> docs);

// File wrappers. Throw Io when the file cannot be read or written.
std::vector<Document> load_conll(const std::filesystem::path& path,
                                 std::vector<std::string>* warnings = nullptr);
void save_conll(const std::filesystem::path& path, std::span<const Document> docs);

// Recomputes sent_index, token_index and doc_token_index from the layout.
void reindex(Document& doc);

// Sorts chains and spans, then rewrites every token's coref tags from
// `gold_chains` (mention_index = rank of the span within its chain).
void assign_chain_tags(Document& doc);

// Throws Error(InvalidDocument) when a type invariant is violated.
void validate(const Document& doc);

Animacy parse_animacy(std::string_view column);
std::string_view animacy_column(Animacy a);

}  // namespace hcoref
