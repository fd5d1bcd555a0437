#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hcoref/attributes.hpp"
#include "hcoref/corpus.hpp"
#include "hcoref/lexicon.hpp"

namespace hcoref {

enum class MentionKind { Pronoun, ProperNoun, CommonNoun, NamedEntity, Demonstrative };
enum class GrammaticalRole { None, Subject, Object };
enum class DetectionMode { FromAnnotations, FromGold };

// Persian noun phrases are mostly head-initial; the English fixtures are
// head-final. The rule is therefore configurable.
enum class HeadRule { RightmostNoun, LeftmostNoun };

std::string_view to_string(MentionKind k);

struct Mention {
  int id = 0;  // index in the document's ordered mention list
  Span span;
  int first_pos = 0;  // document positions of the first and last token
  int last_pos = 0;
  int head_token = 0;  // document position
  MentionKind kind = MentionKind::CommonNoun;
  std::optional<PronounClass> pronoun_class;
  AttributeLattice attrs;
  std::string ner;  // label without B-/I- prefix; empty when untagged
  GrammaticalRole role = GrammaticalRole::None;

  bool is_pronoun() const { return kind == MentionKind::Pronoun; }
};

struct MentionOptions {
  DetectionMode mode = DetectionMode::FromAnnotations;
  HeadRule head_rule = HeadRule::RightmostNoun;
};

// Mentions sorted by (sentence, start, longer span first). Ids are the
// positions in the returned vector.
std::vector<Mention> detect_mentions(const Document& doc, const Lexicons& lex,
                                     const MentionOptions& opts = {});

// Document position of the syntactic head: the rightmost (or leftmost) noun
// before any prepositional modifier inside the span.
int mention_head(const Span& span, const Document& doc, const TagSet& tags,
                 HeadRule rule = HeadRule::RightmostNoun);

AttributeLattice compute_attributes(const Mention& m, const Document& doc,
                                    const Lexicons& lex);

// Normalized NER label ("B-LOC" -> "LOC"); empty for "O" and unannotated.
std::string ner_label(std::string_view column);
bool is_person_label(std::string_view label);
bool is_location_label(std::string_view label);

// Token at a document position.
const Token& token_at(const Document& doc, int doc_pos);

// A document's mentions together with the strings the sieves compare. The
// document and lexicons must outlive the set.
struct MentionSet {
  const Document* doc = nullptr;
  const Lexicons* lex = nullptr;
  std::vector<Mention> mentions;
  std::vector<std::string> text;       // space-joined token forms
  std::vector<std::string> head_form;

  MentionSet() = default;
  MentionSet(const Document& d, const Lexicons& l, std::vector<Mention> ms);

  int size() const { return static_cast<int>(mentions.size()); }
  const Mention& operator[](int id) const { return mentions[id]; }
};

}  // namespace hcoref
