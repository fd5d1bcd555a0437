#include "hcoref/mentions.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hcoref/error.hpp"

namespace hcoref {

std::string_view to_string(MentionKind k) {
  switch (k) {
    case MentionKind::Pronoun: return "pronoun";
    case MentionKind::ProperNoun: return "proper";
    case MentionKind::CommonNoun: return "common";
    case MentionKind::NamedEntity: return "named";
    case MentionKind::Demonstrative: return "demonstrative";
  }
  return "common";
}

std::string ner_label(std::string_view column) {
  if (column.starts_with("B-") || column.starts_with("I-")) {
    column.remove_prefix(2);
  }
  if (column.empty() || column == "O" || column == "-") return {};
  return std::string(column);
}

bool is_person_label(std::string_view label) {
  return label == "PER" || label == "PERSON" || label == "PERS";
}

bool is_location_label(std::string_view label) {
  return label == "LOC" || label == "LOCATION";
}

const Token& token_at(const Document& doc, int doc_pos) {
  auto it = std::upper_bound(
      doc.sentences.begin(), doc.sentences.end(), doc_pos,
      [](int pos, const Sentence& s) {
        return pos < s.tokens.front().doc_token_index;
      });
  const Sentence& s = *std::prev(it);
  return s.tokens[doc_pos - s.tokens.front().doc_token_index];
}

int mention_head(const Span& span, const Document& doc, const TagSet& tags,
                 HeadRule rule) {
  const auto& toks = doc.sentences[span.sent].tokens;
  int region_end = span.end;
  for (int i = span.start + 1; i <= span.end; ++i) {
    if (tags.is_preposition(toks[i].pos_coarse)) {
      region_end = i - 1;
      break;
    }
  }
  int head = -1;
  if (rule == HeadRule::RightmostNoun) {
    for (int i = region_end; i >= span.start && head < 0; --i) {
      if (tags.is_noun(toks[i].pos_coarse)) head = i;
    }
    if (head < 0) head = region_end;
  } else {
    for (int i = span.start; i <= region_end && head < 0; ++i) {
      if (tags.is_noun(toks[i].pos_coarse)) head = i;
    }
    if (head < 0) head = span.start;
  }
  return toks[head].doc_token_index;
}

AttributeLattice compute_attributes(const Mention& m, const Document& doc,
                                    const Lexicons& lex) {
  AttributeLattice a;
  const Token& head = token_at(doc, m.head_token);
  if (m.is_pronoun()) {
    if (const auto* e = lex.pronoun(head.form)) a = e->attrs;
    return a;
  }
  a.number.insert(lex.tags.is_plural(head.pos_coarse) ? Number::Plural
                                                      : Number::Singular);
  if (!m.ner.empty()) {
    a.animacy.insert(is_person_label(m.ner) ? Animacy::Animate
                                            : Animacy::Inanimate);
  }
  if (head.animacy != Animacy::Unknown) a.animacy.insert(head.animacy);
  if (lex.title_nouns.contains(head.lemma) ||
      lex.title_nouns.contains(head.form)) {
    a.animacy.insert(Animacy::Animate);
  }
  auto name = lex.name_gazetteer.find(head.form);
  if (name == lex.name_gazetteer.end() && is_person_label(m.ner)) {
    name = lex.name_gazetteer.find(doc.token(m.span.sent, m.span.start).form);
  }
  if (name != lex.name_gazetteer.end()) {
    a.animacy.insert(Animacy::Animate);
    a.gender = name->second;
  }
  return a;
}

namespace {

struct Chunk {
  Span span;
  GrammaticalRole role = GrammaticalRole::None;
};

// Parses B-/I-/O chunk tags. A chunk is a noun phrase when its type starts
// with "NP"; a "-SBJ" or "-OBJ" suffix marks its grammatical role.
std::vector<Chunk> np_chunks(const Sentence& s) {
  std::vector<Chunk> out;
  std::string open_type;
  int open_start = -1;
  auto close = [&](int end) {
    if (open_start >= 0 && open_type.starts_with("NP")) {
      Chunk c;
      c.span = {s.index, open_start, end};
      if (open_type.ends_with("-SBJ")) c.role = GrammaticalRole::Subject;
      if (open_type.ends_with("-OBJ")) c.role = GrammaticalRole::Object;
      out.push_back(c);
    }
    open_start = -1;
    open_type.clear();
  };
  for (int i = 0; i < static_cast<int>(s.tokens.size()); ++i) {
    const std::string& tag = s.tokens[i].phrase_type;
    if (tag.starts_with("B-")) {
      close(i - 1);
      open_start = i;
      open_type = tag.substr(2);
    } else if (tag.starts_with("I-")) {
      if (open_start < 0 || tag.substr(2) != open_type) {
        close(i - 1);
        open_start = i;
        open_type = tag.substr(2);
      }
    } else {
      close(i - 1);
    }
  }
  close(static_cast<int>(s.tokens.size()) - 1);
  return out;
}

std::vector<Span> ner_runs(const Sentence& s) {
  std::vector<Span> out;
  int start = -1;
  std::string label;
  const int n = static_cast<int>(s.tokens.size());
  for (int i = 0; i <= n; ++i) {
    std::string cur = i < n ? ner_label(s.tokens[i].ner) : std::string();
    const bool begins = i < n && s.tokens[i].ner.starts_with("B-");
    if (start >= 0 && (cur != label || begins)) {
      out.push_back({s.index, start, i - 1});
      start = -1;
    }
    if (start < 0 && !cur.empty()) {
      start = i;
      label = cur;
    }
  }
  return out;
}

MentionKind classify(const Span& span, int head_pos, const std::string& ner,
                     const Document& doc, const Lexicons& lex) {
  const auto& first = doc.token(span.sent, span.start);
  if (span.length() == 1 && lex.tags.is_pronoun(first.pos_coarse)) {
    return MentionKind::Pronoun;
  }
  if (span.length() >= 2 && lex.demonstrative_markers.contains(first.form)) {
    return MentionKind::Demonstrative;
  }
  if (lex.tags.is_proper(token_at(doc, head_pos).pos_coarse)) {
    return MentionKind::ProperNoun;
  }
  if (!ner.empty()) return MentionKind::NamedEntity;
  return MentionKind::CommonNoun;
}

GrammaticalRole infer_role(const Mention& m, const std::vector<Mention>& all,
                           const Document& doc, const Lexicons& lex) {
  const auto& toks = doc.sentences[m.span.sent].tokens;
  const int n = static_cast<int>(toks.size());
  // Any mention containing m sorts before it within the same sentence.
  for (int i = m.id - 1; i >= 0 && all[i].span.sent == m.span.sent; --i) {
    if (all[i].span.contains(m.span)) return GrammaticalRole::None;
  }
  if (m.span.end + 1 < n &&
      lex.object_markers.contains(toks[m.span.end + 1].form)) {
    return GrammaticalRole::Object;
  }
  if (m.span.start > 0 && lex.tags.is_verb(toks[m.span.start - 1].pos_coarse)) {
    return GrammaticalRole::Object;
  }
  if (m.span.end + 1 < n && lex.tags.is_verb(toks[m.span.end + 1].pos_coarse)) {
    return GrammaticalRole::Subject;
  }
  return GrammaticalRole::None;
}

}  // namespace

std::vector<Mention> detect_mentions(const Document& doc, const Lexicons& lex,
                                     const MentionOptions& opts) {
  std::map<Span, GrammaticalRole> spans;
  if (opts.mode == DetectionMode::FromGold) {
    for (const auto& chain : doc.gold_chains) {
      for (const auto& sp : chain.spans) spans.emplace(sp, GrammaticalRole::None);
    }
    // Chunk roles still apply when the annotation is present.
    for (const auto& s : doc.sentences) {
      for (const auto& c : np_chunks(s)) {
        auto it = spans.find(c.span);
        if (it != spans.end()) it->second = c.role;
      }
    }
  } else {
    bool any_chunk = false;
    for (const auto& s : doc.sentences) {
      for (const auto& t : s.tokens) any_chunk |= !t.phrase_type.empty();
    }
    if (!any_chunk && doc.token_count() > 0) {
      throw Error(ErrorCode::MissingAnnotations,
                  doc.doc_id + ": phrase-type column is empty");
    }
    for (const auto& s : doc.sentences) {
      for (const auto& c : np_chunks(s)) spans[c.span] = c.role;
      for (const auto& r : ner_runs(s)) spans.emplace(r, GrammaticalRole::None);
      for (const auto& t : s.tokens) {
        if (lex.tags.is_pronoun(t.pos_coarse)) {
          spans.emplace(Span{s.index, t.token_index, t.token_index},
                        GrammaticalRole::None);
        }
      }
    }
  }

  std::vector<std::pair<Span, GrammaticalRole>> ordered(spans.begin(),
                                                        spans.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    const Span& x = a.first;
    const Span& y = b.first;
    if (x.sent != y.sent) return x.sent < y.sent;
    if (x.start != y.start) return x.start < y.start;
    return x.end > y.end;
  });

  std::vector<Mention> mentions;
  mentions.reserve(ordered.size());
  for (const auto& [span, role] : ordered) {
    Mention m;
    m.id = static_cast<int>(mentions.size());
    m.span = span;
    m.first_pos = doc.doc_position(span.sent, span.start);
    m.last_pos = doc.doc_position(span.sent, span.end);
    m.head_token = mention_head(span, doc, lex.tags, opts.head_rule);
    m.ner = ner_label(token_at(doc, m.head_token).ner);
    m.kind = classify(span, m.head_token, m.ner, doc, lex);
    if (m.is_pronoun()) {
      const auto* e = lex.pronoun(doc.token(span.sent, span.start).form);
      m.pronoun_class = e ? e->pronoun_class : PronounClass::Personal;
    }
    m.role = role;
    mentions.push_back(std::move(m));
  }
  for (auto& m : mentions) {
    m.attrs = compute_attributes(m, doc, lex);
    if (m.role == GrammaticalRole::None) {
      m.role = infer_role(m, mentions, doc, lex);
    }
  }
  return mentions;
}

MentionSet::MentionSet(const Document& d, const Lexicons& l,
                       std::vector<Mention> ms)
    : doc(&d), lex(&l), mentions(std::move(ms)) {
  text.reserve(mentions.size());
  head_form.reserve(mentions.size());
  for (const auto& m : mentions) {
    text.push_back(d.text(m.span));
    head_form.push_back(token_at(d, m.head_token).form);
  }
}

}  // namespace hcoref
