#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "hcoref/attributes.hpp"

namespace hcoref {

enum class PronounClass { Personal, Demonstrative, Reflexive };

std::string_view to_string(PronounClass c);

std::string ascii_lower(std::string_view s);

struct PronounEntry {
  PronounClass pronoun_class = PronounClass::Personal;
  AttributeLattice attrs;

  bool operator==(const PronounEntry&) const = default;
};

// Tag inventories for the POS column. The defaults cover the Penn-style tags
// used by the bundled English fixtures plus the coarse Persian tags (N, Ne,
// PRO, P, V ...).
struct TagSet {
  std::set<std::string> pronoun{"PRP", "PRO", "PRON"};
  std::set<std::string> noun{"N", "Ne", "NN", "NNS", "NNP", "NNPS", "NPR", "NPL"};
  std::set<std::string> proper_noun{"NNP", "NNPS", "NPR"};
  std::set<std::string> plural{"NNS", "NNPS", "NPL"};
  std::set<std::string> preposition{"IN", "P", "PREP", "ADP"};
  std::set<std::string> punctuation{".", ",", ":", "``", "''", "PUNC", "PUNCT"};
  std::string verb_prefix = "V";

  bool is_pronoun(std::string_view t) const { return pronoun.contains(std::string(t)); }
  bool is_noun(std::string_view t) const { return noun.contains(std::string(t)); }
  bool is_proper(std::string_view t) const { return proper_noun.contains(std::string(t)); }
  bool is_plural(std::string_view t) const { return plural.contains(std::string(t)); }
  bool is_preposition(std::string_view t) const { return preposition.contains(std::string(t)); }
  bool is_punctuation(std::string_view t) const { return punctuation.contains(std::string(t)); }
  bool is_verb(std::string_view t) const { return !verb_prefix.empty() && t.starts_with(verb_prefix); }

  bool operator==(const TagSet&) const = default;
};

// Static word lists consulted by mention detection, attribute assignment and
// the rule sieves.
struct Lexicons {
  std::map<std::string, PronounEntry> pronoun_table;
  std::set<std::string> quote_verbs;            // lemmas
  std::set<std::string> title_nouns;            // lemmas
  std::map<std::string, ValueSet<Gender>> name_gazetteer;
  std::set<std::string> demonstrative_markers;  // forms
  std::set<std::string> speech_pronouns;        // forms
  std::set<std::string> object_markers;         // forms following an object
  std::set<std::string> quote_marks{"\"", "\xe2\x80\x9c", "\xe2\x80\x9d",
                                    "\xc2\xab", "\xc2\xbb", "``", "''"};
  TagSet tags;

  // Looks up `form`, then its ASCII-lowercased spelling.
  const PronounEntry* pronoun(std::string_view form) const;
  bool is_speech_pronoun(std::string_view form) const;

  bool operator==(const Lexicons&) const = default;

  // Miniature English lexicon used by the fixtures and the synthetic corpus.
  static Lexicons english_default();

  // Loads a lexicon directory: pronouns.tsv, names.tsv, tags.tsv,
  // quote_verbs.txt, titles.txt, demonstratives.txt, speech_pronouns.txt,
  // object_markers.txt and quote_marks.txt. Every line is
  // `form<TAB>field=value;field=value`; list files only use the form.
  static Lexicons load_directory(const std::filesystem::path& dir);

  // Writes the files `load_directory` reads.
  void save_directory(const std::filesystem::path& dir) const;
};

}  // namespace hcoref
