#pragma once

// Hand-built documents shared by the unit and acceptance tests. Tokens are
// written as "form/POS/NER/CHUNK", with an optional fifth field for animacy.

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "hcoref/corpus.hpp"
#include "hcoref/mentions.hpp"

namespace fixtures {

struct GoldSpan {
  int chain;
  int sent;
  int start;
  int end;
};

inline hcoref::Document build(const std::string& id,
                              const std::vector<std::string>& sentences,
                              const std::vector<GoldSpan>& gold = {}) {
  hcoref::Document d;
  d.doc_id = id;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    hcoref::Sentence sent;
    sent.index = static_cast<int>(s);
    std::istringstream words(sentences[s]);
    for (std::string w; words >> w;) {
      std::vector<std::string> f;
      std::istringstream fields(w);
      for (std::string x; std::getline(fields, x, '/');) f.push_back(x);
      hcoref::Token t;
      t.form = f[0];
      t.lemma = f[0];
      for (auto& c : t.lemma) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      t.original = f[0];
      t.pos_coarse = f.size() > 1 ? f[1] : "NN";
      t.pos_fine = t.pos_coarse;
      t.ner = f.size() > 2 ? f[2] : "O";
      t.ner_coarse = t.ner;
      t.phrase_type = f.size() > 3 ? f[3] : "O";
      if (f.size() > 4) t.animacy = hcoref::parse_animacy(f[4]);
      sent.tokens.push_back(std::move(t));
    }
    d.sentences.push_back(std::move(sent));
  }
  for (const auto& g : gold) {
    hcoref::GoldChain* chain = nullptr;
    for (auto& c : d.gold_chains) {
      if (c.chain_id == g.chain) chain = &c;
    }
    if (!chain) {
      d.gold_chains.push_back({g.chain, {}});
      chain = &d.gold_chains.back();
    }
    chain->spans.push_back({g.sent, g.start, g.end});
  }
  hcoref::reindex(d);
  hcoref::assign_chain_tags(d);
  return d;
}

// Mention id with the given text (first occurrence), or -1.
inline int find_mention(const hcoref::MentionSet& ms, const std::string& text,
                        int from = 0) {
  for (int i = from; i < ms.size(); ++i) {
    if (ms.text[i] == text) return i;
  }
  return -1;
}

// Sieve examples rendered in English with head-final noun phrases.
inline hcoref::Document strict_head_doc() {
  return build("strict_head", {
      "The/DT/O/B-NP Tehran/NNP/B-ORG/I-NP High/NNP/I-ORG/I-NP Court/NNP/I-ORG/I-NP "
      "issued/VBD/O/B-VP a/DT/O/B-NP ruling/NN/O/I-NP ././O/O",
      "The/DT/O/B-NP Tehran/NNP/B-ORG/I-NP Court/NNP/I-ORG/I-NP "
      "rejected/VBD/O/B-VP the/DT/O/B-NP appeal/NN/O/I-NP ././O/O",
  });
}

inline hcoref::Document proper_name_doc() {
  return build("proper_name", {
      "David/NNP/B-PER/B-NP Beckham/NNP/I-PER/I-NP visited/VBD/O/B-VP "
      "the/DT/O/B-NP stadium/NN/O/I-NP ././O/O",
      "Beckham/NNP/B-PER/B-NP thanked/VBD/O/B-VP the/DT/O/B-NP fans/NNS/O/I-NP ././O/O",
  });
}

inline hcoref::Document location_doc() {
  return build("location", {
      "Tehran/NNP/B-LOC/B-NP hosted/VBD/O/B-VP the/DT/O/B-NP games/NNS/O/I-NP ././O/O",
      "Visitors/NNS/O/B-NP praised/VBD/O/B-VP Tehran/NNP/B-LOC/B-NP "
      "city/NN/I-LOC/I-NP ././O/O",
  });
}

inline hcoref::Document title_doc() {
  return build("title", {
      "The/DT/O/B-NP President/NN/O/I-NP of/IN/O/I-NP France/NNP/B-LOC/I-NP ,/,/O/O "
      "Emmanuel/NNP/B-PER/B-NP Macron/NNP/I-PER/I-NP ,/,/O/O arrived/VBD/O/B-VP "
      "today/NN/O/B-NP ././O/O",
  });
}

inline hcoref::Document demonstrative_doc() {
  return build("demonstrative", {
      "The/DT/O/B-NP flower/NN/O/I-NP exhibition/NN/O/I-NP opened/VBD/O/B-VP ././O/O",
      "Many/JJ/O/B-NP people/NNS/O/I-NP visited/VBD/O/B-VP this/DT/O/B-NP "
      "exhibition/NN/O/I-NP ././O/O",
  });
}

inline hcoref::Document negative_head_doc() {
  return build("negative_head", {
      "Tehran/NNP/B-ORG/B-NP University/NNP/I-ORG/I-NP signed/VBD/O/B-VP "
      "an/DT/O/B-NP agreement/NN/O/I-NP ././O/O",
      "Washington/NNP/B-ORG/B-NP University/NNP/I-ORG/I-NP welcomed/VBD/O/B-VP "
      "the/DT/O/B-NP news/NN/O/I-NP ././O/O",
  });
}

inline hcoref::Document students_doc() {
  return build("students", {
      "A/DT/O/B-NP group/NN/O/I-NP of/IN/O/I-NP students/NNS/O/I-NP "
      "arrived/VBD/O/B-VP ././O/O",
      "Five/CD/O/B-NP students/NNS/O/I-NP spoke/VBD/O/B-VP ././O/O",
  });
}

}  // namespace fixtures
