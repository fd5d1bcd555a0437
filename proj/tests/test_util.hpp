#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hcoref/corpus.hpp"
#include "hcoref/error.hpp"
#include "hcoref/rng.hpp"

namespace testutil {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot open " << path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string data_path(const std::string& name) {
  return std::string(HCOREF_TEST_DATA) + "/" + name;
}

template <typename F>
hcoref::ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const hcoref::Error& e) {
    return e.code();
  }
  FAIL("expected hcoref::Error");
  return hcoref::ErrorCode::Io;
}

// One 13-column line; `chain` is "-" or e.g. "0|1" with matching `index`.
inline std::string conll_line(const std::string& doc, int sent,
                              const std::string& form, const std::string& pos,
                              const std::string& index = "-",
                              const std::string& chain = "-",
                              const std::string& phrase = "O",
                              const std::string& ner = "O") {
  std::string out = doc + "\t" + std::to_string(sent) + "\t" + form + "\t" +
                    pos + "\t" + ner + "\t" + form + "\t" + form + "\t" + ner +
                    "\t" + index + "\t" + chain + "\t-\t" + phrase + "\t" + pos;
  return out + "\n";
}

// Random invariant-satisfying document, built without the library's
// generator: random tokens and random gold chains (overlap allowed).
inline hcoref::Document random_document(hcoref::Rng& rng, const std::string& id) {
  static const std::vector<std::string> forms = {
      "a", "b", "Tehran", "he", "she", "city", "the", "said", "court", "x-y"};
  static const std::vector<std::string> tags = {"NN", "NNP", "PRP", "DT", "VBD", "."};
  static const std::vector<std::string> ners = {"", "O", "B-PER", "I-PER", "B-LOC"};
  static const std::vector<std::string> phrases = {"", "O", "B-NP", "I-NP", "B-VP"};
  hcoref::Document d;
  d.doc_id = id;
  const int n_sent = 1 + static_cast<int>(rng.index(5));
  for (int s = 0; s < n_sent; ++s) {
    hcoref::Sentence sent;
    sent.index = s;
    const int len = 1 + static_cast<int>(rng.index(8));
    for (int i = 0; i < len; ++i) {
      hcoref::Token t;
      t.form = rng.pick(forms);
      t.lemma = rng.pick(forms);
      t.original = t.form;
      t.pos_coarse = rng.pick(tags);
      t.pos_fine = rng.bernoulli(0.5) ? t.pos_coarse + "_f" : std::string();
      t.ner = rng.pick(ners);
      t.ner_coarse = rng.pick(ners);
      t.animacy = static_cast<hcoref::Animacy>(rng.index(3));
      t.phrase_type = rng.pick(phrases);
      sent.tokens.push_back(std::move(t));
    }
    d.sentences.push_back(std::move(sent));
  }
  const int n_chains = static_cast<int>(rng.index(5));
  for (int c = 0; c < n_chains; ++c) {
    hcoref::GoldChain chain;
    chain.chain_id = static_cast<int>(rng.index(50));
    bool dup = false;
    for (const auto& other : d.gold_chains) dup |= other.chain_id == chain.chain_id;
    if (dup) continue;
    const int n_spans = 1 + static_cast<int>(rng.index(3));
    for (int k = 0; k < n_spans; ++k) {
      const int s = static_cast<int>(rng.index(d.sentences.size()));
      const int len = static_cast<int>(d.sentences[s].tokens.size());
      const int a = static_cast<int>(rng.index(len));
      const int b = a + static_cast<int>(rng.index(len - a));
      hcoref::Span sp{s, a, b};
      bool clash = false;
      for (const auto& x : chain.spans) {
        // Spans of one chain must be distinct and must not touch, or the
        // per-token runs would merge them.
        clash |= x.sent == sp.sent && x.start <= sp.end + 1 && sp.start <= x.end + 1;
      }
      if (!clash) chain.spans.push_back(sp);
    }
    d.gold_chains.push_back(std::move(chain));
  }
  hcoref::reindex(d);
  hcoref::assign_chain_tags(d);
  return d;
}

}  // namespace testutil
