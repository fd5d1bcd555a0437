#include "hcoref/sieves.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <tuple>

#include "hcoref/error.hpp"

namespace hcoref {

bool SieveConfig::is_enabled(const std::string& sieve) const {
  auto it = enabled.find(sieve);
  return it == enabled.end() || it->second;
}

int SieveConfig::window_for(const std::string& sieve) const {
  if (auto it = window_overrides.find(sieve); it != window_overrides.end()) {
    return it->second;
  }
  if (sieve == "exact_match" || sieve == "proper_name") return kUnlimitedWindow;
  return sentence_window;
}

SieveConfig SieveConfig::none() {
  SieveConfig cfg;
  for (const auto& s : cfg.order) cfg.enabled[s] = false;
  return cfg;
}

std::vector<int> select_active_mentions(const EntityStore& store) {
  std::vector<int> out;
  for (int id : store.entity_ids()) {
    const int first = store.entity(id).first_mention;
    if (first != 0) out.push_back(first);
  }
  return out;
}

std::vector<int> order_candidates(int mention, const EntityStore& store,
                                  const MentionSet& ms, int window) {
  const Mention& m = ms[mention];
  const int own = store.entity_of(mention);
  // (sentence distance, token distance, -mention id): smaller is better.
  using Key = std::tuple<int, int, int>;
  std::map<int, Key> best;
  for (int c = mention - 1; c >= 0; --c) {
    const Mention& cm = ms[c];
    const int sent_dist = m.span.sent - cm.span.sent;
    if (sent_dist > window) break;
    if (cm.span.overlaps(m.span)) continue;
    const int e = store.entity_of(c);
    if (e == own) continue;
    const Key key{sent_dist, m.first_pos - cm.last_pos, -c};
    auto [it, inserted] = best.emplace(e, key);
    if (!inserted && key < it->second) it->second = key;
  }
  std::vector<std::pair<Key, int>> ranked;
  ranked.reserve(best.size());
  for (const auto& [e, key] : best) ranked.emplace_back(key, e);
  std::sort(ranked.begin(), ranked.end());
  std::vector<int> out;
  out.reserve(ranked.size());
  for (const auto& [key, e] : ranked) out.push_back(e);
  return out;
}

namespace {

using PairRule = std::function<bool(const Mention& m, const Mention& c)>;

// Shared driver for sieves that compare the active mention with members of
// candidate entities. The first qualifying candidate wins.
int run_pair_sieve(const MentionSet& ms, EntityStore& store, int window,
                   const std::function<bool(const Mention&)>& applies,
                   const PairRule& rule) {
  int merges = 0;
  for (int m : select_active_mentions(store)) {
    if (store.entity_of(m) != m) continue;  // absorbed earlier in this pass
    const Mention& mention = ms[m];
    if (!applies(mention)) continue;
    for (int e : order_candidates(m, store, ms, window)) {
      bool match = false;
      for (int c : store.entity(e).mentions) {
        if (c >= m) break;
        const Mention& cm = ms[c];
        if (cm.span.overlaps(mention.span)) continue;
        if (mention.span.sent - cm.span.sent > window) continue;
        if (rule(mention, cm)) {
          match = true;
          break;
        }
      }
      if (match) {
        store.merge(store.entity_of(m), e);
        ++merges;
        break;
      }
    }
  }
  return merges;
}

std::vector<std::string> forms(const MentionSet& ms, const Mention& m) {
  std::vector<std::string> out;
  for (int i = m.span.start; i <= m.span.end; ++i) {
    out.push_back(ms.doc->token(m.span.sent, i).form);
  }
  return out;
}

bool is_subsequence(const std::vector<std::string>& shorter,
                    const std::vector<std::string>& longer) {
  std::size_t j = 0;
  for (const auto& w : longer) {
    if (j < shorter.size() && shorter[j] == w) ++j;
  }
  return j == shorter.size();
}

bool is_contiguous(const std::vector<std::string>& shorter,
                   const std::vector<std::string>& longer) {
  return std::search(longer.begin(), longer.end(), shorter.begin(),
                     shorter.end()) != longer.end();
}

bool not_pronoun(const Mention& m) { return !m.is_pronoun(); }

bool is_title_phrase(const MentionSet& ms, const Mention& m) {
  if (m.is_pronoun()) return false;
  const Token& head = token_at(*ms.doc, m.head_token);
  return ms.lex->title_nouns.contains(head.lemma) ||
         ms.lex->title_nouns.contains(head.form);
}

bool is_person_name(const Mention& m) {
  return !m.is_pronoun() && is_person_label(m.ner);
}

// Only punctuation separates `first` and `second` within one sentence.
bool adjacent(const MentionSet& ms, const Mention& first,
              const Mention& second) {
  if (first.span.sent != second.span.sent) return false;
  if (first.span.end >= second.span.start) return false;
  for (int i = first.span.end + 1; i < second.span.start; ++i) {
    if (!ms.lex->tags.is_punctuation(
            ms.doc->token(first.span.sent, i).pos_coarse)) {
      return false;
    }
  }
  return true;
}

struct QuoteRegion {
  int start;  // token index of first quoted token
  int end;    // token index of last quoted token
};

std::vector<QuoteRegion> quote_regions(const Sentence& s, const Lexicons& lex) {
  std::vector<QuoteRegion> out;
  int open = -1;
  const int n = static_cast<int>(s.tokens.size());
  for (int i = 0; i < n; ++i) {
    if (!lex.quote_marks.contains(s.tokens[i].form)) continue;
    if (open < 0) {
      open = i;
    } else {
      if (i - 1 >= open + 1) out.push_back({open + 1, i - 1});
      open = -1;
    }
  }
  if (open >= 0 && open + 1 < n) out.push_back({open + 1, n - 1});
  return out;
}

}  // namespace

int sieve_speaker(const MentionSet& ms, EntityStore& store) {
  const Document& doc = *ms.doc;
  const Lexicons& lex = *ms.lex;
  int merges = 0;
  // Mentions are sorted by sentence; walk them sentence by sentence.
  int begin = 0;
  while (begin < ms.size()) {
    const int sent = ms[begin].span.sent;
    int end = begin;
    while (end < ms.size() && ms[end].span.sent == sent) ++end;
    const Sentence& s = doc.sentences[sent];
    const auto quotes = quote_regions(s, lex);
    if (!quotes.empty()) {
      auto quoted = [&](int tok) {
        for (const auto& q : quotes) {
          if (tok >= q.start && tok <= q.end) return true;
        }
        return false;
      };
      auto inside = [&](const Mention& m) {
        for (const auto& q : quotes) {
          if (m.span.start >= q.start && m.span.end <= q.end) return true;
        }
        return false;
      };
      auto outside = [&](const Mention& m) {
        for (int i = m.span.start; i <= m.span.end; ++i) {
          if (quoted(i) || lex.quote_marks.contains(s.tokens[i].form)) {
            return false;
          }
        }
        return true;
      };
      int verb = -1;
      for (const auto& t : s.tokens) {
        if (!quoted(t.token_index) && (lex.quote_verbs.contains(t.lemma) ||
                                       lex.quote_verbs.contains(t.form))) {
          verb = t.token_index;
          break;
        }
      }
      int speaker = -1;
      if (verb >= 0) {
        // Nearest mention outside the quotes; preceding wins ties, then the
        // longer span.
        std::tuple<int, int, int> best{INT32_MAX, 0, 0};
        for (int i = begin; i < end; ++i) {
          const Mention& m = ms[i];
          if (!outside(m) || (m.span.start <= verb && verb <= m.span.end)) {
            continue;
          }
          if (m.is_pronoun() && (m.attrs.person.contains(Person::First) ||
                                 m.attrs.person.contains(Person::Second))) {
            continue;
          }
          const bool before = m.span.end < verb;
          const int dist = before ? verb - m.span.end : m.span.start - verb;
          const std::tuple<int, int, int> key{dist, before ? 0 : 1,
                                              -m.span.length()};
          if (key < best) {
            best = key;
            speaker = i;
          }
        }
      }
      if (speaker >= 0) {
        for (int i = begin; i < end; ++i) {
          const Mention& m = ms[i];
          if (!m.is_pronoun() || !inside(m)) continue;
          if (!m.attrs.person.contains(Person::First) &&
              !m.attrs.person.contains(Person::Second)) {
            continue;
          }
          const int a = store.entity_of(i);
          const int b = store.entity_of(speaker);
          if (a != b) {
            store.merge(a, b);
            ++merges;
          }
        }
      }
    }
    begin = end;
  }
  return merges;
}

int sieve_exact_match(const MentionSet& ms, EntityStore& store, int window) {
  return run_pair_sieve(ms, store, window, not_pronoun,
                        [&](const Mention& m, const Mention& c) {
                          return !c.is_pronoun() && ms.text[m.id] == ms.text[c.id];
                        });
}

int sieve_strict_head(const MentionSet& ms, EntityStore& store, int window) {
  return run_pair_sieve(
      ms, store, window, not_pronoun, [&](const Mention& m, const Mention& c) {
        if (c.is_pronoun() || ms.head_form[m.id] != ms.head_form[c.id]) {
          return false;
        }
        const auto a = forms(ms, m);
        const auto b = forms(ms, c);
        return a.size() <= b.size() ? is_subsequence(a, b)
                                    : is_subsequence(b, a);
      });
}

int sieve_proper_name(const MentionSet& ms, EntityStore& store, int window) {
  const auto& tags = ms.lex->tags;
  auto proper_head = [&](const Mention& m) {
    return !m.is_pronoun() &&
           tags.is_proper(token_at(*ms.doc, m.head_token).pos_coarse);
  };
  // Every proper-noun token of the shorter mention must occur in the longer
  // one, so "Tehran University" and "Washington University" stay apart.
  auto compatible = [&](const Mention& shorter, const Mention& longer) {
    const auto words = forms(ms, longer);
    for (int i = shorter.span.start; i <= shorter.span.end; ++i) {
      const Token& t = ms.doc->token(shorter.span.sent, i);
      if (tags.is_proper(t.pos_coarse) &&
          std::find(words.begin(), words.end(), t.form) == words.end()) {
        return false;
      }
    }
    return true;
  };
  return run_pair_sieve(ms, store, window, proper_head,
                        [&](const Mention& m, const Mention& c) {
                          if (!proper_head(c) ||
                              ms.head_form[m.id] != ms.head_form[c.id]) {
                            return false;
                          }
                          return m.span.length() <= c.span.length()
                                     ? compatible(m, c)
                                     : compatible(c, m);
                        });
}

int sieve_location(const MentionSet& ms, EntityStore& store, int window) {
  auto loc = [](const Mention& m) {
    return !m.is_pronoun() && is_location_label(m.ner);
  };
  return run_pair_sieve(ms, store, window, loc,
                        [&](const Mention& m, const Mention& c) {
                          if (!loc(c)) return false;
                          const auto a = forms(ms, m);
                          const auto b = forms(ms, c);
                          return a.size() <= b.size() ? is_contiguous(a, b)
                                                      : is_contiguous(b, a);
                        });
}

int sieve_title(const MentionSet& ms, EntityStore& store, int window) {
  return run_pair_sieve(
      ms, store, std::min(window, 0), not_pronoun,
      [&](const Mention& m, const Mention& c) {
        const bool title_then_name = is_title_phrase(ms, c) && is_person_name(m);
        const bool name_then_title = is_person_name(c) && is_title_phrase(ms, m);
        return (title_then_name || name_then_title) && adjacent(ms, c, m);
      });
}

int sieve_demonstrative(const MentionSet& ms, EntityStore& store, int window) {
  return run_pair_sieve(
      ms, store, window,
      [](const Mention& m) { return m.kind == MentionKind::Demonstrative; },
      [&](const Mention& m, const Mention& c) {
        return !c.is_pronoun() && c.kind != MentionKind::Demonstrative &&
               ms.head_form[m.id] == ms.head_form[c.id];
      });
}

int apply_sieve(const std::string& name, const MentionSet& ms,
                EntityStore& store, int window) {
  if (name == "speaker") return sieve_speaker(ms, store);
  if (name == "exact_match") return sieve_exact_match(ms, store, window);
  if (name == "strict_head") return sieve_strict_head(ms, store, window);
  if (name == "proper_name") return sieve_proper_name(ms, store, window);
  if (name == "location") return sieve_location(ms, store, window);
  if (name == "title") return sieve_title(ms, store, window);
  if (name == "demonstrative") return sieve_demonstrative(ms, store, window);
  throw Error(ErrorCode::UnknownSieveName, "unknown sieve '" + name + "'");
}

void run_pipeline(const MentionSet& ms, const SieveConfig& cfg,
                  EntityStore& store) {
  for (const auto& name : cfg.order) {
    if (std::find(kDefaultSieveOrder.begin(), kDefaultSieveOrder.end(),
                  name) == kDefaultSieveOrder.end()) {
      throw Error(ErrorCode::UnknownSieveName, "unknown sieve '" + name + "'");
    }
  }
  for (const auto& name : cfg.order) {
    if (!cfg.is_enabled(name)) continue;
    apply_sieve(name, ms, store, cfg.window_for(name));
  }
}

EntityStore run_pipeline(const MentionSet& ms, const SieveConfig& cfg) {
  EntityStore store(ms.mentions);
  run_pipeline(ms, cfg, store);
  return store;
}

std::vector<int> gold_chain_of_mentions(const MentionSet& ms) {
  std::map<Span, int> chain_of;
  for (const auto& chain : ms.doc->gold_chains) {
    for (const auto& sp : chain.spans) {
      auto [it, inserted] = chain_of.emplace(sp, chain.chain_id);
      if (!inserted) it->second = std::min(it->second, chain.chain_id);
    }
  }
  std::vector<int> out(ms.size(), -1);
  for (int i = 0; i < ms.size(); ++i) {
    auto it = chain_of.find(ms[i].span);
    if (it != chain_of.end()) out[i] = it->second;
  }
  return out;
}

EntityStore gold_partial_store(const MentionSet& ms) {
  EntityStore store(ms.mentions);
  const auto chains = gold_chain_of_mentions(ms);
  std::map<int, int> first_of_chain;
  for (int i = 0; i < ms.size(); ++i) {
    if (chains[i] < 0 || ms[i].is_pronoun()) continue;
    auto [it, inserted] = first_of_chain.emplace(chains[i], i);
    if (!inserted) store.link(it->second, i);
  }
  return store;
}

}  // namespace hcoref
