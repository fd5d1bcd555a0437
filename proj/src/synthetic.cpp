#include "hcoref/synthetic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>

#include "hcoref/error.hpp"
#include "hcoref/rng.hpp"

namespace hcoref {

namespace {

// Names are kept out of the default gender gazetteer: pronoun choice never
// depends on gender, as in a language with gender-neutral pronouns.
const std::vector<std::string> kFirstNames = {
    "Parisa", "Kaveh", "Shirin", "Babak", "Nazanin", "Dariush", "Golnar", "Farhad",
    "Roya", "Arash", "Laleh", "Siavash", "Azadeh", "Kamran", "Behnam", "Mahsa"};
const std::vector<std::string> kSurnames = {
    "Karimi", "Ahmadi", "Hosseini", "Rezaei", "Moradi", "Jafari", "Rahimi", "Sadeghi",
    "Kazemi", "Ebrahimi", "Nouri", "Hashemi", "Ghasemi", "Bagheri", "Mousavi", "Amini"};
const std::vector<std::string> kTitles = {"director", "manager", "minister", "mayor",
                                          "professor", "coach", "governor", "chairman"};
const std::vector<std::string> kRoles = {"engineer", "doctor", "teacher", "reporter",
                                         "lawyer", "farmer", "nurse", "pilot"};
const std::vector<std::string> kObjects = {"bridge", "report", "contract", "budget",
                                           "project", "factory", "museum", "hospital",
                                           "road", "plan", "law", "exhibition"};
const std::vector<std::string> kAdjectives = {"new", "old", "large", "annual", "final",
                                              "second"};
const std::vector<std::string> kGroups = {"students", "workers", "players", "visitors",
                                          "residents", "officials"};
const std::vector<std::string> kPlaces = {"Tehran", "Tabriz", "Shiraz", "Isfahan",
                                          "Mashhad", "Kerman", "Yazd", "Rasht"};
const std::vector<std::string> kPlaceNouns = {"city", "province"};
const std::vector<std::string> kVerbs = {"visited", "approved", "inspected", "praised",
                                         "criticized", "opened", "reviewed", "supported",
                                         "rejected", "discussed", "funded", "described"};
const std::vector<std::string> kIntransitive = {"arrived", "resigned", "returned", "waited"};
const std::vector<std::string> kFillers = {"yesterday", "again", "today", "recently",
                                           "quietly", "finally"};
const std::vector<std::string> kPleonastic = {"clear", "likely", "possible", "important"};

enum class Kind { Person, Object, Location, Group };
// Pronoun families: who may be referred to by the same pronoun.
enum class Family { AnimateSingular, InanimateSingular, Plural };

struct EntityPlan {
  Kind kind = Kind::Person;
  Family family = Family::AnimateSingular;
  int remaining = 0;
  int realized = 0;
  // Lexical material.
  std::string first, last, title, role, noun, adjective, place, place_noun;
  bool female = false;
  bool has_title = false;  // introduced with an adjacent title
  bool named = true;       // person introduced by name rather than role noun
  int last_sentence = -100;
  std::vector<Span> spans;
};

struct Word {
  std::string form;
  std::string pos;
  std::string ner = "O";
  std::string chunk = "O";
  Animacy animacy = Animacy::Unknown;
  std::string lemma;
};

class Generator {
 public:
  Generator(const SynthSpec& spec, std::uint64_t seed) : spec_(spec), rng_(seed) {}

  Document run(SynthStats* stats) {
    plan_entities();
    int sent = 0;
    int prev_subject = -1;
    while (any_remaining() || sent < spec_.sentences) {
      if (!any_remaining()) {
        filler_sentence();
        prev_subject = -1;
      } else {
        prev_subject = content_sentence(prev_subject);
        if (rng_.bernoulli(spec_.pleonastic_rate)) pleonastic_sentence();
      }
      sent = static_cast<int>(doc_.sentences.size());
    }
    for (std::size_t e = 0; e < entities_.size(); ++e) {
      if (entities_[e].spans.empty()) continue;
      GoldChain c;
      c.chain_id = static_cast<int>(e);
      c.spans = entities_[e].spans;
      doc_.gold_chains.push_back(std::move(c));
    }
    doc_.doc_id = spec_.doc_id;
    reindex(doc_);
    assign_chain_tags(doc_);
    if (stats) {
      stats->pronouns = pronouns_;
      stats->mentions = 0;
      for (const auto& c : doc_.gold_chains) stats->mentions += static_cast<int>(c.spans.size());
      stats->sentences = static_cast<int>(doc_.sentences.size());
    }
    return std::move(doc_);
  }

 private:
  template <typename T>
  const T& pick(const std::vector<T>& v) { return rng_.pick(v); }

  void plan_entities() {
    std::vector<std::string> firsts = kFirstNames, lasts = kSurnames, titles = kTitles,
                             places = kPlaces;
    rng_.shuffle(firsts);
    rng_.shuffle(lasts);
    rng_.shuffle(titles);
    rng_.shuffle(places);
    for (int i = 0; i < spec_.entities; ++i) {
      EntityPlan e;
      e.remaining = spec_.mentions_per_entity;
      const double total = spec_.person_weight + spec_.object_weight +
                           spec_.location_weight + spec_.group_weight;
      double r = rng_.uniform() * total;
      if ((r -= spec_.person_weight) < 0) {
        e.kind = Kind::Person;
      } else if ((r -= spec_.object_weight) < 0) {
        e.kind = Kind::Object;
      } else if ((r -= spec_.location_weight) < 0) {
        e.kind = Kind::Location;
      } else {
        e.kind = Kind::Group;
      }
      switch (e.kind) {
        case Kind::Person:
          e.family = Family::AnimateSingular;
          e.first = firsts[i % firsts.size()];
          e.last = lasts[i % lasts.size()];
          e.title = titles[i % titles.size()];
          e.role = pick(kRoles);
          e.female = rng_.bernoulli(0.5);
          e.named = rng_.bernoulli(0.75);
          break;
        case Kind::Object:
          e.family = Family::InanimateSingular;
          e.noun = pick(kObjects);
          e.adjective = pick(kAdjectives);
          break;
        case Kind::Location:
          e.family = Family::InanimateSingular;
          e.place = places[i % places.size()];
          e.place_noun = pick(kPlaceNouns);
          break;
        case Kind::Group:
          e.family = Family::Plural;
          e.noun = pick(kGroups);
          break;
      }
      entities_.push_back(std::move(e));
    }
  }

  bool any_remaining() const {
    for (const auto& e : entities_) {
      if (e.remaining > 0) return true;
    }
    return false;
  }

  // Entity with mentions left, weighted by how many remain.
  int draw_entity(int exclude) {
    int total = 0;
    for (int i = 0; i < static_cast<int>(entities_.size()); ++i) {
      if (i != exclude) total += entities_[i].remaining;
    }
    if (total == 0) return -1;
    int r = static_cast<int>(rng_.index(static_cast<std::size_t>(total)));
    for (int i = 0; i < static_cast<int>(entities_.size()); ++i) {
      if (i == exclude) continue;
      r -= entities_[i].remaining;
      if (r < 0) return i;
    }
    return -1;
  }

  // ---- token assembly -----------------------------------------------------

  void emit(std::vector<Word>& out, const std::string& form, const std::string& pos,
            const std::string& chunk, const std::string& ner = "O",
            Animacy anim = Animacy::Unknown, const std::string& lemma = "") {
    Word w;
    w.form = form;
    w.pos = pos;
    w.chunk = chunk;
    w.ner = ner;
    w.animacy = anim;
    w.lemma = lemma;
    out.push_back(std::move(w));
  }

  // Appends a noun phrase and returns its span within the sentence.
  Span phrase(std::vector<Word>& out, const std::vector<Word>& words, const std::string& role) {
    const int start = static_cast<int>(out.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
      Word w = words[i];
      w.chunk = (i == 0 ? "B-NP" : "I-NP") + role;
      out.push_back(std::move(w));
    }
    return {sentence_index(), start, static_cast<int>(out.size()) - 1};
  }

  int sentence_index() const { return static_cast<int>(doc_.sentences.size()); }

  void push_sentence(std::vector<Word>& words) {
    // Pad with adverbs up to a length drawn from the bounds.
    const int target = rng_.range(spec_.min_sentence_length, spec_.max_sentence_length);
    const bool final_period = !words.empty() && words.back().form == ".";
    while (static_cast<int>(words.size()) < target) {
      Word w;
      w.form = pick(kFillers);
      w.pos = "RB";
      w.chunk = "B-ADVP";
      words.insert(final_period ? words.end() - 1 : words.end(), std::move(w));
    }
    Sentence s;
    s.index = sentence_index();
    for (auto& w : words) {
      Token t;
      t.form = w.form;
      t.original = w.form;
      t.lemma = w.lemma.empty() ? lower(w.form) : w.lemma;
      t.pos_coarse = w.pos;
      t.pos_fine = w.pos;
      t.ner = w.ner;
      t.ner_coarse = w.ner;
      t.animacy = w.animacy;
      t.phrase_type = w.chunk;
      if (w.pos == "PRP") ++pronouns_;
      s.tokens.push_back(std::move(t));
    }
    doc_.sentences.push_back(std::move(s));
  }

  static std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  }

  // ---- mention realization ------------------------------------------------

  bool annotated() { return !rng_.bernoulli(spec_.missing_animacy); }

  std::string pronoun_form(const EntityPlan& e, const std::string& role, bool reflexive,
                           bool capital) {
    std::string f;
    switch (e.family) {
      case Family::AnimateSingular:
        f = reflexive ? (e.female ? "herself" : "himself")
            : role == "-OBJ" ? (e.female ? "her" : "him")
                             : (e.female ? "she" : "he");
        break;
      case Family::InanimateSingular:
        f = reflexive ? "itself" : "it";
        break;
      case Family::Plural:
        f = reflexive ? "themselves" : role == "-OBJ" ? "them" : "they";
        break;
    }
    if (capital) f[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(f[0])));
    return f;
  }

  // Words of a non-pronoun mention; `k` is the entity's mention number.
  std::vector<Word> nominal(EntityPlan& e, int k) {
    std::vector<Word> w;
    auto add = [&](const std::string& form, const std::string& pos,
                   const std::string& ner = "O", Animacy a = Animacy::Unknown) {
      Word x;
      x.form = form;
      x.pos = pos;
      x.ner = ner;
      x.animacy = a;
      w.push_back(std::move(x));
    };
    const bool first = k == 0;
    switch (e.kind) {
      case Kind::Person: {
        if (first) {
          if (e.named) {
            add(e.first, "NNP", "B-PER", Animacy::Animate);
            add(e.last, "NNP", "I-PER", Animacy::Animate);
          } else {
            add("the", "DT");
            add(e.role, "NN", "O", Animacy::Animate);
          }
          break;
        }
        const bool tag = annotated();
        const double r = rng_.uniform();
        if (!e.named) {
          add(r < 0.5 ? "the" : "this", "DT");
          add(e.role, "NN", "O", tag ? Animacy::Animate : Animacy::Unknown);
        } else if (e.has_title && r < 0.3) {
          add("the", "DT");
          add(e.title, "NN");
        } else if (r < 0.6) {
          add(e.last, "NNP", tag ? "B-PER" : "O", tag ? Animacy::Animate : Animacy::Unknown);
        } else {
          add(e.first, "NNP", tag ? "B-PER" : "O", tag ? Animacy::Animate : Animacy::Unknown);
          add(e.last, "NNP", tag ? "I-PER" : "O", tag ? Animacy::Animate : Animacy::Unknown);
        }
        break;
      }
      case Kind::Object: {
        const Animacy a = first || annotated() ? Animacy::Inanimate : Animacy::Unknown;
        const double r = rng_.uniform();
        if (first || r < 0.3) {
          add("the", "DT");
          add(e.adjective, "JJ");
          add(e.noun, "NN", "O", a);
        } else if (r < 0.65) {
          add("the", "DT");
          add(e.noun, "NN", "O", a);
        } else {
          add("this", "DT");
          add(e.noun, "NN", "O", a);
        }
        break;
      }
      case Kind::Location: {
        if (first) {
          add(e.place, "NNP", "B-LOC", Animacy::Inanimate);
          add(e.place_noun, "NN", "I-LOC", Animacy::Inanimate);
        } else {
          add(e.place, "NNP", "B-LOC");
        }
        break;
      }
      case Kind::Group: {
        const Animacy a = first || annotated() ? Animacy::Animate : Animacy::Unknown;
        add(first || rng_.bernoulli(0.6) ? "the" : "these", "DT");
        add(e.noun, "NNS", "O", a);
        break;
      }
    }
    return w;
  }

  // May entity `id` be pronominalized in the current sentence?
  bool pronoun_allowed(int id, int prev_subject) const {
    const EntityPlan& e = entities_[id];
    const int s = sentence_index();
    if (e.realized == 0 || e.last_sentence < s - 2 || e.last_sentence == s) return false;
    if (id == prev_subject) return true;
    // No other entity of the same family since its last mention.
    for (const auto& [pos, other] : recent_) {
      if (other == id || pos <= last_position_.at(id)) continue;
      if (entities_[other].family == e.family) return false;
    }
    return true;
  }

  void record(int id, const Span& sp) {
    EntityPlan& e = entities_[id];
    e.spans.push_back(sp);
    e.realized += 1;
    e.remaining -= 1;
    e.last_sentence = sp.sent;
    const int pos = sp.sent * 1000 + sp.start;
    last_position_[id] = pos;
    recent_.emplace_back(pos, id);
  }

  // Realizes one mention of `id` in slot `role` and records its spans.
  void mention(std::vector<Word>& out, int id, const std::string& role, int prev_subject,
               bool reflexive = false) {
    EntityPlan& e = entities_[id];
    const bool capital = out.empty();
    if (reflexive || (pronoun_allowed(id, prev_subject) && rng_.bernoulli(spec_.pronoun_rate))) {
      Word w;
      w.form = pronoun_form(e, role, reflexive, capital);
      w.pos = "PRP";
      record(id, phrase(out, {w}, role));
      return;
    }
    // A named person's first mention may come with an adjacent title.
    if (e.kind == Kind::Person && e.realized == 0 && e.named && e.remaining >= 2 &&
        rng_.bernoulli(0.35)) {
      e.has_title = true;
      std::vector<Word> title;
      Word the;
      the.form = capital ? "The" : "the";
      the.pos = "DT";
      title.push_back(the);
      Word t;
      t.form = e.title;
      t.pos = "NN";
      title.push_back(t);
      const Span ts = phrase(out, title, role);
      Word comma;
      comma.form = ",";
      comma.pos = ",";
      out.push_back(comma);
      const Span ns = phrase(out, nominal(e, 0), role);
      record(id, ts);
      record(id, ns);
      return;
    }
    auto words = nominal(e, e.realized);
    if (capital) {
      words[0].form[0] =
          static_cast<char>(std::toupper(static_cast<unsigned char>(words[0].form[0])));
    }
    record(id, phrase(out, words, role));
  }

  // ---- sentences ----------------------------------------------------------

  int content_sentence(int prev_subject) {
    int subject = -1;
    if (prev_subject >= 0 && entities_[prev_subject].remaining > 0 &&
        rng_.bernoulli(spec_.topic_continuity)) {
      subject = prev_subject;
    } else {
      subject = draw_entity(-1);
    }
    std::vector<Word> out;
    mention(out, subject, "-SBJ", prev_subject);

    const EntityPlan& se = entities_[subject];
    if (se.kind == Kind::Person && se.remaining >= 1 && rng_.bernoulli(spec_.quote_rate)) {
      quoted(out, subject);
      push_sentence(out);
      return subject;
    }

    int object = -1;
    if (entities_[subject].remaining > 0 && rng_.bernoulli(0.08) &&
        entities_[subject].realized > 0) {
      object = subject;  // reflexive
    } else {
      object = draw_entity(subject);
    }
    if (object < 0) {
      emit(out, pick(kIntransitive), "VBD", "B-VP");
    } else {
      emit(out, pick(kVerbs), "VBD", "B-VP");
      mention(out, object, "-OBJ", prev_subject, object == subject);
    }
    emit(out, ".", ".", "O");
    push_sentence(out);
    return subject;
  }

  // <speaker> said : " I <verb> <object> . "
  void quoted(std::vector<Word>& out, int speaker) {
    emit(out, "said", "VBD", "B-VP", "O", Animacy::Unknown, "say");
    emit(out, ":", ":", "O");
    emit(out, "\"", "``", "O");
    Word i;
    i.form = "I";
    i.pos = "PRP";
    record(speaker, phrase(out, {i}, "-SBJ"));
    const int object = draw_entity(speaker);
    if (object >= 0) {
      emit(out, pick(kVerbs), "VBD", "B-VP");
      mention(out, object, "-OBJ", -1);
    } else {
      emit(out, pick(kIntransitive), "VBD", "B-VP");
    }
    emit(out, ".", ".", "O");
    emit(out, "\"", "''", "O");
  }

  void pleonastic_sentence() {
    std::vector<Word> out;
    emit(out, "It", "PRP", "B-NP-SBJ");
    emit(out, "is", "VBZ", "B-VP", "O", Animacy::Unknown, "be");
    emit(out, pick(kPleonastic), "JJ", "B-ADJP");
    emit(out, ".", ".", "O");
    push_sentence(out);
  }

  void filler_sentence() {
    if (rng_.bernoulli(0.5)) {
      pleonastic_sentence();
      return;
    }
    std::vector<Word> out;
    emit(out, "The", "DT", "B-NP-SBJ");
    emit(out, "weather", "NN", "I-NP-SBJ");
    emit(out, "was", "VBD", "B-VP", "O", Animacy::Unknown, "be");
    emit(out, "cold", "JJ", "B-ADJP");
    emit(out, ".", ".", "O");
    push_sentence(out);
  }

  const SynthSpec& spec_;
  Rng rng_;
  Document doc_;
  std::vector<EntityPlan> entities_;
  std::map<int, int> last_position_;
  std::vector<std::pair<int, int>> recent_;  // (position, entity) in emission order
  int pronouns_ = 0;
};

void check_spec(const SynthSpec& s) {
  auto bad = [](const std::string& why) { return Error(ErrorCode::InvalidSpec, why); };
  if (s.entities < 1) throw bad("spec needs at least one entity");
  if (s.sentences < 1) throw bad("spec needs at least one sentence");
  if (s.mentions_per_entity < 1) throw bad("mentions_per_entity must be positive");
  if (s.min_sentence_length < 1 || s.max_sentence_length < s.min_sentence_length) {
    throw bad("sentence length bounds must satisfy 1 <= min <= max");
  }
  for (double p : {s.pronoun_rate, s.missing_animacy, s.pleonastic_rate, s.quote_rate,
                   s.topic_continuity}) {
    if (!(p >= 0.0 && p <= 1.0)) throw bad("rates must lie in [0,1]");
  }
  const double weights[] = {s.person_weight, s.object_weight, s.location_weight,
                            s.group_weight};
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw bad("entity kind weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw bad("entity kind weights must not all be zero");
}

}  // namespace

Document gen_synthetic(const SynthSpec& spec, std::uint64_t seed, SynthStats* stats) {
  check_spec(spec);
  Generator g(spec, seed);
  return g.run(stats);
}

std::vector<Document> gen_corpus(const SynthSpec& spec, int count, std::uint64_t seed,
                                 const std::string& prefix) {
  check_spec(spec);
  std::vector<Document> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    SynthSpec s = spec;
    char id[32];
    std::snprintf(id, sizeof id, "_%04d", i);
    s.doc_id = prefix + id;
    out.push_back(gen_synthetic(s, derive_seed(seed, static_cast<std::uint64_t>(i))));
  }
  return out;
}

EmbeddingTable toy_embeddings(int dim, std::uint64_t seed) {
  if (dim < 1) throw Error(ErrorCode::InvalidSpec, "embedding dimension must be positive");
  Rng rng(seed);
  auto gaussian = [&]() {
    // Box-Muller on the portable uniform source.
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  };
  std::vector<std::vector<double>> centroid(4, std::vector<double>(dim));
  for (auto& c : centroid) {
    for (auto& x : c) x = gaussian();
  }
  EmbeddingTable table(dim);
  auto add = [&](const std::string& word, int cls, double noise) {
    std::vector<double> v(dim);
    for (int i = 0; i < dim; ++i) v[i] = centroid[cls][i] + noise * gaussian();
    table.add(word, std::move(v));
  };
  constexpr int kAnimate = 0, kInanimate = 1, kPlural = 2, kFunction = 3;
  for (const auto* list : {&kFirstNames, &kSurnames, &kTitles, &kRoles}) {
    for (const auto& w : *list) add(w, kAnimate, 0.4);
  }
  for (const auto* list : {&kObjects, &kPlaces, &kPlaceNouns}) {
    for (const auto& w : *list) add(w, kInanimate, 0.4);
  }
  for (const auto& w : kGroups) add(w, kPlural, 0.4);
  for (const char* w : {"he", "she", "him", "her", "himself", "herself", "i"}) {
    add(w, kAnimate, 0.2);
  }
  for (const char* w : {"it", "itself"}) add(w, kInanimate, 0.2);
  for (const char* w : {"they", "them", "themselves"}) add(w, kPlural, 0.2);
  std::vector<std::string> function = {"the", "this", "these", "said", ":", "\"", ".", ",",
                                       "is", "was", "weather", "cold"};
  for (const auto* list : {&kAdjectives, &kVerbs, &kIntransitive, &kFillers, &kPleonastic}) {
    function.insert(function.end(), list->begin(), list->end());
  }
  for (const auto& w : function) add(w, kFunction, 1.0);
  return table;
}

}  // namespace hcoref
