#include <map>
#include <set>

#include "fixtures.hpp"
#include "hcoref/mentions.hpp"
#include "test_util.hpp"

using namespace hcoref;

namespace {

const Lexicons& lex() {
  static const Lexicons l = Lexicons::english_default();
  return l;
}

// Independent enumeration of candidate spans: B-/I- chunks whose type starts
// with NP, maximal NER runs (a B- tag always opens a new run), pronoun tags.
std::set<Span> brute_force_spans(const Document& d) {
  std::set<Span> out;
  for (const auto& s : d.sentences) {
    const int n = static_cast<int>(s.tokens.size());
    for (int i = 0; i < n; ++i) {
      const auto& tag = s.tokens[i].phrase_type;
      const bool begins_np = tag.size() > 2 && tag.compare(2, 2, "NP") == 0 &&
                             (tag[0] == 'B' ||
                              (tag[0] == 'I' && (i == 0 || s.tokens[i - 1].phrase_type.size() < 2 ||
                                                 s.tokens[i - 1].phrase_type.substr(2) != tag.substr(2))));
      if (begins_np) {
        int j = i;
        while (j + 1 < n && s.tokens[j + 1].phrase_type == "I-" + tag.substr(2)) ++j;
        out.insert({s.index, i, j});
      }
      auto label = [&](int k) {
        const auto& t = s.tokens[k].ner;
        if (t == "O" || t.empty()) return std::string();
        return t.size() > 2 && t[1] == '-' ? t.substr(2) : t;
      };
      const auto li = label(i);
      const bool starts_run = !li.empty() && (s.tokens[i].ner.starts_with("B-") ||
                                              i == 0 || label(i - 1) != li);
      if (starts_run) {
        int j = i;
        while (j + 1 < n && label(j + 1) == li && !s.tokens[j + 1].ner.starts_with("B-")) ++j;
        out.insert({s.index, i, j});
      }
      if (lex().tags.is_pronoun(s.tokens[i].pos_coarse)) out.insert({s.index, i, i});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("single pronoun document") {
  auto d = fixtures::build("p", {"he/PRP/O/B-NP"});
  auto ms = detect_mentions(d, lex());
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].kind == MentionKind::Pronoun);
  CHECK(ms[0].pronoun_class == PronounClass::Personal);
}

TEST_CASE("gold mode returns exactly the gold spans") {
  auto docs = parse_conll(testutil::read_file(testutil::data_path("fixture.conll")));
  int chains = 0;
  for (const auto& d : docs) {
    chains += static_cast<int>(d.gold_chains.size());
    std::multiset<Span> gold;
    for (const auto& c : d.gold_chains) gold.insert(c.spans.begin(), c.spans.end());
    std::multiset<Span> got;
    for (const auto& m : detect_mentions(d, lex(), {DetectionMode::FromGold})) {
      got.insert(m.span);
    }
    // A span shared by two chains appears once as a mention.
    std::set<Span> gold_unique(gold.begin(), gold.end());
    CHECK(std::multiset<Span>(gold_unique.begin(), gold_unique.end()) == got);
  }
  CHECK(chains == 7);
}

TEST_CASE("annotation mode matches a brute-force span enumeration") {
  auto docs = parse_conll(testutil::read_file(testutil::data_path("fixture.conll")));
  Rng rng(7);
  for (int i = 0; i < 200; ++i) docs.push_back(testutil::random_document(rng, "r"));
  for (const auto& d : docs) {
    bool any_chunk = false;
    for (const auto& s : d.sentences) {
      for (const auto& t : s.tokens) any_chunk |= !t.phrase_type.empty();
    }
    if (!any_chunk) {
      CHECK(testutil::error_of([&] { detect_mentions(d, lex()); }) ==
            ErrorCode::MissingAnnotations);
      continue;
    }
    auto ms = detect_mentions(d, lex());
    std::set<Span> got;
    for (const auto& m : ms) got.insert(m.span);
    CHECK(got.size() == ms.size());
    CHECK(got == brute_force_spans(d));
    for (std::size_t k = 0; k < ms.size(); ++k) {
      CHECK(ms[k].id == static_cast<int>(k));
      CHECK(ms[k].head_token >= ms[k].first_pos);
      CHECK(ms[k].head_token <= ms[k].last_pos);
      CHECK(ms[k].is_pronoun() == ms[k].pronoun_class.has_value());
      if (k > 0) {
        const Span& a = ms[k - 1].span;
        const Span& b = ms[k].span;
        const bool ordered = a.sent < b.sent || (a.sent == b.sent && a.start < b.start) ||
                             (a.sent == b.sent && a.start == b.start && a.end > b.end);
        CHECK(ordered);
      }
    }
  }
}

TEST_CASE("missing phrase annotations") {
  auto d = fixtures::build("x", {"the/DT/O/- city/NN/O/-"});
  for (auto& t : d.sentences[0].tokens) t.phrase_type.clear();
  CHECK(testutil::error_of([&] { detect_mentions(d, lex()); }) ==
        ErrorCode::MissingAnnotations);
}

TEST_CASE("heads of hand-marked noun phrases") {
  struct Case {
    std::string sentence;
    int start, end;
    std::string head;
  };
  const std::vector<Case> cases = {
      {"Tehran/NNP High/NNP Court/NNP", 0, 2, "Court"},
      {"Tehran/NNP University/NNP", 0, 1, "University"},
      {"Washington/NNP University/NNP", 0, 1, "University"},
      {"the/DT city/NN", 0, 1, "city"},
      {"he/PRP", 0, 0, "he"},
      {"the/DT president/NN of/IN France/NNP", 0, 3, "president"},
      {"a/DT group/NN of/IN students/NNS", 0, 3, "group"},
      {"five/CD students/NNS", 0, 1, "students"},
      {"the/DT flower/NN exhibition/NN", 0, 2, "exhibition"},
      {"this/DT exhibition/NN", 0, 1, "exhibition"},
      {"David/NNP Beckham/NNP", 0, 1, "Beckham"},
      {"Tehran/NNP city/NN", 0, 1, "city"},
      {"the/DT old/JJ man/NN", 0, 2, "man"},
      {"the/DT man/NN in/IN the/DT car/NN", 0, 4, "man"},
      {"big/JJ red/JJ", 0, 1, "red"},
      {"the/DT capital/NN of/IN Iran/NNP", 0, 3, "capital"},
      {"Iran/NNP 's/POS capital/NN", 0, 2, "capital"},
      {"three/CD new/JJ courts/NNS", 0, 2, "courts"},
      {"the/DT minister/NN of/IN health/NN", 0, 3, "minister"},
      {"Emmanuel/NNP Macron/NNP", 0, 1, "Macron"},
  };
  for (const auto& c : cases) {
    auto d = fixtures::build("h", {c.sentence});
    const int head = mention_head({0, c.start, c.end}, d, lex().tags);
    CHECK_MESSAGE(token_at(d, head).form == c.head, c.sentence);
  }
  // Head-initial rule for Persian-style phrases.
  auto d = fixtures::build("h", {"Court/NNP High/JJ Tehran/NNP"});
  CHECK(token_at(d, mention_head({0, 0, 2}, d, lex().tags, HeadRule::LeftmostNoun)).form ==
        "Court");
}

TEST_CASE("pronoun attributes come from the table") {
  Lexicons l = lex();
  PronounEntry e;
  e.pronoun_class = PronounClass::Personal;
  e.attrs.number = {Number::Plural};
  e.attrs.person = {Person::First};
  e.attrs.animacy = {Animacy::Animate};
  l.pronoun_table["ma"] = e;
  auto d = fixtures::build("p", {"ma/PRP/O/B-NP"});
  auto ms = detect_mentions(d, l);
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].attrs == e.attrs);
}

TEST_CASE("plural head tag and no other evidence") {
  auto d = fixtures::build("p", {"boxes/NNS/O/B-NP"});
  auto ms = detect_mentions(d, lex());
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].attrs.number == ValueSet<Number>{Number::Plural});
  CHECK(ms[0].attrs.animacy.empty());
  CHECK(ms[0].attrs.person.empty());
  CHECK(ms[0].attrs.gender.empty());
}

TEST_CASE("group of students is singular, five students plural") {
  auto d = fixtures::students_doc();
  MentionSet ms(d, lex(), detect_mentions(d, lex()));
  const int group = fixtures::find_mention(ms, "A group of students");
  const int five = fixtures::find_mention(ms, "Five students");
  REQUIRE(group >= 0);
  REQUIRE(five >= 0);
  CHECK(ms[group].attrs.number == ValueSet<Number>{Number::Singular});
  CHECK(ms[five].attrs.number == ValueSet<Number>{Number::Plural});
}

TEST_CASE("named entities, titles and names set animacy and gender") {
  auto d = fixtures::build("a", {
      "Sara/NNP/B-PER/B-NP met/VBD/O/B-VP the/DT/O/B-NP minister/NN/O/I-NP in/IN/O/B-PP "
      "Tehran/NNP/B-LOC/B-NP ././O/O"});
  MentionSet ms(d, lex(), detect_mentions(d, lex()));
  const int sara = fixtures::find_mention(ms, "Sara");
  const int minister = fixtures::find_mention(ms, "the minister");
  const int tehran = fixtures::find_mention(ms, "Tehran");
  CHECK(ms[sara].attrs.animacy == ValueSet<Animacy>{Animacy::Animate});
  CHECK(ms[sara].attrs.gender == ValueSet<Gender>{Gender::Fem});
  CHECK(ms[sara].kind == MentionKind::ProperNoun);
  CHECK(ms[minister].attrs.animacy == ValueSet<Animacy>{Animacy::Animate});
  CHECK(ms[minister].kind == MentionKind::CommonNoun);
  CHECK(ms[tehran].attrs.animacy == ValueSet<Animacy>{Animacy::Inanimate});
  CHECK(ms[sara].role == GrammaticalRole::Subject);
  CHECK(ms[minister].role == GrammaticalRole::Object);
}

TEST_CASE("demonstrative phrases and chunk roles") {
  auto d = fixtures::demonstrative_doc();
  MentionSet ms(d, lex(), detect_mentions(d, lex()));
  const int dem = fixtures::find_mention(ms, "this exhibition");
  REQUIRE(dem >= 0);
  CHECK(ms[dem].kind == MentionKind::Demonstrative);

  auto r = fixtures::build("r", {"he/PRP/O/B-NP-SBJ saw/VBD/O/B-VP her/PRP/O/B-NP-OBJ"});
  auto rm = detect_mentions(r, lex());
  REQUIRE(rm.size() == 2);
  CHECK(rm[0].role == GrammaticalRole::Subject);
  CHECK(rm[1].role == GrammaticalRole::Object);
}

TEST_CASE("detection is deterministic") {
  auto docs = parse_conll(testutil::read_file(testutil::data_path("fixture.conll")));
  for (const auto& d : docs) {
    auto a = detect_mentions(d, lex());
    auto b = detect_mentions(d, lex());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].span == b[i].span);
      CHECK(a[i].attrs == b[i].attrs);
    }
  }
}
