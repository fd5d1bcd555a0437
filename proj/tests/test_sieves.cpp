#include <algorithm>
#include <chrono>
#include <map>

#include "fixtures.hpp"
#include "hcoref/sieves.hpp"
#include "test_util.hpp"

using namespace hcoref;

namespace {

const Lexicons& lex() {
  static const Lexicons l = Lexicons::english_default();
  return l;
}

struct Resolved {
  Document doc;
  MentionSet ms;
  EntityStore store;
};

bool together(const MentionSet& ms, const EntityStore& store,
              const std::string& a, const std::string& b) {
  const int x = fixtures::find_mention(ms, a);
  const int y = fixtures::find_mention(ms, b, x + 1);
  REQUIRE_MESSAGE(x >= 0, a);
  REQUIRE_MESSAGE(y >= 0, b);
  return store.entity_of(x) == store.entity_of(y);
}

void check_sieve(const Document& d, const std::string& sieve,
                 const std::string& a, const std::string& b) {
  MentionSet ms(d, lex(), detect_mentions(d, lex()));
  EntityStore only(ms.mentions);
  const SieveConfig cfg;
  CHECK_MESSAGE(apply_sieve(sieve, ms, only, cfg.window_for(sieve)) >= 1, sieve);
  CHECK_MESSAGE(together(ms, only, a, b), sieve);
  auto full = run_pipeline(ms, cfg);
  CHECK_MESSAGE(together(ms, full, a, b), sieve);
}

}  // namespace

TEST_CASE("sieve examples merge") {
  check_sieve(fixtures::strict_head_doc(), "strict_head", "The Tehran High Court",
              "The Tehran Court");
  check_sieve(fixtures::proper_name_doc(), "proper_name", "David Beckham", "Beckham");
  check_sieve(fixtures::location_doc(), "location", "Tehran", "Tehran city");
  check_sieve(fixtures::title_doc(), "title", "The President of France",
              "Emmanuel Macron");
  check_sieve(fixtures::demonstrative_doc(), "demonstrative", "The flower exhibition",
              "this exhibition");
}

TEST_CASE("same head, different names stay apart") {
  auto d = fixtures::negative_head_doc();
  MentionSet ms(d, lex(), detect_mentions(d, lex()));
  CHECK(ms.head_form[fixtures::find_mention(ms, "Tehran University")] ==
        ms.head_form[fixtures::find_mention(ms, "Washington University")]);
  for (const auto& name : kDefaultSieveOrder) {
    EntityStore store(ms.mentions);
    apply_sieve(name, ms, store, SieveConfig{}.window_for(name));
    CHECK_MESSAGE(!together(ms, store, "Tehran University", "Washington University"), name);
  }
  CHECK(!together(ms, run_pipeline(ms, SieveConfig{}), "Tehran University",
                  "Washington University"));
}

TEST_CASE("exact match ignores the window") {
  std::vector<std::string> sents = {"Sara/NNP/B-PER/B-NP arrived/VBD/O/B-VP"};
  for (int i = 0; i < 6; ++i) sents.push_back("It/PRP/O/B-NP rained/VBD/O/B-VP");
  sents.push_back("Sara/NNP/B-PER/B-NP left/VBD/O/B-VP");
  auto d = fixtures::build("w", sents);
  MentionSet ms(d, lex(), detect_mentions(d, lex()));
  auto store = run_pipeline(ms, SieveConfig{});
  CHECK(store.entity_of(ms.size() - 1) == 0);
  // The bounded-window sieves do not reach that far.
  EntityStore head(ms.mentions);
  apply_sieve("strict_head", ms, head, 3);
  CHECK(head.entity_of(ms.size() - 1) != 0);
}

TEST_CASE("speaker sieve links first person inside quotes") {
  auto d = fixtures::build("q", {
      "Sara/NNP/B-PER/B-NP said/VBD/O/B-VP ``/``/O/O I/PRP/O/B-NP will/MD/O/B-VP "
      "come/VB/O/I-VP ''/''/O/O ././O/O"});
  MentionSet ms(d, lex(), detect_mentions(d, lex()));
  EntityStore store(ms.mentions);
  CHECK(sieve_speaker(ms, store) == 1);
  CHECK(together(ms, store, "Sara", "I"));

  // No quote verb, no link.
  auto n = fixtures::build("q", {
      "Sara/NNP/B-PER/B-NP wrote/VBD/O/B-VP ``/``/O/O I/PRP/O/B-NP will/MD/O/B-VP "
      "come/VB/O/I-VP ''/''/O/O ././O/O"});
  MentionSet nms(n, lex(), detect_mentions(n, lex()));
  EntityStore nstore(nms.mentions);
  CHECK(sieve_speaker(nms, nstore) == 0);
}

TEST_CASE("active mentions are entity firsts except the document's first") {
  std::vector<Mention> ms(5);
  for (int i = 0; i < 5; ++i) ms[i].id = i;
  EntityStore store(ms);
  store.link(1, 3);
  CHECK(select_active_mentions(store) == std::vector<int>{1, 2, 4});
  store.link(0, 2);
  CHECK(select_active_mentions(store) == std::vector<int>{1, 4});
}

TEST_CASE("candidate ordering matches an independent sort") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    Document d = testutil::random_document(rng, "c");
    bool chunks = false;
    for (const auto& s : d.sentences) {
      for (const auto& t : s.tokens) chunks |= !t.phrase_type.empty();
    }
    if (!chunks) continue;
    MentionSet ms(d, lex(), detect_mentions(d, lex()));
    EntityStore store(ms.mentions);
    for (int k = 0; k < ms.size(); ++k) {
      store.link(static_cast<int>(rng.index(ms.size())),
                 static_cast<int>(rng.index(ms.size())));
    }
    const int window = static_cast<int>(rng.index(4));
    for (int m = 0; m < ms.size(); ++m) {
      // Best member per entity by (sentence distance, token distance, -id).
      std::map<int, std::tuple<int, int, int>> best;
      for (int c = 0; c < m; ++c) {
        if (ms[c].span.overlaps(ms[m].span)) continue;
        const int sd = ms[m].span.sent - ms[c].span.sent;
        if (sd > window) continue;
        const int e = store.entity_of(c);
        if (e == store.entity_of(m)) continue;
        std::tuple key{sd, ms[m].first_pos - ms[c].last_pos, -c};
        if (!best.contains(e) || key < best[e]) best[e] = key;
      }
      std::vector<int> expected;
      for (const auto& [e, key] : best) expected.push_back(e);
      std::stable_sort(expected.begin(), expected.end(),
                       [&](int a, int b) { return best[a] < best[b]; });
      CHECK(order_candidates(m, store, ms, window) == expected);
    }
  }
}

TEST_CASE("unknown sieve names are rejected") {
  auto d = fixtures::proper_name_doc();
  MentionSet ms(d, lex(), detect_mentions(d, lex()));
  SieveConfig cfg;
  cfg.order.push_back("alias");
  CHECK(testutil::error_of([&] { run_pipeline(ms, cfg); }) == ErrorCode::UnknownSieveName);
}

TEST_CASE("disabled sieves make no merges") {
  auto d = fixtures::proper_name_doc();
  MentionSet ms(d, lex(), detect_mentions(d, lex()));
  auto store = run_pipeline(ms, SieveConfig::none());
  CHECK(store.entity_count() == ms.size());
}

TEST_CASE("rule sieves never merge across more than the window") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    Document d = testutil::random_document(rng, "w");
    bool chunks = false;
    for (const auto& s : d.sentences) {
      for (const auto& t : s.tokens) chunks |= !t.phrase_type.empty();
    }
    if (!chunks) continue;
    MentionSet ms(d, lex(), detect_mentions(d, lex()));
    for (const auto& name : kDefaultSieveOrder) {
      if (name == "exact_match" || name == "proper_name" || name == "speaker") continue;
      EntityStore store(ms.mentions);
      apply_sieve(name, ms, store, 1);
      for (int e : store.entity_ids()) {
        const auto& mem = store.entity(e).mentions;
        if (mem.size() == 2) {
          CHECK(ms[mem[1]].span.sent - ms[mem[0]].span.sent <= 1);
        }
      }
    }
  }
}

TEST_CASE("gold partial store clusters only non-pronoun gold mentions") {
  auto docs = parse_conll(testutil::read_file(testutil::data_path("fixture.conll")));
  const Document& d = docs[0];
  MentionSet ms(d, lex(), detect_mentions(d, lex(), {DetectionMode::FromGold}));
  auto store = gold_partial_store(ms);
  const auto chains = gold_chain_of_mentions(ms);
  for (int i = 0; i < ms.size(); ++i) {
    if (ms[i].is_pronoun()) {
      CHECK(store.entity(store.entity_of(i)).size() == 1);
      continue;
    }
    for (int j = 0; j < i; ++j) {
      if (ms[j].is_pronoun()) continue;
      CHECK((store.entity_of(i) == store.entity_of(j)) == (chains[i] == chains[j]));
    }
  }
  CHECK(together(ms, store, "David Beckham", "Beckham"));
}

TEST_CASE("sieve fixture suite runs quickly") {
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 20; ++i) {
    for (auto d : {fixtures::strict_head_doc(), fixtures::proper_name_doc(),
                   fixtures::location_doc(), fixtures::title_doc(),
                   fixtures::demonstrative_doc(), fixtures::negative_head_doc()}) {
      MentionSet ms(d, lex(), detect_mentions(d, lex()));
      run_pipeline(ms, SieveConfig{});
    }
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;
  CHECK(elapsed < std::chrono::seconds(1));
}
