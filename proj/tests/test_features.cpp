#include <cmath>
#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "hcoref/features.hpp"
#include "hcoref/sieves.hpp"
#include "test_util.hpp"

using namespace hcoref;

namespace {

const Lexicons& lex() {
  static const Lexicons l = Lexicons::english_default();
  return l;
}

struct Setup {
  Document doc;
  MentionSet ms;
  EntityStore store;

  explicit Setup(Document d) : doc(std::move(d)) {
    ms = MentionSet(doc, lex(), detect_mentions(doc, lex()));
    store = EntityStore(ms.mentions);
  }
  int find(const std::string& text, int from = 0) const {
    const int id = fixtures::find_mention(ms, text, from);
    REQUIRE_MESSAGE(id >= 0, text);
    return id;
  }
};

FeatureOptions hybrid() { return {FeatureMode::Hybrid, nullptr}; }
FeatureOptions pair() { return {FeatureMode::MentionPair, nullptr}; }

}  // namespace

TEST_CASE("slot table layout") {
  const auto& t = slot_table();
  for (int row = 1; row <= kSlotCount; ++row) CHECK(t[row - 1].row == row);
  std::vector<int> hybrid_only;
  std::vector<int> entity_level;
  for (const auto& s : t) {
    if (s.hybrid_only) hybrid_only.push_back(s.row);
    if (s.level == SlotLevel::Entity) entity_level.push_back(s.row);
  }
  std::vector<int> expected = {15, 16};
  for (int r = 29; r <= 37; ++r) expected.push_back(r);
  for (int r = 46; r <= 54; ++r) expected.push_back(r);
  CHECK(hybrid_only == expected);
  CHECK(entity_level == std::vector<int>{29, 32, 36, 37, 46});
}

TEST_CASE("pronoun at document start has boundary context") {
  Setup s(fixtures::build("b", {"He/PRP/O/B-NP left/VBD/O/B-VP ././O/O",
                                "Sara/NNP/B-PER/B-NP saw/VBD/O/B-VP him/PRP/O/B-NP ././O/O"}));
  const int he = s.find("He");
  const int him = s.find("him");
  auto fv = extract_pair_features(him, s.store.entity_of(he), s.ms, s.store, hybrid());
  for (int row : {20, 21, 22}) CHECK(fv.symbol[row] == kBoundarySymbol);
  CHECK(fv.symbol[23] == "VBD");
  CHECK(fv.symbol[24] == ".");
  CHECK(fv.symbol[25] == kBoundarySymbol);
  CHECK(fv.symbol[6] == "VBD");
  CHECK(fv.symbol[7] == "NNP");
  CHECK(fv.symbol[8] == kBoundarySymbol);
  // The pronoun's own left context at document start.
  Setup t(fixtures::build("b", {"It/PRP/O/B-NP rained/VBD/O/B-VP ././O/O"}));
  EntityStore store(t.ms.mentions);
  CHECK(testutil::error_of([&] {
          extract_pair_features(0, 0, t.ms, store, hybrid());
        }) == ErrorCode::CandidateNotPreceding);
}

TEST_CASE("entity-level slots read the whole entity") {
  Setup s(fixtures::build("e", {
      "Sara/NNP/B-PER/B-NP arrived/VBD/O/B-VP ././O/O",
      "the/DT/O/B-NP rain/NN/O/I-NP fell/VBD/O/B-VP ././O/O",
      "Sara/NNP/B-PER/B-NP smiled/VBD/O/B-VP ././O/O",
      "the/DT/O/B-NP doctor/NN/O/I-NP Sara/NNP/B-PER/B-NP waved/VBD/O/B-VP ././O/O",
      "She/PRP/O/B-NP left/VBD/O/B-VP ././O/O"}));
  const int a = s.find("Sara");
  const int b = s.find("Sara", a + 1);
  const int c = s.find("Sara", b + 1);
  const int she = s.find("She");
  s.store.link(a, b);
  s.store.link(a, c);
  auto fv = extract_pair_features(she, s.store.entity_of(a), s.ms, s.store, hybrid());
  CHECK(fv[29] == 3);
  CHECK(fv[32] == 0);
  CHECK(fv[38] == 1);  // nearest member is in sentence 3
  CHECK(fv[17] == 1);
  CHECK(fv[31] == kTypeProper);
  CHECK(fv.symbol[35] == "PER");
  CHECK(fv[48] == static_cast<int>(Agreement::Agree));
  CHECK(fv[49] == static_cast<int>(Agreement::Disagree) + 1);  // Third agrees
  CHECK(fv[4] == 1);
}

TEST_CASE("minimum sentence distance to the chain") {
  Rng rng(46);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> sents;
    const int n = 3 + static_cast<int>(rng.index(5));
    for (int i = 0; i < n; ++i) {
      sents.push_back("Sara/NNP/B-PER/B-NP ran/VBD/O/B-VP");
    }
    sents.push_back("she/PRP/O/B-NP ran/VBD/O/B-VP");
    Setup s(fixtures::build("m", sents));
    const int she = s.ms.size() - 1;
    std::vector<int> chosen;
    for (int i = 0; i < n; ++i) {
      if (rng.bernoulli(0.4)) chosen.push_back(i);
    }
    if (chosen.empty()) chosen.push_back(0);
    for (std::size_t k = 1; k < chosen.size(); ++k) s.store.link(chosen[0], chosen[k]);
    int expected = 1 << 30;
    for (int id : chosen) expected = std::min(expected, n - s.ms[id].span.sent);
    auto fv = extract_pair_features(she, s.store.entity_of(chosen[0]), s.ms, s.store, hybrid());
    CHECK(fv[46] == expected);
  }
  // The worked case: members in sentences 1 and 3, pronoun in sentence 4.
  Setup s(fixtures::build("m", {"x/DT/O/O", "Sara/NNP/B-PER/B-NP", "x/DT/O/O",
                                "Sara/NNP/B-PER/B-NP", "she/PRP/O/B-NP"}));
  s.store.link(0, 1);
  auto fv = extract_pair_features(2, 0, s.ms, s.store, hybrid());
  CHECK(fv[46] == 1);
}

TEST_CASE("token distance below three") {
  Setup s(fixtures::build("t", {
      "Sara/NNP/B-PER/B-NP saw/VBD/O/B-VP her/PRP/O/B-NP ././O/O "
      "and/CC/O/O then/RB/O/O she/PRP/O/B-NP left/VBD/O/B-VP"}));
  const int sara = s.find("Sara");
  const int her = s.find("her");
  const int she = s.find("she");
  auto near = extract_pair_features(her, sara, s.ms, s.store, pair());
  CHECK(near[39] == 2);
  CHECK(near[44] == 1);
  CHECK(near[45] == 1);
  auto far = extract_pair_features(she, sara, s.ms, s.store, pair());
  CHECK(far[39] == 6);
  CHECK(far[44] == 0);
}

TEST_CASE("mention-pair slots are a subset of hybrid slots with equal values") {
  auto docs = parse_conll(testutil::read_file(testutil::data_path("fixture.conll")));
  int compared = 0;
  for (const auto& d : docs) {
    MentionSet ms(d, lex(), detect_mentions(d, lex()));
    auto store = run_pipeline(ms, SieveConfig{});
    for (int p = 0; p < ms.size(); ++p) {
      if (!ms[p].is_pronoun()) continue;
      for (int e : order_candidates(p, store, ms, 3)) {
        auto mp = extract_pair_features(p, e, ms, store, pair());
        auto hy = extract_pair_features(p, e, ms, store, hybrid());
        auto again = extract_pair_features(p, e, ms, store, hybrid());
        CHECK(hy == again);
        for (int row = 1; row <= kSlotCount; ++row) {
          if (mp.has(row)) {
            CHECK(hy.has(row));
            CHECK(mp.value[row] == hy.value[row]);
            CHECK(mp.symbol[row] == hy.symbol[row]);
          }
        }
        ++compared;
      }
    }
  }
  CHECK(compared > 5);
}

TEST_CASE("agreement slots follow value-set intersection") {
  Setup s(fixtures::build("g", {
      "A/DT/O/B-NP group/NN/O/I-NP of/IN/O/I-NP students/NNS/O/I-NP arrived/VBD/O/B-VP",
      "Five/CD/O/B-NP students/NNS/O/I-NP spoke/VBD/O/B-VP",
      "they/PRP/O/B-NP left/VBD/O/B-VP"}));
  const int group = s.find("A group of students");
  const int five = s.find("Five students");
  const int they = s.find("they");
  auto before = extract_pair_features(they, group, s.ms, s.store, hybrid());
  CHECK(before[40] == static_cast<int>(Agreement::Disagree));
  s.store.link(group, five);
  auto after = extract_pair_features(they, group, s.ms, s.store, hybrid());
  CHECK(after[40] == static_cast<int>(Agreement::Agree));
  // No animacy evidence on the noun phrases: unknown, not false.
  CHECK(after[48] == static_cast<int>(Agreement::Unknown));
}

TEST_CASE("extraction errors") {
  Setup s(fixtures::proper_name_doc());
  CHECK(testutil::error_of([&] {
          extract_pair_features(1, 0, s.ms, s.store, hybrid());
        }) == ErrorCode::NotAPronoun);
}

TEST_CASE("embedding distances") {
  EmbeddingTable t(2);
  t.add("he", {0, 0});
  t.add("Sara", {3, 4});
  t.add("saw", {1, 1});
  Setup s(fixtures::build("x", {"Sara/NNP/B-PER/B-NP saw/VBD/O/B-VP he/PRP/O/B-NP"}));
  auto e = extract_embedding_features(s.find("he"), s.find("Sara"), s.ms, t);
  CHECK(e.head_distance == doctest::Approx(5.0));
  CHECK(e.pronoun_vec == std::vector<double>{0, 0});
  CHECK(e.antecedent_vec == std::vector<double>{3, 4});
  // Sentence mean is (4/3, 5/3); antecedent mean (3, 4).
  CHECK(e.sentence_distance ==
        doctest::Approx(std::hypot(3 - 4.0 / 3, 4 - 5.0 / 3)).epsilon(1e-12));

  Setup same(fixtures::build("x", {"he/PRP/O/B-NP saw/VBD/O/B-VP he/PRP/O/B-NP"}));
  auto z = extract_embedding_features(1, 0, same.ms, t);
  CHECK(z.head_distance == 0.0);
}

TEST_CASE("mean distance matches an independent recomputation") {
  Rng rng(53);
  const std::vector<std::string> words = {"a", "b", "c", "d", "e", "f", "g"};
  EmbeddingTable t(3);
  std::map<std::string, std::vector<double>> vecs;
  for (const auto& w : words) {
    std::vector<double> v = {rng.uniform() * 10 - 5, rng.uniform() * 10 - 5, rng.uniform()};
    vecs[w] = v;
    t.add(w, v);
  }
  for (int trial = 0; trial < 200; ++trial) {
    std::string s0 = "", s1 = "";
    std::vector<std::string> ant, pro;
    for (int i = 0; i < 5; ++i) {
      ant.push_back(rng.pick(words));
      s0 += ant.back() + (i == 0 ? "/NN/O/B-NP " : "/NN/O/I-NP ");
    }
    s1 = "it/PRP/O/B-NP";
    Setup s(fixtures::build("m", {s0, s1}));
    auto e = extract_embedding_features(s.ms.size() - 1, 0, s.ms, t);
    double mean[3] = {0, 0, 0};
    for (const auto& w : ant) {
      for (int k = 0; k < 3; ++k) mean[k] += vecs[w][k] / 5.0;
    }
    // "it" is out of vocabulary: zero vector.
    const double expected = std::sqrt(mean[0] * mean[0] + mean[1] * mean[1] + mean[2] * mean[2]);
    CHECK(std::abs(e.mean_distance - expected) < 1e-9);
    CHECK(e.head_distance >= 0);
    CHECK(e.sentence_distance >= 0);
  }
}

TEST_CASE("embedding files") {
  auto t = parse_embeddings("a 1 2\nb 3 4\nc 5 6\n");
  CHECK(t.size() == 3);
  CHECK(t.dim() == 2);
  try {
    parse_embeddings("a 1 2\nb 3 4 5\n");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RaggedDimensions);
    CHECK(e.line() == 2);
  }
  CHECK(testutil::error_of([] { parse_embeddings("\n\n"); }) == ErrorCode::EmptyFile);
  auto dup = parse_embeddings("a 1 2\na 9 9\n");
  CHECK(dup.size() == 1);
  CHECK(dup.lookup("a")[0] == 1.0);
  CHECK(testutil::error_of([&] { dup.add("z", {1.0}); }) == ErrorCode::DimensionMismatch);

  auto mean = parse_embeddings("a 1 2\nb 3 4\n", OovPolicy::MeanVector);
  CHECK(mean.lookup("zzz")[0] == 2.0);
  CHECK(mean.lookup("zzz")[1] == 3.0);
}

TEST_CASE("large embedding file") {
  const auto path = std::filesystem::temp_directory_path() / "hcoref_emb_large.txt";
  {
    std::ofstream out(path);
    for (int i = 0; i < 50000; ++i) {
      out << "w" << i << ' ' << i * 0.5 << ' ' << -i << ' ' << 1 << '\n';
    }
  }
  auto t = load_embeddings(path);
  CHECK(t.size() == 50000);
  CHECK(t.lookup("w49999")[1] == -49999.0);
  auto oov = t.lookup("not-there");
  CHECK(oov.size() == 3);
  for (double x : oov) CHECK(x == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("codebook codes, unknowns and layout checks") {
  Setup s(fixtures::build("c", {"Sara/NNP/B-PER/B-NP saw/VBD/O/B-VP her/PRP/O/B-NP"}));
  auto fv = extract_pair_features(s.find("her"), s.find("Sara"), s.ms, s.store, hybrid());
  FeatureCodebook cb(FeatureMode::Hybrid, false, 0);
  cb.observe(fv);
  cb.freeze();
  CHECK(cb.code("pos", "VBD") >= 2);
  CHECK(cb.code("pos", "XYZ") == FeatureCodebook::kUnknownCode);
  CHECK(cb.code("pos", kBoundarySymbol) == FeatureCodebook::kBoundaryCode);
  std::vector<double> row;
  cb.encode(fv, row);
  CHECK(row.size() == cb.width());
  CHECK(cb.width() == 51);

  FeatureCodebook mp(FeatureMode::MentionPair, false, 0);
  mp.freeze();
  CHECK(mp.width() == 34);
  std::vector<double> bad;
  CHECK(testutil::error_of([&] { mp.encode(fv, bad); }) == ErrorCode::VocabMismatch);

  EmbeddingTable t(2);
  t.add("Sara", {1, 2});
  FeatureOptions opts{FeatureMode::Hybrid, &t};
  auto emb = extract_pair_features(s.find("her"), s.find("Sara"), s.ms, s.store, opts);
  FeatureCodebook ecb(FeatureMode::Hybrid, true, 2);
  ecb.freeze();
  CHECK(ecb.width() == 58);
  std::vector<double> erow;
  ecb.encode(emb, erow);
  CHECK(erow.size() == 58);
  CHECK(testutil::error_of([&] { ecb.encode(fv, erow); }) == ErrorCode::VocabMismatch);
}
