#include <set>
#include <sstream>

#include "hcoref/corpus.hpp"
#include "test_util.hpp"

using namespace hcoref;
using testutil::conll_line;
using testutil::error_of;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    auto tab = line.find('\t', pos);
    out.push_back(line.substr(pos, tab - pos));
    if (tab == std::string::npos) break;
    pos = tab + 1;
  }
  return out;
}

}  // namespace

TEST_CASE("two tokens of one mention become one span") {
  const std::string text = conll_line("d", 0, "Tehran", "NNP", "0", "4") +
                           conll_line("d", 0, "Court", "NNP", "0", "4");
  auto docs = parse_conll(text);
  REQUIRE(docs.size() == 1);
  REQUIRE(docs[0].gold_chains.size() == 1);
  CHECK(docs[0].gold_chains[0].chain_id == 4);
  REQUIRE(docs[0].gold_chains[0].spans.size() == 1);
  CHECK(docs[0].gold_chains[0].spans[0] == Span{0, 0, 1});
}

TEST_CASE("short line is reported with its line number") {
  std::string text = conll_line("d", 0, "a", "NN") + conll_line("d", 0, "b", "NN");
  text += "d\t0\tc\tNN\tO\n";
  text += conll_line("d", 0, "e", "NN");
  try {
    parse_conll(text);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedLine);
    CHECK(e.line() == 3);
  }
}

TEST_CASE("extra columns are ignored with a warning") {
  std::string line = conll_line("d", 0, "a", "NN");
  line.insert(line.size() - 1, "\textra");
  std::vector<std::string> warnings;
  auto docs = parse_conll(line, &warnings);
  CHECK(docs.size() == 1);
  CHECK(warnings.size() == 1);
}

TEST_CASE("interrupted mention run") {
  const std::string text = conll_line("d", 0, "a", "NN", "0", "1") +
                           conll_line("d", 0, "b", "NN") +
                           conll_line("d", 0, "c", "NN", "0", "1");
  try {
    parse_conll(text);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InconsistentChain);
    CHECK(e.line() == 3);
  }
}

TEST_CASE("empty input") {
  CHECK(error_of([] { parse_conll(""); }) == ErrorCode::EmptyInput);
  CHECK(error_of([] { parse_conll("\n\n#begin document x\n#end document\n"); }) ==
        ErrorCode::EmptyInput);
}

TEST_CASE("document boundary by name column") {
  const std::string text = conll_line("d1", 0, "a", "NN") +
                           conll_line("d2", 0, "b", "NN") +
                           conll_line("d2", 1, "c", "NN");
  auto docs = parse_conll(text);
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].doc_id == "d1");
  CHECK(docs[1].sentences.size() == 2);
}

TEST_CASE("write of an empty list is empty") {
  CHECK(write_conll({}).empty());
}

TEST_CASE("absent chains are written as the null marker") {
  auto docs = parse_conll(conll_line("d", 0, "a", "NN") + conll_line("d", 0, "b", "NN"));
  for (const auto& line : split_lines(write_conll(docs))) {
    if (line.empty() || line[0] == '#') continue;
    auto cols = split_tabs(line);
    REQUIRE(cols.size() == 13);
    CHECK(cols[8] == "-");
    CHECK(cols[9] == "-");
  }
}

TEST_CASE("fixture corpus round-trips byte for byte") {
  const std::string text = testutil::read_file(testutil::data_path("fixture.conll"));
  auto docs = parse_conll(text);
  REQUIRE(docs.size() == 3);
  int sentences = 0;
  int chains = 0;
  for (const auto& d : docs) {
    sentences += static_cast<int>(d.sentences.size());
    chains += static_cast<int>(d.gold_chains.size());
    CHECK_NOTHROW(validate(d));
  }
  CHECK(sentences == 10);
  CHECK(chains == 7);

  // Independent comparison: line by line, column by column.
  const auto expected = split_lines(text);
  const auto actual = split_lines(write_conll(docs));
  REQUIRE(expected.size() == actual.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK_MESSAGE(split_tabs(expected[i]) == split_tabs(actual[i]), "line " << i + 1);
  }
  CHECK(parse_conll(write_conll(docs)) == docs);
}

TEST_CASE("nested mentions of two chains share a token") {
  auto docs = parse_conll(testutil::read_file(testutil::data_path("fixture.conll")));
  const Document& d = docs[2];
  // "her brother": chain 6 holds "her", chain 7 holds the whole phrase.
  const auto& chain6 = d.gold_chains[0];
  const auto& chain7 = d.gold_chains[1];
  CHECK(chain6.chain_id == 6);
  CHECK(chain7.chain_id == 7);
  CHECK(chain6.spans[1] == Span{0, 2, 2});
  CHECK(chain7.spans[0] == Span{0, 2, 3});
}

TEST_CASE("round-trip property over random documents") {
  Rng rng(20240611);
  for (int i = 0; i < 300; ++i) {
    std::vector<Document> docs;
    const int n = 1 + static_cast<int>(rng.index(3));
    for (int k = 0; k < n; ++k) {
      docs.push_back(testutil::random_document(rng, "doc" + std::to_string(k)));
    }
    const auto text = write_conll(docs);
    auto back = parse_conll(text);
    REQUIRE(back == docs);
    CHECK(write_conll(back) == text);
  }
}

TEST_CASE("relabeling chain ids yields isomorphic chains") {
  Rng rng(99);
  for (int i = 0; i < 100; ++i) {
    Document d = testutil::random_document(rng, "d");
    Document relabeled = d;
    for (auto& c : relabeled.gold_chains) c.chain_id = 1000 - c.chain_id;
    assign_chain_tags(relabeled);
    auto a = parse_conll(write_conll(std::vector{d}))[0];
    auto b = parse_conll(write_conll(std::vector{relabeled}))[0];
    std::set<std::vector<Span>> sa, sb;
    for (const auto& c : a.gold_chains) sa.insert(c.spans);
    for (const auto& c : b.gold_chains) sb.insert(c.spans);
    CHECK(sa == sb);
  }
}

TEST_CASE("validate rejects spans outside the document") {
  auto docs = parse_conll(conll_line("d", 0, "a", "NN", "0", "1"));
  docs[0].gold_chains[0].spans.push_back({0, 0, 3});
  CHECK(error_of([&] { validate(docs[0]); }) == ErrorCode::InvalidDocument);
}

TEST_CASE("animacy column outside the two values is unknown") {
  CHECK(parse_animacy("animate") == Animacy::Animate);
  CHECK(parse_animacy("inanimate") == Animacy::Inanimate);
  CHECK(parse_animacy("robot") == Animacy::Unknown);
  CHECK(parse_animacy("-") == Animacy::Unknown);
}

TEST_CASE("large well-formed input parses") {
  std::string text;
  text.reserve(100000 * 40);
  for (int s = 0; s < 10000; ++s) {
    for (int i = 0; i < 10; ++i) text += conll_line("big", s, "w", "NN");
    text += "\n";
  }
  auto docs = parse_conll(text);
  REQUIRE(docs.size() == 1);
  CHECK(docs[0].token_count() == 100000);
}
