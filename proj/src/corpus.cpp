#include "hcoref/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <map>
#include <optional>

#include "hcoref/error.hpp"

namespace hcoref {

namespace {

constexpr int kColumns = 13;
constexpr std::string_view kNull = "-";
constexpr std::string_view kBegin = "#begin document";
constexpr std::string_view kEnd = "#end document";

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_columns(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    cols.push_back(line.substr(i, j - i));
    i = j;
  }
  return cols;
}

std::optional<int> to_int(std::string_view s) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string annotation(std::string_view col) {
  return col == kNull ? std::string() : std::string(col);
}

std::vector<int> parse_int_list(std::string_view col, int line) {
  std::vector<int> out;
  if (col == kNull) return out;
  std::size_t pos = 0;
  while (true) {
    const auto bar = col.find('|', pos);
    const auto piece = col.substr(pos, bar == std::string_view::npos
                                           ? std::string_view::npos
                                           : bar - pos);
    auto v = to_int(piece);
    if (!v) {
      throw Error(ErrorCode::MalformedLine,
                  "expected integer chain annotation, got '" +
                      std::string(col) + "'",
                  line);
    }
    out.push_back(*v);
    if (bar == std::string_view::npos) break;
    pos = bar + 1;
  }
  return out;
}

// Builds documents incrementally while scanning lines.
class Builder {
 public:
  explicit Builder(std::vector<std::string>* warnings) : warnings_(warnings) {}

  void begin_document(std::string id) {
    finish_document();
    doc_ = Document{};
    doc_->doc_id = std::move(id);
    explicit_ = true;
  }

  void end_document() { finish_document(); }

  void end_sentence() {
    if (!doc_ || sentence_.tokens.empty()) return;
    sentence_.index = static_cast<int>(doc_->sentences.size());
    doc_->sentences.push_back(std::move(sentence_));
    sentence_ = Sentence{};
    sentence_number_.reset();
  }

  void add_token(std::string_view line, int line_no) {
    const auto cols = split_columns(line);
    if (cols.size() < static_cast<std::size_t>(kColumns)) {
      throw Error(ErrorCode::MalformedLine,
                  "expected " + std::to_string(kColumns) + " columns, found " +
                      std::to_string(cols.size()),
                  line_no);
    }
    if (cols.size() > static_cast<std::size_t>(kColumns) && warnings_) {
      warnings_->push_back("line " + std::to_string(line_no) + ": " +
                           std::to_string(cols.size() - kColumns) +
                           " extra column(s) ignored");
    }
    const std::string_view name = cols[0];
    if (!doc_) {
      doc_ = Document{};
      doc_->doc_id = std::string(name);
      explicit_ = false;
    } else if (!explicit_ && name != doc_->doc_id) {
      finish_document();
      doc_ = Document{};
      doc_->doc_id = std::string(name);
      explicit_ = false;
    }

    auto sent_no = to_int(cols[1]);
    if (!sent_no) {
      throw Error(ErrorCode::MalformedLine,
                  "sentence number is not an integer: '" +
                      std::string(cols[1]) + "'",
                  line_no);
    }
    if (sentence_number_ && *sentence_number_ != *sent_no) end_sentence();
    sentence_number_ = *sent_no;

    Token t;
    t.form = std::string(cols[2]);
    t.pos_coarse = annotation(cols[3]);
    t.ner = annotation(cols[4]);
    t.lemma = std::string(cols[5]);
    t.original = std::string(cols[6]);
    t.ner_coarse = annotation(cols[7]);
    const auto indices = parse_int_list(cols[8], line_no);
    const auto chains = parse_int_list(cols[9], line_no);
    if (indices.size() != chains.size()) {
      throw Error(ErrorCode::MalformedLine,
                  "chain-index and chain-number columns disagree", line_no);
    }
    for (std::size_t i = 0; i < chains.size(); ++i) {
      t.coref.push_back({chains[i], indices[i]});
    }
    std::sort(t.coref.begin(), t.coref.end());
    t.animacy = parse_animacy(cols[10]);
    t.phrase_type = annotation(cols[11]);
    t.pos_fine = annotation(cols[12]);
    sentence_.tokens.push_back(std::move(t));
    lines_.push_back(line_no);
    ++total_tokens_;
  }

  std::vector<Document> take() {
    finish_document();
    return std::move(docs_);
  }

  std::size_t total_tokens() const { return total_tokens_; }

 private:
  void finish_document() {
    end_sentence();
    if (doc_) {
      reindex(*doc_);
      rebuild_chains(*doc_);
      docs_.push_back(std::move(*doc_));
    }
    doc_.reset();
    lines_.clear();
    explicit_ = false;
  }

  struct Run {
    Span span;
    int last_pos = 0;
  };

  void rebuild_chains(Document& doc) {
    std::map<std::pair<int, int>, Run> runs;
    for (const auto& s : doc.sentences) {
      for (const auto& t : s.tokens) {
        for (const auto& tag : t.coref) {
          const auto key = std::make_pair(tag.chain_id, tag.mention_index);
          auto it = runs.find(key);
          if (it == runs.end()) {
            runs.emplace(key, Run{{t.sent_index, t.token_index, t.token_index},
                                  t.doc_token_index});
            continue;
          }
          Run& run = it->second;
          if (run.span.sent != t.sent_index ||
              run.last_pos + 1 != t.doc_token_index) {
            throw Error(ErrorCode::InconsistentChain,
                        "mention " + std::to_string(tag.mention_index) +
                            " of chain " + std::to_string(tag.chain_id) +
                            " is interrupted",
                        lines_[t.doc_token_index]);
          }
          run.span.end = t.token_index;
          run.last_pos = t.doc_token_index;
        }
      }
    }
    std::map<int, GoldChain> chains;
    for (const auto& [key, run] : runs) {
      auto& chain = chains[key.first];
      chain.chain_id = key.first;
      chain.spans.push_back(run.span);
    }
    doc.gold_chains.clear();
    for (auto& [id, chain] : chains) {
      std::sort(chain.spans.begin(), chain.spans.end());
      if (std::adjacent_find(chain.spans.begin(), chain.spans.end()) !=
          chain.spans.end()) {
        throw Error(ErrorCode::InconsistentChain,
                    "chain " + std::to_string(id) +
                        " contains two mentions with identical spans");
      }
      doc.gold_chains.push_back(std::move(chain));
    }
  }

  std::vector<std::string>* warnings_;
  std::vector<Document> docs_;
  std::optional<Document> doc_;
  Sentence sentence_;
  std::optional<int> sentence_number_;
  std::vector<int> lines_;  // source line of every token in the open document
  bool explicit_ = false;
  std::size_t total_tokens_ = 0;
};

std::string join_tags(const std::vector<CorefTag>& tags, bool chain) {
  if (tags.empty()) return std::string(kNull);
  std::string out;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (i) out += '|';
    out += std::to_string(chain ? tags[i].chain_id : tags[i].mention_index);
  }
  return out;
}

void put(std::string& out, std::string_view field) {
  out += field.empty() ? kNull : field;
}

}  // namespace

int Document::token_count() const {
  int n = 0;
  for (const auto& s : sentences) n += static_cast<int>(s.tokens.size());
  return n;
}

std::string Document::text(const Span& span) const {
  std::string out;
  for (int i = span.start; i <= span.end; ++i) {
    if (i > span.start) out += ' ';
    out += token(span.sent, i).form;
  }
  return out;
}

Animacy parse_animacy(std::string_view column) {
  std::string lower(column);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "animate") return Animacy::Animate;
  if (lower == "inanimate") return Animacy::Inanimate;
  return Animacy::Unknown;
}

std::string_view animacy_column(Animacy a) {
  switch (a) {
    case Animacy::Animate: return "animate";
    case Animacy::Inanimate: return "inanimate";
    case Animacy::Unknown: break;
  }
  return kNull;
}

std::vector<Document> parse_conll(std::string_view text,
                                  std::vector<std::string>* warnings) {
  Builder builder(warnings);
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) {
      builder.end_sentence();
      continue;
    }
    if (line.starts_with(kBegin)) {
      builder.begin_document(std::string(trim(line.substr(kBegin.size()))));
      continue;
    }
    if (line.starts_with(kEnd)) {
      builder.end_document();
      continue;
    }
    if (line.front() == '#') continue;
    builder.add_token(line, line_no);
  }
  if (builder.total_tokens() == 0) {
    throw Error(ErrorCode::EmptyInput, "no token lines in input");
  }
  return builder.take();
}

std::string write_conll(std::span<const Document> docs) {
  std::string out;
  for (const auto& doc : docs) {
    out += kBegin;
    out += ' ';
    out += doc.doc_id;
    out += '\n';
    for (const auto& s : doc.sentences) {
      for (const auto& t : s.tokens) {
        out += doc.doc_id;
        out += '\t';
        out += std::to_string(s.index);
        out += '\t';
        out += t.form;
        out += '\t';
        put(out, t.pos_coarse);
        out += '\t';
        put(out, t.ner);
        out += '\t';
        out += t.lemma;
        out += '\t';
        out += t.original;
        out += '\t';
        put(out, t.ner_coarse);
        out += '\t';
        out += join_tags(t.coref, false);
        out += '\t';
        out += join_tags(t.coref, true);
        out += '\t';
        out += animacy_column(t.animacy);
        out += '\t';
        put(out, t.phrase_type);
        out += '\t';
        put(out, t.pos_fine);
        out += '\n';
      }
      out += '\n';
    }
    out += kEnd;
    out += '\n';
  }
  return out;
}

void reindex(Document& doc) {
  int pos = 0;
  for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
    auto& s = doc.sentences[si];
    s.index = static_cast<int>(si);
    for (std::size_t ti = 0; ti < s.tokens.size(); ++ti) {
      auto& t = s.tokens[ti];
      t.sent_index = s.index;
      t.token_index = static_cast<int>(ti);
      t.doc_token_index = pos++;
    }
  }
}

void assign_chain_tags(Document& doc) {
  std::sort(doc.gold_chains.begin(), doc.gold_chains.end(),
            [](const GoldChain& a, const GoldChain& b) {
              return a.chain_id < b.chain_id;
            });
  for (auto& s : doc.sentences) {
    for (auto& t : s.tokens) t.coref.clear();
  }
  for (auto& chain : doc.gold_chains) {
    std::sort(chain.spans.begin(), chain.spans.end());
    for (std::size_t i = 0; i < chain.spans.size(); ++i) {
      const Span& sp = chain.spans[i];
      for (int k = sp.start; k <= sp.end; ++k) {
        doc.sentences[sp.sent].tokens[k].coref.push_back(
            {chain.chain_id, static_cast<int>(i)});
      }
    }
  }
  for (auto& s : doc.sentences) {
    for (auto& t : s.tokens) std::sort(t.coref.begin(), t.coref.end());
  }
}

void validate(const Document& doc) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::InvalidDocument, doc.doc_id + ": " + what);
  };
  if (doc.doc_id.empty() ||
      doc.doc_id.find_first_of(" \t\n") != std::string::npos) {
    fail("document id must be non-empty and free of whitespace");
  }
  int last_pos = -1;
  for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
    const auto& s = doc.sentences[si];
    if (s.index != static_cast<int>(si)) fail("sentence index out of order");
    if (s.tokens.empty()) fail("empty sentence");
    for (std::size_t ti = 0; ti < s.tokens.size(); ++ti) {
      const auto& t = s.tokens[ti];
      if (t.sent_index != s.index || t.token_index != static_cast<int>(ti)) {
        fail("token index fields inconsistent with layout");
      }
      if (t.doc_token_index <= last_pos) {
        fail("doc_token_index not strictly increasing");
      }
      last_pos = t.doc_token_index;
      if (t.form.empty()) fail("empty token form");
    }
  }
  int last_chain = INT32_MIN;
  for (const auto& chain : doc.gold_chains) {
    if (chain.chain_id <= last_chain) fail("chains not sorted by id");
    last_chain = chain.chain_id;
    if (chain.spans.empty()) fail("empty gold chain");
    for (std::size_t i = 0; i < chain.spans.size(); ++i) {
      const Span& sp = chain.spans[i];
      if (sp.sent < 0 || sp.sent >= static_cast<int>(doc.sentences.size()) ||
          sp.start < 0 || sp.start > sp.end ||
          sp.end >= static_cast<int>(doc.sentences[sp.sent].tokens.size())) {
        fail("gold span outside document");
      }
      if (i > 0 && !(chain.spans[i - 1] < sp)) {
        fail("gold spans unsorted or duplicated");
      }
    }
  }
}

std::vector<Document> load_conll(const std::filesystem::path& path,
                                 std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read corpus file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_conll(buf.str(), warnings);
}

void save_conll(const std::filesystem::path& path, std::span<const Document> docs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write corpus file " + path.string());
  out << write_conll(docs);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace hcoref
