#include "hcoref/features.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <tuple>

#include "hcoref/error.hpp"

namespace hcoref {

std::string_view to_string(FeatureMode m) {
  return m == FeatureMode::Hybrid ? "hybrid" : "mention_pair";
}

FeatureMode parse_feature_mode(std::string_view s) {
  if (s == "hybrid") return FeatureMode::Hybrid;
  if (s == "mention_pair" || s == "mention-pair" || s == "mp") {
    return FeatureMode::MentionPair;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown mode '" + std::string(s) + "'");
}

namespace {

using enum SlotType;
constexpr auto M = SlotLevel::Mention;
constexpr auto E = SlotLevel::Entity;

constexpr std::array<SlotInfo, kSlotCount> kSlots = {{
    {1, "pron_personal", M, false, Bool, 0, ""},
    {2, "pron_demonstrative", M, false, Bool, 0, ""},
    {3, "pron_reflexive", M, false, Bool, 0, ""},
    {4, "pron_third_person", M, false, Bool, 0, ""},
    {5, "pron_speech", M, false, Bool, 0, ""},
    {6, "pron_pos_left1", M, false, Symbol, 0, "pos"},
    {7, "pron_pos_left2", M, false, Symbol, 0, "pos"},
    {8, "pron_pos_left3", M, false, Symbol, 0, "pos"},
    {9, "pron_pos_right1", M, false, Symbol, 0, "pos"},
    {10, "pron_pos_right2", M, false, Symbol, 0, "pos"},
    {11, "pron_pos_right3", M, false, Symbol, 0, "pos"},
    {12, "pron_subject", M, false, Bool, 0, ""},
    {13, "pron_object", M, false, Bool, 0, ""},
    {14, "pron_number", M, false, Code, 4, ""},
    {15, "pron_animacy", M, true, Code, 4, ""},
    {16, "pron_person", M, true, Code, 8, ""},
    {17, "ant_tokens", M, false, Int, 0, ""},
    {18, "ant_pronoun", M, false, Bool, 0, ""},
    {19, "ant_demonstrative", M, false, Bool, 0, ""},
    {20, "ant_pos_left1", M, false, Symbol, 0, "pos"},
    {21, "ant_pos_left2", M, false, Symbol, 0, "pos"},
    {22, "ant_pos_left3", M, false, Symbol, 0, "pos"},
    {23, "ant_pos_right1", M, false, Symbol, 0, "pos"},
    {24, "ant_pos_right2", M, false, Symbol, 0, "pos"},
    {25, "ant_pos_right3", M, false, Symbol, 0, "pos"},
    {26, "ant_number", M, false, Code, 4, ""},
    {27, "ant_subject", M, false, Bool, 0, ""},
    {28, "ant_object", M, false, Bool, 0, ""},
    {29, "chain_mentions", E, true, Int, 0, ""},
    {30, "ant_reflexive", M, true, Bool, 0, ""},
    {31, "ant_type", M, true, Code, 3, ""},
    {32, "chain_first_sentence", E, true, Int, 0, ""},
    {33, "ant_animacy", M, true, Code, 4, ""},
    {34, "ant_person", M, true, Code, 8, ""},
    {35, "ant_ner", M, true, Symbol, 0, "ner"},
    {36, "chain_rank", E, true, Int, 0, ""},
    {37, "chain_animacy", E, true, Code, 4, ""},
    {38, "sentence_distance", M, false, Int, 0, ""},
    {39, "token_distance", M, false, Int, 0, ""},
    {40, "number_agreement", M, false, Code, 3, ""},
    {41, "subject_agreement", M, false, Bool, 0, ""},
    {42, "object_agreement", M, false, Bool, 0, ""},
    {43, "string_match", M, false, Bool, 0, ""},
    {44, "distance_lt3", M, false, Bool, 0, ""},
    {45, "same_sentence", M, false, Bool, 0, ""},
    {46, "chain_min_sentence_distance", E, true, Int, 0, ""},
    {47, "ant_longer", M, true, Bool, 0, ""},
    {48, "animacy_agreement", M, true, Code, 3, ""},
    {49, "person_agreement", M, true, Code, 3, ""},
    {50, "object_subject_same_sentence", M, true, Code, 3, ""},
    {51, "reflexive_subject_same_sentence", M, true, Code, 3, ""},
    {52, "emb_head_distance", M, true, Real, 0, ""},
    {53, "emb_mean_distance", M, true, Real, 0, ""},
    {54, "emb_sentence_distance", M, true, Real, 0, ""},
}};

bool is_embedding_row(int row) { return row >= 52; }

// Bucketed rank: 0,1,2,3 exact, then 4 for ranks 4-7, 5 for 8-15, 6 beyond.
int rank_bucket(int rank) {
  if (rank < 4) return rank;
  if (rank < 8) return 4;
  if (rank < 16) return 5;
  return 6;
}

void context_pos(const Mention& m, const Document& doc, int first_row,
                 FeatureVector& fv) {
  const auto& toks = doc.sentences[m.span.sent].tokens;
  const int n = static_cast<int>(toks.size());
  for (int k = 1; k <= 3; ++k) {
    const int l = m.span.start - k;
    const int r = m.span.end + k;
    fv.symbol[first_row + k - 1] = l >= 0 ? toks[l].pos_coarse : kBoundarySymbol;
    fv.symbol[first_row + 2 + k] = r < n ? toks[r].pos_coarse : kBoundarySymbol;
  }
}

int type_code(const Mention& m) {
  switch (m.kind) {
    case MentionKind::Pronoun: return kTypePronoun;
    case MentionKind::ProperNoun:
    case MentionKind::NamedEntity: return kTypeProper;
    default: return kTypeCommon;
  }
}

double b(bool v) { return v ? 1.0 : 0.0; }

std::vector<double> span_mean(const Span& span, const Document& doc,
                              const EmbeddingTable& table) {
  std::vector<double> mean(table.dim(), 0.0);
  for (int i = span.start; i <= span.end; ++i) {
    auto v = table.lookup(doc.token(span.sent, i).form);
    for (int k = 0; k < table.dim(); ++k) mean[k] += v[k];
  }
  for (auto& x : mean) x /= span.length();
  return mean;
}

}  // namespace

const std::array<SlotInfo, kSlotCount>& slot_table() { return kSlots; }

const SlotInfo& slot(int row) { return kSlots.at(row - 1); }

bool slot_present(int row, FeatureMode mode) {
  return mode == FeatureMode::Hybrid || !slot(row).hybrid_only;
}

bool FeatureVector::has(int row) const {
  if (row < 1 || row > kSlotCount) return false;
  if (is_embedding_row(row) && !has_embeddings) return false;
  return slot_present(row, mode);
}

int nearest_preceding_member(int pronoun, const Entity& entity,
                             const MentionSet& ms) {
  const Mention& p = ms[pronoun];
  int best = -1;
  std::tuple<int, int, int> best_key;
  for (int c : entity.mentions) {
    if (c >= pronoun) break;
    const Mention& m = ms[c];
    if (m.span.overlaps(p.span)) continue;
    const std::tuple key{p.span.sent - m.span.sent, p.first_pos - m.last_pos, -c};
    if (best < 0 || key < best_key) {
      best = c;
      best_key = key;
    }
  }
  return best;
}

ValueSet<Person> effective_person(const Mention& m) {
  if (!m.attrs.person.empty() || m.is_pronoun()) return m.attrs.person;
  return ValueSet<Person>{Person::Third};
}

ValueSet<Person> effective_person(const Entity& e, const MentionSet& ms) {
  ValueSet<Person> out;
  for (int id : e.mentions) out |= effective_person(ms[id]);
  return out;
}

EmbeddingFeatures extract_embedding_features(int pronoun, int antecedent,
                                             const MentionSet& ms,
                                             const EmbeddingTable& table) {
  const Document& doc = *ms.doc;
  const Mention& p = ms[pronoun];
  const Mention& a = ms[antecedent];
  EmbeddingFeatures out;
  auto ph = table.lookup(token_at(doc, p.head_token).form);
  auto ah = table.lookup(token_at(doc, a.head_token).form);
  out.head_distance = euclidean(ph, ah);
  const auto p_mean = span_mean(p.span, doc, table);
  const auto a_mean = span_mean(a.span, doc, table);
  out.mean_distance = euclidean(p_mean, a_mean);
  const auto& sent = doc.sentences[p.span.sent];
  const Span whole{sent.index, 0, static_cast<int>(sent.tokens.size()) - 1};
  out.sentence_distance = euclidean(a_mean, span_mean(whole, doc, table));
  out.pronoun_vec.assign(ph.begin(), ph.end());
  out.antecedent_vec.assign(ah.begin(), ah.end());
  return out;
}

FeatureVector extract_pair_features(int pronoun, int candidate_entity,
                                    const MentionSet& ms,
                                    const EntityStore& store,
                                    const FeatureOptions& opts) {
  const Mention& p = ms[pronoun];
  if (!p.is_pronoun()) {
    throw Error(ErrorCode::NotAPronoun,
                "mention " + std::to_string(pronoun) + " is not a pronoun");
  }
  const Entity& ent = store.entity(candidate_entity);
  const int ant_id = nearest_preceding_member(pronoun, ent, ms);
  if (ant_id < 0) {
    throw Error(ErrorCode::CandidateNotPreceding,
                "entity " + std::to_string(candidate_entity) +
                    " has no mention before pronoun " + std::to_string(pronoun));
  }
  const Mention& a = ms[ant_id];
  const Document& doc = *ms.doc;
  const Lexicons& lex = *ms.lex;
  const bool hybrid = opts.mode == FeatureMode::Hybrid;

  FeatureVector fv;
  fv.mode = opts.mode;
  fv.has_embeddings = hybrid && opts.embeddings != nullptr;
  auto& v = fv.value;

  // Pronoun features.
  const auto pc = p.pronoun_class.value_or(PronounClass::Personal);
  v[1] = b(pc == PronounClass::Personal);
  v[2] = b(pc == PronounClass::Demonstrative);
  v[3] = b(pc == PronounClass::Reflexive);
  v[4] = b(p.attrs.person.contains(Person::Third));
  v[5] = b(lex.is_speech_pronoun(ms.text[pronoun]));
  context_pos(p, doc, 6, fv);
  v[12] = b(p.role == GrammaticalRole::Subject);
  v[13] = b(p.role == GrammaticalRole::Object);
  v[14] = p.attrs.number.bits();

  // Antecedent features, from the member nearest to the pronoun. Attribute
  // slots read the entity's shared lattice.
  v[17] = a.span.length();
  v[18] = b(a.is_pronoun());
  v[19] = b(a.kind == MentionKind::Demonstrative ||
            a.pronoun_class == PronounClass::Demonstrative);
  context_pos(a, doc, 20, fv);
  v[26] = ent.attrs.number.bits();
  v[27] = b(a.role == GrammaticalRole::Subject);
  v[28] = b(a.role == GrammaticalRole::Object);

  // Relational features.
  const int sent_dist = p.span.sent - a.span.sent;
  const int tok_dist = p.first_pos - a.last_pos;
  v[38] = sent_dist;
  v[39] = tok_dist;
  v[40] = static_cast<int>(agreement(p.attrs.number, ent.attrs.number));
  v[41] = b(p.role == GrammaticalRole::Subject && a.role == GrammaticalRole::Subject);
  v[42] = b(p.role == GrammaticalRole::Object && a.role == GrammaticalRole::Object);
  v[43] = b(ms.text[pronoun] == ms.text[ant_id]);
  v[44] = b(tok_dist < 3);
  v[45] = b(sent_dist == 0);

  if (hybrid) {
    v[15] = p.attrs.animacy.bits();
    v[16] = p.attrs.person.bits();
    v[29] = ent.size();
    v[30] = b(a.pronoun_class == PronounClass::Reflexive);
    v[31] = type_code(a);
    v[32] = ms[ent.first_mention].span.sent;
    v[33] = a.attrs.animacy.bits();
    v[34] = effective_person(a).bits();
    fv.symbol[35] = a.ner.empty() ? "O" : a.ner;
    const auto ids = store.entity_ids();
    const int rank = static_cast<int>(
        std::lower_bound(ids.begin(), ids.end(), ent.id) - ids.begin());
    v[36] = rank_bucket(rank);
    v[37] = ent.attrs.animacy.bits();
    int min_dist = sent_dist;
    for (int id : ent.mentions) {
      if (id == pronoun) continue;
      min_dist = std::min(min_dist, std::abs(p.span.sent - ms[id].span.sent));
    }
    v[46] = min_dist;
    v[47] = b(a.span.length() > p.span.length());
    v[48] = static_cast<int>(agreement(p.attrs.animacy, ent.attrs.animacy));
    v[49] = static_cast<int>(
        agreement(p.attrs.person, effective_person(ent, ms)));
    const int same = sent_dist == 0 ? kCondSameSentence : kCondOtherSentence;
    v[50] = p.role == GrammaticalRole::Object && a.role == GrammaticalRole::Subject
                ? same
                : kCondNotMet;
    v[51] = pc == PronounClass::Reflexive && a.role == GrammaticalRole::Subject
                ? same
                : kCondNotMet;
    if (fv.has_embeddings) {
      auto e = extract_embedding_features(pronoun, ant_id, ms, *opts.embeddings);
      v[52] = e.head_distance;
      v[53] = e.mean_distance;
      v[54] = e.sentence_distance;
      fv.pronoun_embedding = std::move(e.pronoun_vec);
      fv.antecedent_embedding = std::move(e.antecedent_vec);
    }
  }
  return fv;
}

FeatureCodebook::FeatureCodebook(FeatureMode mode, bool embeddings,
                                 int embedding_dim)
    : mode_(mode), embeddings_(embeddings),
      embedding_dim_(embeddings ? embedding_dim : 0) {
  vocab_["pos"];
  vocab_["ner"];
}

void FeatureCodebook::observe(const FeatureVector& fv) {
  if (frozen_) throw Error(ErrorCode::VocabMismatch, "codebook is frozen");
  for (const auto& s : kSlots) {
    if (s.type != Symbol || !fv.has(s.row)) continue;
    const auto& sym = fv.symbol[s.row];
    if (sym == kBoundarySymbol) continue;
    auto& idx = index_[s.vocab];
    idx.emplace(sym, 0);
  }
}

void FeatureCodebook::freeze() {
  for (auto& [name, idx] : index_) {
    std::vector<std::string> syms;
    for (const auto& [sym, _] : idx) syms.push_back(sym);
    set_vocabulary(name, std::move(syms));
  }
  vocab_.try_emplace("pos");
  vocab_.try_emplace("ner");
  frozen_ = true;
}

void FeatureCodebook::set_vocabulary(const std::string& vocab,
                                     std::vector<std::string> syms) {
  std::sort(syms.begin(), syms.end());
  syms.erase(std::unique(syms.begin(), syms.end()), syms.end());
  auto& idx = index_[vocab];
  idx.clear();
  for (std::size_t i = 0; i < syms.size(); ++i) {
    idx[syms[i]] = static_cast<int>(i) + 2;
  }
  vocab_[vocab] = std::move(syms);
  frozen_ = true;
}

int FeatureCodebook::code(const std::string& vocab,
                          const std::string& symbol) const {
  if (symbol == kBoundarySymbol) return kBoundaryCode;
  auto it = index_.find(vocab);
  if (it == index_.end()) return kUnknownCode;
  auto s = it->second.find(symbol);
  return s == it->second.end() ? kUnknownCode : s->second;
}

std::vector<ColumnInfo> FeatureCodebook::columns() const {
  std::vector<ColumnInfo> cols;
  for (const auto& s : kSlots) {
    if (!slot_present(s.row, mode_)) continue;
    if (is_embedding_row(s.row) && !embeddings_) continue;
    ColumnInfo c;
    c.name = s.name;
    if (s.type == Code) {
      c.categorical = true;
      c.cardinality = s.cardinality;
    } else if (s.type == Symbol) {
      c.categorical = true;
      auto it = vocab_.find(s.vocab);
      c.cardinality =
          2 + (it == vocab_.end() ? 0 : static_cast<int>(it->second.size()));
    }
    cols.push_back(std::move(c));
  }
  if (embeddings_) {
    for (int k = 0; k < embedding_dim_; ++k) {
      cols.push_back({"pron_emb_" + std::to_string(k), false, 0});
    }
    for (int k = 0; k < embedding_dim_; ++k) {
      cols.push_back({"ant_emb_" + std::to_string(k), false, 0});
    }
  }
  return cols;
}

std::size_t FeatureCodebook::width() const { return columns().size(); }

void FeatureCodebook::encode(const FeatureVector& fv,
                             std::vector<double>& out) const {
  if (fv.mode != mode_ || fv.has_embeddings != embeddings_) {
    throw Error(ErrorCode::VocabMismatch,
                "feature layout (" + std::string(to_string(fv.mode)) +
                    (fv.has_embeddings ? "+emb" : "") + ") does not match codebook (" +
                    std::string(to_string(mode_)) + (embeddings_ ? "+emb" : "") + ")");
  }
  for (const auto& s : kSlots) {
    if (!fv.has(s.row)) continue;
    if (s.type == Symbol) {
      out.push_back(code(s.vocab, fv.symbol[s.row]));
    } else {
      out.push_back(fv.value[s.row]);
    }
  }
  if (embeddings_) {
    if (static_cast<int>(fv.pronoun_embedding.size()) != embedding_dim_ ||
        static_cast<int>(fv.antecedent_embedding.size()) != embedding_dim_) {
      throw Error(ErrorCode::DimensionMismatch,
                  "embedding block does not match codebook dimension " +
                      std::to_string(embedding_dim_));
    }
    out.insert(out.end(), fv.pronoun_embedding.begin(), fv.pronoun_embedding.end());
    out.insert(out.end(), fv.antecedent_embedding.begin(),
               fv.antecedent_embedding.end());
  }
}

}  // namespace hcoref
