#include "hcoref/resolver.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <memory>
#include <set>
#include <thread>

#include "hcoref/error.hpp"
#include "json.hpp"

namespace hcoref {

int ResolverConfig::window_for(const Mention& pronoun) const {
  if (pronoun.pronoun_class) {
    auto it = class_windows.find(*pronoun.pronoun_class);
    if (it != class_windows.end()) return it->second;
  }
  return sentence_window;
}

void ResolverConfig::validate() const {
  if (!(merge_threshold >= 0.0 && merge_threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "merge_threshold must lie in [0,1]");
  }
  if (sentence_window < 1) {
    throw Error(ErrorCode::InvalidConfig, "sentence_window must be positive");
  }
  for (const auto& [cls, w] : class_windows) {
    if (w < 1) {
      throw Error(ErrorCode::InvalidConfig,
                  "window for " + std::string(to_string(cls)) + " pronouns must be positive");
    }
  }
}

std::string_view to_string(ResolutionStatus s) {
  return s == ResolutionStatus::Linked ? "Linked" : "NonAnaphoric";
}

// ---- scorers ---------------------------------------------------------------

ModelScorer::ModelScorer(const Model& model, const EmbeddingTable* embeddings)
    : model_(model), embeddings_(embeddings) {
  if (model.codebook.embeddings()) {
    if (!embeddings_) {
      throw Error(ErrorCode::InvalidConfig, "the model was trained with embeddings; none given");
    }
    if (embeddings_->dim() != model.codebook.embedding_dim()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "embedding dimension " + std::to_string(embeddings_->dim()) +
                      " differs from the model's " +
                      std::to_string(model.codebook.embedding_dim()));
    }
  } else {
    embeddings_ = nullptr;
  }
}

double ModelScorer::score(int pronoun, int entity, const MentionSet& ms,
                          const EntityStore& store) const {
  const FeatureOptions opts{model_.mode(), embeddings_};
  return model_.score(extract_pair_features(pronoun, entity, ms, store, opts));
}

double AgreementScorer::score(int pronoun, int entity, const MentionSet& ms,
                              const EntityStore& store) const {
  const AttributeLattice& p = ms[pronoun].attrs;
  const Entity& e = store.entity(entity);
  const bool clash = agreement(p.number, e.attrs.number) == Agreement::Disagree ||
                     agreement(p.gender, e.attrs.gender) == Agreement::Disagree ||
                     agreement(p.animacy, e.attrs.animacy) == Agreement::Disagree ||
                     agreement(effective_person(ms[pronoun]), effective_person(e, ms)) ==
                         Agreement::Disagree;
  return clash ? 0.0 : 1.0;
}

double OracleScorer::score(int pronoun, int entity, const MentionSet& ms,
                           const EntityStore& store) const {
  const auto gold = gold_chain_of_mentions(ms);
  return entity_has_chain(store.entity(entity), pronoun, gold[pronoun], gold) ? 1.0 : 0.0;
}

// ---- sieve 8 ---------------------------------------------------------------

std::vector<int> sieve8_candidates(int pronoun, const EntityStore& store,
                                   const MentionSet& ms, const ResolverConfig& cfg) {
  const int window = cfg.window_for(ms[pronoun]);
  if (cfg.mode == FeatureMode::Hybrid) return order_candidates(pronoun, store, ms, window);
  const EntityStore singletons(ms.mentions);
  return order_candidates(pronoun, singletons, ms, window);
}

Resolution resolve_pronoun(int pronoun, EntityStore& store, const MentionSet& ms,
                           const PronounScorer& scorer, const ResolverConfig& cfg) {
  if (auto m = scorer.mode(); m && *m != cfg.mode) {
    throw Error(ErrorCode::ModelModeMismatch,
                "model is " + std::string(to_string(*m)) + " but the resolver runs " +
                    std::string(to_string(cfg.mode)));
  }
  Resolution r;
  r.pronoun = pronoun;
  const bool pair = cfg.mode == FeatureMode::MentionPair;
  const EntityStore singletons = pair ? EntityStore(ms.mentions) : EntityStore();
  const EntityStore& view = pair ? singletons : store;

  int best = -1;
  double best_score = 0.0;
  for (int c : sieve8_candidates(pronoun, store, ms, cfg)) {
    const double s = scorer.score(pronoun, c, ms, view);
    if (best < 0 || s > best_score) {
      best = c;
      best_score = s;
    }
  }
  if (best < 0) return r;
  r.score = best_score;
  if (best_score < cfg.merge_threshold) return r;

  const int target = pair ? store.entity_of(best) : best;
  r.status = ResolutionStatus::Linked;
  r.antecedent_entity = target;
  r.antecedent_mentions = store.entity(target).mentions;
  store.merge(store.entity_of(pronoun), target);
  return r;
}

// ---- pipeline --------------------------------------------------------------

EntityStore prepare_store(const MentionSet& ms, const PipelineConfig& cfg) {
  EntityStore store =
      cfg.clusters == ClusterSource::Gold ? gold_partial_store(ms) : EntityStore(ms.mentions);
  run_pipeline(ms, cfg.sieves, store);
  return store;
}

ResolvedDocument resolve_document(const Document& doc, const PipelineConfig& cfg,
                                  const PronounScorer& scorer, const Lexicons& lex) {
  cfg.resolver.validate();
  ResolvedDocument rd;
  rd.ms = MentionSet(doc, lex, detect_mentions(doc, lex, cfg.mentions));
  rd.store = prepare_store(rd.ms, cfg);
  const MentionSet& ms = rd.ms;

  std::vector<char> by_rule(ms.size(), 0);
  for (int p = 0; p < ms.size(); ++p) {
    by_rule[p] = ms[p].is_pronoun() && resolved_by_rules(p, rd.store);
  }
  for (int p = 0; p < ms.size(); ++p) {
    if (!ms[p].is_pronoun()) continue;
    if (by_rule[p]) {
      Resolution r;
      r.pronoun = p;
      r.status = ResolutionStatus::Linked;
      r.score = 1.0;
      r.by_rule = true;
      r.antecedent_entity = rd.store.entity_of(p);
      for (int m : rd.store.entity(*r.antecedent_entity).mentions) {
        if (m != p) r.antecedent_mentions.push_back(m);
      }
      rd.resolutions.push_back(std::move(r));
      continue;
    }
    rd.resolutions.push_back(resolve_pronoun(p, rd.store, ms, scorer, cfg.resolver));
  }
  return rd;
}

std::vector<TrainingExample> pipeline_examples(const std::vector<Document>& docs,
                                               const PipelineConfig& cfg,
                                               const Lexicons& lex,
                                               const EmbeddingTable* embeddings) {
  std::vector<MentionSet> sets;
  std::vector<EntityStore> stores;
  sets.reserve(docs.size());
  stores.reserve(docs.size());
  std::vector<TrainingDocument> tds;
  for (const auto& d : docs) {
    sets.emplace_back(d, lex, detect_mentions(d, lex, cfg.mentions));
    stores.push_back(prepare_store(sets.back(), cfg));
  }
  for (std::size_t i = 0; i < docs.size(); ++i) tds.push_back({&sets[i], &stores[i]});
  SamplingOptions opts;
  opts.mode = cfg.resolver.mode;
  opts.window = cfg.resolver.sentence_window;
  opts.embeddings = cfg.resolver.mode == FeatureMode::Hybrid ? embeddings : nullptr;
  return build_training_set(tds, opts);
}

Model train_pipeline_model(const std::vector<Document>& docs, const PipelineConfig& cfg,
                           const ClassifierSpec& spec, const Lexicons& lex,
                           const EmbeddingTable* embeddings, std::uint64_t seed,
                           int jobs) {
  const auto examples = pipeline_examples(docs, cfg, lex, embeddings);
  const bool emb = embeddings && cfg.resolver.mode == FeatureMode::Hybrid;
  Model m = train_model(examples, spec, cfg.resolver.mode, emb ? embeddings->dim() : 0,
                        seed, jobs);
  m.merge_threshold = cfg.resolver.merge_threshold;
  return m;
}

// ---- predictions -----------------------------------------------------------

std::vector<PronounPrediction> to_predictions(const ResolvedDocument& rd) {
  std::vector<PronounPrediction> out;
  for (const auto& r : rd.resolutions) {
    PronounPrediction p;
    p.doc_id = rd.ms.doc->doc_id;
    p.pronoun = rd.ms[r.pronoun].span;
    p.text = rd.ms.text[r.pronoun];
    p.status = r.status;
    p.score = r.score;
    p.by_rule = r.by_rule;
    for (int m : r.antecedent_mentions) p.antecedent.push_back(rd.ms[m].span);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<PronounPrediction> resolve_corpus(const std::vector<Document>& docs,
                                              const PipelineConfig& cfg,
                                              const PronounScorer& scorer,
                                              const Lexicons& lex, int jobs) {
  std::vector<std::size_t> order(docs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return docs[a].doc_id < docs[b].doc_id;
  });
  std::vector<std::vector<PronounPrediction>> per_doc(docs.size());
  auto work = [&](std::size_t i) {
    per_doc[i] = to_predictions(resolve_document(docs[i], cfg, scorer, lex));
  };
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(docs.size())));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < docs.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(jobs);
    for (int j = 0; j < jobs; ++j) {
      pool.emplace_back([&, j] {
        try {
          for (std::size_t i = j; i < docs.size(); i += jobs) work(i);
        } catch (...) {
          errors[j] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::vector<PronounPrediction> preds;
  for (std::size_t i : order) preds.insert(preds.end(), per_doc[i].begin(), per_doc[i].end());
  return preds;
}

namespace {

std::string span_str(const Span& s) {
  return std::to_string(s.sent) + ":" + std::to_string(s.start) + "-" + std::to_string(s.end);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

bool parse_int(const std::string& s, int& out) {
  if (s.empty()) return false;
  std::size_t used = 0;
  try {
    out = std::stoi(s, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == s.size();
}

bool parse_span(const std::string& s, Span& out) {
  const auto colon = s.find(':');
  const auto dash = s.find('-', colon == std::string::npos ? 0 : colon);
  if (colon == std::string::npos || dash == std::string::npos) return false;
  return parse_int(s.substr(0, colon), out.sent) &&
         parse_int(s.substr(colon + 1, dash - colon - 1), out.start) &&
         parse_int(s.substr(dash + 1), out.end) && out.start <= out.end;
}

}  // namespace

std::string write_predictions(const std::vector<PronounPrediction>& preds) {
  std::string out;
  for (const auto& p : preds) {
    char score[32];
    std::snprintf(score, sizeof score, "%.6f", p.score);
    std::string spans;
    for (const auto& s : p.antecedent) {
      if (!spans.empty()) spans += ',';
      spans += span_str(s);
    }
    out += p.doc_id + '\t' + span_str(p.pronoun) + '\t' + p.text + '\t' +
           std::string(to_string(p.status)) + '\t' + score + '\t' +
           (p.by_rule ? "rule" : "model") + '\t' + (spans.empty() ? "-" : spans) + '\n';
  }
  return out;
}

std::vector<PronounPrediction> parse_predictions(const std::string& text) {
  std::vector<PronounPrediction> out;
  int line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto f = split(line, '\t');
    auto bad = [&](const std::string& why) {
      return Error(ErrorCode::MalformedLine,
                   "prediction line " + std::to_string(line_no) + ": " + why, line_no);
    };
    if (f.size() != 7) throw bad("expected 7 tab-separated fields");
    PronounPrediction p;
    p.doc_id = f[0];
    if (!parse_span(f[1], p.pronoun)) throw bad("bad pronoun span '" + f[1] + "'");
    p.text = f[2];
    if (f[3] == "Linked") {
      p.status = ResolutionStatus::Linked;
    } else if (f[3] == "NonAnaphoric") {
      p.status = ResolutionStatus::NonAnaphoric;
    } else {
      throw bad("bad status '" + f[3] + "'");
    }
    try {
      std::size_t used = 0;
      p.score = std::stod(f[4], &used);
      if (used != f[4].size()) throw bad("bad score '" + f[4] + "'");
    } catch (const std::logic_error&) {
      throw bad("bad score '" + f[4] + "'");
    }
    if (f[5] != "rule" && f[5] != "model") throw bad("bad source '" + f[5] + "'");
    p.by_rule = f[5] == "rule";
    if (f[6] != "-") {
      for (const auto& s : split(f[6], ',')) {
        Span sp;
        if (!parse_span(s, sp)) throw bad("bad antecedent span '" + s + "'");
        p.antecedent.push_back(sp);
      }
    }
    if ((p.status == ResolutionStatus::Linked) == p.antecedent.empty()) {
      throw bad("status and antecedent disagree");
    }
    out.push_back(std::move(p));
  }
  return out;
}

// ---- evaluation ------------------------------------------------------------

std::string_view to_string(EvalPolicy p) {
  return p == EvalPolicy::AllPronouns ? "all" : "gold_anaphoric";
}

EvalPolicy parse_eval_policy(std::string_view s) {
  if (s == "all" || s == "all_pronouns" || s == "AllPronouns") return EvalPolicy::AllPronouns;
  if (s == "gold_anaphoric" || s == "gold-anaphoric" || s == "GoldAnaphoricOnly") {
    return EvalPolicy::GoldAnaphoricOnly;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown evaluation policy '" + std::string(s) + "'");
}

double EvalResult::precision() const {
  return linked == 0 ? 0.0 : static_cast<double>(correct) / linked;
}

double EvalResult::recall() const {
  return gold_anaphoric == 0 ? 0.0 : static_cast<double>(correct) / gold_anaphoric;
}

double EvalResult::f1() const {
  const double p = precision(), r = recall();
  return p + r == 0 ? 0.0 : 2 * p * r / (p + r);
}

EvalResult& EvalResult::operator+=(const EvalResult& o) {
  linked += o.linked;
  correct += o.correct;
  gold_anaphoric += o.gold_anaphoric;
  return *this;
}

namespace {

bool before(const Span& a, const Span& b) {
  return a.sent < b.sent || (a.sent == b.sent && a.end < b.start);
}

}  // namespace

EvalResult evaluate(const std::vector<Document>& docs,
                    const std::vector<PronounPrediction>& preds, EvalPolicy policy) {
  std::map<std::string, const Document*> by_id;
  bool any_gold = false;
  for (const auto& d : docs) {
    by_id[d.doc_id] = &d;
    any_gold |= !d.gold_chains.empty();
  }
  if (!any_gold) throw Error(ErrorCode::MissingGold, "no gold chains to evaluate against");

  EvalResult res;
  for (const auto& p : preds) {
    auto it = by_id.find(p.doc_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::MissingGold, "no gold document '" + p.doc_id + "'");
    }
    // Chains listing the pronoun span, and whether any has an earlier span.
    bool anaphoric = false;
    bool correct = false;
    for (const auto& chain : it->second->gold_chains) {
      if (std::find(chain.spans.begin(), chain.spans.end(), p.pronoun) == chain.spans.end()) {
        continue;
      }
      for (const auto& s : chain.spans) {
        if (!before(s, p.pronoun)) continue;
        anaphoric = true;
        if (p.status == ResolutionStatus::Linked &&
            std::find(p.antecedent.begin(), p.antecedent.end(), s) != p.antecedent.end()) {
          correct = true;
        }
      }
    }
    if (policy == EvalPolicy::GoldAnaphoricOnly && !anaphoric) continue;
    res.gold_anaphoric += anaphoric;
    res.linked += p.status == ResolutionStatus::Linked;
    res.correct += correct;
  }
  return res;
}

// ---- ablations -------------------------------------------------------------

std::vector<AblationSetting> standard_ablation_matrix(const GridPoint& forest) {
  std::vector<AblationSetting> out;
  auto add = [&](AblationSetting s) {
    s.classifier.forest = forest;
    out.push_back(std::move(s));
  };
  AblationSetting rules;
  rules.name = "rule_baseline";
  rules.learned = false;
  rules.embeddings = false;
  add(rules);

  AblationSetting pair;
  pair.name = "mention_pair";
  pair.mode = FeatureMode::MentionPair;
  pair.embeddings = false;
  pair.rule_sieves = false;
  add(pair);

  struct Variant {
    const char* name;
    ClusterSource clusters;
    bool emb;
    bool rules;
  };
  for (const Variant& v : {Variant{"hybrid_gold_emb_rules", ClusterSource::Gold, true, true},
                           Variant{"hybrid_system_rules", ClusterSource::System, false, true},
                           Variant{"hybrid_system_emb_rules", ClusterSource::System, true, true},
                           Variant{"hybrid_gold", ClusterSource::Gold, false, false},
                           Variant{"hybrid_gold_emb", ClusterSource::Gold, true, false}}) {
    AblationSetting s;
    s.name = v.name;
    s.clusters = v.clusters;
    s.embeddings = v.emb;
    s.rule_sieves = v.rules;
    add(s);
  }

  AblationSetting reordered;
  reordered.name = "hybrid_reordered_sieves";
  reordered.sieve_order.assign(kDefaultSieveOrder.rbegin(), kDefaultSieveOrder.rend());
  add(reordered);

  AblationSetting logistic;
  logistic.name = "hybrid_logistic";
  logistic.classifier.kind = ClassifierKind::Logistic;
  add(logistic);
  return out;
}

EvalResult run_setting(const AblationSetting& s, const AblationCorpus& corpus,
                       const ResolverConfig& base, EvalPolicy policy,
                       std::uint64_t seed, int jobs) {
  if (!corpus.lex) throw Error(ErrorCode::InvalidConfig, "ablation corpus has no lexicons");
  PipelineConfig cfg;
  cfg.sieves.order = s.sieve_order;
  if (!s.rule_sieves) cfg.sieves = SieveConfig::none();
  cfg.resolver = base;
  cfg.resolver.mode = s.mode;
  cfg.clusters = s.clusters;

  const EmbeddingTable* emb =
      s.embeddings && s.mode == FeatureMode::Hybrid ? corpus.embeddings : nullptr;
  std::optional<Model> model;
  std::unique_ptr<PronounScorer> scorer;
  if (s.learned) {
    model = train_pipeline_model(corpus.train, cfg, s.classifier, *corpus.lex, emb, seed, jobs);
    scorer = std::make_unique<ModelScorer>(*model, emb);
  } else {
    scorer = std::make_unique<AgreementScorer>();
  }

  const auto preds = resolve_corpus(corpus.test, cfg, *scorer, *corpus.lex, jobs);
  return evaluate(corpus.test, preds, policy);
}

std::vector<AblationRow> ablation_run(const std::vector<AblationSetting>& matrix,
                                      const AblationCorpus& corpus,
                                      const ResolverConfig& base, EvalPolicy policy,
                                      std::uint64_t seed, int jobs) {
  std::vector<AblationRow> rows;
  for (const auto& s : matrix) {
    rows.push_back({s, run_setting(s, corpus, base, policy, seed, jobs)});
  }
  return rows;
}

std::string report_table(const std::vector<std::pair<std::string, EvalResult>>& rows) {
  std::size_t width = 6;
  for (const auto& [name, r] : rows) width = std::max(width, name.size());
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %9s  %9s  %9s  %7s  %7s  %7s\n",
                static_cast<int>(width), "system", "precision", "recall", "F1", "linked",
                "correct", "gold");
  out += buf;
  for (const auto& [name, r] : rows) {
    std::snprintf(buf, sizeof buf, "%-*s  %9.2f  %9.2f  %9.2f  %7ld  %7ld  %7ld\n",
                  static_cast<int>(width), name.c_str(), 100 * r.precision(),
                  100 * r.recall(), 100 * r.f1(), r.linked, r.correct, r.gold_anaphoric);
    out += buf;
  }
  return out;
}

std::string report_json(const std::vector<std::pair<std::string, EvalResult>>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [name, r] : rows) {
    j.push_back({{"system", name},
                 {"precision", r.precision()},
                 {"recall", r.recall()},
                 {"f1", r.f1()},
                 {"linked", r.linked},
                 {"correct", r.correct},
                 {"gold_anaphoric", r.gold_anaphoric}});
  }
  return j.dump(2) + "\n";
}

}  // namespace hcoref
