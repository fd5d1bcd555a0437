#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hcoref/embeddings.hpp"
#include "hcoref/learner.hpp"
#include "hcoref/sieves.hpp"

namespace hcoref {

struct ResolverConfig {
  double merge_threshold = 0.5;
  int sentence_window = 3;
  std::map<PronounClass, int> class_windows;  // per pronoun class overrides
  FeatureMode mode = FeatureMode::Hybrid;

  int window_for(const Mention& pronoun) const;
  // Throws InvalidConfig for a threshold outside [0,1] or a window < 1.
  void validate() const;
};

enum class ResolutionStatus { Linked, NonAnaphoric };

std::string_view to_string(ResolutionStatus s);

struct Resolution {
  int pronoun = 0;
  std::optional<int> antecedent_entity;
  std::vector<int> antecedent_mentions;  // the entity's members when linked
  double score = 0.0;
  ResolutionStatus status = ResolutionStatus::NonAnaphoric;
  bool by_rule = false;  // merged by a rule sieve before sieve 8 ran
};

// Scores a (pronoun, candidate entity) pair. Scorers backed by a trained
// model report its feature mode; the others accept either pathway.
class PronounScorer {
 public:
  virtual ~PronounScorer() = default;
  virtual std::optional<FeatureMode> mode() const { return std::nullopt; }
  virtual double score(int pronoun, int entity, const MentionSet& ms,
                       const EntityStore& store) const = 0;
};

class ModelScorer : public PronounScorer {
 public:
  // `embeddings` is required when the model was trained with them.
  ModelScorer(const Model& model, const EmbeddingTable* embeddings);
  std::optional<FeatureMode> mode() const override { return model_.mode(); }
  double score(int pronoun, int entity, const MentionSet& ms,
               const EntityStore& store) const override;

 private:
  const Model& model_;
  const EmbeddingTable* embeddings_;
};

// Rule baseline: 1 when number, gender, animacy and person do not clash,
// 0 otherwise. With the nearest-wins tie rule this links the closest
// agreeing entity.
class AgreementScorer : public PronounScorer {
 public:
  double score(int pronoun, int entity, const MentionSet& ms,
               const EntityStore& store) const override;
};

// 1 exactly when the entity holds an earlier mention of the pronoun's gold
// chain, 0 otherwise.
class OracleScorer : public PronounScorer {
 public:
  double score(int pronoun, int entity, const MentionSet& ms,
               const EntityStore& store) const override;
};

class FunctionScorer : public PronounScorer {
 public:
  using Fn = std::function<double(int pronoun, int entity, const MentionSet&,
                                  const EntityStore&)>;
  explicit FunctionScorer(Fn fn, std::optional<FeatureMode> mode = std::nullopt)
      : fn_(std::move(fn)), mode_(mode) {}
  std::optional<FeatureMode> mode() const override { return mode_; }
  double score(int pronoun, int entity, const MentionSet& ms,
               const EntityStore& store) const override {
    return fn_(pronoun, entity, ms, store);
  }

 private:
  Fn fn_;
  std::optional<FeatureMode> mode_;
};

// Candidates for the learned sieve, nearest first. Hybrid: entities of
// `store`. MentionPair: preceding mention ids, each scored as a singleton.
std::vector<int> sieve8_candidates(int pronoun, const EntityStore& store,
                                   const MentionSet& ms, const ResolverConfig& cfg);

// Scores every candidate and links the pronoun to the best one when its
// score reaches the threshold, merging it into that entity. Ties go to the
// nearer candidate. Throws ModelModeMismatch when the scorer's mode differs
// from cfg.mode.
Resolution resolve_pronoun(int pronoun, EntityStore& store, const MentionSet& ms,
                           const PronounScorer& scorer, const ResolverConfig& cfg);

// Where the partial entities seen by the learned sieve come from.
enum class ClusterSource { System, Gold };

struct PipelineConfig {
  SieveConfig sieves;
  ResolverConfig resolver;
  ClusterSource clusters = ClusterSource::System;
  MentionOptions mentions;
};

// Partial entities before sieve 8: the rule sieves applied to singletons
// (System) or to the gold non-pronoun chains (Gold).
EntityStore prepare_store(const MentionSet& ms, const PipelineConfig& cfg);

struct ResolvedDocument {
  MentionSet ms;
  EntityStore store;
  std::vector<Resolution> resolutions;  // one per pronoun, document order
};

// Mentions, rule sieves, then sieve 8 over the pronouns in document order.
// `doc` and `lex` must outlive the result.
ResolvedDocument resolve_document(const Document& doc, const PipelineConfig& cfg,
                                  const PronounScorer& scorer, const Lexicons& lex);

// Trains the sieve-8 classifier on documents prepared as in `cfg`.
Model train_pipeline_model(const std::vector<Document>& docs, const PipelineConfig& cfg,
                           const ClassifierSpec& spec, const Lexicons& lex,
                           const EmbeddingTable* embeddings, std::uint64_t seed,
                           int jobs = 1);

// Examples only, for cross-validation and grid search.
std::vector<TrainingExample> pipeline_examples(const std::vector<Document>& docs,
                                               const PipelineConfig& cfg,
                                               const Lexicons& lex,
                                               const EmbeddingTable* embeddings);

// ---- predictions and evaluation --------------------------------------------

struct PronounPrediction {
  std::string doc_id;
  Span pronoun;
  std::string text;
  ResolutionStatus status = ResolutionStatus::NonAnaphoric;
  double score = 0.0;
  bool by_rule = false;
  std::vector<Span> antecedent;

  bool operator==(const PronounPrediction&) const = default;
};

std::vector<PronounPrediction> to_predictions(const ResolvedDocument& rd);

// Resolves every document on up to `jobs` threads. Predictions are grouped
// by document in ascending document-id order, whatever the completion order.
std::vector<PronounPrediction> resolve_corpus(const std::vector<Document>& docs,
                                              const PipelineConfig& cfg,
                                              const PronounScorer& scorer,
                                              const Lexicons& lex, int jobs = 1);

// Tab-separated, one pronoun per line:
//   doc  sent:start-end  text  status  score  source  spans
// where source is "rule" or "model" and spans is a comma list or "-".
std::string write_predictions(const std::vector<PronounPrediction>& preds);
// Throws MalformedLine.
std::vector<PronounPrediction> parse_predictions(const std::string& text);

enum class EvalPolicy { AllPronouns, GoldAnaphoricOnly };

std::string_view to_string(EvalPolicy p);
EvalPolicy parse_eval_policy(std::string_view s);

struct EvalResult {
  long linked = 0;
  long correct = 0;
  long gold_anaphoric = 0;

  double precision() const;
  double recall() const;
  double f1() const;
  EvalResult& operator+=(const EvalResult& o);
};

// A pronoun is gold-anaphoric when its span belongs to a gold chain with an
// earlier, non-overlapping span. A Linked pronoun is correct when it is
// gold-anaphoric and its antecedent spans include an earlier span of its
// chain. Under GoldAnaphoricOnly other pronouns are ignored. Throws
// MissingGold when a prediction names an unknown document or no document has
// gold chains.
EvalResult evaluate(const std::vector<Document>& docs,
                    const std::vector<PronounPrediction>& preds, EvalPolicy policy);

// ---- ablations --------------------------------------------------------------

struct AblationSetting {
  std::string name;
  bool learned = true;  // false: rule sieves plus the agreement scorer
  FeatureMode mode = FeatureMode::Hybrid;
  ClusterSource clusters = ClusterSource::System;
  bool embeddings = true;
  bool rule_sieves = true;
  std::vector<std::string> sieve_order = kDefaultSieveOrder;
  ClassifierSpec classifier;
};

struct AblationCorpus {
  std::vector<Document> train;
  std::vector<Document> test;
  const Lexicons* lex = nullptr;
  const EmbeddingTable* embeddings = nullptr;
};

struct AblationRow {
  AblationSetting setting;
  EvalResult result;
};

// The standard matrix: rule baseline, mention-pair baseline, hybrid
// variants over cluster source, embeddings and rule sieves, a reordered
// pipeline and the logistic swap. `forest` is used by every learned row.
std::vector<AblationSetting> standard_ablation_matrix(const GridPoint& forest);

// Runs one configuration end to end: train on corpus.train, resolve and
// score corpus.test.
EvalResult run_setting(const AblationSetting& s, const AblationCorpus& corpus,
                       const ResolverConfig& base, EvalPolicy policy,
                       std::uint64_t seed, int jobs = 1);

std::vector<AblationRow> ablation_run(const std::vector<AblationSetting>& matrix,
                                      const AblationCorpus& corpus,
                                      const ResolverConfig& base, EvalPolicy policy,
                                      std::uint64_t seed, int jobs = 1);

// Fixed-width table with precision, recall and F1 columns, and its JSON
// counterpart.
std::string report_table(const std::vector<std::pair<std::string, EvalResult>>& rows);
std::string report_json(const std::vector<std::pair<std::string, EvalResult>>& rows);

}  // namespace hcoref
