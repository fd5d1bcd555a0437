#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hcoref/entity_store.hpp"
#include "hcoref/features.hpp"
#include "hcoref/rng.hpp"

namespace hcoref {

enum class Label { Negative = 0, Positive = 1 };

struct Provenance {
  std::string doc_id;
  int pronoun = 0;
  int candidate = 0;  // entity id (hybrid) or mention id (mention-pair)

  bool operator==(const Provenance&) const = default;
};

struct TrainingExample {
  FeatureVector features;
  Label label = Label::Negative;
  Provenance provenance;
};

// One document's mentions and the partial entities the sieves built. In
// mention-pair mode the store is ignored: every mention is its own candidate.
struct TrainingDocument {
  const MentionSet* ms = nullptr;
  const EntityStore* store = nullptr;
};

struct SamplingOptions {
  FeatureMode mode = FeatureMode::Hybrid;
  int window = 3;
  const EmbeddingTable* embeddings = nullptr;
};

// True when `pronoun` already shares an entity with another mention.
bool resolved_by_rules(int pronoun, const EntityStore& store);

// True when `candidate_entity` holds a mention before `pronoun` that belongs
// to gold chain `chain`.
bool entity_has_chain(const Entity& e, int pronoun, int chain,
                      const std::vector<int>& gold_chain);

// For each pronoun with a gold chain: one positive example with the nearest
// candidate holding a mention of that chain, and one negative for every
// candidate ranked before it. Pronouns without such a candidate contribute
// nothing. In hybrid mode pronouns merged by the rule sieves are skipped,
// and each sampled pronoun is then merged into its positive entity so later
// pronouns see the grown chain. Throws NoGoldChains when no document has any.
std::vector<TrainingExample> build_training_set(
    std::span<const TrainingDocument> docs, const SamplingOptions& opts);

// Encoded examples, row-major.
struct Dataset {
  std::vector<ColumnInfo> columns;
  std::vector<double> x;
  std::vector<int> y;
  std::vector<std::string> group;  // document id per row

  std::size_t rows() const { return y.size(); }
  std::size_t cols() const { return columns.size(); }
  const double* row(std::size_t i) const { return x.data() + i * cols(); }
};

// Codebook frozen from the symbols seen in `examples`.
FeatureCodebook build_codebook(std::span<const TrainingExample> examples,
                               FeatureMode mode, bool embeddings,
                               int embedding_dim);

Dataset encode_dataset(std::span<const TrainingExample> examples,
                       const FeatureCodebook& codebook);

// ---- decision trees -------------------------------------------------------

enum class Criterion { Gini, Entropy };

std::string_view to_string(Criterion c);
Criterion parse_criterion(std::string_view s);

// Impurity of a node holding `pos` positives out of `n` samples. Entropy is
// in bits.
double gini(double pos, double n);
double entropy(double pos, double n);
double impurity(Criterion c, double pos, double n);

// Categorical columns up to this cardinality split on category subsets.
inline constexpr int kMaxSubsetCardinality = 12;

struct TreeNode {
  int feature = -1;  // -1 for a leaf
  bool categorical = false;
  double threshold = 0.0;       // numeric: left when value <= threshold
  std::uint64_t left_set = 0;   // categorical: left when bit `code` is set
  int left = -1;
  int right = -1;
  double value = 0.0;  // positive fraction of the training samples here
  int samples = 0;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  // Index of the leaf reached by `row`.
  int leaf_of(const double* row) const;
  double predict(const double* row) const { return nodes[leaf_of(row)].value; }
  int depth() const;
  bool operator==(const Tree&) const = default;
};

struct TreeParams {
  std::optional<int> max_depth;  // nullopt grows until purity
  Criterion criterion = Criterion::Gini;
  int max_features = 0;  // features tried per node; 0 means sqrt(#columns)
  int min_samples_split = 2;
};

// CART on the rows listed in `sample` (repeats allowed). Throws
// EmptyTrainingSet when `sample` is empty.
Tree train_tree(const Dataset& data, std::span<const int> sample,
                const TreeParams& params, Rng& rng);
Tree train_tree(const Dataset& data, const TreeParams& params, Rng& rng);

// ---- forests ---------------------------------------------------------------

struct GridPoint {
  std::optional<int> max_depth;
  int n_estimators = 100;
  Criterion criterion = Criterion::Gini;

  bool operator==(const GridPoint&) const = default;
};

std::string to_string(const GridPoint& p);

struct ForestModel {
  GridPoint params;
  std::vector<Tree> trees;

  bool operator==(const ForestModel&) const = default;
};

// Bagged CART ensemble. Bootstrap samples are drawn up front from `seed`, and
// each tree's feature sampling uses its own derived stream, so the result
// does not depend on `jobs`.
ForestModel train_forest(const Dataset& data, const GridPoint& params,
                         std::uint64_t seed, int jobs = 1);

// Mean of the trees' leaf fractions.
double predict_proba(const ForestModel& model, const double* row);

// ---- logistic regression ---------------------------------------------------

struct LogisticParams {
  double l2 = 1e-3;
  int epochs = 500;
  double learning_rate = 0.5;
};

// Standardized numeric columns and one-hot categorical columns.
struct LinearModel {
  std::vector<ColumnInfo> columns;
  std::vector<double> mean;   // per numeric column (0 for categorical)
  std::vector<double> scale;  // per numeric column (1 for categorical)
  std::vector<int> offset;    // first expanded index of each column
  std::vector<double> weights;
  double bias = 0.0;

  int expanded_width() const { return static_cast<int>(weights.size()); }
  void expand(const double* row, std::vector<double>& out) const;
  bool operator==(const LinearModel&) const = default;
};

// Fits the design of `data` (means, scales, one-hot offsets) with zero
// coefficients.
LinearModel linear_design(const Dataset& data);

// Mean log-loss plus l2/2 * |w|^2 (bias not penalized) over expanded rows.
// `params` holds the weights followed by the bias; the gradient has the same
// layout.
double logistic_objective(const std::vector<std::vector<double>>& expanded,
                          const std::vector<int>& y,
                          const std::vector<double>& params, double l2,
                          std::vector<double>* gradient);

// Full-batch gradient descent. Deterministic; `seed` is accepted for a
// uniform trainer interface and consumes no randomness.
LinearModel train_logistic(const Dataset& data, const LogisticParams& params,
                           std::uint64_t seed = 0);

double predict_proba(const LinearModel& model, const double* row);

// ---- trained models --------------------------------------------------------

enum class ClassifierKind { Forest, Logistic };

std::string_view to_string(ClassifierKind k);
ClassifierKind parse_classifier(std::string_view s);

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::Forest;
  GridPoint forest;
  LogisticParams logistic;
};

struct Model {
  ClassifierKind kind = ClassifierKind::Forest;
  FeatureCodebook codebook;
  double merge_threshold = 0.5;
  ForestModel forest;
  LinearModel linear;

  FeatureMode mode() const { return codebook.mode(); }
  double score_row(const double* row) const;
  // Throws VocabMismatch when the vector's layout differs from training.
  double score(const FeatureVector& fv) const;
};

// Builds the codebook from `examples`, encodes them and trains.
Model train_model(std::span<const TrainingExample> examples,
                  const ClassifierSpec& spec, FeatureMode mode,
                  int embedding_dim, std::uint64_t seed, int jobs = 1);

// Versioned JSON model file.
std::string model_to_json(const Model& model);
Model model_from_json(const std::string& text);
void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

// ---- evaluation harness ----------------------------------------------------

struct Confusion {
  long tp = 0, fp = 0, fn = 0, tn = 0;

  double precision() const;
  double recall() const;
  double f1() const;
  Confusion& operator+=(const Confusion& o);
};

struct FoldResult {
  int repeat = 0;
  int fold = 0;
  std::vector<std::string> test_documents;
  Confusion confusion;
  double precision = 0, recall = 0, f1 = 0;
};

struct CvResult {
  std::vector<FoldResult> folds;
  double mean_precision = 0, mean_recall = 0, mean_f1 = 0;
};

// Partitions the distinct ids into k folds whose sizes differ by at most one.
// Throws TooFewDocuments when k < 2 or there are fewer than k documents.
std::vector<std::vector<std::string>> document_folds(
    std::vector<std::string> doc_ids, int k, Rng& rng);

struct CvOptions {
  int k = 10;
  int repeats = 1;
  std::uint64_t seed = 1;
  int jobs = 1;
  int embedding_dim = 0;
};

// Classifier-level P/R/F1 of the positive class (probability >= 0.5) with
// document-level folds.
CvResult cross_validate(std::span<const TrainingExample> examples,
                        FeatureMode mode, const ClassifierSpec& spec,
                        const CvOptions& opts);

struct GridSpec {
  std::vector<std::optional<int>> max_depth;
  std::vector<int> n_estimators;
  std::vector<Criterion> criteria;

  // The 11 x 4 x 2 grid of depths, estimator counts and criteria.
  static GridSpec standard();
  std::vector<GridPoint> points() const;
};

struct GridRow {
  GridPoint point;
  CvResult cv;
};

struct GridResult {
  std::vector<GridRow> rows;
  GridPoint best;
  double best_f1 = 0.0;
};

// True when `a` beats `b`: higher mean F1, then fewer estimators, then a
// smaller depth (unbounded counts as largest), then Gini.
bool grid_better(const GridPoint& a, double f1_a, const GridPoint& b,
                 double f1_b);

GridResult grid_search(std::span<const TrainingExample> examples,
                       FeatureMode mode, const GridSpec& grid,
                       const CvOptions& opts);

// CSV table: max_depth,n_estimators,criterion,precision,recall,f1.
std::string grid_table_csv(const GridResult& result);

}  // namespace hcoref
