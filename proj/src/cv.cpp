#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "hcoref/error.hpp"
#include "hcoref/learner.hpp"

namespace hcoref {

namespace {

double ratio(long a, long b) { return b == 0 ? 0.0 : static_cast<double>(a) / b; }

}  // namespace

double Confusion::precision() const { return ratio(tp, tp + fp); }
double Confusion::recall() const { return ratio(tp, tp + fn); }

double Confusion::f1() const {
  const double p = precision(), r = recall();
  return p + r == 0 ? 0.0 : 2 * p * r / (p + r);
}

Confusion& Confusion::operator+=(const Confusion& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  tn += o.tn;
  return *this;
}

std::vector<std::vector<std::string>> document_folds(
    std::vector<std::string> doc_ids, int k, Rng& rng) {
  std::sort(doc_ids.begin(), doc_ids.end());
  doc_ids.erase(std::unique(doc_ids.begin(), doc_ids.end()), doc_ids.end());
  if (k < 2 || static_cast<int>(doc_ids.size()) < k) {
    throw Error(ErrorCode::TooFewDocuments,
                std::to_string(doc_ids.size()) + " documents for " + std::to_string(k) +
                    "-fold cross-validation");
  }
  rng.shuffle(doc_ids);
  std::vector<std::vector<std::string>> folds(k);
  for (std::size_t i = 0; i < doc_ids.size(); ++i) folds[i % k].push_back(doc_ids[i]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

CvResult cross_validate(std::span<const TrainingExample> examples,
                        FeatureMode mode, const ClassifierSpec& spec,
                        const CvOptions& opts) {
  std::vector<std::string> ids;
  for (const auto& ex : examples) ids.push_back(ex.provenance.doc_id);
  const int dim = opts.embedding_dim;

  CvResult result;
  for (int rep = 0; rep < opts.repeats; ++rep) {
    Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(rep)));
    const auto folds = document_folds(ids, opts.k, rng);
    for (int f = 0; f < opts.k; ++f) {
      const std::set<std::string> test(folds[f].begin(), folds[f].end());
      std::vector<TrainingExample> train;
      std::vector<const TrainingExample*> held;
      for (const auto& ex : examples) {
        if (test.count(ex.provenance.doc_id)) {
          held.push_back(&ex);
        } else {
          train.push_back(ex);
        }
      }
      const std::uint64_t seed =
          derive_seed(opts.seed, 1000 + static_cast<std::uint64_t>(rep * opts.k + f));
      const Model model = train_model(train, spec, mode, dim, seed, opts.jobs);

      FoldResult fr;
      fr.repeat = rep;
      fr.fold = f;
      fr.test_documents = folds[f];
      for (const TrainingExample* ex : held) {
        const bool predicted = model.score(ex->features) >= 0.5;
        const bool actual = ex->label == Label::Positive;
        if (predicted && actual) ++fr.confusion.tp;
        else if (predicted) ++fr.confusion.fp;
        else if (actual) ++fr.confusion.fn;
        else ++fr.confusion.tn;
      }
      fr.precision = fr.confusion.precision();
      fr.recall = fr.confusion.recall();
      fr.f1 = fr.confusion.f1();
      result.folds.push_back(std::move(fr));
    }
  }
  for (const auto& f : result.folds) {
    result.mean_precision += f.precision;
    result.mean_recall += f.recall;
    result.mean_f1 += f.f1;
  }
  if (!result.folds.empty()) {
    const double n = static_cast<double>(result.folds.size());
    result.mean_precision /= n;
    result.mean_recall /= n;
    result.mean_f1 /= n;
  }
  return result;
}

GridSpec GridSpec::standard() {
  GridSpec g;
  g.max_depth.push_back(std::nullopt);
  for (int d = 10; d <= 100; d += 10) g.max_depth.push_back(d);
  g.n_estimators = {100, 200, 500, 1000};
  g.criteria = {Criterion::Gini, Criterion::Entropy};
  return g;
}

std::vector<GridPoint> GridSpec::points() const {
  std::vector<GridPoint> out;
  for (const auto& d : max_depth) {
    for (int n : n_estimators) {
      for (Criterion c : criteria) out.push_back({d, n, c});
    }
  }
  return out;
}

bool grid_better(const GridPoint& a, double f1_a, const GridPoint& b,
                 double f1_b) {
  if (f1_a != f1_b) return f1_a > f1_b;
  if (a.n_estimators != b.n_estimators) return a.n_estimators < b.n_estimators;
  if (a.max_depth != b.max_depth) {
    if (!a.max_depth) return false;
    if (!b.max_depth) return true;
    return *a.max_depth < *b.max_depth;
  }
  return a.criterion == Criterion::Gini && b.criterion != Criterion::Gini;
}

GridResult grid_search(std::span<const TrainingExample> examples,
                       FeatureMode mode, const GridSpec& grid,
                       const CvOptions& opts) {
  const auto points = grid.points();
  if (points.empty()) throw Error(ErrorCode::InvalidConfig, "empty grid");
  GridResult result;
  for (const auto& p : points) {
    ClassifierSpec spec;
    spec.kind = ClassifierKind::Forest;
    spec.forest = p;
    GridRow row{p, cross_validate(examples, mode, spec, opts)};
    if (result.rows.empty() || grid_better(p, row.cv.mean_f1, result.best, result.best_f1)) {
      result.best = p;
      result.best_f1 = row.cv.mean_f1;
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::string grid_table_csv(const GridResult& result) {
  std::ostringstream out;
  out.precision(17);
  out << "max_depth,n_estimators,criterion,precision,recall,f1\n";
  for (const auto& r : result.rows) {
    out << (r.point.max_depth ? std::to_string(*r.point.max_depth) : "None") << ','
        << r.point.n_estimators << ',' << to_string(r.point.criterion) << ','
        << r.cv.mean_precision << ',' << r.cv.mean_recall << ',' << r.cv.mean_f1 << '\n';
  }
  return out.str();
}

}  // namespace hcoref
