#include <algorithm>
#include <cmath>
#include <thread>

#include "hcoref/error.hpp"
#include "hcoref/learner.hpp"

namespace hcoref {

std::string to_string(const GridPoint& p) {
  std::string out = "max_depth=";
  out += p.max_depth ? std::to_string(*p.max_depth) : "None";
  out += " n_estimators=" + std::to_string(p.n_estimators);
  out += " criterion=" + std::string(to_string(p.criterion));
  return out;
}

ForestModel train_forest(const Dataset& data, const GridPoint& params,
                         std::uint64_t seed, int jobs) {
  if (data.rows() == 0) {
    throw Error(ErrorCode::EmptyTrainingSet, "no training examples");
  }
  if (params.n_estimators < 1) {
    throw Error(ErrorCode::InvalidConfig, "n_estimators must be positive");
  }
  const int n = static_cast<int>(data.rows());
  const int trees = params.n_estimators;

  std::vector<std::vector<int>> samples(trees, std::vector<int>(n));
  Rng boot(derive_seed(seed, 0));
  for (auto& s : samples) {
    for (auto& i : s) i = static_cast<int>(boot.index(n));
  }

  ForestModel model;
  model.params = params;
  model.trees.resize(trees);
  TreeParams tp;
  tp.max_depth = params.max_depth;
  tp.criterion = params.criterion;
  auto work = [&](int t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t) + 1));
    model.trees[t] = train_tree(data, samples[t], tp, rng);
  };

  jobs = std::clamp(jobs, 1, trees);
  if (jobs == 1) {
    for (int t = 0; t < trees; ++t) work(t);
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) {
      pool.emplace_back([&, j] {
        for (int t = j; t < trees; t += jobs) work(t);
      });
    }
    for (auto& th : pool) th.join();
  }
  return model;
}

double predict_proba(const ForestModel& model, const double* row) {
  if (model.trees.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& t : model.trees) sum += t.predict(row);
  return sum / static_cast<double>(model.trees.size());
}

// ---- logistic regression ---------------------------------------------------

LinearModel linear_design(const Dataset& data) {
  LinearModel m;
  m.columns = data.columns;
  const std::size_t cols = data.cols();
  m.mean.assign(cols, 0.0);
  m.scale.assign(cols, 1.0);
  m.offset.assign(cols, 0);
  int width = 0;
  const double n = static_cast<double>(data.rows());
  for (std::size_t c = 0; c < cols; ++c) {
    m.offset[c] = width;
    if (data.columns[c].categorical) {
      width += data.columns[c].cardinality;
      continue;
    }
    width += 1;
    if (n == 0) continue;
    double sum = 0.0;
    for (std::size_t r = 0; r < data.rows(); ++r) sum += data.row(r)[c];
    const double mean = sum / n;
    double var = 0.0;
    for (std::size_t r = 0; r < data.rows(); ++r) {
      const double d = data.row(r)[c] - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / n);
    m.mean[c] = mean;
    m.scale[c] = sd > 1e-12 ? sd : 1.0;
  }
  m.weights.assign(width, 0.0);
  return m;
}

void LinearModel::expand(const double* row, std::vector<double>& out) const {
  out.assign(weights.size(), 0.0);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].categorical) {
      const auto code = static_cast<long long>(row[c]);
      if (code >= 0 && code < columns[c].cardinality) out[offset[c] + code] = 1.0;
    } else {
      out[offset[c]] = (row[c] - mean[c]) / scale[c];
    }
  }
}

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

}  // namespace

double logistic_objective(const std::vector<std::vector<double>>& expanded,
                          const std::vector<int>& y,
                          const std::vector<double>& params, double l2,
                          std::vector<double>* gradient) {
  const std::size_t w = params.size() - 1;
  const double n = static_cast<double>(expanded.size());
  double loss = 0.0;
  if (gradient) gradient->assign(params.size(), 0.0);
  for (std::size_t i = 0; i < expanded.size(); ++i) {
    double z = params[w];
    for (std::size_t j = 0; j < w; ++j) z += params[j] * expanded[i][j];
    // -[y log s(z) + (1-y) log(1-s(z))] = softplus(z) - y z
    loss += softplus(z) - y[i] * z;
    if (gradient) {
      const double r = sigmoid(z) - y[i];
      for (std::size_t j = 0; j < w; ++j) (*gradient)[j] += r * expanded[i][j];
      (*gradient)[w] += r;
    }
  }
  if (n > 0) {
    loss /= n;
    if (gradient) {
      for (auto& g : *gradient) g /= n;
    }
  }
  double reg = 0.0;
  for (std::size_t j = 0; j < w; ++j) {
    reg += params[j] * params[j];
    if (gradient) (*gradient)[j] += l2 * params[j];
  }
  return loss + 0.5 * l2 * reg;
}

LinearModel train_logistic(const Dataset& data, const LogisticParams& params,
                           std::uint64_t /*seed*/) {
  if (data.rows() == 0) {
    throw Error(ErrorCode::EmptyTrainingSet, "no training examples");
  }
  LinearModel m = linear_design(data);
  std::vector<std::vector<double>> expanded(data.rows());
  for (std::size_t r = 0; r < data.rows(); ++r) m.expand(data.row(r), expanded[r]);
  std::vector<double> theta(m.weights.size() + 1, 0.0);
  std::vector<double> grad;
  for (int e = 0; e < params.epochs; ++e) {
    logistic_objective(expanded, data.y, theta, params.l2, &grad);
    for (std::size_t j = 0; j < theta.size(); ++j) {
      theta[j] -= params.learning_rate * grad[j];
    }
  }
  std::copy(theta.begin(), theta.end() - 1, m.weights.begin());
  m.bias = theta.back();
  return m;
}

double predict_proba(const LinearModel& model, const double* row) {
  double z = model.bias;
  for (std::size_t c = 0; c < model.columns.size(); ++c) {
    if (model.columns[c].categorical) {
      const auto code = static_cast<long long>(row[c]);
      if (code >= 0 && code < model.columns[c].cardinality) {
        z += model.weights[model.offset[c] + code];
      }
    } else {
      z += model.weights[model.offset[c]] * (row[c] - model.mean[c]) / model.scale[c];
    }
  }
  return sigmoid(z);
}

// ---- models ----------------------------------------------------------------

std::string_view to_string(ClassifierKind k) {
  return k == ClassifierKind::Forest ? "forest" : "logistic";
}

ClassifierKind parse_classifier(std::string_view s) {
  if (s == "forest" || s == "random_forest") return ClassifierKind::Forest;
  if (s == "logistic" || s == "logistic_regression") return ClassifierKind::Logistic;
  throw Error(ErrorCode::InvalidConfig, "unknown classifier '" + std::string(s) + "'");
}

double Model::score_row(const double* row) const {
  return kind == ClassifierKind::Forest ? predict_proba(forest, row)
                                        : predict_proba(linear, row);
}

double Model::score(const FeatureVector& fv) const {
  std::vector<double> row;
  row.reserve(codebook.width());
  codebook.encode(fv, row);
  return score_row(row.data());
}

Model train_model(std::span<const TrainingExample> examples,
                  const ClassifierSpec& spec, FeatureMode mode,
                  int embedding_dim, std::uint64_t seed, int jobs) {
  if (examples.empty()) {
    throw Error(ErrorCode::EmptyTrainingSet, "no training examples");
  }
  Model m;
  m.kind = spec.kind;
  const bool emb = examples.front().features.has_embeddings;
  m.codebook = build_codebook(examples, mode, emb, emb ? embedding_dim : 0);
  const Dataset data = encode_dataset(examples, m.codebook);
  if (spec.kind == ClassifierKind::Forest) {
    m.forest = train_forest(data, spec.forest, seed, jobs);
  } else {
    m.linear = train_logistic(data, spec.logistic, seed);
  }
  return m;
}

}  // namespace hcoref
