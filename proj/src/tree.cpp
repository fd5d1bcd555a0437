#include <algorithm>
#include <array>
#include <cmath>

#include "hcoref/error.hpp"
#include "hcoref/learner.hpp"

namespace hcoref {

std::string_view to_string(Criterion c) {
  return c == Criterion::Gini ? "gini" : "entropy";
}

Criterion parse_criterion(std::string_view s) {
  if (s == "gini" || s == "Gini") return Criterion::Gini;
  if (s == "entropy" || s == "Entropy") return Criterion::Entropy;
  throw Error(ErrorCode::InvalidConfig, "unknown criterion '" + std::string(s) + "'");
}

double gini(double pos, double n) {
  if (n <= 0) return 0.0;
  const double p = pos / n;
  return 2.0 * p * (1.0 - p);
}

double entropy(double pos, double n) {
  if (n <= 0) return 0.0;
  const double p = pos / n;
  double h = 0.0;
  if (p > 0) h -= p * std::log2(p);
  if (p < 1) h -= (1 - p) * std::log2(1 - p);
  return h;
}

double impurity(Criterion c, double pos, double n) {
  return c == Criterion::Gini ? gini(pos, n) : entropy(pos, n);
}

int Tree::leaf_of(const double* row) const {
  int i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& n = nodes[i];
    const double v = row[n.feature];
    bool left;
    if (n.categorical) {
      const auto code = static_cast<long long>(v);
      left = code >= 0 && code < 64 && ((n.left_set >> code) & 1u);
    } else {
      left = v <= n.threshold;
    }
    i = left ? n.left : n.right;
  }
  return i;
}

int Tree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<int> d(nodes.size(), 0);
  int best = 0;
  // Children are always appended after their parent.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].is_leaf()) continue;
    d[nodes[i].left] = d[nodes[i].right] = d[i] + 1;
    best = std::max(best, d[i] + 1);
  }
  return best;
}

namespace {

struct Split {
  bool valid = false;
  int feature = -1;
  bool categorical = false;
  double threshold = 0.0;
  std::uint64_t left_set = 0;
  double score = 0.0;  // weighted child impurity
};

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, const TreeParams& params, Rng& rng)
      : data_(data), params_(params), rng_(rng), cols_(static_cast<int>(data.cols())) {
    mtry_ = params.max_features > 0
                ? std::min(params.max_features, cols_)
                : std::max(1, static_cast<int>(std::floor(std::sqrt(cols_))));
    order_.resize(cols_);
    for (int i = 0; i < cols_; ++i) order_[i] = i;
  }

  Tree build(std::vector<int> sample) {
    idx_ = std::move(sample);
    grow(0, static_cast<int>(idx_.size()), 0);
    return std::move(tree_);
  }

 private:
  int grow(int begin, int end, int depth) {
    const int node = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    const int n = end - begin;
    int pos = 0;
    for (int i = begin; i < end; ++i) pos += data_.y[idx_[i]];
    tree_.nodes[node].value = static_cast<double>(pos) / n;
    tree_.nodes[node].samples = n;

    const bool depth_limited = params_.max_depth && depth >= *params_.max_depth;
    if (depth_limited || n < params_.min_samples_split || pos == 0 || pos == n) {
      return node;
    }
    const Split split = best_split(begin, end, pos);
    if (!split.valid) return node;

    auto goes_left = [&](int row) {
      const double v = data_.x[static_cast<std::size_t>(row) * cols_ + split.feature];
      if (split.categorical) {
        const auto code = static_cast<long long>(v);
        return code >= 0 && code < 64 && ((split.left_set >> code) & 1u) != 0;
      }
      return v <= split.threshold;
    };
    auto mid = std::stable_partition(idx_.begin() + begin, idx_.begin() + end, goes_left);
    const int m = static_cast<int>(mid - idx_.begin());

    tree_.nodes[node].feature = split.feature;
    tree_.nodes[node].categorical = split.categorical;
    tree_.nodes[node].threshold = split.threshold;
    tree_.nodes[node].left_set = split.left_set;
    const int left = grow(begin, m, depth + 1);
    const int right = grow(m, end, depth + 1);
    tree_.nodes[node].left = left;
    tree_.nodes[node].right = right;
    return node;
  }

  Split best_split(int begin, int end, int pos) {
    // Random feature order; at least mtry features are tried, more only
    // while no valid split has been found.
    for (int i = 0; i < cols_ - 1; ++i) {
      const int j = i + static_cast<int>(rng_.index(cols_ - i));
      std::swap(order_[i], order_[j]);
    }
    Split best;
    for (int k = 0; k < cols_; ++k) {
      if (k >= mtry_ && best.valid) break;
      const int f = order_[k];
      const ColumnInfo& col = data_.columns[f];
      if (col.categorical && col.cardinality <= kMaxSubsetCardinality) {
        subset_split(f, begin, end, pos, best);
      } else {
        threshold_split(f, begin, end, pos, best);
      }
    }
    return best;
  }

  void consider(Split& best, const Split& cand) {
    if (!best.valid || cand.score < best.score) best = cand;
  }

  double child_score(double lpos, double ln, double rpos, double rn) const {
    const double n = ln + rn;
    return (ln * impurity(params_.criterion, lpos, ln) +
            rn * impurity(params_.criterion, rpos, rn)) / n;
  }

  void subset_split(int f, int begin, int end, int pos, Split& best) {
    std::array<double, 64> cnt{};
    std::array<double, 64> pcnt{};
    for (int i = begin; i < end; ++i) {
      const int row = idx_[i];
      auto code = static_cast<long long>(data_.x[static_cast<std::size_t>(row) * cols_ + f]);
      code = std::clamp(code, 0LL, 63LL);
      cnt[code] += 1;
      pcnt[code] += data_.y[row];
    }
    std::vector<int> present;
    for (int c = 0; c < 64; ++c) {
      if (cnt[c] > 0) present.push_back(c);
    }
    if (present.size() < 2) return;
    // Ordering categories by positive fraction makes prefix splits optimal
    // for two classes.
    std::stable_sort(present.begin(), present.end(), [&](int a, int b) {
      return pcnt[a] / cnt[a] < pcnt[b] / cnt[b];
    });
    const double n = end - begin;
    double ln = 0, lpos = 0;
    std::uint64_t mask = 0;
    for (std::size_t j = 0; j + 1 < present.size(); ++j) {
      const int c = present[j];
      ln += cnt[c];
      lpos += pcnt[c];
      mask |= std::uint64_t{1} << c;
      Split s;
      s.valid = true;
      s.feature = f;
      s.categorical = true;
      s.left_set = mask;
      s.score = child_score(lpos, ln, pos - lpos, n - ln);
      consider(best, s);
    }
  }

  void threshold_split(int f, int begin, int end, int pos, Split& best) {
    vals_.clear();
    for (int i = begin; i < end; ++i) {
      const int row = idx_[i];
      vals_.emplace_back(data_.x[static_cast<std::size_t>(row) * cols_ + f], data_.y[row]);
    }
    std::sort(vals_.begin(), vals_.end());
    if (vals_.front().first == vals_.back().first) return;
    const double n = end - begin;
    double ln = 0, lpos = 0;
    for (std::size_t i = 0; i + 1 < vals_.size(); ++i) {
      ln += 1;
      lpos += vals_[i].second;
      const double a = vals_[i].first;
      const double b = vals_[i + 1].first;
      if (a == b) continue;
      double t = a + (b - a) / 2;
      if (!(t < b)) t = a;
      Split s;
      s.valid = true;
      s.feature = f;
      s.threshold = t;
      s.score = child_score(lpos, ln, pos - lpos, n - ln);
      consider(best, s);
    }
  }

  const Dataset& data_;
  TreeParams params_;
  Rng& rng_;
  int cols_;
  int mtry_;
  std::vector<int> order_;
  std::vector<int> idx_;
  std::vector<std::pair<double, int>> vals_;
  Tree tree_;
};

}  // namespace

Tree train_tree(const Dataset& data, std::span<const int> sample,
                const TreeParams& params, Rng& rng) {
  if (sample.empty() || data.cols() == 0) {
    throw Error(ErrorCode::EmptyTrainingSet, "no training examples");
  }
  TreeBuilder b(data, params, rng);
  return b.build(std::vector<int>(sample.begin(), sample.end()));
}

Tree train_tree(const Dataset& data, const TreeParams& params, Rng& rng) {
  std::vector<int> all(data.rows());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return train_tree(data, all, params, rng);
}

}  // namespace hcoref
