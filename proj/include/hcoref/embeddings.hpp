#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hcoref {

enum class OovPolicy { ZeroVector, MeanVector };

// Word vectors of a fixed dimension. Read-only after loading, so one table
// can be shared by every worker thread.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(int dim = 0, OovPolicy oov = OovPolicy::ZeroVector);

  int dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  OovPolicy oov_policy() const { return oov_; }
  void set_oov_policy(OovPolicy p) { oov_ = p; }

  // Keeps the first vector for a duplicate token. Throws DimensionMismatch
  // when `v` does not have `dim()` entries.
  void add(const std::string& token, std::vector<double> v);

  bool contains(std::string_view token) const;
  std::vector<std::string> tokens() const;  // sorted

  // Vector for `token`, falling back to its lowercase form and then to the
  // OOV vector (zeros, or the mean of all vectors).
  std::span<const double> lookup(std::string_view token) const;

 private:
  int dim_;
  OovPolicy oov_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
  std::vector<double> zero_;
  std::vector<double> sum_;
  mutable std::vector<double> mean_;
  mutable bool mean_valid_ = false;
};

// Parses `token v1 ... vd` lines. Throws RaggedDimensions (with the line
// number) or EmptyFile.
EmbeddingTable parse_embeddings(std::string_view text,
                                OovPolicy oov = OovPolicy::ZeroVector);
// Text form read by parse_embeddings, tokens sorted, values at full precision.
std::string write_embeddings(const EmbeddingTable& table);

EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               OovPolicy oov = OovPolicy::ZeroVector);

double euclidean(std::span<const double> a, std::span<const double> b);

}  // namespace hcoref
