#include "hcoref/embeddings.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hcoref/error.hpp"

namespace hcoref {

EmbeddingTable::EmbeddingTable(int dim, OovPolicy oov)
    : dim_(dim), oov_(oov), zero_(dim, 0.0), sum_(dim, 0.0) {}

void EmbeddingTable::add(const std::string& token, std::vector<double> v) {
  if (static_cast<int>(v.size()) != dim_) {
    throw Error(ErrorCode::DimensionMismatch,
                "vector for '" + token + "' has " + std::to_string(v.size()) +
                    " entries, table dimension is " + std::to_string(dim_));
  }
  if (vectors_.contains(token)) return;
  for (int i = 0; i < dim_; ++i) sum_[i] += v[i];
  vectors_.emplace(token, std::move(v));
  mean_valid_ = false;
}

bool EmbeddingTable::contains(std::string_view token) const {
  return vectors_.contains(std::string(token));
}

std::span<const double> EmbeddingTable::lookup(std::string_view token) const {
  if (auto it = vectors_.find(std::string(token)); it != vectors_.end()) {
    return it->second;
  }
  std::string lower(token);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (auto it = vectors_.find(lower); it != vectors_.end()) return it->second;
  if (oov_ == OovPolicy::ZeroVector || vectors_.empty()) return zero_;
  if (!mean_valid_) {
    mean_.assign(dim_, 0.0);
    for (int i = 0; i < dim_; ++i) {
      mean_[i] = sum_[i] / static_cast<double>(vectors_.size());
    }
    mean_valid_ = true;
  }
  return mean_;
}

EmbeddingTable parse_embeddings(std::string_view text, OovPolicy oov) {
  int dim = -1;
  EmbeddingTable table;
  int line_no = 0;
  std::size_t pos = 0;
  bool any = false;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      fields.push_back(line.substr(i, j - i));
      i = j;
    }
    if (fields.empty()) continue;
    const int d = static_cast<int>(fields.size()) - 1;
    if (dim < 0) {
      if (d <= 0) {
        throw Error(ErrorCode::RaggedDimensions, "line has no vector values",
                    line_no);
      }
      dim = d;
      table = EmbeddingTable(dim, oov);
    } else if (d != dim) {
      throw Error(ErrorCode::RaggedDimensions,
                  "expected " + std::to_string(dim) + " values, found " +
                      std::to_string(d),
                  line_no);
    }
    std::vector<double> v(dim);
    for (int k = 0; k < dim; ++k) {
      const auto f = fields[k + 1];
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v[k]);
      if (ec != std::errc() || p != f.data() + f.size()) {
        throw Error(ErrorCode::RaggedDimensions,
                    "non-numeric value '" + std::string(f) + "'", line_no);
      }
    }
    table.add(std::string(fields[0]), std::move(v));
    any = true;
  }
  if (!any) throw Error(ErrorCode::EmptyFile, "embedding file has no vectors");
  return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               OovPolicy oov) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_embeddings(buf.str(), oov);
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, "vectors differ in length");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

std::vector<std::string> EmbeddingTable::tokens() const {
  std::vector<std::string> out;
  out.reserve(vectors_.size());
  for (const auto& [k, v] : vectors_) out.push_back(k);
  std::sort(out.begin(), out.end());
  return out;
}

std::string write_embeddings(const EmbeddingTable& table) {
  std::string out;
  char buf[40];
  for (const auto& t : table.tokens()) {
    out += t;
    for (double x : table.lookup(t)) {
      std::snprintf(buf, sizeof buf, " %.17g", x);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace hcoref
