#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "hcoref/embeddings.hpp"
#include "hcoref/entity_store.hpp"
#include "hcoref/mentions.hpp"

namespace hcoref {

enum class FeatureMode { MentionPair, Hybrid };

std::string_view to_string(FeatureMode m);
FeatureMode parse_feature_mode(std::string_view s);

inline constexpr int kSlotCount = 54;

enum class SlotType { Bool, Int, Code, Symbol, Real };
enum class SlotLevel { Mention, Entity };

struct SlotInfo {
  int row = 0;  // 1-based
  const char* name = "";
  SlotLevel level = SlotLevel::Mention;
  bool hybrid_only = false;
  SlotType type = SlotType::Bool;
  int cardinality = 0;      // Code slots: number of codes
  const char* vocab = "";   // Symbol slots: "pos" or "ner"
};

// Metadata of rows 1..54, indexed by row - 1.
const std::array<SlotInfo, kSlotCount>& slot_table();
const SlotInfo& slot(int row);
bool slot_present(int row, FeatureMode mode);

// Codes used by Code slots.
inline constexpr int kTypePronoun = 0;
inline constexpr int kTypeProper = 1;
inline constexpr int kTypeCommon = 2;
inline constexpr int kCondNotMet = 0;
inline constexpr int kCondSameSentence = 1;
inline constexpr int kCondOtherSentence = 2;

// Symbol used for a context token outside the sentence.
inline constexpr const char* kBoundarySymbol = "<B>";

struct FeatureVector {
  FeatureMode mode = FeatureMode::MentionPair;
  bool has_embeddings = false;
  // value[row] for non-symbol slots; symbol[row] for Symbol slots. Index 0
  // is unused. Slots absent in `mode` hold 0 / "".
  std::array<double, kSlotCount + 1> value{};
  std::array<std::string, kSlotCount + 1> symbol{};
  std::vector<double> pronoun_embedding;
  std::vector<double> antecedent_embedding;

  bool has(int row) const;
  double operator[](int row) const { return value[row]; }

  bool operator==(const FeatureVector&) const = default;
};

struct FeatureOptions {
  FeatureMode mode = FeatureMode::Hybrid;
  // Embedding features (rows 52-54 and the raw blocks) need a table and are
  // only part of the hybrid vector.
  const EmbeddingTable* embeddings = nullptr;
};

// Member of `entity` nearest to `pronoun` among those that precede it
// without overlapping. -1 when there is none.
int nearest_preceding_member(int pronoun, const Entity& entity,
                             const MentionSet& ms);

// Person value-set used by the features: the lattice's person, or Third for
// a non-pronoun mention whose lattice leaves person unknown.
ValueSet<Person> effective_person(const Mention& m);
ValueSet<Person> effective_person(const Entity& e, const MentionSet& ms);

// Throws NotAPronoun or CandidateNotPreceding.
FeatureVector extract_pair_features(int pronoun, int candidate_entity,
                                    const MentionSet& ms,
                                    const EntityStore& store,
                                    const FeatureOptions& opts);

struct EmbeddingFeatures {
  double head_distance = 0.0;      // row 52
  double mean_distance = 0.0;      // row 53
  double sentence_distance = 0.0;  // row 54
  std::vector<double> pronoun_vec;
  std::vector<double> antecedent_vec;
};

EmbeddingFeatures extract_embedding_features(int pronoun, int antecedent,
                                             const MentionSet& ms,
                                             const EmbeddingTable& table);

// Column description of an encoded feature matrix.
struct ColumnInfo {
  std::string name;
  bool categorical = false;
  int cardinality = 0;  // categorical columns: codes are 0..cardinality-1

  bool operator==(const ColumnInfo&) const = default;
};

// Integer codes for Symbol slots, frozen at training time. Code 0 is the
// reserved unknown code and code 1 the sentence-boundary symbol.
class FeatureCodebook {
 public:
  static constexpr int kUnknownCode = 0;
  static constexpr int kBoundaryCode = 1;

  FeatureCodebook() = default;
  FeatureCodebook(FeatureMode mode, bool embeddings, int embedding_dim);

  FeatureMode mode() const { return mode_; }
  bool embeddings() const { return embeddings_; }
  int embedding_dim() const { return embedding_dim_; }
  bool frozen() const { return frozen_; }

  // Collects symbols; only valid before freeze().
  void observe(const FeatureVector& fv);
  // Assigns codes in lexicographic symbol order.
  void freeze();

  int code(const std::string& vocab, const std::string& symbol) const;
  const std::map<std::string, std::vector<std::string>>& vocabularies() const {
    return vocab_;
  }
  // Restores a frozen codebook.
  void set_vocabulary(const std::string& vocab, std::vector<std::string> syms);

  std::vector<ColumnInfo> columns() const;
  std::size_t width() const;

  // Appends the encoded row. Throws VocabMismatch when the vector's layout
  // (mode or embedding block) differs from the codebook's.
  void encode(const FeatureVector& fv, std::vector<double>& out) const;

 private:
  FeatureMode mode_ = FeatureMode::MentionPair;
  bool embeddings_ = false;
  int embedding_dim_ = 0;
  bool frozen_ = false;
  std::map<std::string, std::vector<std::string>> vocab_;
  std::map<std::string, std::map<std::string, int>> index_;
};

}  // namespace hcoref
