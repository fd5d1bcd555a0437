#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hcoref/corpus.hpp"
#include "hcoref/embeddings.hpp"

namespace hcoref {

// Parameters of the synthetic annotated-document generator.
struct SynthSpec {
  int entities = 5;
  int mentions_per_entity = 4;
  double pronoun_rate = 0.3;
  // Lower bound; more sentences are added when the mentions need them.
  int sentences = 6;
  int min_sentence_length = 4;
  int max_sentence_length = 14;
  // Chance that a later mention carries no animacy or NER annotation, so its
  // animacy is only known through its entity.
  double missing_animacy = 0.6;
  double pleonastic_rate = 0.15;  // non-referential "It is clear ." sentences
  double quote_rate = 0.15;       // quoted first-person speech
  double topic_continuity = 0.5;  // subject repeats the previous subject
  // Relative weights of the entity kinds.
  double person_weight = 0.45;
  double object_weight = 0.35;
  double location_weight = 0.1;
  double group_weight = 0.1;
  std::string doc_id = "synthetic";
};

struct SynthStats {
  int pronouns = 0;  // every PRP token, referential or not
  int mentions = 0;  // gold chain spans
  int sentences = 0;
};

// Deterministic for a fixed seed. Person, object, location and group
// entities are realized with exact repeats, head-only and demonstrative
// re-mentions, surname and title-name pairs, so each rule sieve has work.
// Pronouns only refer to entities mentioned in the previous two sentences
// and never depend on gender. Throws InvalidSpec.
Document gen_synthetic(const SynthSpec& spec, std::uint64_t seed, SynthStats* stats = nullptr);

// `count` documents with ids "<prefix>_0000", ... from derived seeds.
std::vector<Document> gen_corpus(const SynthSpec& spec, int count, std::uint64_t seed,
                                 const std::string& prefix = "syn");

// Toy word vectors for the generator's vocabulary: words cluster by
// animate / inanimate / plural / function class.
EmbeddingTable toy_embeddings(int dim, std::uint64_t seed);

}  // namespace hcoref
