#pragma once

#include <climits>
#include <map>
#include <string>
#include <vector>

#include "hcoref/entity_store.hpp"
#include "hcoref/mentions.hpp"

namespace hcoref {

inline constexpr int kUnlimitedWindow = INT_MAX;

// Rule sieves in decreasing order of precision.
inline const std::vector<std::string> kDefaultSieveOrder = {
    "speaker", "exact_match", "strict_head", "proper_name",
    "location", "title", "demonstrative"};

struct SieveConfig {
  std::vector<std::string> order = kDefaultSieveOrder;
  int sentence_window = 3;
  // Per-sieve sentence windows. exact_match and proper_name default to an
  // unlimited window; every other sieve defaults to `sentence_window`.
  std::map<std::string, int> window_overrides;
  std::map<std::string, bool> enabled;  // absent means enabled

  bool is_enabled(const std::string& sieve) const;
  int window_for(const std::string& sieve) const;

  // Same order with every sieve disabled.
  static SieveConfig none();
};

// Applies the enabled sieves of `cfg.order` to `store` in place.
// Throws Error(UnknownSieveName).
void run_pipeline(const MentionSet& ms, const SieveConfig& cfg,
                  EntityStore& store);

// Convenience overload starting from all-singleton entities.
EntityStore run_pipeline(const MentionSet& ms, const SieveConfig& cfg);

// Runs a single sieve by name; returns the number of merges it made.
int apply_sieve(const std::string& name, const MentionSet& ms,
                EntityStore& store, int window);

// First mention of every entity except the entity that starts the document.
std::vector<int> select_active_mentions(const EntityStore& store);

// Entities with a member that precedes `mention` (without overlapping it)
// within `window` sentences, ordered same-sentence-nearest-first, then by
// increasing sentence distance. An entity ranks by its best member.
std::vector<int> order_candidates(int mention, const EntityStore& store,
                                  const MentionSet& ms, int window);

int sieve_speaker(const MentionSet& ms, EntityStore& store);
int sieve_exact_match(const MentionSet& ms, EntityStore& store, int window);
int sieve_strict_head(const MentionSet& ms, EntityStore& store, int window);
int sieve_proper_name(const MentionSet& ms, EntityStore& store, int window);
int sieve_location(const MentionSet& ms, EntityStore& store, int window);
int sieve_title(const MentionSet& ms, EntityStore& store, int window);
int sieve_demonstrative(const MentionSet& ms, EntityStore& store, int window);

// Builds the store whose entities are the gold chains restricted to
// non-pronoun mentions; pronouns and mentions outside every chain stay
// singletons. Used for the gold cluster-feature configuration.
EntityStore gold_partial_store(const MentionSet& ms);

// Gold chain id of every mention whose span is a gold span (-1 otherwise).
// A span listed in several chains maps to the lowest chain id.
std::vector<int> gold_chain_of_mentions(const MentionSet& ms);

}  // namespace hcoref
