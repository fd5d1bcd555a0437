#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hcoref/attributes.hpp"
#include "hcoref/mentions.hpp"

namespace hcoref {

// A partial coreference cluster. Its id is the id of its first mention.
struct Entity {
  int id = 0;
  std::vector<int> mentions;  // ascending mention ids (document order)
  AttributeLattice attrs;     // union over member lattices
  int first_mention = 0;

  int size() const { return static_cast<int>(mentions.size()); }
};

// Partition of a document's mentions into entities, backed by union-find
// with path compression. Merging keeps the lower entity id, so entity ids are
// stable and always equal the first member's mention id.
class EntityStore {
 public:
  EntityStore() = default;

  // Every mention starts in its own singleton entity.
  explicit EntityStore(std::span<const Mention> mentions);

  int mention_count() const { return static_cast<int>(parent_.size()); }
  int entity_count() const { return live_; }

  int entity_of(int mention) const;
  const Entity& entity(int id) const { return *entities_[id]; }
  bool is_entity(int id) const {
    return id >= 0 && id < static_cast<int>(entities_.size()) &&
           entities_[id].has_value();
  }

  // Live entity ids in ascending order (document order of first mentions).
  std::vector<int> entity_ids() const;

  // Merges two distinct entities; returns the surviving (lower) id.
  // Throws Error(SameEntity) when a == b.
  int merge(int a, int b);

  // Merges the entities of two mentions; no-op if already together.
  int link(int mention_a, int mention_b);

 private:
  mutable std::vector<int> parent_;
  std::vector<std::optional<Entity>> entities_;
  int live_ = 0;
};

}  // namespace hcoref
