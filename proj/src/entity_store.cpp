#include "hcoref/entity_store.hpp"

#include <algorithm>
#include <iterator>
#include <string>

#include "hcoref/error.hpp"

namespace hcoref {

EntityStore::EntityStore(std::span<const Mention> mentions)
    : parent_(mentions.size()), entities_(mentions.size()) {
  for (std::size_t i = 0; i < mentions.size(); ++i) {
    parent_[i] = static_cast<int>(i);
    Entity e;
    e.id = static_cast<int>(i);
    e.mentions = {static_cast<int>(i)};
    e.attrs = mentions[i].attrs;
    e.first_mention = static_cast<int>(i);
    entities_[i] = std::move(e);
  }
  live_ = static_cast<int>(mentions.size());
}

int EntityStore::entity_of(int mention) const {
  int root = mention;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[mention] != root) {
    const int next = parent_[mention];
    parent_[mention] = root;
    mention = next;
  }
  return root;
}

std::vector<int> EntityStore::entity_ids() const {
  std::vector<int> ids;
  ids.reserve(live_);
  for (std::size_t i = 0; i < entities_.size(); ++i) {
    if (entities_[i]) ids.push_back(static_cast<int>(i));
  }
  return ids;
}

int EntityStore::merge(int a, int b) {
  if (a == b) {
    throw Error(ErrorCode::SameEntity,
                "cannot merge entity " + std::to_string(a) + " with itself");
  }
  const int keep = std::min(a, b);
  const int drop = std::max(a, b);
  Entity& kept = *entities_[keep];
  Entity& gone = *entities_[drop];
  std::vector<int> merged;
  merged.reserve(kept.mentions.size() + gone.mentions.size());
  std::merge(kept.mentions.begin(), kept.mentions.end(), gone.mentions.begin(),
             gone.mentions.end(), std::back_inserter(merged));
  kept.mentions = std::move(merged);
  kept.attrs.unite(gone.attrs);
  kept.first_mention = kept.mentions.front();
  parent_[drop] = keep;
  entities_[drop].reset();
  --live_;
  return keep;
}

int EntityStore::link(int mention_a, int mention_b) {
  const int a = entity_of(mention_a);
  const int b = entity_of(mention_b);
  return a == b ? a : merge(a, b);
}

}  // namespace hcoref
