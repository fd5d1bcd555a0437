#include <algorithm>

#include "hcoref/error.hpp"
#include "hcoref/learner.hpp"
#include "hcoref/sieves.hpp"

namespace hcoref {

bool resolved_by_rules(int pronoun, const EntityStore& store) {
  return store.entity(store.entity_of(pronoun)).size() > 1;
}

bool entity_has_chain(const Entity& e, int pronoun, int chain,
                      const std::vector<int>& gold_chain) {
  if (chain < 0) return false;
  for (int m : e.mentions) {
    if (m >= pronoun) break;
    if (gold_chain[m] == chain) return true;
  }
  return false;
}

std::vector<TrainingExample> build_training_set(
    std::span<const TrainingDocument> docs, const SamplingOptions& opts) {
  bool any_gold = false;
  for (const auto& d : docs) any_gold |= !d.ms->doc->gold_chains.empty();
  if (!any_gold) {
    throw Error(ErrorCode::NoGoldChains, "training documents have no gold chains");
  }

  const FeatureOptions fopts{opts.mode, opts.embeddings};
  std::vector<TrainingExample> out;
  for (const auto& d : docs) {
    const MentionSet& ms = *d.ms;
    const auto gold = gold_chain_of_mentions(ms);
    const bool hybrid = opts.mode == FeatureMode::Hybrid;
    EntityStore store = hybrid ? *d.store : EntityStore(ms.mentions);
    for (int p = 0; p < ms.size(); ++p) {
      if (!ms[p].is_pronoun() || gold[p] < 0) continue;
      if (hybrid && resolved_by_rules(p, store)) continue;
      const auto candidates = order_candidates(p, store, ms, opts.window);
      auto positive = std::find_if(candidates.begin(), candidates.end(), [&](int e) {
        return entity_has_chain(store.entity(e), p, gold[p], gold);
      });
      if (positive == candidates.end()) continue;
      for (auto it = candidates.begin(); it <= positive; ++it) {
        TrainingExample ex;
        ex.features = extract_pair_features(p, *it, ms, store, fopts);
        ex.label = it == positive ? Label::Positive : Label::Negative;
        ex.provenance = {ms.doc->doc_id, p, *it};
        out.push_back(std::move(ex));
      }
      if (hybrid) store.merge(store.entity_of(p), *positive);
    }
  }
  return out;
}

FeatureCodebook build_codebook(std::span<const TrainingExample> examples,
                               FeatureMode mode, bool embeddings,
                               int embedding_dim) {
  FeatureCodebook cb(mode, embeddings, embedding_dim);
  for (const auto& ex : examples) cb.observe(ex.features);
  cb.freeze();
  return cb;
}

Dataset encode_dataset(std::span<const TrainingExample> examples,
                       const FeatureCodebook& codebook) {
  Dataset d;
  d.columns = codebook.columns();
  d.x.reserve(examples.size() * d.columns.size());
  d.y.reserve(examples.size());
  d.group.reserve(examples.size());
  for (const auto& ex : examples) {
    codebook.encode(ex.features, d.x);
    d.y.push_back(ex.label == Label::Positive ? 1 : 0);
    d.group.push_back(ex.provenance.doc_id);
  }
  return d;
}

}  // namespace hcoref
