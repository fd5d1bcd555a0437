#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "hcoref/learner.hpp"
#include "hcoref/resolver.hpp"
#include "hcoref/synthetic.hpp"

namespace hcoref {

struct EnginePaths {
  std::string corpus;  // training corpus, or the input of resolve
  std::string test;    // held-out corpus for ablate
  std::string lexicons;  // directory; empty selects the built-in English lexicon
  std::string embeddings;
  std::string model;
};

struct LearnerConfig {
  ClassifierSpec classifier;
  bool grid = false;
  int folds = 10;
  int repeats = 1;
};

struct EngineConfig {
  EnginePaths paths;
  PipelineConfig pipeline;  // sieves, resolver (threshold, window, mode), clusters
  LearnerConfig learner;
  EvalPolicy policy = EvalPolicy::AllPronouns;
  SynthSpec synth;
  std::uint64_t seed = 1;
  int jobs = 1;

  FeatureMode mode() const { return pipeline.resolver.mode; }
};

// Full JSON form; every key is optional when reading. Keys:
//   paths.{corpus,test,lexicons,embeddings,model}, mode, policy, clusters,
//   sieves.{order,sentence_window,windows,enabled},
//   resolver.{merge_threshold,sentence_window,class_windows},
//   mentions.{detection,head_rule},
//   learner.{classifier,max_depth,n_estimators,criterion,grid,folds,repeats,
//            l2,epochs,learning_rate},
//   synth.{entities,mentions_per_entity,...}, seed, jobs.
std::string config_to_json(const EngineConfig& cfg);

// Applies the keys present in `text` on top of `base`. Throws InvalidConfig
// naming the offending key.
EngineConfig config_from_json(const std::string& text, const EngineConfig& base = {});
EngineConfig load_config(const std::string& path, const EngineConfig& base = {});

// Environment overrides: HCOREF_ followed by the upper-cased key path joined
// with '_', e.g. HCOREF_RESOLVER_MERGE_THRESHOLD or HCOREF_SEED. Values are
// read as JSON when they parse, as strings otherwise. `getenv` is injectable
// for tests.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
EngineConfig apply_env(const EngineConfig& cfg, const EnvLookup& getenv);
EnvLookup process_env();

// Consistency checks that need no files: threshold and windows, sieve names,
// folds and jobs. Throws InvalidConfig or UnknownSieveName.
void validate(const EngineConfig& cfg);

}  // namespace hcoref
