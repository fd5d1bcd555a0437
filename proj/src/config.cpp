#include "hcoref/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hcoref/error.hpp"
#include "json.hpp"

namespace hcoref {

using nlohmann::json;

namespace {

Error config_error(const std::string& key, const std::string& why) {
  return Error(ErrorCode::InvalidConfig, "config key '" + key + "': " + why);
}

std::string_view to_string(DetectionMode m) {
  return m == DetectionMode::FromGold ? "gold" : "annotations";
}

std::string_view to_string(HeadRule r) {
  return r == HeadRule::LeftmostNoun ? "leftmost_noun" : "rightmost_noun";
}

std::string_view to_string(ClusterSource c) {
  return c == ClusterSource::Gold ? "gold" : "system";
}

PronounClass parse_pronoun_class(const std::string& key, std::string_view s) {
  for (auto c : {PronounClass::Personal, PronounClass::Demonstrative, PronounClass::Reflexive}) {
    if (s == hcoref::to_string(c)) return c;
  }
  throw config_error(key, "unknown pronoun class '" + std::string(s) + "'");
}

json synth_json(const SynthSpec& s) {
  return {{"entities", s.entities},
          {"mentions_per_entity", s.mentions_per_entity},
          {"pronoun_rate", s.pronoun_rate},
          {"sentences", s.sentences},
          {"min_sentence_length", s.min_sentence_length},
          {"max_sentence_length", s.max_sentence_length},
          {"missing_animacy", s.missing_animacy},
          {"pleonastic_rate", s.pleonastic_rate},
          {"quote_rate", s.quote_rate},
          {"topic_continuity", s.topic_continuity},
          {"person_weight", s.person_weight},
          {"object_weight", s.object_weight},
          {"location_weight", s.location_weight},
          {"group_weight", s.group_weight}};
}

json to_json(const EngineConfig& c) {
  const auto& sv = c.pipeline.sieves;
  const auto& rs = c.pipeline.resolver;
  const auto& ln = c.learner;
  json class_windows = json::object();
  for (const auto& [cls, w] : rs.class_windows) class_windows[std::string(hcoref::to_string(cls))] = w;
  json windows = json::object();
  for (const auto& [name, w] : sv.window_overrides) windows[name] = w;
  json enabled = json::object();
  for (const auto& [name, on] : sv.enabled) enabled[name] = on;
  const auto& f = ln.classifier.forest;
  return {
      {"paths",
       {{"corpus", c.paths.corpus},
        {"test", c.paths.test},
        {"lexicons", c.paths.lexicons},
        {"embeddings", c.paths.embeddings},
        {"model", c.paths.model}}},
      {"mode", hcoref::to_string(rs.mode)},
      {"policy", hcoref::to_string(c.policy)},
      {"clusters", to_string(c.pipeline.clusters)},
      {"sieves",
       {{"order", sv.order},
        {"sentence_window", sv.sentence_window},
        {"windows", windows},
        {"enabled", enabled}}},
      {"resolver",
       {{"merge_threshold", rs.merge_threshold},
        {"sentence_window", rs.sentence_window},
        {"class_windows", class_windows}}},
      {"mentions",
       {{"detection", to_string(c.pipeline.mentions.mode)},
        {"head_rule", to_string(c.pipeline.mentions.head_rule)}}},
      {"learner",
       {{"classifier", hcoref::to_string(ln.classifier.kind)},
        {"max_depth", f.max_depth ? json(*f.max_depth) : json(nullptr)},
        {"n_estimators", f.n_estimators},
        {"criterion", hcoref::to_string(f.criterion)},
        {"grid", ln.grid},
        {"folds", ln.folds},
        {"repeats", ln.repeats},
        {"l2", ln.classifier.logistic.l2},
        {"epochs", ln.classifier.logistic.epochs},
        {"learning_rate", ln.classifier.logistic.learning_rate}}},
      {"synth", synth_json(c.synth)},
      {"seed", c.seed},
      {"jobs", c.jobs},
  };
}

// Typed readers that name the key on failure.
std::string get_str(const json& j, const std::string& key) {
  if (!j.is_string()) throw config_error(key, "expected a string, got " + j.dump());
  return j.get<std::string>();
}

int get_int(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw config_error(key, "expected an integer, got " + j.dump());
  return j.get<int>();
}

double get_num(const json& j, const std::string& key) {
  if (!j.is_number()) throw config_error(key, "expected a number, got " + j.dump());
  return j.get<double>();
}

bool get_bool(const json& j, const std::string& key) {
  if (!j.is_boolean()) throw config_error(key, "expected true or false, got " + j.dump());
  return j.get<bool>();
}

template <typename F>
auto enum_value(const json& j, const std::string& key, F parse) {
  const std::string s = get_str(j, key);
  try {
    return parse(s);
  } catch (const Error& e) {
    throw config_error(key, e.message());
  }
}

EngineConfig from_full_json(const json& j) {
  EngineConfig c;
  const auto& p = j.at("paths");
  c.paths.corpus = get_str(p.at("corpus"), "paths.corpus");
  c.paths.test = get_str(p.at("test"), "paths.test");
  c.paths.lexicons = get_str(p.at("lexicons"), "paths.lexicons");
  c.paths.embeddings = get_str(p.at("embeddings"), "paths.embeddings");
  c.paths.model = get_str(p.at("model"), "paths.model");

  auto& rs = c.pipeline.resolver;
  rs.mode = enum_value(j.at("mode"), "mode", parse_feature_mode);
  c.policy = enum_value(j.at("policy"), "policy", parse_eval_policy);
  c.pipeline.clusters = enum_value(j.at("clusters"), "clusters", [](const std::string& s) {
    if (s == "system") return ClusterSource::System;
    if (s == "gold") return ClusterSource::Gold;
    throw Error(ErrorCode::InvalidConfig, "expected 'system' or 'gold'");
  });

  const auto& sv = j.at("sieves");
  auto& sc = c.pipeline.sieves;
  if (!sv.at("order").is_array()) throw config_error("sieves.order", "expected a list");
  sc.order.clear();
  for (const auto& x : sv.at("order")) sc.order.push_back(get_str(x, "sieves.order"));
  sc.sentence_window = get_int(sv.at("sentence_window"), "sieves.sentence_window");
  for (const auto& [k, v] : sv.at("windows").items()) {
    sc.window_overrides[k] = get_int(v, "sieves.windows." + k);
  }
  for (const auto& [k, v] : sv.at("enabled").items()) {
    sc.enabled[k] = get_bool(v, "sieves.enabled." + k);
  }

  const auto& r = j.at("resolver");
  rs.merge_threshold = get_num(r.at("merge_threshold"), "resolver.merge_threshold");
  rs.sentence_window = get_int(r.at("sentence_window"), "resolver.sentence_window");
  for (const auto& [k, v] : r.at("class_windows").items()) {
    const std::string key = "resolver.class_windows." + k;
    rs.class_windows[parse_pronoun_class(key, k)] = get_int(v, key);
  }

  const auto& m = j.at("mentions");
  c.pipeline.mentions.mode = enum_value(m.at("detection"), "mentions.detection",
                                        [](const std::string& s) {
    if (s == "annotations") return DetectionMode::FromAnnotations;
    if (s == "gold") return DetectionMode::FromGold;
    throw Error(ErrorCode::InvalidConfig, "expected 'annotations' or 'gold'");
  });
  c.pipeline.mentions.head_rule = enum_value(m.at("head_rule"), "mentions.head_rule",
                                             [](const std::string& s) {
    if (s == "rightmost_noun") return HeadRule::RightmostNoun;
    if (s == "leftmost_noun") return HeadRule::LeftmostNoun;
    throw Error(ErrorCode::InvalidConfig, "expected 'rightmost_noun' or 'leftmost_noun'");
  });

  const auto& l = j.at("learner");
  auto& ln = c.learner;
  ln.classifier.kind = enum_value(l.at("classifier"), "learner.classifier", parse_classifier);
  const auto& depth = l.at("max_depth");
  if (depth.is_null() || (depth.is_string() && depth.get<std::string>() == "none")) {
    ln.classifier.forest.max_depth.reset();
  } else {
    ln.classifier.forest.max_depth = get_int(depth, "learner.max_depth");
  }
  ln.classifier.forest.n_estimators = get_int(l.at("n_estimators"), "learner.n_estimators");
  ln.classifier.forest.criterion =
      enum_value(l.at("criterion"), "learner.criterion", parse_criterion);
  ln.grid = get_bool(l.at("grid"), "learner.grid");
  ln.folds = get_int(l.at("folds"), "learner.folds");
  ln.repeats = get_int(l.at("repeats"), "learner.repeats");
  ln.classifier.logistic.l2 = get_num(l.at("l2"), "learner.l2");
  ln.classifier.logistic.epochs = get_int(l.at("epochs"), "learner.epochs");
  ln.classifier.logistic.learning_rate = get_num(l.at("learning_rate"), "learner.learning_rate");

  const auto& s = j.at("synth");
  auto& sy = c.synth;
  sy.entities = get_int(s.at("entities"), "synth.entities");
  sy.mentions_per_entity = get_int(s.at("mentions_per_entity"), "synth.mentions_per_entity");
  sy.pronoun_rate = get_num(s.at("pronoun_rate"), "synth.pronoun_rate");
  sy.sentences = get_int(s.at("sentences"), "synth.sentences");
  sy.min_sentence_length = get_int(s.at("min_sentence_length"), "synth.min_sentence_length");
  sy.max_sentence_length = get_int(s.at("max_sentence_length"), "synth.max_sentence_length");
  sy.missing_animacy = get_num(s.at("missing_animacy"), "synth.missing_animacy");
  sy.pleonastic_rate = get_num(s.at("pleonastic_rate"), "synth.pleonastic_rate");
  sy.quote_rate = get_num(s.at("quote_rate"), "synth.quote_rate");
  sy.topic_continuity = get_num(s.at("topic_continuity"), "synth.topic_continuity");
  sy.person_weight = get_num(s.at("person_weight"), "synth.person_weight");
  sy.object_weight = get_num(s.at("object_weight"), "synth.object_weight");
  sy.location_weight = get_num(s.at("location_weight"), "synth.location_weight");
  sy.group_weight = get_num(s.at("group_weight"), "synth.group_weight");

  const auto& seed = j.at("seed");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
    throw config_error("seed", "expected a non-negative integer, got " + seed.dump());
  }
  c.seed = seed.get<std::uint64_t>();
  c.jobs = get_int(j.at("jobs"), "jobs");
  return c;
}

// Copies `patch` into `target`, recursing into objects. Keys must already
// exist in `target`, except inside the free-form maps.
void overlay(json& target, const json& patch, const std::string& prefix) {
  if (!patch.is_object()) throw config_error(prefix.empty() ? "<root>" : prefix, "expected an object");
  const bool free_form = prefix == "sieves.windows" || prefix == "sieves.enabled" ||
                         prefix == "resolver.class_windows";
  for (const auto& [k, v] : patch.items()) {
    const std::string key = prefix.empty() ? k : prefix + "." + k;
    if (!free_form && !target.contains(k)) throw config_error(key, "unknown key");
    if (!free_form && target[k].is_object()) {
      overlay(target[k], v, key);
    } else {
      target[k] = v;
    }
  }
}

EngineConfig parse_over(const json& patch, const EngineConfig& base) {
  json full = to_json(base);
  overlay(full, patch, "");
  return from_full_json(full);
}

std::string env_name(const std::string& path) {
  std::string out = "HCOREF_";
  for (char ch : path) {
    out += ch == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  }
  return out;
}

void env_walk(const json& node, const std::string& path, const EnvLookup& getenv,
              json& patch) {
  if (node.is_object() && !node.empty()) {
    for (const auto& [k, v] : node.items()) {
      env_walk(v, path.empty() ? k : path + "." + k, getenv, patch);
    }
    return;
  }
  if (node.is_object()) return;  // empty free-form map
  auto value = getenv(env_name(path));
  if (!value) return;
  json parsed = json::parse(*value, nullptr, false);
  if (parsed.is_discarded() || (node.is_string() && !parsed.is_string())) parsed = *value;
  patch[json::json_pointer("/" + [&] {
    std::string p = path;
    std::replace(p.begin(), p.end(), '.', '/');
    return p;
  }())] = parsed;
}

}  // namespace

std::string config_to_json(const EngineConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

EngineConfig config_from_json(const std::string& text, const EngineConfig& base) {
  json patch;
  try {
    patch = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_over(patch, base);
}

EngineConfig load_config(const std::string& path, const EngineConfig& base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return config_from_json(buf.str(), base);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.message());
  }
}

EngineConfig apply_env(const EngineConfig& cfg, const EnvLookup& getenv) {
  json patch = json::object();
  env_walk(to_json(cfg), "", getenv, patch);
  if (patch.empty()) return cfg;
  try {
    return parse_over(patch, cfg);
  } catch (const Error& e) {
    throw Error(e.code(), "environment override: " + e.message());
  }
}

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (!v) return std::nullopt;
    return std::string(v);
  };
}

void validate(const EngineConfig& cfg) {
  cfg.pipeline.resolver.validate();
  const auto& sv = cfg.pipeline.sieves;
  auto known = [](const std::string& name) {
    return std::find(kDefaultSieveOrder.begin(), kDefaultSieveOrder.end(), name) !=
           kDefaultSieveOrder.end();
  };
  for (const auto& n : sv.order) {
    if (!known(n)) throw Error(ErrorCode::UnknownSieveName, "unknown sieve '" + n + "'");
  }
  for (const auto& [n, w] : sv.window_overrides) {
    if (!known(n)) throw Error(ErrorCode::UnknownSieveName, "unknown sieve '" + n + "'");
  }
  for (const auto& [n, on] : sv.enabled) {
    if (!known(n)) throw Error(ErrorCode::UnknownSieveName, "unknown sieve '" + n + "'");
  }
  if (sv.sentence_window < 0) throw config_error("sieves.sentence_window", "must be >= 0");
  const auto& ln = cfg.learner;
  if (ln.folds < 2) throw config_error("learner.folds", "must be at least 2");
  if (ln.repeats < 1) throw config_error("learner.repeats", "must be positive");
  if (ln.classifier.forest.n_estimators < 1) {
    throw config_error("learner.n_estimators", "must be positive");
  }
  if (ln.classifier.forest.max_depth && *ln.classifier.forest.max_depth < 1) {
    throw config_error("learner.max_depth", "must be positive or null");
  }
  if (cfg.jobs < 1) throw config_error("jobs", "must be positive");
}

}  // namespace hcoref
