#include <fstream>
#include <sstream>

#include "hcoref/error.hpp"
#include "hcoref/learner.hpp"
#include "json.hpp"

namespace hcoref {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "hcoref-model";
constexpr int kVersion = 1;

json tree_to_json(const Tree& t) {
  // Column-oriented arrays keep large forests compact.
  json feature = json::array(), cat = json::array(), thr = json::array(),
       set = json::array(), left = json::array(), right = json::array(),
       value = json::array(), samples = json::array();
  for (const auto& n : t.nodes) {
    feature.push_back(n.feature);
    cat.push_back(n.categorical ? 1 : 0);
    thr.push_back(n.threshold);
    set.push_back(n.left_set);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
    samples.push_back(n.samples);
  }
  return {{"feature", feature}, {"categorical", cat}, {"threshold", thr},
          {"left_set", set},    {"left", left},       {"right", right},
          {"value", value},     {"samples", samples}};
}

Tree tree_from_json(const json& j) {
  Tree t;
  const auto& feature = j.at("feature");
  t.nodes.resize(feature.size());
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    TreeNode& n = t.nodes[i];
    n.feature = feature[i].get<int>();
    n.categorical = j.at("categorical")[i].get<int>() != 0;
    n.threshold = j.at("threshold")[i].get<double>();
    n.left_set = j.at("left_set")[i].get<std::uint64_t>();
    n.left = j.at("left")[i].get<int>();
    n.right = j.at("right")[i].get<int>();
    n.value = j.at("value")[i].get<double>();
    n.samples = j.at("samples")[i].get<int>();
  }
  const int size = static_cast<int>(t.nodes.size());
  if (size == 0) throw Error(ErrorCode::InvalidConfig, "model file: empty tree");
  for (const auto& n : t.nodes) {
    if (!n.is_leaf() && (n.left <= 0 || n.left >= size || n.right <= 0 || n.right >= size)) {
      throw Error(ErrorCode::InvalidConfig, "model file: bad child index");
    }
  }
  return t;
}

json columns_to_json(const std::vector<ColumnInfo>& cols) {
  json out = json::array();
  for (const auto& c : cols) {
    out.push_back({{"name", c.name}, {"categorical", c.categorical},
                   {"cardinality", c.cardinality}});
  }
  return out;
}

std::vector<ColumnInfo> columns_from_json(const json& j) {
  std::vector<ColumnInfo> out;
  for (const auto& c : j) {
    out.push_back({c.at("name").get<std::string>(), c.at("categorical").get<bool>(),
                   c.at("cardinality").get<int>()});
  }
  return out;
}

}  // namespace

std::string model_to_json(const Model& model) {
  json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["kind"] = std::string(to_string(model.kind));
  j["mode"] = std::string(to_string(model.mode()));
  j["merge_threshold"] = model.merge_threshold;

  const auto& cb = model.codebook;
  json vocab = json::object();
  for (const auto& [name, syms] : cb.vocabularies()) vocab[name] = syms;
  j["codebook"] = {{"embeddings", cb.embeddings()},
                   {"embedding_dim", cb.embedding_dim()},
                   {"vocabularies", vocab}};

  if (model.kind == ClassifierKind::Forest) {
    const auto& p = model.forest.params;
    json params;
    params["max_depth"] = p.max_depth ? json(*p.max_depth) : json(nullptr);
    params["n_estimators"] = p.n_estimators;
    params["criterion"] = std::string(to_string(p.criterion));
    j["params"] = params;
    json trees = json::array();
    for (const auto& t : model.forest.trees) trees.push_back(tree_to_json(t));
    j["trees"] = trees;
  } else {
    const auto& m = model.linear;
    j["linear"] = {{"columns", columns_to_json(m.columns)},
                   {"mean", m.mean},
                   {"scale", m.scale},
                   {"offset", m.offset},
                   {"weights", m.weights},
                   {"bias", m.bias}};
  }
  return j.dump() + "\n";
}

Model model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("model file: ") + e.what());
  }
  try {
    if (j.value("format", "") != kFormat) {
      throw Error(ErrorCode::InvalidConfig, "model file: not an hcoref model");
    }
    if (j.at("version").get<int>() != kVersion) {
      throw Error(ErrorCode::InvalidConfig, "model file: unsupported version " +
                                                std::to_string(j.at("version").get<int>()));
    }
    Model m;
    m.kind = parse_classifier(j.at("kind").get<std::string>());
    m.merge_threshold = j.at("merge_threshold").get<double>();
    const auto& cbj = j.at("codebook");
    m.codebook = FeatureCodebook(parse_feature_mode(j.at("mode").get<std::string>()),
                                 cbj.at("embeddings").get<bool>(),
                                 cbj.at("embedding_dim").get<int>());
    for (const auto& [name, syms] : cbj.at("vocabularies").items()) {
      m.codebook.set_vocabulary(name, syms.get<std::vector<std::string>>());
    }
    m.codebook.freeze();

    if (m.kind == ClassifierKind::Forest) {
      const auto& p = j.at("params");
      if (!p.at("max_depth").is_null()) m.forest.params.max_depth = p.at("max_depth").get<int>();
      m.forest.params.n_estimators = p.at("n_estimators").get<int>();
      m.forest.params.criterion = parse_criterion(p.at("criterion").get<std::string>());
      for (const auto& t : j.at("trees")) m.forest.trees.push_back(tree_from_json(t));
      if (static_cast<int>(m.forest.trees.size()) != m.forest.params.n_estimators) {
        throw Error(ErrorCode::InvalidConfig, "model file: tree count differs from n_estimators");
      }
    } else {
      const auto& l = j.at("linear");
      m.linear.columns = columns_from_json(l.at("columns"));
      m.linear.mean = l.at("mean").get<std::vector<double>>();
      m.linear.scale = l.at("scale").get<std::vector<double>>();
      m.linear.offset = l.at("offset").get<std::vector<int>>();
      m.linear.weights = l.at("weights").get<std::vector<double>>();
      m.linear.bias = l.at("bias").get<double>();
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("model file: ") + e.what());
  }
}

void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write model file '" + path + "'");
  out << model_to_json(model);
  if (!out) throw Error(ErrorCode::Io, "failed writing model file '" + path + "'");
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace hcoref
