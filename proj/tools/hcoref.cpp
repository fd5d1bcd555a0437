// Command-line front end: gen, train, resolve, eval, gridsearch, ablate.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "hcoref/config.hpp"
#include "hcoref/error.hpp"
#include "json.hpp"

using namespace hcoref;
using nlohmann::json;

namespace {

// Flag values; unset flags leave the config untouched.
struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> mode, policy, clusters, classifier, criterion, max_depth;
  std::optional<double> threshold;
  std::optional<int> window, n_estimators, folds;
  std::optional<std::string> corpus, test, lexicons, embeddings, model;
  bool no_rule_sieves = false;
  bool grid = false;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

// Prints a report and stores it with its JSON sidecar.
void emit_report(const std::string& path, const std::string& text, const json& sidecar) {
  std::cout << text;
  if (path.empty()) return;
  write_text(path, text);
  write_text(path + ".json", sidecar.dump(2) + "\n");
}

EngineConfig resolve_config(const Flags& f) {
  EngineConfig c;
  if (!f.config.empty()) c = load_config(f.config);
  c = apply_env(c, process_env());
  if (f.seed) c.seed = *f.seed;
  if (f.jobs) c.jobs = *f.jobs;
  if (f.mode) c.pipeline.resolver.mode = parse_feature_mode(*f.mode);
  if (f.policy) c.policy = parse_eval_policy(*f.policy);
  if (f.clusters) {
    if (*f.clusters == "gold") {
      c.pipeline.clusters = ClusterSource::Gold;
    } else if (*f.clusters == "system") {
      c.pipeline.clusters = ClusterSource::System;
    } else {
      throw Error(ErrorCode::InvalidConfig, "--clusters expects 'system' or 'gold'");
    }
  }
  if (f.classifier) c.learner.classifier.kind = parse_classifier(*f.classifier);
  if (f.criterion) c.learner.classifier.forest.criterion = parse_criterion(*f.criterion);
  if (f.max_depth) {
    if (*f.max_depth == "none") {
      c.learner.classifier.forest.max_depth.reset();
    } else {
      try {
        c.learner.classifier.forest.max_depth = std::stoi(*f.max_depth);
      } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidConfig, "--max-depth expects an integer or 'none'");
      }
    }
  }
  if (f.n_estimators) c.learner.classifier.forest.n_estimators = *f.n_estimators;
  if (f.folds) c.learner.folds = *f.folds;
  if (f.threshold) c.pipeline.resolver.merge_threshold = *f.threshold;
  if (f.window) c.pipeline.resolver.sentence_window = *f.window;
  if (f.corpus) c.paths.corpus = *f.corpus;
  if (f.test) c.paths.test = *f.test;
  if (f.lexicons) c.paths.lexicons = *f.lexicons;
  if (f.embeddings) c.paths.embeddings = *f.embeddings;
  if (f.model) c.paths.model = *f.model;
  if (f.grid) c.learner.grid = true;
  if (f.no_rule_sieves) c.pipeline.sieves = SieveConfig::none();
  validate(c);
  return c;
}

std::vector<Document> load_corpus(const std::string& path, const char* what,
                                  bool allow_empty = false) {
  if (path.empty()) {
    throw Error(ErrorCode::InvalidConfig,
                std::string("no ") + what + " corpus; pass --corpus or set paths.corpus");
  }
  const std::string text = read_text(path);
  if (allow_empty && text.find_first_not_of(" \t\r\n") == std::string::npos) return {};
  std::vector<std::string> warnings;
  auto docs = parse_conll(text, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << path << ": " << w << "\n";
  return docs;
}

Lexicons load_lexicons(const EngineConfig& c) {
  return c.paths.lexicons.empty() ? Lexicons::english_default()
                                  : Lexicons::load_directory(c.paths.lexicons);
}

std::optional<EmbeddingTable> load_table(const EngineConfig& c) {
  if (c.paths.embeddings.empty() || c.mode() != FeatureMode::Hybrid) return std::nullopt;
  return load_embeddings(c.paths.embeddings);
}

json cv_json(const CvResult& cv) {
  json folds = json::array();
  for (const auto& f : cv.folds) {
    folds.push_back({{"repeat", f.repeat},
                     {"fold", f.fold},
                     {"precision", f.precision},
                     {"recall", f.recall},
                     {"f1", f.f1},
                     {"documents", f.test_documents.size()}});
  }
  return {{"precision", cv.mean_precision},
          {"recall", cv.mean_recall},
          {"f1", cv.mean_f1},
          {"folds", folds}};
}

std::string cv_table(const CvResult& cv) {
  std::string out = "repeat  fold  precision  recall      F1\n";
  char buf[128];
  for (const auto& f : cv.folds) {
    std::snprintf(buf, sizeof buf, "%6d  %4d  %9.4f  %6.4f  %6.4f\n", f.repeat, f.fold,
                  f.precision, f.recall, f.f1);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "mean          %9.4f  %6.4f  %6.4f\n", cv.mean_precision,
                cv.mean_recall, cv.mean_f1);
  return out + buf;
}

CvOptions cv_options(const EngineConfig& c, const std::optional<EmbeddingTable>& emb) {
  CvOptions o;
  o.k = c.learner.folds;
  o.repeats = c.learner.repeats;
  o.seed = c.seed;
  o.jobs = c.jobs;
  o.embedding_dim = emb ? emb->dim() : 0;
  return o;
}

// ---- commands ---------------------------------------------------------------

int cmd_gen(const EngineConfig& c, int count, const std::string& out,
            const std::string& prefix, const std::string& emb_out, int dim) {
  if (count < 0) throw Error(ErrorCode::InvalidSpec, "--count must be non-negative");
  const auto docs = gen_corpus(c.synth, count, c.seed, prefix);
  save_conll(out, docs);
  long pronouns = 0, sentences = 0;
  for (const auto& d : docs) {
    sentences += static_cast<long>(d.sentences.size());
    for (const auto& s : d.sentences) {
      for (const auto& t : s.tokens) pronouns += t.pos_coarse == "PRP";
    }
  }
  if (!emb_out.empty()) write_text(emb_out, write_embeddings(toy_embeddings(dim, c.seed)));
  std::cout << "documents " << docs.size() << "\nsentences " << sentences << "\npronouns "
            << pronouns << "\n";
  return 0;
}

int cmd_train(const EngineConfig& c, const std::string& report) {
  if (c.paths.model.empty()) {
    throw Error(ErrorCode::InvalidConfig, "no model path; pass --model or set paths.model");
  }
  const auto docs = load_corpus(c.paths.corpus, "training");
  const auto lex = load_lexicons(c);
  const auto emb = load_table(c);
  const EmbeddingTable* table = emb ? &*emb : nullptr;
  const auto examples = pipeline_examples(docs, c.pipeline, lex, table);
  if (examples.empty()) throw Error(ErrorCode::EmptyTrainingSet, "the corpus yields no examples");

  ClassifierSpec spec = c.learner.classifier;
  json sidecar = {{"mode", to_string(c.mode())},
                  {"examples", examples.size()},
                  {"documents", docs.size()},
                  {"seed", c.seed}};
  std::string text;
  CvResult cv;
  if (c.learner.grid) {
    const auto grid = grid_search(examples, c.mode(), GridSpec::standard(), cv_options(c, emb));
    write_text(c.paths.model + ".grid.csv", grid_table_csv(grid));
    spec.kind = ClassifierKind::Forest;
    spec.forest = grid.best;
    for (const auto& row : grid.rows) {
      if (row.point == grid.best) cv = row.cv;
    }
    text += "grid points " + std::to_string(grid.rows.size()) + ", best " +
            to_string(grid.best) + "\n";
    sidecar["grid_best"] = to_string(grid.best);
    sidecar["grid_table"] = c.paths.model + ".grid.csv";
  } else {
    cv = cross_validate(examples, c.mode(), spec, cv_options(c, emb));
  }
  text += cv_table(cv);
  sidecar["cv"] = cv_json(cv);

  Model model = train_model(examples, spec, c.mode(), table ? table->dim() : 0, c.seed, c.jobs);
  model.merge_threshold = c.pipeline.resolver.merge_threshold;
  save_model(model, c.paths.model);
  sidecar["model"] = c.paths.model;
  emit_report(report.empty() ? c.paths.model + ".report" : report, text, sidecar);
  return 0;
}

int cmd_resolve(EngineConfig c, bool baseline, bool threshold_flag, const std::string& out) {
  const auto docs = load_corpus(c.paths.corpus, "input", true);
  const auto lex = load_lexicons(c);
  std::optional<Model> model;
  std::optional<EmbeddingTable> emb;
  std::unique_ptr<PronounScorer> scorer;
  if (baseline) {
    scorer = std::make_unique<AgreementScorer>();
  } else {
    if (c.paths.model.empty()) {
      throw Error(ErrorCode::InvalidConfig,
                  "no model; pass --model, or --baseline for the rule baseline");
    }
    model = load_model(c.paths.model);
    if (model->mode() != c.mode()) {
      throw Error(ErrorCode::ModelModeMismatch,
                  "model " + c.paths.model + " was trained in " +
                      std::string(to_string(model->mode())) + " mode; pass --mode " +
                      std::string(to_string(model->mode())));
    }
    if (!threshold_flag) c.pipeline.resolver.merge_threshold = model->merge_threshold;
    emb = load_table(c);
    scorer = std::make_unique<ModelScorer>(*model, emb ? &*emb : nullptr);
  }
  const auto text = write_predictions(resolve_corpus(docs, c.pipeline, *scorer, lex, c.jobs));
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text(out, text);
  }
  return 0;
}

int cmd_eval(const EngineConfig& c, const std::string& predictions, const std::string& report) {
  const auto docs = load_corpus(c.paths.corpus, "gold");
  const auto preds = parse_predictions(read_text(predictions));
  const auto r = evaluate(docs, preds, c.policy);
  const std::vector<std::pair<std::string, EvalResult>> rows = {{predictions, r}};
  json sidecar = json::parse(report_json(rows));
  emit_report(report, report_table(rows), {{"policy", to_string(c.policy)}, {"rows", sidecar}});
  return 0;
}

int cmd_gridsearch(const EngineConfig& c, const std::string& out, const std::string& report) {
  const auto docs = load_corpus(c.paths.corpus, "training");
  const auto lex = load_lexicons(c);
  const auto emb = load_table(c);
  const auto examples = pipeline_examples(docs, c.pipeline, lex, emb ? &*emb : nullptr);
  const auto grid = grid_search(examples, c.mode(), GridSpec::standard(), cv_options(c, emb));
  const auto csv = grid_table_csv(grid);
  write_text(out, csv);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", grid.best_f1);
  const std::string text = "points " + std::to_string(grid.rows.size()) + "\nbest " +
                           to_string(grid.best) + "\nf1 " + buf + "\n";
  emit_report(report.empty() ? out + ".report" : report, text,
              {{"points", grid.rows.size()},
               {"best", to_string(grid.best)},
               {"best_f1", grid.best_f1},
               {"table", out}});
  return 0;
}

int cmd_ablate(const EngineConfig& c, const std::vector<std::string>& only, double split,
               const std::string& report) {
  auto docs = load_corpus(c.paths.corpus, "training");
  const auto lex = load_lexicons(c);
  std::optional<EmbeddingTable> emb;
  if (!c.paths.embeddings.empty()) emb = load_embeddings(c.paths.embeddings);
  AblationCorpus corpus;
  corpus.lex = &lex;
  corpus.embeddings = emb ? &*emb : nullptr;
  if (!c.paths.test.empty()) {
    corpus.train = std::move(docs);
    corpus.test = load_corpus(c.paths.test, "test");
  } else {
    if (!(split > 0.0 && split < 1.0)) {
      throw Error(ErrorCode::InvalidConfig, "--split must lie strictly between 0 and 1");
    }
    const auto cut = static_cast<std::size_t>(split * static_cast<double>(docs.size()));
    corpus.train.assign(docs.begin(), docs.begin() + static_cast<long>(cut));
    corpus.test.assign(docs.begin() + static_cast<long>(cut), docs.end());
  }
  auto matrix = standard_ablation_matrix(c.learner.classifier.forest);
  if (!only.empty()) {
    std::vector<AblationSetting> keep;
    for (const auto& name : only) {
      auto it = std::find_if(matrix.begin(), matrix.end(),
                             [&](const AblationSetting& s) { return s.name == name; });
      if (it == matrix.end()) throw Error(ErrorCode::InvalidConfig, "unknown setting " + name);
      keep.push_back(*it);
    }
    matrix = std::move(keep);
  }
  const auto rows =
      ablation_run(matrix, corpus, c.pipeline.resolver, c.policy, c.seed, c.jobs);
  std::vector<std::pair<std::string, EvalResult>> table;
  for (const auto& r : rows) table.emplace_back(r.setting.name, r.result);
  emit_report(report, report_table(table),
              {{"policy", to_string(c.policy)},
               {"seed", c.seed},
               {"train_documents", corpus.train.size()},
               {"test_documents", corpus.test.size()},
               {"rows", json::parse(report_json(table))}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entity-centric hybrid pronoun resolver"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "JSON engine config");
  app.add_option("--seed", f.seed, "Seed for every random choice");
  app.add_option("--jobs", f.jobs, "Worker threads");
  app.add_option("--mode", f.mode, "hybrid or mention_pair");
  app.add_option("--policy", f.policy, "all or gold_anaphoric");
  app.add_option("--clusters", f.clusters, "system or gold partial entities");
  app.add_option("--threshold", f.threshold, "Merge threshold in [0,1]");
  app.add_option("--window", f.window, "Sentence window of the learned sieve");
  app.add_option("--classifier", f.classifier, "forest or logistic");
  app.add_option("--n-estimators", f.n_estimators, "Trees in the forest");
  app.add_option("--max-depth", f.max_depth, "Tree depth or 'none'");
  app.add_option("--criterion", f.criterion, "gini or entropy");
  app.add_option("--folds", f.folds, "Cross-validation folds");
  app.add_option("--corpus", f.corpus, "Corpus file (training, input or gold)");
  app.add_option("--test", f.test, "Held-out corpus for ablate");
  app.add_option("--lexicons", f.lexicons, "Lexicon directory");
  app.add_option("--embeddings", f.embeddings, "Word-vector text file");
  app.add_option("--model", f.model, "Model file");
  app.add_flag("--no-rule-sieves", f.no_rule_sieves, "Disable the rule sieves");

  auto* gen = app.add_subcommand("gen", "Write a synthetic corpus");
  int count = 400, dim = 8;
  std::string gen_out, prefix = "syn", emb_out;
  std::optional<int> entities, sentences;
  std::optional<double> pronoun_rate;
  gen->add_option("--count", count, "Documents")->capture_default_str();
  gen->add_option("--out", gen_out, "Corpus file")->required();
  gen->add_option("--prefix", prefix, "Document id prefix")->capture_default_str();
  gen->add_option("--embeddings-out", emb_out, "Also write toy word vectors");
  gen->add_option("--dim", dim, "Toy vector dimension")->capture_default_str();
  gen->add_option("--entities", entities, "Entities per document");
  gen->add_option("--sentences", sentences, "Minimum sentences per document");
  gen->add_option("--pronoun-rate", pronoun_rate, "Chance of a pronoun where one is allowed");

  auto* train = app.add_subcommand("train", "Train the learned sieve");
  std::string report;
  train->add_flag("--grid", f.grid, "Grid-search the forest first");
  train->add_option("--report", report, "Report file; a .json sidecar is written next to it");

  auto* resolve = app.add_subcommand("resolve", "Resolve the pronouns of a corpus");
  bool baseline = false;
  std::string resolve_out;
  resolve->add_flag("--baseline", baseline, "Rule sieves plus agreement, no model");
  resolve->add_option("--out", resolve_out, "Prediction file (default stdout)");

  auto* eval = app.add_subcommand("eval", "Score predictions against gold chains");
  std::string predictions;
  eval->add_option("--predictions", predictions, "Prediction file")->required();
  eval->add_option("--report", report, "Report file; a .json sidecar is written next to it");

  auto* grid = app.add_subcommand("gridsearch", "Cross-validated forest grid");
  std::string grid_out;
  grid->add_option("--out", grid_out, "CSV table")->required();
  grid->add_option("--report", report, "Report file; a .json sidecar is written next to it");

  auto* ablate = app.add_subcommand("ablate", "Run the ablation matrix");
  std::vector<std::string> only;
  double split = 0.8;
  ablate->add_option("--only", only, "Setting names to run");
  ablate->add_option("--split", split, "Train share when no --test is given")
      ->capture_default_str();
  ablate->add_option("--report", report, "Report file; a .json sidecar is written next to it");

  CLI11_PARSE(app, argc, argv);

  try {
    EngineConfig c = resolve_config(f);
    if (entities) c.synth.entities = *entities;
    if (sentences) c.synth.sentences = *sentences;
    if (pronoun_rate) c.synth.pronoun_rate = *pronoun_rate;
    if (*gen) return cmd_gen(c, count, gen_out, prefix, emb_out, dim);
    if (*train) return cmd_train(c, report);
    if (*resolve) return cmd_resolve(c, baseline, f.threshold.has_value(), resolve_out);
    if (*eval) return cmd_eval(c, predictions, report);
    if (*grid) return cmd_gridsearch(c, grid_out, report);
    if (*ablate) return cmd_ablate(c, only, split, report);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
