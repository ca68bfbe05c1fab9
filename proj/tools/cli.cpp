#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <nlohmann/json.hpp>
#include <memory>
#include <optional>
#include <sstream>

#include "kgvec/analogy.hpp"
#include "kgvec/error.hpp"
#include "kgvec/evaluation.hpp"
#include "kgvec/graph_index.hpp"
#include "kgvec/model_io.hpp"
#include "kgvec/negatives.hpp"
#include "kgvec/neural_scorer.hpp"
#include "kgvec/ntriples.hpp"
#include "kgvec/pca.hpp"
#include "kgvec/quality_metrics.hpp"
#include "kgvec/skipgram.hpp"
#include "kgvec/vocabulary.hpp"

namespace kgvec::cli {
namespace {

using Clock = std::chrono::steady_clock;
using json = nlohmann::ordered_json;

// An error tagged with the pipeline phase it came from.
struct PhaseFailure {
  std::string phase;
  ErrorCode code;
  std::string message;
};

template <typename F>
auto in_phase(const char* phase, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw PhaseFailure{phase, e.code(), e.what()};
  } catch (const std::exception& e) {
    throw PhaseFailure{phase, ErrorCode::Io, e.what()};
  }
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_readable(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw Error(ErrorCode::Io, "cannot open " + path);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  return out;
}

struct CommonOptions {
  std::uint64_t seed = 1;
  int workers = 1;
  std::vector<std::string> type_predicates = default_type_predicates();
};

// ---------------------------------------------------------------- train

struct TrainOptions {
  std::string input;
  std::string model_out;
  std::string stats_out;
  std::string vocab_out;
  std::string binary_out;
  TrainConfig config;
  std::uint64_t min_count = 1;
  double split = 0;  // 0: train on everything
  bool use_output_vectors = false;
};

int cmd_train(const TrainOptions& opt, const CommonOptions& common, std::ostream& out) {
  const auto total_start = Clock::now();
  in_phase("ingest", [&] { require_readable(opt.input); });

  // Phase 1: count tokens.
  auto vocab_start = Clock::now();
  ParsedGraph parsed = in_phase("ingest", [&] { return parse_ntriples_file(opt.input); });
  std::vector<RawTriple> corpus_raw;
  if (opt.split > 0) {
    const IndexSplit split = in_phase("split", [&] {
      return split_indices(parsed.triples.size(), {opt.split, common.seed});
    });
    corpus_raw.reserve(split.train.size());
    for (auto i : split.train) corpus_raw.push_back(std::move(parsed.triples[i]));
  } else {
    corpus_raw = std::move(parsed.triples);
  }
  const Vocabulary vocab = in_phase("vocabulary", [&] { return Vocabulary::build(corpus_raw, opt.min_count); });
  const EncodedCorpus corpus = encode_corpus(corpus_raw, vocab);
  corpus_raw.clear();
  corpus_raw.shrink_to_fit();
  const double vocab_seconds = seconds_since(vocab_start);

  // Phase 2: learn.
  TrainConfig config = opt.config;
  config.workers = common.workers;
  config.seed = derive_seed(common.seed, "train");
  TrainResult<float> trained = in_phase("train", [&] { return train<float>(corpus.triples, vocab, config); });
  trained.stats.vocab_seconds = vocab_seconds;

  // Phase 3: save.
  const auto save_start = Clock::now();
  in_phase("save", [&] {
    const Embeddings published = publish(trained.model, opt.use_output_vectors);
    save_model(published, opt.model_out);
    if (!opt.binary_out.empty()) save_model_binary(published, opt.binary_out);
    if (!opt.vocab_out.empty()) {
      auto vocab_file = open_output(opt.vocab_out);
      vocab.write_sidecar(vocab_file);
    }
  });
  trained.stats.save_seconds = seconds_since(save_start);
  const double total_seconds = seconds_since(total_start);

  const ThroughputStats& s = trained.stats;
  json stats;
  stats["parse"] = json::parse(parsed.stats.to_json());
  stats["triples"] = corpus.triples.size();
  stats["dropped_by_threshold"] = corpus.dropped;
  stats["vectors"] = vocab.size();
  stats["dimensionality"] = config.dim;
  stats["epochs"] = config.epochs;
  stats["workers"] = config.workers;
  stats["phases"] = {{"vocab_count", s.vocab_seconds}, {"train", s.train_seconds}, {"save", s.save_seconds}};
  stats["total_seconds"] = total_seconds;
  stats["triples_processed"] = s.triples_processed;
  stats["rate_triples_per_second"] = s.rate();
  stats["epoch_losses"] = trained.epoch_losses;
  in_phase("save", [&] {
    auto stats_file = open_output(opt.stats_out.empty() ? opt.model_out + ".stats.json" : opt.stats_out);
    stats_file << stats.dump(2) << '\n';
  });

  out << std::fixed << std::setprecision(1);
  out << "Number of triples   " << corpus.triples.size() << '\n';
  out << "Number of vectors   " << vocab.size() << '\n';
  out << "Dimensionality      " << config.dim << '\n';
  out << "Phase vocab-count   " << std::setprecision(3) << s.vocab_seconds << " s\n";
  out << "Phase train         " << s.train_seconds << " s\n";
  out << "Phase save          " << s.save_seconds << " s\n";
  out << "Runtime (s)         " << total_seconds << '\n';
  out << "Rate (triples/s)    " << std::setprecision(0) << s.rate() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- shared loading

struct LoadedGraph {
  Vocabulary vocab;
  std::vector<Triple> triples;
  VectorTable vectors;
  std::vector<TokenId> type_predicates;
};

LoadedGraph load_graph_and_model(const std::string& model_path, const std::string& input,
                                 const CommonOptions& common) {
  in_phase("ingest", [&] {
    require_readable(input);
    require_readable(model_path);
  });
  LoadedGraph g;
  ParsedGraph parsed = in_phase("ingest", [&] { return parse_ntriples_file(input); });
  g.vocab = in_phase("vocabulary", [&] { return Vocabulary::build(parsed.triples, 1); });
  g.triples = encode_corpus(parsed.triples, g.vocab).triples;
  const Embeddings model = in_phase("load", [&] { return load_model(model_path); });
  g.vectors = align(model, g.vocab);
  g.type_predicates = resolve_predicates(g.vocab, common.type_predicates);
  return g;
}

std::vector<TokenId> with_vectors(const std::vector<TokenId>& ids, const VectorTable& vectors) {
  std::vector<TokenId> out;
  for (TokenId id : ids)
    if (vectors.has(id)) out.push_back(id);
  return out;
}

// ---------------------------------------------------------------- eval

struct EvalOptions {
  std::string model;
  std::string input;
  std::string scorer = "analogy";
  std::string negatives = "corrupt";
  double split = 0.9;
  std::optional<double> epsilon;
  std::size_t analogy_sample = 0;
  int scorer_epochs = 100;
  std::size_t batch_size = 32;
  double scorer_lr = 1e-3;
  bool object_only = false;
  bool keep_unseen = false;
  bool random_ties = false;
  bool print_json = false;
  std::string report_out;
  std::string scorer_out;
  std::string scorer_in;
};

int cmd_eval(const EvalOptions& opt, const CommonOptions& common, std::ostream& out) {
  LoadedGraph g = load_graph_and_model(opt.model, opt.input, common);
  const DatasetSplit split =
      in_phase("split", [&] { return split_dataset(g.triples, {opt.split, common.seed}, !opt.keep_unseen); });
  const GraphIndex train_index(split.train, g.vocab.size(), g.type_predicates);
  const GraphIndex full_index(g.triples, g.vocab.size(), g.type_predicates);
  const std::vector<TokenId> entities = with_vectors(g.vocab.entities(), g.vectors);

  json config;
  config["scorer"] = opt.scorer;
  config["seed"] = common.seed;
  config["split"] = opt.split;
  config["train_triples"] = split.train.size();
  config["test_triples"] = split.test.size();
  config["unseen_test_triples"] = split.unseen;
  config["candidates"] = entities.size();
  config["positions"] = opt.object_only ? "object" : "subject+object";

  std::unique_ptr<TripleScorer> scorer;
  NeuralScorer neural;
  if (opt.scorer == "analogy") {
    AnalogyConfig analogy;
    analogy.epsilon = opt.epsilon.value_or(default_epsilon(g.vectors, entities));
    analogy.sample_limit = opt.analogy_sample;
    config["epsilon"] = analogy.epsilon;
    scorer = std::make_unique<AnalogyScorer>(g.vectors, train_index, analogy);
  } else {
    const NegativeStrategy strategy = parse_strategy(opt.negatives);
    config["negatives"] = std::string(to_string(strategy));
    if (!opt.scorer_in.empty()) {
      neural = in_phase("scorer", [&] { return load_scorer(opt.scorer_in); });
      config["scorer_file"] = opt.scorer_in;
    } else {
      std::vector<Triple> positives;
      for (const Triple& t : split.train)
        if (g.vectors.has(t.subject) && g.vectors.has(t.predicate) && g.vectors.has(t.object)) positives.push_back(t);
      const NegativeGenerator generator = in_phase("scorer", [&] {
        return NegativeGenerator(entities, with_vectors(g.vocab.relations(), g.vectors), &train_index);
      });
      ScorerTrainConfig train_config;
      train_config.epochs = opt.scorer_epochs;
      train_config.batch_size = opt.batch_size;
      train_config.adam.learning_rate = opt.scorer_lr;
      train_config.strategy = strategy;
      train_config.seed = derive_seed(common.seed, "scorer");
      const ScorerTrainResult trained =
          in_phase("scorer", [&] { return train_neural_scorer(g.vectors, positives, generator, train_config); });
      neural = trained.scorer;
      config["scorer_epochs"] = opt.scorer_epochs;
      config["scorer_final_loss"] = trained.epoch_losses.back();
    }
    if (!opt.scorer_out.empty()) in_phase("save", [&] { save_scorer(neural, opt.scorer_out); });
    scorer = std::make_unique<NeuralTripleScorer>(neural, g.vectors);
  }

  LinkPredictionOptions lp;
  lp.corrupt_subject = !opt.object_only;
  lp.rank.random_ties = opt.random_ties;
  lp.rank.tie_seed = derive_seed(common.seed, "ties");
  lp.workers = common.workers;
  const LinkPredictionRun run = in_phase("rank", [&] {
    return run_link_prediction(*scorer, split.test, entities, full_index, g.vectors, lp);
  });
  EvaluationReport report = in_phase("report", [&] { return hits_at_k(run.results); });
  report.skipped = run.skipped;
  report.config = config;

  const std::string report_json = report.to_json();
  if (!opt.report_out.empty()) {
    in_phase("report", [&] {
      auto file = open_output(opt.report_out);
      file << report_json << '\n';
    });
  }
  out << (opt.print_json ? report_json + "\n" : report.to_table());
  return kExitOk;
}

// ---------------------------------------------------------------- metrics

struct MetricsOptions {
  std::string model;
  std::string input;
  std::size_t neighbours = 10;
  std::string kind = "nst";
  std::string ordering;
  std::size_t limit = 10'000;
  std::size_t stride = 1;
  std::size_t candidate_sample = 0;
  std::string similarity = "cosine";
  std::string trace_out;
};

int cmd_metrics(const MetricsOptions& opt, const CommonOptions& common, std::ostream& out, std::ostream& err) {
  LoadedGraph g = load_graph_and_model(opt.model, opt.input, common);
  const GraphIndex index(g.triples, g.vocab.size(), g.type_predicates);
  std::vector<TokenId> candidates = entity_candidates(g.vocab, g.vectors);

  std::vector<TokenId> ordering;
  if (!opt.ordering.empty()) {
    in_phase("ingest", [&] {
      std::ifstream in(opt.ordering);
      if (!in) throw Error(ErrorCode::Io, "cannot open " + opt.ordering);
      std::string line;
      std::size_t unknown = 0;
      while (std::getline(in, line) && ordering.size() < opt.limit) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.size() > 2 && line.front() == '<' && line.back() == '>') line = line.substr(1, line.size() - 2);
        if (line.empty()) continue;
        auto id = g.vocab.id(line);
        if (id && g.vocab.is_entity(*id) && g.vectors.has(*id)) {
          ordering.push_back(*id);
        } else {
          ++unknown;
        }
      }
      if (unknown > 0) err << "metrics: skipped " << unknown << " ordering entries without a vector\n";
    });
  } else {
    ordering = candidates;
    Rng rng(derive_seed(common.seed, "ordering"));
    std::shuffle(ordering.begin(), ordering.end(), rng);
    if (ordering.size() > opt.limit) ordering.resize(opt.limit);
  }
  if (opt.candidate_sample > 0 && opt.candidate_sample < candidates.size()) {
    Rng rng(derive_seed(common.seed, "candidates"));
    candidates = sample_candidates(candidates, opt.candidate_sample, rng);
  }

  MetricConfig config;
  config.neighbours = opt.neighbours;
  config.kind = parse_metric_kind(opt.kind);
  config.similarity = opt.similarity == "euclidean" ? Similarity::Euclidean : Similarity::Cosine;
  config.workers = common.workers;
  const NeighbourSearch search(g.vectors, candidates, config.similarity);
  const MetricTrace trace =
      in_phase("metrics", [&] { return metric_trace(search, index, ordering, config, opt.stride); });

  if (!opt.trace_out.empty()) {
    in_phase("save", [&] {
      auto file = open_output(opt.trace_out);
      write_trace_tsv(trace, g.vocab.uris(), file);
    });
  }
  json summary;
  summary["metric"] = std::string(to_string(config.kind));
  summary["neighbours"] = config.neighbours;
  summary["entities"] = ordering.size();
  summary["value"] = trace.final_value;
  out << summary.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- project

struct ProjectOptions {
  std::string model;
  std::string entities;
  std::string output;
  Eigen::Index rank = 3;
};

int cmd_project(const ProjectOptions& opt, std::ostream& out) {
  in_phase("ingest", [&] { require_readable(opt.model); });
  const Embeddings model = in_phase("load", [&] { return load_model(opt.model); });
  std::vector<Eigen::Index> rows;
  if (opt.entities.empty()) {
    for (Eigen::Index r = 0; r < model.size(); ++r) rows.push_back(r);
  } else {
    in_phase("ingest", [&] {
      std::ifstream in(opt.entities);
      if (!in) throw Error(ErrorCode::Io, "cannot open " + opt.entities);
      std::unordered_map<std::string_view, Eigen::Index> by_uri;
      for (Eigen::Index r = 0; r < model.size(); ++r) by_uri.emplace(model.tokens[static_cast<std::size_t>(r)], r);
      std::string line;
      while (std::getline(in, line)) {
        if (auto it = by_uri.find(line); it != by_uri.end()) rows.push_back(it->second);
      }
    });
  }
  Eigen::MatrixXd points(static_cast<Eigen::Index>(rows.size()), model.dim());
  std::vector<std::string> uris;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    points.row(static_cast<Eigen::Index>(i)) = model.vectors.row(rows[i]).cast<double>();
    uris.push_back(model.tokens[static_cast<std::size_t>(rows[i])]);
  }
  const Projection projection = in_phase("project", [&] { return fit_pca(points, opt.rank); });
  const Eigen::MatrixXd coords = projection.transform(points);
  in_phase("save", [&] {
    if (opt.output.empty()) {
      write_projection_tsv(uris, coords, out);
    } else {
      auto file = open_output(opt.output);
      write_projection_tsv(uris, coords, file);
      json summary;
      summary["points"] = rows.size();
      summary["rank"] = opt.rank;
      summary["explained_variance"] =
          std::vector<double>(projection.explained_variance.data(),
                              projection.explained_variance.data() + projection.explained_variance.size());
      summary["total_variance"] = projection.total_variance;
      out << summary.dump() << '\n';
    }
  });
  return kExitOk;
}

// ---------------------------------------------------------------- info

struct InfoOptions {
  std::string model;
  std::string input;
  std::string scorer;
  std::string vocab_out;
  std::uint64_t min_count = 1;
  bool dump_json = false;
};

int cmd_info(const InfoOptions& opt, std::ostream& out) {
  if (opt.model.empty() && opt.input.empty() && opt.scorer.empty())
    throw PhaseFailure{"info", ErrorCode::Flag, "give at least one of --model, --input, --scorer-file"};
  json info;
  if (!opt.input.empty()) {
    in_phase("ingest", [&] { require_readable(opt.input); });
    const ParsedGraph parsed = in_phase("ingest", [&] { return parse_ntriples_file(opt.input); });
    info["parse"] = json::parse(parsed.stats.to_json());
    info["gzip"] = is_gzip_file(opt.input);
    if (!parsed.triples.empty()) {
      const Vocabulary vocab = in_phase("vocabulary", [&] { return Vocabulary::build(parsed.triples, opt.min_count); });
      info["vocabulary"] = {{"tokens", vocab.size()},
                            {"entities", vocab.entities().size()},
                            {"relations", vocab.relations().size()},
                            {"below_min_count", vocab.discarded_tokens()}};
      if (!opt.vocab_out.empty()) {
        in_phase("save", [&] {
          auto file = open_output(opt.vocab_out);
          vocab.write_sidecar(file);
        });
      }
    }
  }
  if (!opt.model.empty()) {
    in_phase("ingest", [&] { require_readable(opt.model); });
    const Embeddings model = in_phase("load", [&] { return load_model(opt.model); });
    const Eigen::VectorXf norms = model.vectors.rowwise().norm();
    info["model"] = {{"vectors", model.size()},
                     {"dimensionality", model.dim()},
                     {"mean_norm", norms.size() ? static_cast<double>(norms.mean()) : 0.0},
                     {"finite", model.vectors.allFinite()}};
  }
  if (!opt.scorer.empty()) {
    in_phase("ingest", [&] { require_readable(opt.scorer); });
    const NeuralScorer scorer = in_phase("load", [&] { return load_scorer(opt.scorer); });
    info["scorer"] = opt.dump_json ? json::parse(scorer_summary_json(scorer))
                                   : json{{"dim", scorer.dim()}, {"hidden", scorer.params.hidden()}};
  }
  out << info.dump(2) << '\n';
  return kExitOk;
}

int exit_code_for(ErrorCode code, const std::string& phase) {
  if (code == ErrorCode::Flag || code == ErrorCode::InvalidConfig) return kExitUsage;
  if (code == ErrorCode::Io && phase == "ingest") return kExitUsage;
  return kExitRuntime;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Skip-gram knowledge graph embeddings: training, link prediction and distributional metrics",
               "kgvec"};
  app.require_subcommand(1);

  CommonOptions common;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", common.seed, "Seed for every random stream")->capture_default_str();
    cmd->add_option("--workers", common.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  };
  auto add_type_predicates = [&](CLI::App* cmd) {
    cmd->add_option("--type-predicates", common.type_predicates, "Predicates counted as types/categories")
        ->delimiter(',')
        ->capture_default_str();
  };

  TrainOptions train_opt;
  train_opt.config.dim = 100;
  auto* train_cmd = app.add_subcommand("train", "Train skip-gram embeddings on an N-Triples file");
  train_cmd->add_option("input", train_opt.input, "N-Triples input (optionally gzip)")->required();
  train_cmd->add_option("-o,--output", train_opt.model_out, "Model file (text format)")->required();
  train_cmd->add_option("--dim", train_opt.config.dim, "Dimensionality")->check(CLI::PositiveNumber)->capture_default_str();
  train_cmd->add_option("--epochs", train_opt.config.epochs, "Passes over the corpus")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--negative", train_opt.config.negative, "Negative samples per pair")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--min-count", train_opt.min_count, "Drop tokens seen fewer times")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--lr", train_opt.config.learning_rate, "Initial learning rate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--min-lr", train_opt.config.min_learning_rate, "Learning-rate floor")->capture_default_str();
  train_cmd->add_option("--unigram-power", train_opt.config.unigram_power, "Exponent of the negative distribution")
      ->capture_default_str();
  train_cmd->add_option("--split", train_opt.split, "Train only on this seeded fraction (same split as eval)")
      ->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--stats-out", train_opt.stats_out, "Stats JSON (default <output>.stats.json)");
  train_cmd->add_option("--vocab-out", train_opt.vocab_out, "Vocabulary sidecar TSV");
  train_cmd->add_option("--binary-out", train_opt.binary_out, "Binary model sidecar");
  train_cmd->add_flag("--output-vectors", train_opt.use_output_vectors, "Publish output instead of input vectors");
  add_common(train_cmd);

  EvalOptions eval_opt;
  auto* eval_cmd = app.add_subcommand("eval", "Filtered link prediction (Hits@1/3/10)");
  eval_cmd->add_option("model", eval_opt.model, "Model file")->required();
  eval_cmd->add_option("input", eval_opt.input, "N-Triples graph")->required();
  eval_cmd->add_option("--scorer", eval_opt.scorer, "analogy or lstm")
      ->check(CLI::IsMember({"analogy", "lstm"}))
      ->capture_default_str();
  eval_cmd->add_option("--negatives", eval_opt.negatives, "LSTM negatives: corrupt or random")
      ->check(CLI::IsMember({"corrupt", "random"}))
      ->capture_default_str();
  eval_cmd->add_option("--split", eval_opt.split, "Train fraction")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  eval_cmd->add_option("--epsilon", eval_opt.epsilon, "Analogy radius (default 0.1 x mean entity norm)")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--analogy-sample", eval_opt.analogy_sample, "Cap on triples compared per analogy query");
  eval_cmd->add_option("--scorer-epochs", eval_opt.scorer_epochs, "LSTM epochs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval_cmd->add_option("--batch-size", eval_opt.batch_size, "LSTM positives per batch")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval_cmd->add_option("--scorer-lr", eval_opt.scorer_lr, "Adam learning rate")->capture_default_str();
  eval_cmd->add_flag("--object-only", eval_opt.object_only, "Corrupt objects only");
  eval_cmd->add_flag("--keep-unseen", eval_opt.keep_unseen, "Keep test triples with tokens unseen in training");
  eval_cmd->add_flag("--random-ties", eval_opt.random_ties, "Break score ties randomly instead of by token id");
  eval_cmd->add_flag("--json", eval_opt.print_json, "Print the JSON report instead of the table");
  eval_cmd->add_option("--report-out", eval_opt.report_out, "Write the JSON report here");
  eval_cmd->add_option("--scorer-out", eval_opt.scorer_out, "Save the trained LSTM scorer");
  eval_cmd->add_option("--scorer-in", eval_opt.scorer_in, "Use a saved LSTM scorer instead of training");
  add_common(eval_cmd);
  add_type_predicates(eval_cmd);

  MetricsOptions metrics_opt;
  auto* metrics_cmd = app.add_subcommand("metrics", "NST / TCT distributional metrics with partial traces");
  metrics_cmd->add_option("model", metrics_opt.model, "Model file")->required();
  metrics_cmd->add_option("input", metrics_opt.input, "N-Triples graph")->required();
  metrics_cmd->add_option("--neighbours", metrics_opt.neighbours, "Nearest neighbours N")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  metrics_cmd->add_option("--kind", metrics_opt.kind, "nst or tct")
      ->check(CLI::IsMember({"nst", "tct"}))
      ->capture_default_str();
  metrics_cmd->add_option("--ordering", metrics_opt.ordering, "Entity ordering file, one URI per line");
  metrics_cmd->add_option("--limit", metrics_opt.limit, "Entities to evaluate")->capture_default_str();
  metrics_cmd->add_option("--stride", metrics_opt.stride, "Trace sampling stride")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  metrics_cmd->add_option("--candidate-sample", metrics_opt.candidate_sample,
                          "Search neighbours among a random subset of this size");
  metrics_cmd->add_option("--similarity", metrics_opt.similarity, "cosine or euclidean")
      ->check(CLI::IsMember({"cosine", "euclidean"}))
      ->capture_default_str();
  metrics_cmd->add_option("--trace-out", metrics_opt.trace_out, "Trace TSV path");
  add_common(metrics_cmd);
  add_type_predicates(metrics_cmd);

  ProjectOptions project_opt;
  auto* project_cmd = app.add_subcommand("project", "PCA projection of embeddings");
  project_cmd->add_option("model", project_opt.model, "Model file")->required();
  project_cmd->add_option("--rank", project_opt.rank, "Output dimensions")->capture_default_str();
  project_cmd->add_option("--entities", project_opt.entities, "Restrict to these URIs, one per line");
  project_cmd->add_option("-o,--output", project_opt.output, "Projection TSV path (default stdout)");

  InfoOptions info_opt;
  auto* info_cmd = app.add_subcommand("info", "Inspect inputs, models and scorers");
  info_cmd->add_option("--model", info_opt.model, "Model file");
  info_cmd->add_option("--input", info_opt.input, "N-Triples file; prints parse statistics");
  info_cmd->add_option("--scorer-file", info_opt.scorer, "Saved LSTM scorer");
  info_cmd->add_option("--vocab-out", info_opt.vocab_out, "Write the vocabulary sidecar of --input");
  info_cmd->add_option("--min-count", info_opt.min_count, "Vocabulary threshold for --input")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  info_cmd->add_flag("--dump-json", info_opt.dump_json, "Print scorer tensor shapes and norms");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error [usage]: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*train_cmd) return cmd_train(train_opt, common, out);
    if (*eval_cmd) return cmd_eval(eval_opt, common, out);
    if (*metrics_cmd) return cmd_metrics(metrics_opt, common, out, err);
    if (*project_cmd) return cmd_project(project_opt, out);
    if (*info_cmd) return cmd_info(info_opt, out);
  } catch (const PhaseFailure& f) {
    err << "error [" << f.phase << "]: " << f.message << '\n';
    return exit_code_for(f.code, f.phase);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code(), "");
  }
  return kExitUsage;
}

}  // namespace kgvec::cli
