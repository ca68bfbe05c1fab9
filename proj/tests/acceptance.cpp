#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "kgvec/analogy.hpp"
#include "kgvec/evaluation.hpp"
#include "kgvec/negatives.hpp"
#include "kgvec/neural_scorer.hpp"
#include "kgvec/pca.hpp"
#include "kgvec/quality_metrics.hpp"
#include "kgvec/skipgram.hpp"
#include "support/fixtures.hpp"
#include "support/gradient_check.hpp"
#include "support/synthetic.hpp"

using namespace kgvec;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Every link-prediction run in this binary is checked for these.
struct RunChecks {
  std::size_t runs = 0;
  std::size_t monotone_violations = 0;
  std::size_t filter_violations = 0;

  void observe(std::span<const RankResult> results) {
    ++runs;
    const EvaluationReport r = hits_at_k(results);
    if (!(r.hits1 <= r.hits3 && r.hits3 <= r.hits10)) ++monotone_violations;
    for (std::size_t k : {1u, 3u, 10u})
      if (hits_at(results, k) < hits_at(results, k, true)) ++filter_violations;
  }
} run_checks;

// ---------------------------------------------------------------- 1

struct StrategyHits {
  double lstm_corrupt = 0;
  double lstm_random = 0;
  double analogy = 0;
};

StrategyHits strategy_run(std::uint64_t seed) {
  const auto raw = testing::bibliography_kg(seed);
  const Vocabulary vocab = Vocabulary::build(raw, 1);
  const std::vector<Triple> corpus = encode_corpus(raw, vocab).triples;
  const DatasetSplit split = split_dataset(corpus, {0.9, seed});

  TrainConfig config;
  config.dim = 10;
  config.epochs = 200;
  config.seed = derive_seed(seed, "train");
  const TrainResult<float> trained = train<float>(split.train, vocab, config);
  const VectorTable vectors = align(publish(trained.model, false), vocab);

  const GraphIndex train_index(split.train, vocab.size(), {});
  const GraphIndex full_index(corpus, vocab.size(), {});
  const std::vector<TokenId> entities = vocab.entities();
  const NegativeGenerator generator(vocab, &train_index);

  auto hits10 = [&](const TripleScorer& scorer) {
    const auto run = run_link_prediction(scorer, split.test, entities, full_index, vectors, {});
    run_checks.observe(run.results);
    return hits_at(run.results, 10);
  };
  auto lstm = [&](NegativeStrategy strategy) {
    ScorerTrainConfig sc;
    sc.strategy = strategy;
    sc.seed = derive_seed(seed, "scorer");
    const ScorerTrainResult fitted = train_neural_scorer(vectors, split.train, generator, sc);
    return hits10(NeuralTripleScorer(fitted.scorer, vectors));
  };

  StrategyHits h;
  h.lstm_corrupt = lstm(NegativeStrategy::Corrupt);
  h.lstm_random = lstm(NegativeStrategy::Random);
  h.analogy = hits10(AnalogyScorer(vectors, train_index, {default_epsilon(vectors, entities), 0}));
  return h;
}

Verdict strategy_ordering() {
  const auto start = Clock::now();
  int ordered = 0;
  std::string runs;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const StrategyHits h = strategy_run(seed);
    const bool ok = h.lstm_corrupt > h.lstm_random && h.lstm_random > h.analogy;
    ordered += ok;
    runs += fmt(" [%.2f %.2f %.2f]", h.lstm_corrupt, h.lstm_random, h.analogy);
    std::cerr << "strategy ordering seed " << seed << ": corrupt " << h.lstm_corrupt << " random " << h.lstm_random
              << " analogy " << h.analogy << '\n';
  }
  const double elapsed = seconds_since(start);
  return {ordered >= 4 && elapsed < 1200,
          fmt("ordered in %d/5 seeds, %.0f s; Hits@10 corrupt/random/analogy:", ordered, elapsed) + runs};
}

// ---------------------------------------------------------------- 2

Verdict throughput() {
  testing::TempDir dir;
  const std::string graph = dir.file("big.nt");
  {
    const auto raw = testing::synthetic_kg(7, {.types = 40, .entities_per_type = 2500, .communities = 25,
                                               .relations = 200, .triples = 1'000'000});
    std::ofstream out(graph);
    out << testing::to_ntriples(raw);
  }
  const std::string model = dir.file("big.txt");
  std::ostringstream out, err;
  const int code = cli::run({"kgvec", "train", graph, "-o", model, "--dim", "64", "--epochs", "1", "--workers", "4"},
                            out, err);
  if (code != 0) return {false, "train exited with " + std::to_string(code) + ": " + err.str()};
  const auto stats = nlohmann::json::parse(testing::read_file(model + ".stats.json"));
  const double rate = stats["rate_triples_per_second"].get<double>();
  const std::string table = out.str();
  bool phases = true;
  for (const char* phase : {"Phase vocab-count", "Phase train", "Phase save"})
    phases = phases && table.find(phase) != std::string::npos;
  std::cerr << table;
  return {rate >= 1000 && phases && stats["triples"] == 1'000'000,
          fmt("%.0f triples/s on 1,000,000 triples (d=64, 4 workers), phases %s", rate, phases ? "shown" : "missing")};
}

// ---------------------------------------------------------------- 3

Verdict gradients() {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0, 0.5);
  double sg_worst = 0;
  for (int config = 0; config < 100; ++config) {
    const Eigen::Index vocab = 6 + config % 5;
    auto model = EmbeddingModel<double>::zeros(std::vector<std::string>(static_cast<std::size_t>(vocab), "t"), 4);
    for (Eigen::Index i = 0; i < model.input.size(); ++i) {
      model.input.data()[i] = normal(rng);
      model.output.data()[i] = normal(rng);
    }
    std::uniform_int_distribution<TokenId> token(0, static_cast<TokenId>(vocab - 1));
    const TokenId center = token(rng), context = token(rng);
    std::vector<TokenId> negatives(1 + config % 5);
    for (auto& n : negatives) n = token(rng);
    const auto grad = negative_sampling_gradient(model, center, context, negatives);
    auto f = [&] { return negative_sampling_loss(model, center, context, negatives); };
    for (Eigen::Index i = 0; i < model.input.size(); ++i) {
      sg_worst = std::max(sg_worst, testing::relative_error(grad.input.data()[i],
                                                            testing::central_difference(model.input.data()[i], f)));
      sg_worst = std::max(sg_worst, testing::relative_error(grad.output.data()[i],
                                                            testing::central_difference(model.output.data()[i], f)));
    }
  }

  double lstm_worst = 0;
  for (int config = 0; config < 100; ++config) {
    auto p = ScorerParams<double>::zeros(4, 4);
    for (auto t : p.tensors())
      for (Eigen::Index i = 0; i < t.size(); ++i) t(i) = normal(rng);
    const Eigen::Index n = 1 + config % 4;
    SequenceBatch<double> x;
    for (auto& step : x) {
      step.resize(4, n);
      for (Eigen::Index i = 0; i < step.size(); ++i) step.data()[i] = 2 * normal(rng);
    }
    Vector<double> labels(n);
    for (Eigen::Index j = 0; j < n; ++j) labels(j) = static_cast<double>((config + j) % 2);
    ScorerParams<double> grad;
    scorer_gradient(p, x, labels, grad);
    auto f = [&] { return scorer_loss(p, x, labels); };
    auto params = p.tensors();
    const auto grads = grad.tensors();
    for (std::size_t k = 0; k < params.size(); ++k)
      for (Eigen::Index i = 0; i < params[k].size(); ++i)
        lstm_worst =
            std::max(lstm_worst, testing::relative_error(grads[k](i), testing::central_difference(params[k](i), f)));
  }
  return {sg_worst < 1e-4 && lstm_worst < 1e-3,
          fmt("max relative error skip-gram %.2e, scorer %.2e over 100 configurations each", sg_worst, lstm_worst)};
}

// ---------------------------------------------------------------- 4

Verdict softmax() {
  std::mt19937_64 rng(4);
  double worst_sum = 0, worst_direct = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index vocab = 2 + trial % 49;
    auto model = EmbeddingModel<double>::zeros(std::vector<std::string>(static_cast<std::size_t>(vocab), "t"), 5);
    std::normal_distribution<double> normal(0, trial < 50 ? 1.0 : 8.0);
    for (Eigen::Index i = 0; i < model.input.size(); ++i) {
      model.input.data()[i] = normal(rng);
      model.output.data()[i] = normal(rng);
    }
    const TokenId given = static_cast<TokenId>(trial % vocab);
    double sum = 0;
    const Eigen::VectorXd logits = model.output * model.input.row(given).transpose();
    const double denominator = logits.array().exp().sum();
    for (TokenId u = 0; u < vocab; ++u) {
      const double p = softmax_probability(model, u, given);
      sum += p;
      const double direct = std::exp(logits(u)) / denominator;
      if (std::isfinite(direct)) worst_direct = std::max(worst_direct, std::abs(p - direct));
    }
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
  }
  return {worst_sum <= 1e-9 && worst_direct <= 1e-9,
          fmt("max |sum - 1| %.2e, max |stable - direct| %.2e", worst_sum, worst_direct)};
}

// ---------------------------------------------------------------- 5

struct RandomGraph {
  std::vector<Triple> triples;
  std::vector<TokenId> entities;
  VectorTable vectors;
  std::size_t vocab = 0;
  TokenId type_predicate = 0;
};

RandomGraph random_graph(std::mt19937_64& rng, std::size_t max_triples) {
  RandomGraph g;
  std::uniform_int_distribution<TokenId> entity_count(10, 80), relation_count(1, 8);
  const TokenId e = entity_count(rng), r = relation_count(rng);
  g.type_predicate = e + r;
  g.vocab = e + r + 1;
  std::uniform_int_distribution<TokenId> ent(0, e - 1), pred(e, e + r - 1), type(0, 3);
  std::uniform_int_distribution<std::size_t> size(max_triples / 2, max_triples - e);
  const std::size_t m = size(rng);
  for (std::size_t i = 0; i < m; ++i) g.triples.push_back({ent(rng), pred(rng), ent(rng)});
  for (TokenId i = 0; i < e; ++i)
    if (type(rng) != 0) g.triples.push_back({i, g.type_predicate, type(rng)});
  g.entities.resize(e);
  std::iota(g.entities.begin(), g.entities.end(), 0);
  g.vectors = testing::random_table(g.vocab, 6, rng);
  return g;
}

double brute_force_metric(const RandomGraph& g, std::size_t n, bool types_only) {
  std::map<TokenId, std::set<std::pair<TokenId, TokenId>>> sets;
  for (const Triple& t : g.triples)
    if (!types_only || t.predicate == g.type_predicate) sets[t.subject].insert({t.predicate, t.object});
  double total = 0;
  for (TokenId a : g.entities) {
    std::vector<std::pair<double, TokenId>> ranked;
    for (TokenId b : g.entities) {
      if (a == b) continue;
      double dot = 0, na = 0, nb = 0;
      for (Eigen::Index c = 0; c < g.vectors.dim(); ++c) {
        const double x = g.vectors.row(a)(c), y = g.vectors.row(b)(c);
        dot += x * y;
        na += x * x;
        nb += y * y;
      }
      ranked.push_back({-dot / std::sqrt(na * nb), b});
    }
    std::sort(ranked.begin(), ranked.end());
    double sum = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto& x = sets[a];
      const auto& y = sets[ranked[j].second];
      std::size_t common = 0;
      for (const auto& c : x) common += y.contains(c);
      const std::size_t joined = x.size() + y.size() - common;
      sum += joined == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(joined);
    }
    total += sum;
  }
  return total / static_cast<double>(n * g.entities.size());
}

Verdict metric_oracles() {
  std::mt19937_64 rng(5);
  int exact = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const RandomGraph g = random_graph(rng, 1000);
    const std::vector<TokenId> types = {g.type_predicate};
    const GraphIndex index(g.triples, g.vocab, types);
    const NeighbourSearch search(g.vectors, g.entities);
    const std::size_t n = 1 + static_cast<std::size_t>(trial) % 9;
    exact += nst(search, index, g.entities, n) == brute_force_metric(g, n, false) &&
             tct(search, index, g.entities, n) == brute_force_metric(g, n, true);
  }

  std::vector<Triple> clones, loners;
  for (TokenId e = 0; e < 8; ++e) {
    clones.push_back({e, 20, 21});
    clones.push_back({e, 22, 23});
    loners.push_back({e, 20, static_cast<TokenId>(e + 10)});
  }
  std::vector<TokenId> entities(8);
  std::iota(entities.begin(), entities.end(), 0);
  const VectorTable v = testing::random_table(24, 4, rng);
  const NeighbourSearch search(v, entities);
  const double clone_nst = nst(search, GraphIndex(clones, 24, {}), entities, 5);
  const double disjoint_nst = nst(search, GraphIndex(loners, 24, {}), entities, 5);
  return {exact == 20 && clone_nst == 1.0 && disjoint_nst == 0.0,
          fmt("%d/20 graphs exact for NST and TCT; clone NST %.3f, disjoint NST %.3f", exact, clone_nst,
              disjoint_nst)};
}

// ---------------------------------------------------------------- 6

Verdict analogy_oracle() {
  int exact = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    const RandomGraph g = random_graph(rng, 1000);
    const GraphIndex index(g.triples, g.vocab, {});
    const double eps = 0.3 + 0.05 * static_cast<double>(seed);
    bool all = true;
    for (int q = 0; q < 50; ++q) {
      const Triple query = g.triples[rng() % g.triples.size()];
      std::size_t hits = 0, compared = 0;
      for (const Triple& t : g.triples) {
        if (t.predicate != query.predicate) continue;
        double norm2 = 0;
        for (Eigen::Index c = 0; c < g.vectors.dim(); ++c) {
          const double diff = double(g.vectors.row(query.subject)(c)) + double(g.vectors.row(t.object)(c)) -
                              double(g.vectors.row(t.subject)(c)) - double(g.vectors.row(query.object)(c));
          norm2 += diff * diff;
        }
        ++compared;
        hits += std::sqrt(norm2) <= eps;
      }
      const double expected = static_cast<double>(hits) / static_cast<double>(compared);
      all = all && analogy_score(g.vectors, index, query, {eps, 0}).score == expected;
    }
    exact += all;
  }

  std::mt19937_64 rng(66);
  const RandomGraph g = random_graph(rng, 1000);
  const GraphIndex index(g.triples, g.vocab, {});
  int monotone = 0;
  for (int q = 0; q < 100; ++q) {
    const Triple query = g.triples[rng() % g.triples.size()];
    double previous = -1;
    bool ok = true;
    for (double eps = 0.05; eps < 6; eps *= 1.3) {
      const double s = analogy_score(g.vectors, index, query, {eps, 0}).score;
      ok = ok && s >= previous;
      previous = s;
    }
    monotone += ok;
  }
  return {exact == 20 && monotone == 100,
          fmt("%d/20 seeds exact over 50 queries each; %d/100 queries non-decreasing in epsilon", exact, monotone)};
}

// ---------------------------------------------------------------- 7

Verdict link_prediction_properties() {
  double mean_hits = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<TokenId> ent(0, 99);
    std::vector<Triple> triples;
    for (int i = 0; i < 300; ++i) triples.push_back({ent(rng), 100, ent(rng)});
    const GraphIndex known(triples, 101, {});
    const VectorTable vectors = testing::random_table(101, 2, rng);
    std::vector<TokenId> entities(100);
    std::iota(entities.begin(), entities.end(), 0);
    std::uniform_real_distribution<double> u(0, 1);
    const FunctionScorer random_scorer([&](const Triple&) { return u(rng); });
    const auto run = run_link_prediction(random_scorer, std::span(triples).first(100), entities, known, vectors, {});
    run_checks.observe(run.results);
    mean_hits += hits_at(run.results, 10) / 20.0;
  }

  // Hand fixture where filtering must help: known neighbours outscore the truth.
  {
    std::vector<Triple> triples;
    for (TokenId o = 0; o < 12; ++o) triples.push_back({0, 50, o});
    const GraphIndex known(triples, 51, {});
    std::vector<TokenId> entities(40);
    std::iota(entities.begin(), entities.end(), 0);
    const FunctionScorer by_id([](const Triple& t) { return -static_cast<double>(t.object + t.subject); });
    const VectorTable vectors = VectorTable::all_present(RowMatrix<float>::Ones(51, 1));
    const auto run = run_link_prediction(by_id, triples, entities, known, vectors, {});
    run_checks.observe(run.results);
  }

  const bool ok = std::abs(mean_hits - 10.0) <= 3.0 && run_checks.monotone_violations == 0 &&
                  run_checks.filter_violations == 0;
  return {ok, fmt("uniform scorer mean Hits@10 %.2f%% over 20 seeds; %zu runs, %zu monotonicity and %zu filtering "
                  "violations",
                  mean_hits, run_checks.runs, run_checks.monotone_violations, run_checks.filter_violations)};
}

// ---------------------------------------------------------------- 8

Verdict distributional_smoke() {
  int separated = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto raw = testing::two_cluster_graph(seed);
    const Vocabulary vocab = Vocabulary::build(raw, 1);
    const auto corpus = encode_corpus(raw, vocab).triples;
    TrainConfig config;
    config.dim = 16;
    config.epochs = 10;
    config.seed = seed;
    const auto trained = train<double>(corpus, vocab, config);
    std::vector<TokenId> a, b;
    for (TokenId e : vocab.entities()) (vocab.uri(e).find("/A/") != std::string::npos ? a : b).push_back(e);
    auto cosine = [&](TokenId x, TokenId y) {
      const auto u = trained.model.input.row(x), w = trained.model.input.row(y);
      return u.dot(w) / (u.norm() * w.norm());
    };
    double intra = 0, inter = 0;
    std::size_t n_intra = 0, n_inter = 0;
    for (const auto* group : {&a, &b})
      for (std::size_t i = 0; i < group->size(); ++i)
        for (std::size_t j = i + 1; j < group->size(); ++j, ++n_intra) intra += cosine((*group)[i], (*group)[j]);
    for (TokenId x : a)
      for (TokenId y : b) {
        inter += cosine(x, y);
        ++n_inter;
      }
    intra /= static_cast<double>(n_intra);
    inter /= static_cast<double>(n_inter);
    separated += intra > inter;
    detail += fmt(" [%.3f vs %.3f]", intra, inter);
  }
  return {separated == 5, fmt("intra > inter cosine in %d/5 seeds:", separated) + detail};
}

// ---------------------------------------------------------------- 9

Verdict pca() {
  Eigen::MatrixXd two(2, 4);
  two << 1, 1, 0, 0, 3, 1, 0, 0;
  const Projection p2 = fit_pca(two, 1);
  const Eigen::MatrixXd c2 = p2.transform(two);
  const bool two_point = std::abs(p2.components(0, 0) - 1.0) < 1e-12 && std::abs(c2(0, 0) + 1.0) < 1e-12 &&
                         std::abs(c2(1, 0) - 1.0) < 1e-12;

  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal(0, 1);
  double orth = 0, distortion = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 2 + trial % 10;
    Eigen::MatrixXd points(50, d);
    for (Eigen::Index i = 0; i < points.size(); ++i) points.data()[i] = normal(rng) * (1 + i % d);
    const Projection full = fit_pca(points, d);
    orth = std::max(orth, (full.components * full.components.transpose() - Eigen::MatrixXd::Identity(d, d))
                              .cwiseAbs()
                              .maxCoeff());
    const Eigen::MatrixXd y = full.transform(points);
    for (Eigen::Index i = 0; i < points.rows(); ++i)
      for (Eigen::Index j = i + 1; j < points.rows(); ++j)
        distortion = std::max(distortion,
                              std::abs((points.row(i) - points.row(j)).norm() - (y.row(i) - y.row(j)).norm()));
  }
  return {two_point && orth <= 1e-8 && distortion <= 1e-6,
          fmt("two-point case %s; max orthonormality error %.2e; max k=d distortion %.2e",
              two_point ? "recovered" : "wrong", orth, distortion)};
}

// ---------------------------------------------------------------- 10

Verdict determinism() {
  testing::TempDir dir;
  const auto raw = testing::synthetic_kg(10, {.types = 4, .entities_per_type = 30, .communities = 3, .relations = 6,
                                              .triples = 1500, .type_triples = 100});
  const std::string graph = dir.write("g.nt", testing::to_ntriples(raw));
  auto run = [&](std::vector<std::string> args) {
    args.insert(args.begin(), "kgvec");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return code == 0 ? out.str() : "exit " + std::to_string(code) + ": " + err.str();
  };
  std::vector<std::string> failures;
  for (const char* tag : {"a", "b"}) {
    const std::string t = tag;
    run({"train", graph, "-o", dir.file(t + ".txt"), "--dim", "12", "--epochs", "3", "--seed", "42", "--workers",
         "1"});
  }
  if (testing::read_file(dir.file("a.txt")) != testing::read_file(dir.file("b.txt")) ||
      testing::read_file(dir.file("a.txt")).empty())
    failures.push_back("train");
  const std::string model = dir.file("a.txt");
  auto twice = [&](const std::string& name, const std::vector<std::string>& args) {
    const std::string first = run(args);
    if (first.rfind("exit ", 0) == 0 || first != run(args)) failures.push_back(name);
  };
  twice("eval analogy", {"eval", model, graph, "--json", "--seed", "42", "--workers", "1"});
  twice("eval lstm", {"eval", model, graph, "--scorer", "lstm", "--scorer-epochs", "3", "--json", "--seed", "42",
                      "--workers", "1"});
  std::string traces[2];
  for (int i = 0; i < 2; ++i) {
    const std::string path = dir.file("trace" + std::to_string(i) + ".tsv");
    traces[i] = run({"metrics", model, graph, "--seed", "42", "--workers", "1", "--trace-out", path});
    traces[i] += testing::read_file(path);
  }
  if (traces[0] != traces[1] || traces[0].rfind("exit ", 0) == 0) failures.push_back("metrics");
  std::string detail = "train, eval (analogy, lstm), metrics byte-identical across two runs";
  if (!failures.empty()) {
    detail = "differs:";
    for (const auto& f : failures) detail += " " + f;
  }
  return {failures.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"strategy ordering", strategy_ordering},
      {"training throughput", throughput},
      {"gradient checks", gradients},
      {"softmax oracle", softmax},
      {"metric oracles", metric_oracles},
      {"analogy oracle", analogy_oracle},
      {"link-prediction properties", link_prediction_properties},
      {"distributional smoke test", distributional_smoke},
      {"pca", pca},
      {"determinism", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i + 1);
    if (!only.empty() && !only.contains(number)) continue;
    const auto start = Clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  " << number << ". " << criteria[i].first << ": " << v.detail
              << fmt(" (%.1f s)", seconds_since(start)) << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
