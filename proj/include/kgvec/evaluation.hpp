#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <vector>

#include "kgvec/analogy.hpp"
#include "kgvec/embedding_model.hpp"
#include "kgvec/graph_index.hpp"
#include "kgvec/neural_scorer.hpp"

namespace kgvec {

struct SplitSpec {
  double train_fraction = 0.9;
  std::uint64_t seed = 1;
};

struct IndexSplit {
  std::vector<std::uint32_t> train;
  std::vector<std::uint32_t> test;
};

/// Seeded uniform partition of [0, n); |train| = round(n * fraction).
/// Throws Error(DegenerateSplit) for fewer than 10 items or an empty side.
IndexSplit split_indices(std::size_t n, const SplitSpec& spec);

struct DatasetSplit {
  std::vector<Triple> train;
  std::vector<Triple> test;
  std::size_t unseen = 0;  // test triples dropped because a token never occurs in train
};

/// Throws Error(DegenerateSplit) when no test triple survives filtering.
DatasetSplit split_dataset(std::span<const Triple> corpus, const SplitSpec& spec, bool filter_unseen = true);

/// Common interface for ranking: higher score means more plausible.
class TripleScorer {
 public:
  virtual ~TripleScorer() = default;
  virtual void score(std::span<const Triple> triples, std::span<double> out) const = 0;
};

class AnalogyScorer final : public TripleScorer {
 public:
  AnalogyScorer(const VectorTable& vectors, const GraphIndex& known, AnalogyConfig config)
      : vectors_(&vectors), known_(&known), config_(config) {}
  void score(std::span<const Triple> triples, std::span<double> out) const override;

 private:
  const VectorTable* vectors_;
  const GraphIndex* known_;
  AnalogyConfig config_;
};

class NeuralTripleScorer final : public TripleScorer {
 public:
  NeuralTripleScorer(const NeuralScorer& scorer, const VectorTable& vectors) : scorer_(&scorer), vectors_(&vectors) {}
  void score(std::span<const Triple> triples, std::span<double> out) const override;

 private:
  const NeuralScorer* scorer_;
  const VectorTable* vectors_;
};

class FunctionScorer final : public TripleScorer {
 public:
  explicit FunctionScorer(std::function<double(const Triple&)> fn) : fn_(std::move(fn)) {}
  void score(std::span<const Triple> triples, std::span<double> out) const override {
    for (std::size_t i = 0; i < triples.size(); ++i) out[i] = fn_(triples[i]);
  }

 private:
  std::function<double(const Triple&)> fn_;
};

enum class CorruptPosition { Subject, Object };

struct RankResult {
  Triple test;
  CorruptPosition position = CorruptPosition::Object;
  std::size_t rank = 1;        // filtered, 1-based
  std::size_t candidates = 1;  // filtered candidate count, including the true entity
  std::size_t raw_rank = 1;    // same ranking without removing known triples
};

struct RankOptions {
  bool random_ties = false;  // default breaks ties by ascending token id
  std::uint64_t tie_seed = 0;
};

/// Substitutes every entity of `entities` into `position` and ranks the true
/// entity by descending score. Candidates forming a triple of `known` other
/// than the test triple are removed for the filtered rank. Throws
/// Error(SkippedTriple) when the true entity is not a candidate.
RankResult rank_candidates(const TripleScorer& scorer, const Triple& test, CorruptPosition position,
                           std::span<const TokenId> entities, const GraphIndex& known, const RankOptions& options = {});

struct EvaluationReport {
  double hits1 = 0;
  double hits3 = 0;
  double hits10 = 0;
  double mean_rank = 0;
  std::size_t ranked = 0;
  std::size_t skipped = 0;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();

  std::string to_json() const;
  std::string to_table() const;
};

/// Percentage of results ranked within `k`.
double hits_at(std::span<const RankResult> results, std::size_t k, bool raw = false);

/// Hits@{1,3,10} and mean rank over pooled subject and object results.
EvaluationReport hits_at_k(std::span<const RankResult> results, bool raw = false);

struct LinkPredictionOptions {
  bool corrupt_subject = true;
  bool corrupt_object = true;
  RankOptions rank;
  int workers = 1;
};

struct LinkPredictionRun {
  std::vector<RankResult> results;
  std::size_t skipped = 0;
};

/// Ranks every test triple; triples with a token lacking a vector are
/// skipped and counted, never dropped silently.
LinkPredictionRun run_link_prediction(const TripleScorer& scorer, std::span<const Triple> test,
                                      std::span<const TokenId> entities, const GraphIndex& known,
                                      const VectorTable& vectors, const LinkPredictionOptions& options);

}  // namespace kgvec
