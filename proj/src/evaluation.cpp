#include "kgvec/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <iomanip>
#include <optional>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "kgvec/error.hpp"

namespace kgvec {

IndexSplit split_indices(std::size_t n, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0 && spec.train_fraction < 1))
    throw Error(ErrorCode::InvalidConfig, "train fraction must lie in (0, 1)");
  if (n < 10) throw Error(ErrorCode::DegenerateSplit, "need at least 10 triples to split, got " + std::to_string(n));
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  Rng rng(derive_seed(spec.seed, "split"));
  std::shuffle(order.begin(), order.end(), rng);
  const auto train_size = static_cast<std::size_t>(std::llround(static_cast<double>(n) * spec.train_fraction));
  if (train_size == 0 || train_size >= n) throw Error(ErrorCode::DegenerateSplit, "split leaves one side empty");
  IndexSplit split;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_size));
  split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(train_size), order.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

DatasetSplit split_dataset(std::span<const Triple> corpus, const SplitSpec& spec, bool filter_unseen) {
  const IndexSplit idx = split_indices(corpus.size(), spec);
  DatasetSplit out;
  std::unordered_set<TokenId> seen;
  for (std::uint32_t i : idx.train) {
    const Triple& t = corpus[i];
    out.train.push_back(t);
    seen.insert(t.subject);
    seen.insert(t.predicate);
    seen.insert(t.object);
  }
  for (std::uint32_t i : idx.test) {
    const Triple& t = corpus[i];
    if (filter_unseen && !(seen.contains(t.subject) && seen.contains(t.predicate) && seen.contains(t.object))) {
      ++out.unseen;
      continue;
    }
    out.test.push_back(t);
  }
  if (out.test.empty()) throw Error(ErrorCode::DegenerateSplit, "no test triple left after filtering unseen tokens");
  return out;
}

void AnalogyScorer::score(std::span<const Triple> triples, std::span<double> out) const {
  for (std::size_t i = 0; i < triples.size(); ++i) out[i] = analogy_score(*vectors_, *known_, triples[i], config_).score;
}

void NeuralTripleScorer::score(std::span<const Triple> triples, std::span<double> out) const {
  const Eigen::VectorXf probs = scorer_->predict(*vectors_, triples);
  for (std::size_t i = 0; i < triples.size(); ++i) out[i] = probs(static_cast<Eigen::Index>(i));
}

RankResult rank_candidates(const TripleScorer& scorer, const Triple& test, CorruptPosition position,
                           std::span<const TokenId> entities, const GraphIndex& known, const RankOptions& options) {
  const TokenId truth = position == CorruptPosition::Subject ? test.subject : test.object;
  if (std::find(entities.begin(), entities.end(), truth) == entities.end())
    throw Error(ErrorCode::SkippedTriple, "true entity is not among the candidates");

  std::vector<Triple> candidates;
  candidates.reserve(entities.size());
  for (TokenId e : entities) {
    Triple t = test;
    (position == CorruptPosition::Subject ? t.subject : t.object) = e;
    candidates.push_back(t);
  }
  std::vector<double> scores(candidates.size());
  scorer.score(candidates, scores);

  double truth_score = 0;
  for (std::size_t k = 0; k < entities.size(); ++k)
    if (entities[k] == truth) truth_score = scores[k];

  std::size_t better = 0, raw_better = 0, ties = 0, raw_ties = 0, kept = 0;
  for (std::size_t k = 0; k < entities.size(); ++k) {
    const TokenId e = entities[k];
    if (e == truth) {
      ++kept;
      continue;
    }
    const bool filtered_out = known.contains(candidates[k]);
    const bool above = scores[k] > truth_score || (!options.random_ties && scores[k] == truth_score && e < truth);
    const bool tie = options.random_ties && scores[k] == truth_score;
    raw_better += above;
    raw_ties += tie;
    if (filtered_out) continue;
    ++kept;
    better += above;
    ties += tie;
  }

  RankResult r{test, position, better + 1, kept, raw_better + 1};
  if (options.random_ties) {
    Rng rng(options.tie_seed);
    r.rank += std::uniform_int_distribution<std::size_t>(0, ties)(rng);
    r.raw_rank += std::uniform_int_distribution<std::size_t>(0, raw_ties)(rng);
  }
  return r;
}

double hits_at(std::span<const RankResult> results, std::size_t k, bool raw) {
  if (results.empty()) return 0.0;
  std::size_t hits = 0;
  for (const RankResult& r : results) hits += (raw ? r.raw_rank : r.rank) <= k;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(results.size());
}

EvaluationReport hits_at_k(std::span<const RankResult> results, bool raw) {
  if (results.empty()) throw Error(ErrorCode::InvalidConfig, "no ranked triples to report on");
  EvaluationReport report;
  report.hits1 = hits_at(results, 1, raw);
  report.hits3 = hits_at(results, 3, raw);
  report.hits10 = hits_at(results, 10, raw);
  double rank_sum = 0;
  for (const RankResult& r : results) rank_sum += static_cast<double>(raw ? r.raw_rank : r.rank);
  report.mean_rank = rank_sum / static_cast<double>(results.size());
  report.ranked = results.size();
  return report;
}

std::string EvaluationReport::to_json() const {
  nlohmann::ordered_json j;
  j["hits@1"] = hits1;
  j["hits@3"] = hits3;
  j["hits@10"] = hits10;
  j["mean_rank"] = mean_rank;
  j["ranked"] = ranked;
  j["skipped"] = skipped;
  j["config"] = config;
  return j.dump(2);
}

std::string EvaluationReport::to_table() const {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  out << "            Hits@1   Hits@3  Hits@10  MeanRank\n";
  out << "filtered  " << std::setw(7) << hits1 << "% " << std::setw(7) << hits3 << "% " << std::setw(7) << hits10
      << "% " << std::setw(9) << mean_rank << '\n';
  out << "ranked " << ranked << ", skipped " << skipped << '\n';
  return out.str();
}

LinkPredictionRun run_link_prediction(const TripleScorer& scorer, std::span<const Triple> test,
                                      std::span<const TokenId> entities, const GraphIndex& known,
                                      const VectorTable& vectors, const LinkPredictionOptions& options) {
  std::vector<CorruptPosition> positions;
  if (options.corrupt_subject) positions.push_back(CorruptPosition::Subject);
  if (options.corrupt_object) positions.push_back(CorruptPosition::Object);
  if (positions.empty()) throw Error(ErrorCode::InvalidConfig, "no corruption position selected");

  const std::size_t slots = test.size() * positions.size();
  std::vector<std::optional<RankResult>> ranked(slots);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      const Triple& t = test[s / positions.size()];
      if (!vectors.has(t.subject) || !vectors.has(t.predicate) || !vectors.has(t.object)) continue;
      RankOptions rank_options = options.rank;
      rank_options.tie_seed = derive_seed(options.rank.tie_seed, s);
      try {
        ranked[s] = rank_candidates(scorer, t, positions[s % positions.size()], entities, known, rank_options);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SkippedTriple && e.code() != ErrorCode::EmptyPredicate) throw;
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(options.workers, 1)), 1,
                                                      std::max<std::size_t>(slots, 1));
  if (workers == 1) {
    work(0, slots);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> threads;
      for (std::size_t w = 0; w < workers; ++w)
        threads.emplace_back([&, w] {
          try {
            work(slots * w / workers, slots * (w + 1) / workers);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  LinkPredictionRun run;
  for (std::size_t i = 0; i < test.size(); ++i) {
    bool missing = false;
    for (std::size_t k = 0; k < positions.size(); ++k) {
      auto& r = ranked[i * positions.size() + k];
      if (r) {
        run.results.push_back(*r);
      } else {
        missing = true;
      }
    }
    run.skipped += missing;
  }
  return run;
}

}  // namespace kgvec
