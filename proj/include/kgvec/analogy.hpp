#pragma once

#include <cstddef>
#include <span>

#include "kgvec/embedding_model.hpp"
#include "kgvec/graph_index.hpp"

namespace kgvec {

struct AnalogyConfig {
  double epsilon = 0.1;        // Euclidean match radius, > 0
  std::size_t sample_limit = 0;  // 0 = compare against every triple of the predicate
};

struct AnalogyScore {
  double score = 0;
  std::size_t matches = 0;
  std::size_t compared = 0;
  bool sampled = false;
};

/// Fraction of triples (s, p, o) in the index whose offset v_o - v_s carries
/// the query subject to within epsilon of the query object:
///   || v_qs + v_o - v_s - v_qo || <= epsilon
/// Triples whose subject or object has no vector are not compared. Throws
/// Error(EmptyPredicate) when nothing is left to compare against.
AnalogyScore analogy_score(const VectorTable& vectors, const GraphIndex& index, const Triple& query,
                           const AnalogyConfig& config);

/// 0.1 times the mean Euclidean norm of the given entity vectors.
double default_epsilon(const VectorTable& vectors, std::span<const TokenId> entities);

}  // namespace kgvec
