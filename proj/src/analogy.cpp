#include "kgvec/analogy.hpp"

#include <cmath>

#include "kgvec/error.hpp"

namespace kgvec {

AnalogyScore analogy_score(const VectorTable& vectors, const GraphIndex& index, const Triple& query,
                           const AnalogyConfig& config) {
  if (!(config.epsilon > 0)) throw Error(ErrorCode::InvalidConfig, "epsilon must be positive");
  if (!vectors.has(query.subject) || !vectors.has(query.object))
    throw Error(ErrorCode::SkippedTriple, "query entity has no vector");

  const auto candidates = index.by_predicate(query.predicate);
  const std::size_t total = candidates.size();
  const std::size_t limit = config.sample_limit == 0 ? total : std::min(total, config.sample_limit);
  const auto triples = index.triples();
  const auto qs = vectors.row(query.subject);
  const auto qo = vectors.row(query.object);
  const Eigen::Index dim = vectors.dim();
  const double eps2 = config.epsilon * config.epsilon;

  AnalogyScore result;
  result.sampled = limit < total;
  for (std::size_t k = 0; k < limit; ++k) {
    // Evenly spaced subset when sampling; identity otherwise.
    const std::size_t slot = result.sampled ? k * total / limit : k;
    const Triple& t = triples[candidates[slot]];
    if (!vectors.has(t.subject) || !vectors.has(t.object)) continue;
    const auto s = vectors.row(t.subject);
    const auto o = vectors.row(t.object);
    double norm2 = 0;
    for (Eigen::Index c = 0; c < dim; ++c) {
      const double diff = double(qs(c)) + double(o(c)) - double(s(c)) - double(qo(c));
      norm2 += diff * diff;
    }
    ++result.compared;
    if (norm2 <= eps2) ++result.matches;
  }
  if (result.compared == 0)
    throw Error(ErrorCode::EmptyPredicate, "predicate " + std::to_string(query.predicate) + " has no triples");
  result.score = static_cast<double>(result.matches) / static_cast<double>(result.compared);
  return result;
}

double default_epsilon(const VectorTable& vectors, std::span<const TokenId> entities) {
  double sum = 0;
  std::size_t n = 0;
  for (TokenId e : entities) {
    if (!vectors.has(e)) continue;
    sum += vectors.row(e).cast<double>().norm();
    ++n;
  }
  const double eps = n == 0 ? 0.0 : 0.1 * sum / static_cast<double>(n);
  return eps > 0 ? eps : 1e-6;
}

}  // namespace kgvec
