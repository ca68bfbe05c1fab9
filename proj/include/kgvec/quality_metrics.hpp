#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgvec/embedding_model.hpp"
#include "kgvec/graph_index.hpp"
#include "kgvec/random.hpp"

namespace kgvec {

enum class Similarity { Cosine, Euclidean };

struct Neighbour {
  TokenId id = 0;
  double similarity = 0;  // cosine, or negated distance for Euclidean
};

struct NeighbourList {
  TokenId entity = 0;
  std::vector<Neighbour> neighbours;  // best first; ties by ascending id
};

/// |A ∩ B| / |A ∪ B| over sorted sets; two empty sets score 0.
double jaccard(const CharacteristicSet& a, const CharacteristicSet& b);

/// Exact linear-scan neighbour search over a fixed candidate set.
class NeighbourSearch {
 public:
  NeighbourSearch(const VectorTable& vectors, std::vector<TokenId> candidates,
                  Similarity similarity = Similarity::Cosine);

  /// Top `n` candidates other than `entity`. Throws
  /// Error(InsufficientCandidates) when fewer than `n` remain.
  NeighbourList nearest(TokenId entity, std::size_t n) const;

  std::span<const TokenId> candidates() const noexcept { return candidates_; }

 private:
  const VectorTable* vectors_;
  std::vector<TokenId> candidates_;
  Similarity similarity_;
  RowMatrix<double> rows_;  // normalized for cosine
};

NeighbourList nearest_neighbours(const VectorTable& vectors, TokenId entity, std::size_t n,
                                 std::span<const TokenId> candidates, Similarity similarity = Similarity::Cosine);

/// Entity tokens that have a vector; the default neighbour candidate set.
std::vector<TokenId> entity_candidates(const Vocabulary& vocab, const VectorTable& vectors);

/// Uniform subset of `candidates`, kept in ascending id order.
std::vector<TokenId> sample_candidates(std::span<const TokenId> candidates, std::size_t count, Rng& rng);

enum class MetricKind { Nst, Tct };

MetricKind parse_metric_kind(std::string_view name);
std::string_view to_string(MetricKind kind) noexcept;

struct MetricConfig {
  std::size_t neighbours = 10;
  MetricKind kind = MetricKind::Nst;
  Similarity similarity = Similarity::Cosine;
  int workers = 1;
};

/// Sum over the `neighbours` nearest neighbours of the Jaccard overlap between
/// the entity's set and each neighbour's set, one value per entity.
std::vector<double> neighbour_overlap_sums(const NeighbourSearch& search, const GraphIndex& index,
                                           std::span<const TokenId> entities, const MetricConfig& config);

/// Mean neighbour Jaccard overlap over `entities`:
///   1/(N |E|) sum_e sum_j J(C(e), C(n_j(e)))
/// with characteristic sets for Nst and type/category sets for Tct.
double distributional_metric(const NeighbourSearch& search, const GraphIndex& index,
                             std::span<const TokenId> entities, const MetricConfig& config);

double nst(const NeighbourSearch& search, const GraphIndex& index, std::span<const TokenId> entities,
           std::size_t neighbours);
double tct(const NeighbourSearch& search, const GraphIndex& index, std::span<const TokenId> entities,
           std::size_t neighbours);

struct TracePoint {
  std::size_t prefix = 0;  // i, 1-based
  TokenId entity = 0;      // e_i
  double value = 0;        // metric over e_1..e_i
};

struct MetricTrace {
  std::vector<TokenId> ordering;
  std::vector<TracePoint> points;
  double final_value = 0;
};

/// Running metric over growing prefixes of `ordering`, recorded at every
/// multiple of `stride` and at the last entity.
MetricTrace metric_trace(const NeighbourSearch& search, const GraphIndex& index, std::vector<TokenId> ordering,
                         const MetricConfig& config, std::size_t stride = 1);

/// TSV with header `i<TAB>entity_uri<TAB>partial_value`.
void write_trace_tsv(const MetricTrace& trace, std::span<const std::string> uris, std::ostream& out);

}  // namespace kgvec
