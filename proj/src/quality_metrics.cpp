#include "kgvec/quality_metrics.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <thread>

#include "kgvec/error.hpp"

namespace kgvec {

double jaccard(const CharacteristicSet& a, const CharacteristicSet& b) {
  std::size_t common = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  const std::size_t united = a.size() + b.size() - common;
  return united == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(united);
}

NeighbourSearch::NeighbourSearch(const VectorTable& vectors, std::vector<TokenId> candidates, Similarity similarity)
    : vectors_(&vectors), candidates_(std::move(candidates)), similarity_(similarity) {
  std::sort(candidates_.begin(), candidates_.end());
  candidates_.erase(std::unique(candidates_.begin(), candidates_.end()), candidates_.end());
  rows_.resize(static_cast<Eigen::Index>(candidates_.size()), vectors.dim());
  for (std::size_t k = 0; k < candidates_.size(); ++k) {
    auto row = rows_.row(static_cast<Eigen::Index>(k));
    row = vectors.row(candidates_[k]).cast<double>();
    if (similarity_ == Similarity::Cosine) {
      const double norm = row.norm();
      if (norm > 0) row /= norm;
    }
  }
}

NeighbourList NeighbourSearch::nearest(TokenId entity, std::size_t n) const {
  if (!vectors_->has(entity)) throw Error(ErrorCode::SkippedTriple, "entity " + std::to_string(entity) + " has no vector");
  Eigen::VectorXd query = vectors_->row(entity).cast<double>().transpose();
  Eigen::VectorXd scores;
  if (similarity_ == Similarity::Cosine) {
    const double norm = query.norm();
    if (norm > 0) query /= norm;
    scores = rows_ * query;
  } else {
    scores = -(rows_.rowwise() - query.transpose()).rowwise().norm();
  }

  std::vector<std::size_t> order;
  order.reserve(candidates_.size());
  for (std::size_t k = 0; k < candidates_.size(); ++k)
    if (candidates_[k] != entity) order.push_back(k);
  if (order.size() < n)
    throw Error(ErrorCode::InsufficientCandidates, "need " + std::to_string(n) + " neighbours, only " +
                                                       std::to_string(order.size()) + " candidates");
  // candidates_ is sorted, so comparing slots is comparing token ids.
  auto better = [&](std::size_t a, std::size_t b) {
    const double sa = scores(static_cast<Eigen::Index>(a));
    const double sb = scores(static_cast<Eigen::Index>(b));
    return sa > sb || (sa == sb && a < b);
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(), better);

  NeighbourList list{entity, {}};
  list.neighbours.reserve(n);
  for (std::size_t j = 0; j < n; ++j)
    list.neighbours.push_back({candidates_[order[j]], scores(static_cast<Eigen::Index>(order[j]))});
  return list;
}

NeighbourList nearest_neighbours(const VectorTable& vectors, TokenId entity, std::size_t n,
                                 std::span<const TokenId> candidates, Similarity similarity) {
  return NeighbourSearch(vectors, {candidates.begin(), candidates.end()}, similarity).nearest(entity, n);
}

std::vector<TokenId> entity_candidates(const Vocabulary& vocab, const VectorTable& vectors) {
  std::vector<TokenId> out;
  for (TokenId e : vocab.entities())
    if (vectors.has(e)) out.push_back(e);
  return out;
}

std::vector<TokenId> sample_candidates(std::span<const TokenId> candidates, std::size_t count, Rng& rng) {
  std::vector<TokenId> out;
  std::sample(candidates.begin(), candidates.end(), std::back_inserter(out), count, rng);
  std::sort(out.begin(), out.end());
  return out;
}

MetricKind parse_metric_kind(std::string_view name) {
  if (name == "nst" || name == "NST") return MetricKind::Nst;
  if (name == "tct" || name == "TCT") return MetricKind::Tct;
  throw Error(ErrorCode::Flag, "unknown metric '" + std::string(name) + "'");
}

std::string_view to_string(MetricKind kind) noexcept { return kind == MetricKind::Nst ? "nst" : "tct"; }

std::vector<double> neighbour_overlap_sums(const NeighbourSearch& search, const GraphIndex& index,
                                           std::span<const TokenId> entities, const MetricConfig& config) {
  if (config.neighbours == 0) throw Error(ErrorCode::InvalidConfig, "neighbour count must be at least 1");
  auto set_of = [&](TokenId e) -> const CharacteristicSet& {
    return config.kind == MetricKind::Nst ? index.characteristics(e) : index.type_categories(e);
  };
  std::vector<double> sums(entities.size(), 0.0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const NeighbourList list = search.nearest(entities[i], config.neighbours);
      const CharacteristicSet& own = set_of(entities[i]);
      double sum = 0;
      for (const Neighbour& n : list.neighbours) sum += jaccard(own, set_of(n.id));
      sums[i] = sum;
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(config.workers, 1)), 1, std::max<std::size_t>(entities.size(), 1));
  if (workers == 1) {
    work(0, entities.size());
    return sums;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          work(entities.size() * w / workers, entities.size() * (w + 1) / workers);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return sums;
}

double distributional_metric(const NeighbourSearch& search, const GraphIndex& index,
                             std::span<const TokenId> entities, const MetricConfig& config) {
  if (entities.empty()) throw Error(ErrorCode::InvalidConfig, "metric needs at least one entity");
  const std::vector<double> sums = neighbour_overlap_sums(search, index, entities, config);
  double total = 0;
  for (double s : sums) total += s;
  return total / (static_cast<double>(config.neighbours) * static_cast<double>(entities.size()));
}

double nst(const NeighbourSearch& search, const GraphIndex& index, std::span<const TokenId> entities,
           std::size_t neighbours) {
  return distributional_metric(search, index, entities, {neighbours, MetricKind::Nst});
}

double tct(const NeighbourSearch& search, const GraphIndex& index, std::span<const TokenId> entities,
           std::size_t neighbours) {
  return distributional_metric(search, index, entities, {neighbours, MetricKind::Tct});
}

MetricTrace metric_trace(const NeighbourSearch& search, const GraphIndex& index, std::vector<TokenId> ordering,
                         const MetricConfig& config, std::size_t stride) {
  if (ordering.empty()) throw Error(ErrorCode::InvalidConfig, "trace needs a nonempty entity ordering");
  if (stride == 0) throw Error(ErrorCode::InvalidConfig, "trace stride must be at least 1");
  MetricTrace trace;
  const std::vector<double> sums = neighbour_overlap_sums(search, index, ordering, config);
  const double n = static_cast<double>(config.neighbours);
  double running = 0;
  for (std::size_t i = 1; i <= ordering.size(); ++i) {
    running += sums[i - 1];
    if (i % stride == 0 || i == ordering.size())
      trace.points.push_back({i, ordering[i - 1], running / (n * static_cast<double>(i))});
  }
  trace.final_value = trace.points.back().value;
  trace.ordering = std::move(ordering);
  return trace;
}

void write_trace_tsv(const MetricTrace& trace, std::span<const std::string> uris, std::ostream& out) {
  out << "i\tentity_uri\tpartial_value\n";
  char buf[64];
  for (const TracePoint& p : trace.points) {
    auto res = std::to_chars(buf, buf + sizeof buf, p.value);
    out << p.prefix << '\t' << uris[p.entity] << '\t' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf))
        << '\n';
  }
}

}  // namespace kgvec
