#pragma once

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "kgvec/vocabulary.hpp"

namespace kgvec {

inline constexpr const char* kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr const char* kDctSubject = "http://purl.org/dc/terms/subject";

/// A (predicate, object) pair packed into one sortable key.
using Characteristic = std::uint64_t;

inline Characteristic make_characteristic(TokenId predicate, TokenId object) noexcept {
  return (std::uint64_t{predicate} << 32) | object;
}

/// Sorted, duplicate-free set of characteristics.
using CharacteristicSet = std::vector<Characteristic>;

/// Read-only lookups over an encoded graph. Built once, then immutable and
/// safe to share between threads.
class GraphIndex {
 public:
  GraphIndex() = default;

  /// `type_predicates` selects which predicates feed type_categories().
  GraphIndex(std::vector<Triple> triples, std::size_t vocab_size,
             std::span<const TokenId> type_predicates);

  std::span<const Triple> triples() const noexcept { return triples_; }
  std::size_t vocab_size() const noexcept { return characteristics_.size(); }

  /// Indices into triples() of every triple using `predicate`.
  std::span<const std::uint32_t> by_predicate(TokenId predicate) const;
  const CharacteristicSet& characteristics(TokenId entity) const;
  const CharacteristicSet& type_categories(TokenId entity) const;
  bool contains(const Triple& t) const { return triple_set_.contains(t); }

 private:
  std::vector<Triple> triples_;
  std::vector<std::vector<std::uint32_t>> by_predicate_;
  std::vector<CharacteristicSet> characteristics_;
  std::vector<CharacteristicSet> type_categories_;
  std::unordered_set<Triple, TripleHash> triple_set_;
};

/// Resolves predicate URIs present in `vocab`; unknown URIs are ignored.
std::vector<TokenId> resolve_predicates(const Vocabulary& vocab, std::span<const std::string> uris);

std::vector<std::string> default_type_predicates();

}  // namespace kgvec
