#include "kgvec/graph_index.hpp"

#include <algorithm>

namespace kgvec {
namespace {

const CharacteristicSet kEmptySet{};
const std::vector<std::uint32_t> kNoTriples{};

void sort_unique(CharacteristicSet& set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
}

}  // namespace

GraphIndex::GraphIndex(std::vector<Triple> triples, std::size_t vocab_size,
                       std::span<const TokenId> type_predicates)
    : triples_(std::move(triples)),
      by_predicate_(vocab_size),
      characteristics_(vocab_size),
      type_categories_(vocab_size) {
  std::vector<bool> is_type(vocab_size, false);
  for (TokenId p : type_predicates)
    if (p < vocab_size) is_type[p] = true;

  triple_set_.reserve(triples_.size());
  for (std::uint32_t i = 0; i < triples_.size(); ++i) {
    const Triple& t = triples_[i];
    by_predicate_.at(t.predicate).push_back(i);
    const Characteristic c = make_characteristic(t.predicate, t.object);
    characteristics_.at(t.subject).push_back(c);
    if (is_type[t.predicate]) type_categories_[t.subject].push_back(c);
    triple_set_.insert(t);
  }
  for (auto& set : characteristics_) sort_unique(set);
  for (auto& set : type_categories_) sort_unique(set);
}

std::span<const std::uint32_t> GraphIndex::by_predicate(TokenId predicate) const {
  if (predicate >= by_predicate_.size()) return kNoTriples;
  return by_predicate_[predicate];
}

const CharacteristicSet& GraphIndex::characteristics(TokenId entity) const {
  if (entity >= characteristics_.size()) return kEmptySet;
  return characteristics_[entity];
}

const CharacteristicSet& GraphIndex::type_categories(TokenId entity) const {
  if (entity >= type_categories_.size()) return kEmptySet;
  return type_categories_[entity];
}

std::vector<TokenId> resolve_predicates(const Vocabulary& vocab, std::span<const std::string> uris) {
  std::vector<TokenId> ids;
  for (const auto& uri : uris)
    if (auto id = vocab.id(uri)) ids.push_back(*id);
  return ids;
}

std::vector<std::string> default_type_predicates() { return {kRdfType, kDctSubject}; }

}  // namespace kgvec
