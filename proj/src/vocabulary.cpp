#include "kgvec/vocabulary.hpp"

#include <ostream>

#include "kgvec/error.hpp"

namespace kgvec {

Vocabulary Vocabulary::build(std::span<const RawTriple> triples, std::uint64_t min_count) {
  if (min_count == 0) throw Error(ErrorCode::InvalidConfig, "min_count must be at least 1");
  if (triples.empty()) throw Error(ErrorCode::EmptyCorpus, "no triples to build a vocabulary from");

  // First pass: every distinct token in first-appearance order.
  std::unordered_map<std::string_view, std::uint32_t> seen;
  std::vector<std::string_view> order;
  std::vector<std::uint64_t> counts;
  std::vector<std::uint8_t> roles;
  auto visit = [&](std::string_view token, std::uint8_t role) {
    auto [it, inserted] = seen.try_emplace(token, static_cast<std::uint32_t>(order.size()));
    if (inserted) {
      order.push_back(token);
      counts.push_back(0);
      roles.push_back(kNoRole);
    }
    ++counts[it->second];
    roles[it->second] |= role;
  };
  for (const RawTriple& t : triples) {
    visit(t.subject, kEntityRole);
    visit(t.predicate, kRelationRole);
    visit(t.object, kEntityRole);
  }

  Vocabulary vocab;
  vocab.min_count_ = min_count;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (counts[i] < min_count) {
      ++vocab.discarded_tokens_;
      continue;
    }
    const auto id = static_cast<TokenId>(vocab.uris_.size());
    vocab.uris_.emplace_back(order[i]);
    vocab.frequencies_.push_back(counts[i]);
    vocab.roles_.push_back(roles[i]);
    vocab.ids_.emplace(vocab.uris_.back(), id);
  }
  return vocab;
}

std::optional<TokenId> Vocabulary::id(std::string_view uri) const {
  auto it = ids_.find(uri);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::vector<TokenId> Vocabulary::entities() const {
  std::vector<TokenId> out;
  for (TokenId i = 0; i < roles_.size(); ++i)
    if (roles_[i] & kEntityRole) out.push_back(i);
  return out;
}

std::vector<TokenId> Vocabulary::relations() const {
  std::vector<TokenId> out;
  for (TokenId i = 0; i < roles_.size(); ++i)
    if (roles_[i] & kRelationRole) out.push_back(i);
  return out;
}

void Vocabulary::write_sidecar(std::ostream& out) const {
  for (TokenId i = 0; i < uris_.size(); ++i)
    out << i << '\t' << frequencies_[i] << '\t' << uris_[i] << '\n';
}

EncodedCorpus encode_corpus(std::span<const RawTriple> triples, const Vocabulary& vocab) {
  EncodedCorpus corpus;
  corpus.triples.reserve(triples.size());
  for (const RawTriple& t : triples) {
    const auto s = vocab.id(t.subject);
    const auto p = vocab.id(t.predicate);
    const auto o = vocab.id(t.object);
    if (!s || !p || !o) {
      ++corpus.dropped;
      continue;
    }
    corpus.triples.push_back({*s, *p, *o});
  }
  return corpus;
}

}  // namespace kgvec
