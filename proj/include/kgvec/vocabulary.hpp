#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgvec/ntriples.hpp"

namespace kgvec {

using TokenId = std::uint32_t;

struct Triple {
  TokenId subject = 0;
  TokenId predicate = 0;
  TokenId object = 0;

  friend bool operator==(const Triple&, const Triple&) = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    std::uint64_t h = (std::uint64_t{t.subject} << 32) | t.object;
    h ^= std::uint64_t{t.predicate} * 0x9E3779B97F4A7C15ULL;
    h ^= h >> 29;
    h *= 0xBF58476D1CE4E5B9ULL;
    return static_cast<std::size_t>(h ^ (h >> 32));
  }
};

enum RoleFlags : std::uint8_t {
  kNoRole = 0,
  kEntityRole = 1,
  kRelationRole = 2,
};

/// Bidirectional URI <-> dense token id map. Ids follow first appearance in
/// the input, so identical input always yields identical ids.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Counts every token occurrence and keeps tokens seen at least `min_count`
  /// times. Throws Error(EmptyCorpus) on empty input and Error(InvalidConfig)
  /// when min_count is zero.
  static Vocabulary build(std::span<const RawTriple> triples, std::uint64_t min_count);

  std::size_t size() const noexcept { return uris_.size(); }
  bool empty() const noexcept { return uris_.empty(); }
  std::uint64_t min_count() const noexcept { return min_count_; }

  const std::string& uri(TokenId id) const { return uris_.at(id); }
  std::optional<TokenId> id(std::string_view uri) const;
  std::uint64_t frequency(TokenId id) const { return frequencies_.at(id); }
  std::span<const std::uint64_t> frequencies() const noexcept { return frequencies_; }
  std::span<const std::string> uris() const noexcept { return uris_; }

  bool is_entity(TokenId id) const { return (roles_.at(id) & kEntityRole) != 0; }
  bool is_relation(TokenId id) const { return (roles_.at(id) & kRelationRole) != 0; }
  std::vector<TokenId> entities() const;
  std::vector<TokenId> relations() const;

  /// Tokens that fell below min_count.
  std::size_t discarded_tokens() const noexcept { return discarded_tokens_; }

  /// Sidecar format: `<token-id>\t<frequency>\t<uri>` per line.
  void write_sidecar(std::ostream& out) const;

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<std::string> uris_;
  std::vector<std::uint64_t> frequencies_;
  std::vector<std::uint8_t> roles_;
  std::unordered_map<std::string, TokenId, StringHash, std::equal_to<>> ids_;
  std::uint64_t min_count_ = 1;
  std::size_t discarded_tokens_ = 0;
};

struct EncodedCorpus {
  std::vector<Triple> triples;
  std::size_t dropped = 0;
};

/// Maps raw triples onto token ids, preserving order. Triples that mention a
/// token missing from the vocabulary are dropped and counted.
EncodedCorpus encode_corpus(std::span<const RawTriple> triples, const Vocabulary& vocab);

}  // namespace kgvec
