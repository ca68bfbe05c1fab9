#pragma once

#include <string_view>
#include <vector>

#include "kgvec/graph_index.hpp"
#include "kgvec/random.hpp"
#include "kgvec/vocabulary.hpp"

namespace kgvec {

enum class NegativeStrategy {
  Random,   // fresh relation plus two fresh entities
  Corrupt,  // replace subject or object of a true triple
};

NegativeStrategy parse_strategy(std::string_view name);
std::string_view to_string(NegativeStrategy strategy) noexcept;

/// Produces false triples for scorer training. Draws that land on a known
/// triple are redrawn a bounded number of times, then accepted.
class NegativeGenerator {
 public:
  /// Throws Error(DegenerateVocabulary) with fewer than two entities or no relation.
  NegativeGenerator(std::vector<TokenId> entities, std::vector<TokenId> relations, const GraphIndex* known);

  NegativeGenerator(const Vocabulary& vocab, const GraphIndex* known)
      : NegativeGenerator(vocab.entities(), vocab.relations(), known) {}

  Triple make(const Triple& positive, NegativeStrategy strategy, Rng& rng) const;

  static constexpr int kMaxRetries = 10;

 private:
  Triple draw(const Triple& positive, NegativeStrategy strategy, Rng& rng) const;

  std::vector<TokenId> entities_;
  std::vector<TokenId> relations_;
  const GraphIndex* known_;
};

inline Triple make_negative(const Triple& positive, const Vocabulary& vocab, const GraphIndex& known,
                            NegativeStrategy strategy, Rng& rng) {
  return NegativeGenerator(vocab, &known).make(positive, strategy, rng);
}

}  // namespace kgvec
