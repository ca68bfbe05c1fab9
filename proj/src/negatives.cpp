#include "kgvec/negatives.hpp"

#include <random>
#include <string>

#include "kgvec/error.hpp"

namespace kgvec {

NegativeStrategy parse_strategy(std::string_view name) {
  if (name == "random") return NegativeStrategy::Random;
  if (name == "corrupt" || name == "corrupted") return NegativeStrategy::Corrupt;
  throw Error(ErrorCode::Flag, "unknown negative strategy '" + std::string(name) + "'");
}

std::string_view to_string(NegativeStrategy strategy) noexcept {
  return strategy == NegativeStrategy::Random ? "random" : "corrupt";
}

NegativeGenerator::NegativeGenerator(std::vector<TokenId> entities, std::vector<TokenId> relations,
                                     const GraphIndex* known)
    : entities_(std::move(entities)), relations_(std::move(relations)), known_(known) {
  if (entities_.size() < 2) throw Error(ErrorCode::DegenerateVocabulary, "need at least two entities");
  if (relations_.empty()) throw Error(ErrorCode::DegenerateVocabulary, "need at least one relation");
}

Triple NegativeGenerator::draw(const Triple& positive, NegativeStrategy strategy, Rng& rng) const {
  std::uniform_int_distribution<std::size_t> entity(0, entities_.size() - 1);
  if (strategy == NegativeStrategy::Random) {
    std::uniform_int_distribution<std::size_t> relation(0, relations_.size() - 1);
    const TokenId p = relations_[relation(rng)];
    const TokenId s = entities_[entity(rng)];
    return {s, p, entities_[entity(rng)]};
  }
  Triple out = positive;
  const bool replace_subject = std::bernoulli_distribution(0.5)(rng);
  TokenId& slot = replace_subject ? out.subject : out.object;
  const TokenId original = slot;
  // Always change the chosen position so exactly one side differs.
  do {
    slot = entities_[entity(rng)];
  } while (slot == original);
  return out;
}

Triple NegativeGenerator::make(const Triple& positive, NegativeStrategy strategy, Rng& rng) const {
  Triple candidate = draw(positive, strategy, rng);
  for (int i = 0; i < kMaxRetries && known_ != nullptr && known_->contains(candidate); ++i)
    candidate = draw(positive, strategy, rng);
  return candidate;
}

}  // namespace kgvec
