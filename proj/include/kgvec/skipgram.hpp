#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kgvec/embedding_model.hpp"
#include "kgvec/error.hpp"
#include "kgvec/random.hpp"
#include "kgvec/vocabulary.hpp"

namespace kgvec {

// A triple is a three-word sentence; with a window of 2 every position
// predicts the other two.
using ContextPair = std::pair<TokenId, TokenId>;  // (center, context)

inline std::array<ContextPair, 6> context_pairs(const Triple& t) noexcept {
  return {{{t.subject, t.predicate},
           {t.subject, t.object},
           {t.predicate, t.subject},
           {t.predicate, t.object},
           {t.object, t.subject},
           {t.object, t.predicate}}};
}

template <typename Scalar>
Scalar sigmoid(Scalar x) noexcept {
  if (x >= 0) return Scalar(1) / (Scalar(1) + std::exp(-x));
  const Scalar e = std::exp(x);
  return e / (Scalar(1) + e);
}

/// -log(sigmoid(x)), without overflow for large |x|.
template <typename Scalar>
Scalar neg_log_sigmoid(Scalar x) noexcept {
  return std::log1p(std::exp(-std::abs(x))) + std::max(-x, Scalar(0));
}

/// Draws tokens from the unigram distribution raised to `power`.
class NegativeSampler {
 public:
  NegativeSampler(std::span<const std::uint64_t> frequencies, double power);

  TokenId draw(Rng& rng) const {
    std::uniform_real_distribution<double> uniform(0.0, cumulative_.back());
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), uniform(rng));
    return static_cast<TokenId>(std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                                         static_cast<std::ptrdiff_t>(cumulative_.size()) - 1));
  }

  /// Fills `out`; a draw equal to `avoid` is redrawn up to `max_retries` times, then kept.
  void draw(Rng& rng, std::span<TokenId> out, TokenId avoid, int max_retries = 10) const {
    for (TokenId& slot : out) {
      TokenId t = draw(rng);
      for (int i = 0; i < max_retries && t == avoid; ++i) t = draw(rng);
      slot = t;
    }
  }

  std::vector<TokenId> draw(Rng& rng, std::size_t k, TokenId avoid) const {
    std::vector<TokenId> out(k);
    draw(rng, out, avoid);
    return out;
  }

  double probability(TokenId id) const {
    const double lower = id == 0 ? 0.0 : cumulative_.at(id - 1);
    return (cumulative_.at(id) - lower) / cumulative_.back();
  }

 private:
  std::vector<double> cumulative_;
};

/// Negative-sampling surrogate of the skip-gram log likelihood for one pair:
///   -log s(o_ctx . i_center) - sum_n log s(-o_n . i_center)
template <typename Scalar>
Scalar negative_sampling_loss(const EmbeddingModel<Scalar>& model, TokenId center, TokenId context,
                              std::span<const TokenId> negatives) {
  const auto in = model.input.row(center);
  Scalar loss = neg_log_sigmoid<Scalar>(model.output.row(context).dot(in));
  for (TokenId n : negatives) loss += neg_log_sigmoid<Scalar>(-model.output.row(n).dot(in));
  return loss;
}

template <typename Scalar>
struct ModelGradient {
  RowMatrix<Scalar> input;
  RowMatrix<Scalar> output;
};

/// Dense gradient of negative_sampling_loss with respect to both matrices.
template <typename Scalar>
ModelGradient<Scalar> negative_sampling_gradient(const EmbeddingModel<Scalar>& model, TokenId center,
                                                 TokenId context, std::span<const TokenId> negatives) {
  ModelGradient<Scalar> grad{RowMatrix<Scalar>::Zero(model.size(), model.dim()),
                             RowMatrix<Scalar>::Zero(model.size(), model.dim())};
  const auto in = model.input.row(center);
  auto accumulate = [&](TokenId target, Scalar label) {
    const Scalar coeff = sigmoid<Scalar>(model.output.row(target).dot(in)) - label;
    grad.input.row(center) += coeff * model.output.row(target);
    grad.output.row(target) += coeff * in;
  };
  accumulate(context, Scalar(1));
  for (TokenId n : negatives) accumulate(n, Scalar(0));
  return grad;
}

namespace detail {

// One SGD step using caller-owned scratch of size d. All dot products are
// taken before any row moves, so the step is exactly -lr * gradient.
template <typename Scalar>
Scalar sgd_pair(EmbeddingModel<Scalar>& model, TokenId center, TokenId context,
                std::span<const TokenId> negatives, Scalar lr, Vector<Scalar>& center_delta,
                std::span<Scalar> coeffs) {
  const auto in = model.input.row(center);
  const Scalar pos_dot = model.output.row(context).dot(in);
  Scalar loss = neg_log_sigmoid(pos_dot);
  bool finite = std::isfinite(pos_dot);
  coeffs[0] = lr * (Scalar(1) - sigmoid(pos_dot));
  for (std::size_t k = 0; k < negatives.size(); ++k) {
    const Scalar dot = model.output.row(negatives[k]).dot(in);
    loss += neg_log_sigmoid(-dot);
    finite = finite && std::isfinite(dot);
    coeffs[k + 1] = -lr * sigmoid(dot);
  }
  if (!finite || !std::isfinite(loss)) throw Error(ErrorCode::NumericalDivergence, "non-finite skip-gram loss");

  center_delta.noalias() = coeffs[0] * model.output.row(context).transpose();
  for (std::size_t k = 0; k < negatives.size(); ++k)
    center_delta.noalias() += coeffs[k + 1] * model.output.row(negatives[k]).transpose();
  model.output.row(context) += coeffs[0] * in;
  for (std::size_t k = 0; k < negatives.size(); ++k) model.output.row(negatives[k]) += coeffs[k + 1] * in;
  model.input.row(center) += center_delta.transpose();
  if (!center_delta.allFinite())
    throw Error(ErrorCode::NumericalDivergence, "non-finite skip-gram update");
  return loss;
}

}  // namespace detail

/// Applies one SGD step on the negative-sampling loss and returns the loss
/// evaluated before the update.
template <typename Scalar>
Scalar train_step(EmbeddingModel<Scalar>& model, TokenId center, TokenId context,
                  std::span<const TokenId> negatives, Scalar learning_rate) {
  if (!(learning_rate > 0)) throw Error(ErrorCode::InvalidConfig, "learning rate must be positive");
  Vector<Scalar> delta(model.dim());
  std::vector<Scalar> coeffs(negatives.size() + 1);
  return detail::sgd_pair(model, center, context, negatives, learning_rate, delta, std::span<Scalar>(coeffs));
}

inline constexpr Eigen::Index kSoftmaxVocabularyLimit = 10'000;

/// Exact p(u | u') over the whole vocabulary. Diagnostic only.
template <typename Scalar>
double softmax_probability(const EmbeddingModel<Scalar>& model, TokenId u, TokenId given) {
  if (model.size() > kSoftmaxVocabularyLimit)
    throw Error(ErrorCode::VocabularyTooLarge,
                "softmax oracle needs at most " + std::to_string(kSoftmaxVocabularyLimit) + " tokens");
  const Eigen::VectorXd logits =
      model.output.template cast<double>() * model.input.row(given).template cast<double>().transpose();
  const double max_logit = logits.maxCoeff();
  return std::exp(logits(u) - max_logit) / (logits.array() - max_logit).exp().sum();
}

struct TrainConfig {
  Eigen::Index dim = 100;
  int negative = 5;
  int epochs = 5;
  double learning_rate = 0.025;
  double min_learning_rate = 1e-4;
  int workers = 1;
  double unigram_power = 0.75;
  std::uint64_t seed = 1;
  bool shuffle = true;

  /// Throws Error(InvalidConfig) on out-of-range fields.
  void validate() const;
};

struct ThroughputStats {
  std::uint64_t triples_processed = 0;
  double vocab_seconds = 0;
  double train_seconds = 0;
  double save_seconds = 0;

  double rate() const noexcept { return train_seconds > 0 ? triples_processed / train_seconds : 0.0; }
};

template <typename Scalar>
struct TrainResult {
  EmbeddingModel<Scalar> model;
  ThroughputStats stats;
  std::vector<double> epoch_losses;  // mean loss per pair
  std::uint64_t steps = 0;           // train_step invocations
};

/// Trains on `corpus` for config.epochs passes. With more than one worker the
/// shards update the shared matrices without locks; with one worker the
/// result is a pure function of (corpus, vocab, config).
template <typename Scalar>
TrainResult<Scalar> train(std::span<const Triple> corpus, const Vocabulary& vocab, const TrainConfig& config);

extern template TrainResult<float> train<float>(std::span<const Triple>, const Vocabulary&, const TrainConfig&);
extern template TrainResult<double> train<double>(std::span<const Triple>, const Vocabulary&, const TrainConfig&);

}  // namespace kgvec
