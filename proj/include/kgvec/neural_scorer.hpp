#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "kgvec/embedding_model.hpp"
#include "kgvec/negatives.hpp"
#include "kgvec/random.hpp"
#include "kgvec/vocabulary.hpp"

namespace kgvec {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Triple classifier: an LSTM reads [v_s, v_p, v_o] from a zero state, its
// last hidden state passes through a tanh dense layer of the same width and a
// single sigmoid unit. Gate blocks are stacked [input; forget; output; candidate].
template <typename Scalar>
struct ScorerParams {
  Matrix<Scalar> gates_w;   // 4h x (d + h), columns [input | recurrent]
  Vector<Scalar> gates_b;   // 4h
  Matrix<Scalar> dense_w;   // h x h
  Vector<Scalar> dense_b;   // h
  Vector<Scalar> out_w;     // h
  Vector<Scalar> out_b;     // 1

  static constexpr std::size_t kTensorCount = 6;

  static ScorerParams zeros(Eigen::Index input_dim, Eigen::Index hidden) {
    return {Matrix<Scalar>::Zero(4 * hidden, input_dim + hidden), Vector<Scalar>::Zero(4 * hidden),
            Matrix<Scalar>::Zero(hidden, hidden),                  Vector<Scalar>::Zero(hidden),
            Vector<Scalar>::Zero(hidden),                          Vector<Scalar>::Zero(1)};
  }

  Eigen::Index hidden() const noexcept { return dense_w.rows(); }
  Eigen::Index input_dim() const noexcept { return gates_w.cols() - hidden(); }

  /// Flat views over every tensor, in serialization order.
  std::array<Eigen::Map<Vector<Scalar>>, kTensorCount> tensors() {
    return {flat(gates_w), flat(gates_b), flat(dense_w), flat(dense_b), flat(out_w), flat(out_b)};
  }
  std::array<Eigen::Map<const Vector<Scalar>>, kTensorCount> tensors() const {
    return {flat(gates_w), flat(gates_b), flat(dense_w), flat(dense_b), flat(out_w), flat(out_b)};
  }

  bool all_finite() const {
    for (const auto& t : tensors())
      if (!t.allFinite()) return false;
    return true;
  }

  template <typename Other>
  ScorerParams<Other> cast() const {
    return {gates_w.template cast<Other>(), gates_b.template cast<Other>(), dense_w.template cast<Other>(),
            dense_b.template cast<Other>(), out_w.template cast<Other>(),   out_b.template cast<Other>()};
  }

 private:
  template <typename M>
  static Eigen::Map<Vector<Scalar>> flat(M& m) { return {m.data(), m.size()}; }
  template <typename M>
  static Eigen::Map<const Vector<Scalar>> flat(const M& m) { return {m.data(), m.size()}; }
};

/// Glorot-uniform weights, zero biases except a forget-gate bias of one.
template <typename Scalar>
ScorerParams<Scalar> glorot_init(Eigen::Index input_dim, Eigen::Index hidden, Rng& rng) {
  auto params = ScorerParams<Scalar>::zeros(input_dim, hidden);
  auto fill = [&rng](auto& m, Eigen::Index fan_in, Eigen::Index fan_out) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> uniform(-limit, limit);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<Scalar>(uniform(rng));
  };
  fill(params.gates_w, input_dim + hidden, 4 * hidden);
  fill(params.dense_w, hidden, hidden);
  fill(params.out_w, hidden, 1);
  params.gates_b.segment(hidden, hidden).setOnes();
  return params;
}

/// One column per triple for each of the three sequence steps.
template <typename Scalar>
using SequenceBatch = std::array<Matrix<Scalar>, 3>;

template <typename Scalar>
SequenceBatch<Scalar> gather_sequences(const VectorTable& vectors, std::span<const Triple> triples) {
  SequenceBatch<Scalar> batch;
  const auto n = static_cast<Eigen::Index>(triples.size());
  for (auto& step : batch) step.resize(vectors.dim(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Triple& t = triples[static_cast<std::size_t>(j)];
    batch[0].col(j) = vectors.row(t.subject).transpose().template cast<Scalar>();
    batch[1].col(j) = vectors.row(t.predicate).transpose().template cast<Scalar>();
    batch[2].col(j) = vectors.row(t.object).transpose().template cast<Scalar>();
  }
  return batch;
}

template <typename Scalar>
struct ScorerForward {
  std::array<Matrix<Scalar>, 3> concat;  // [x_t; h_{t-1}]
  std::array<Matrix<Scalar>, 3> gates;   // activated gates, stacked like gates_w rows
  std::array<Matrix<Scalar>, 4> cell;    // cell[0] is the zero initial state
  std::array<Matrix<Scalar>, 4> hidden;  // hidden[0] is the zero initial state
  Matrix<Scalar> dense;                  // tanh activations
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> logits;
};

template <typename Scalar>
ScorerForward<Scalar> scorer_forward(const ScorerParams<Scalar>& p, const SequenceBatch<Scalar>& x) {
  const Eigen::Index h = p.hidden();
  const Eigen::Index d = p.input_dim();
  const Eigen::Index n = x[0].cols();
  ScorerForward<Scalar> f;
  f.cell[0] = Matrix<Scalar>::Zero(h, n);
  f.hidden[0] = Matrix<Scalar>::Zero(h, n);
  auto logistic = [](Scalar v) { return Scalar(1) / (Scalar(1) + std::exp(-v)); };
  for (std::size_t t = 0; t < 3; ++t) {
    f.concat[t].resize(d + h, n);
    f.concat[t].topRows(d) = x[t];
    f.concat[t].bottomRows(h) = f.hidden[t];
    Matrix<Scalar> z = p.gates_w * f.concat[t];
    z.colwise() += p.gates_b;
    z.topRows(3 * h) = z.topRows(3 * h).unaryExpr(logistic);
    z.bottomRows(h) = z.bottomRows(h).array().tanh();
    f.cell[t + 1] = z.middleRows(h, h).cwiseProduct(f.cell[t]) + z.topRows(h).cwiseProduct(z.bottomRows(h));
    f.hidden[t + 1] = z.middleRows(2 * h, h).cwiseProduct(f.cell[t + 1].array().tanh().matrix());
    f.gates[t] = std::move(z);
  }
  f.dense = p.dense_w * f.hidden[3];
  f.dense.colwise() += p.dense_b;
  f.dense = f.dense.array().tanh();
  f.logits = p.out_w.transpose() * f.dense;
  f.logits.array() += p.out_b(0);
  return f;
}

/// Probability that each column's triple is true; always in (0, 1).
template <typename Scalar>
Vector<Scalar> scorer_predict(const ScorerParams<Scalar>& p, const SequenceBatch<Scalar>& x) {
  const auto f = scorer_forward(p, x);
  return f.logits.transpose().unaryExpr([](Scalar z) {
    if (z >= 0) return Scalar(1) / (Scalar(1) + std::exp(-z));
    const Scalar e = std::exp(z);
    return e / (Scalar(1) + e);
  });
}

/// Mean binary cross-entropy over the batch, computed from logits.
template <typename Scalar>
Scalar scorer_loss(const ScorerParams<Scalar>& p, const SequenceBatch<Scalar>& x, const Vector<Scalar>& labels) {
  const auto f = scorer_forward(p, x);
  Scalar loss = 0;
  for (Eigen::Index j = 0; j < labels.size(); ++j) {
    const Scalar z = f.logits(j);
    const Scalar softplus_z = std::log1p(std::exp(-std::abs(z))) + std::max(z, Scalar(0));
    loss += softplus_z - labels(j) * z;
  }
  return loss / static_cast<Scalar>(labels.size());
}

/// Backpropagation through the three steps; returns the same loss as scorer_loss.
template <typename Scalar>
Scalar scorer_gradient(const ScorerParams<Scalar>& p, const SequenceBatch<Scalar>& x, const Vector<Scalar>& labels,
                       ScorerParams<Scalar>& grad) {
  const Eigen::Index h = p.hidden();
  const Eigen::Index n = x[0].cols();
  const auto f = scorer_forward(p, x);
  grad = ScorerParams<Scalar>::zeros(p.input_dim(), h);

  Scalar loss = 0;
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> dlogits(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Scalar z = f.logits(j);
    loss += std::log1p(std::exp(-std::abs(z))) + std::max(z, Scalar(0)) - labels(j) * z;
    const Scalar prob = z >= 0 ? Scalar(1) / (Scalar(1) + std::exp(-z)) : std::exp(z) / (Scalar(1) + std::exp(z));
    dlogits(j) = (prob - labels(j)) / static_cast<Scalar>(n);
  }

  grad.out_w = f.dense * dlogits.transpose();
  grad.out_b(0) = dlogits.sum();
  const Matrix<Scalar> ddense =
      (p.out_w * dlogits).cwiseProduct((Scalar(1) - f.dense.array().square()).matrix());
  grad.dense_w = ddense * f.hidden[3].transpose();
  grad.dense_b = ddense.rowwise().sum();

  Matrix<Scalar> dh = p.dense_w.transpose() * ddense;
  Matrix<Scalar> dc = Matrix<Scalar>::Zero(h, n);
  Matrix<Scalar> dz(4 * h, n);
  for (int t = 2; t >= 0; --t) {
    const auto& g = f.gates[static_cast<std::size_t>(t)];
    const auto in_gate = g.topRows(h).array();
    const auto forget = g.middleRows(h, h).array();
    const auto out_gate = g.middleRows(2 * h, h).array();
    const auto cand = g.bottomRows(h).array();
    const auto tanh_c = f.cell[static_cast<std::size_t>(t) + 1].array().tanh();

    dc.array() += dh.array() * out_gate * (Scalar(1) - tanh_c.square());
    dz.topRows(h) = (dc.array() * cand * in_gate * (Scalar(1) - in_gate)).matrix();
    dz.middleRows(h, h) =
        (dc.array() * f.cell[static_cast<std::size_t>(t)].array() * forget * (Scalar(1) - forget)).matrix();
    dz.middleRows(2 * h, h) = (dh.array() * tanh_c * out_gate * (Scalar(1) - out_gate)).matrix();
    dz.bottomRows(h) = (dc.array() * in_gate * (Scalar(1) - cand.square())).matrix();

    grad.gates_w.noalias() += dz * f.concat[static_cast<std::size_t>(t)].transpose();
    grad.gates_b += dz.rowwise().sum();
    dh = (p.gates_w.rightCols(h).transpose() * dz);
    dc = (dc.array() * forget).matrix();
  }
  return loss / static_cast<Scalar>(n);
}

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias correction. Moments share the parameter layout.
template <typename Scalar>
class AdamState {
 public:
  AdamState(const ScorerParams<Scalar>& like, AdamConfig config)
      : config_(config),
        first_(ScorerParams<Scalar>::zeros(like.input_dim(), like.hidden())),
        second_(ScorerParams<Scalar>::zeros(like.input_dim(), like.hidden())) {}

  void step(ScorerParams<Scalar>& params, const ScorerParams<Scalar>& grad) {
    ++steps_;
    const Scalar b1 = static_cast<Scalar>(config_.beta1);
    const Scalar b2 = static_cast<Scalar>(config_.beta2);
    const Scalar correction1 = Scalar(1) - static_cast<Scalar>(std::pow(config_.beta1, steps_));
    const Scalar correction2 = Scalar(1) - static_cast<Scalar>(std::pow(config_.beta2, steps_));
    const Scalar lr = static_cast<Scalar>(config_.learning_rate);
    const Scalar eps = static_cast<Scalar>(config_.epsilon);
    auto p = params.tensors();
    auto g = grad.tensors();
    auto m = first_.tensors();
    auto v = second_.tensors();
    for (std::size_t k = 0; k < ScorerParams<Scalar>::kTensorCount; ++k) {
      m[k] = b1 * m[k] + (Scalar(1) - b1) * g[k];
      v[k] = b2 * v[k] + (Scalar(1) - b2) * g[k].cwiseProduct(g[k]);
      p[k].array() -= lr * (m[k].array() / correction1) / ((v[k].array() / correction2).sqrt() + eps);
    }
  }

  long steps() const noexcept { return steps_; }
  const AdamConfig& config() const noexcept { return config_; }

 private:
  AdamConfig config_;
  ScorerParams<Scalar> first_;
  ScorerParams<Scalar> second_;
  long steps_ = 0;
};

/// Trained scorer as stored on disk (float weights).
struct NeuralScorer {
  ScorerParams<float> params;

  Eigen::Index dim() const noexcept { return params.input_dim(); }

  /// Scores a batch of triples; every token must have a vector.
  Eigen::VectorXf predict(const VectorTable& vectors, std::span<const Triple> triples) const {
    return scorer_predict(params, gather_sequences<float>(vectors, triples));
  }
};

struct ScorerTrainConfig {
  int epochs = 100;
  std::size_t batch_size = 32;  // positives per batch; each is paired with one fresh negative
  AdamConfig adam;
  NegativeStrategy strategy = NegativeStrategy::Corrupt;
  std::uint64_t seed = 1;
};

struct ScorerTrainResult {
  NeuralScorer scorer;
  std::vector<double> epoch_losses;
};

/// Fits a scorer on frozen embeddings. Each epoch pairs every positive with
/// one negative from `negatives` and minimizes binary cross-entropy with Adam.
/// Throws Error(NumericalDivergence) on a non-finite loss.
ScorerTrainResult train_neural_scorer(const VectorTable& vectors, std::span<const Triple> positives,
                                      const NegativeGenerator& negatives, const ScorerTrainConfig& config);

// File layout: "KGVSCORE", version byte, u32 d, u32 hidden, then gates_w,
// gates_b, dense_w, dense_b, out_w, out_b as row-major little-endian float32.
void save_scorer(const NeuralScorer& scorer, const std::string& path);
NeuralScorer load_scorer(const std::string& path);
/// Shapes and Frobenius norms of every tensor.
std::string scorer_summary_json(const NeuralScorer& scorer);

}  // namespace kgvec
