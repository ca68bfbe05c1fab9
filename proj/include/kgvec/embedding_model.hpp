#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "kgvec/random.hpp"
#include "kgvec/vocabulary.hpp"

namespace kgvec {

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Skip-gram parameters: one input row and one output row per token.
template <typename Scalar>
struct EmbeddingModel {
  std::vector<std::string> tokens;
  RowMatrix<Scalar> input;
  RowMatrix<Scalar> output;

  Eigen::Index size() const noexcept { return input.rows(); }
  Eigen::Index dim() const noexcept { return input.cols(); }

  bool all_finite() const { return input.allFinite() && output.allFinite(); }

  static EmbeddingModel zeros(std::vector<std::string> tokens, Eigen::Index dim) {
    EmbeddingModel model;
    const auto n = static_cast<Eigen::Index>(tokens.size());
    model.tokens = std::move(tokens);
    model.input = RowMatrix<Scalar>::Zero(n, dim);
    model.output = RowMatrix<Scalar>::Zero(n, dim);
    return model;
  }

  /// Input rows uniform in [-0.5/d, 0.5/d], output rows zero.
  static EmbeddingModel initialized(std::vector<std::string> tokens, Eigen::Index dim, Rng& rng) {
    EmbeddingModel model = zeros(std::move(tokens), dim);
    const double half_width = 0.5 / static_cast<double>(dim);
    std::uniform_real_distribution<double> uniform(-half_width, half_width);
    for (Eigen::Index r = 0; r < model.input.rows(); ++r)
      for (Eigen::Index c = 0; c < dim; ++c) model.input(r, c) = static_cast<Scalar>(uniform(rng));
    return model;
  }
};

/// Published vectors with their token names; the unit of model files.
struct Embeddings {
  std::vector<std::string> tokens;
  RowMatrix<float> vectors;

  Eigen::Index size() const noexcept { return vectors.rows(); }
  Eigen::Index dim() const noexcept { return vectors.cols(); }
};

template <typename Scalar>
Embeddings publish(const EmbeddingModel<Scalar>& model, bool use_output = false) {
  return {model.tokens, (use_output ? model.output : model.input).template cast<float>()};
}

/// Vectors laid out by vocabulary token id. Tokens without a vector keep a
/// zero row and present(id) == false.
struct VectorTable {
  RowMatrix<float> vectors;
  std::vector<char> present;

  Eigen::Index dim() const noexcept { return vectors.cols(); }
  bool has(TokenId id) const { return id < present.size() && present[id] != 0; }
  auto row(TokenId id) const { return vectors.row(id); }

  static VectorTable all_present(RowMatrix<float> vectors) {
    VectorTable table{std::move(vectors), {}};
    table.present.assign(static_cast<std::size_t>(table.vectors.rows()), 1);
    return table;
  }
};

/// Re-indexes `embeddings` by the ids of `vocab`, matching on URI.
VectorTable align(const Embeddings& embeddings, const Vocabulary& vocab);

}  // namespace kgvec
