#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <string>

namespace kgvec {

/// Rank-k orthogonal projection fitted by principal component analysis.
struct Projection {
  Eigen::MatrixXd components;         // k x d, orthonormal rows, best first
  Eigen::VectorXd explained_variance; // k, non-increasing
  Eigen::VectorXd mean;               // d
  double total_variance = 0;

  Eigen::Index rank() const noexcept { return components.rows(); }

  /// Rows of `points` mapped into the k-dimensional subspace.
  Eigen::MatrixXd transform(const Eigen::Ref<const Eigen::MatrixXd>& points) const {
    return (points.rowwise() - mean.transpose()) * components.transpose();
  }
};

/// Fits the top-`rank` principal components of the rows of `points` (one
/// point per row). Each component's largest-magnitude coordinate is made
/// positive. Throws Error(Flag) unless 1 <= rank <= d, and
/// Error(InvalidConfig) with fewer than two points.
Projection fit_pca(const Eigen::Ref<const Eigen::MatrixXd>& points, Eigen::Index rank);

/// Writes `uri<TAB>c1<TAB>...<TAB>ck` per point.
void write_projection_tsv(std::span<const std::string> uris, const Eigen::MatrixXd& coordinates, std::ostream& out);

}  // namespace kgvec
