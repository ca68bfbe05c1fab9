#include "kgvec/pca.hpp"

#include <charconv>
#include <ostream>

#include "kgvec/error.hpp"

namespace kgvec {

Projection fit_pca(const Eigen::Ref<const Eigen::MatrixXd>& points, Eigen::Index rank) {
  const Eigen::Index d = points.cols();
  if (rank < 1 || rank > d)
    throw Error(ErrorCode::Flag, "rank " + std::to_string(rank) + " must lie in [1, " + std::to_string(d) + "]");
  if (points.rows() < 2) throw Error(ErrorCode::InvalidConfig, "PCA needs at least two points");

  Projection p;
  p.mean = points.colwise().mean().transpose();
  const Eigen::MatrixXd centered = points.rowwise() - p.mean.transpose();
  const Eigen::MatrixXd covariance = centered.transpose() * centered / static_cast<double>(points.rows() - 1);
  p.total_variance = covariance.trace();

  // Eigenvalues come back ascending.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  p.components.resize(rank, d);
  p.explained_variance.resize(rank);
  for (Eigen::Index k = 0; k < rank; ++k) {
    const Eigen::Index col = d - 1 - k;
    Eigen::VectorXd v = solver.eigenvectors().col(col).normalized();
    Eigen::Index largest = 0;
    v.cwiseAbs().maxCoeff(&largest);
    if (v(largest) < 0) v = -v;
    p.components.row(k) = v.transpose();
    p.explained_variance(k) = std::max(solver.eigenvalues()(col), 0.0);
  }
  return p;
}

void write_projection_tsv(std::span<const std::string> uris, const Eigen::MatrixXd& coordinates, std::ostream& out) {
  char buf[64];
  for (Eigen::Index r = 0; r < coordinates.rows(); ++r) {
    out << uris[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < coordinates.cols(); ++c) {
      auto res = std::to_chars(buf, buf + sizeof buf, coordinates(r, c));
      out << '\t' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
}

}  // namespace kgvec
