#include <doctest.h>

#include <random>
#include <sstream>

#include "kgvec/error.hpp"
#include "kgvec/pca.hpp"

using namespace kgvec;

namespace {

Eigen::MatrixXd random_points(Eigen::Index n, Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0, 1);
  Eigen::MatrixXd m(n, d);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  // Distinct spreads per axis keep the eigenvalues apart.
  for (Eigen::Index c = 0; c < d; ++c) m.col(c) *= static_cast<double>(d - c);
  return m;
}

double pairwise_distortion(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double worst = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = i + 1; j < a.rows(); ++j)
      worst = std::max(worst, std::abs((a.row(i) - a.row(j)).norm() - (b.row(i) - b.row(j)).norm()));
  return worst;
}

}  // namespace

TEST_CASE("two points project onto one signed axis") {
  Eigen::MatrixXd points(2, 3);
  points << 0, 0, 0, 2, 0, 0;
  const Projection p = fit_pca(points, 1);
  CHECK(p.components(0, 0) == doctest::Approx(1.0));
  const Eigen::MatrixXd coords = p.transform(points);
  CHECK(coords(0, 0) == doctest::Approx(-1.0));
  CHECK(coords(1, 0) == doctest::Approx(1.0));
  CHECK(p.explained_variance(0) == doctest::Approx(p.total_variance));
}

TEST_CASE("full rank projection is an isometry") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXd points = random_points(40, 6, rng);
    const Projection p = fit_pca(points, 6);
    CHECK(pairwise_distortion(points, p.transform(points)) < 1e-6);
  }
}

TEST_CASE("components are orthonormal, sorted and sign-fixed") {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd points = random_points(100, 8, rng);
  const Projection p = fit_pca(points, 3);
  const Eigen::MatrixXd gram = p.components * p.components.transpose();
  CHECK((gram - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(p.explained_variance(0) >= p.explained_variance(1));
  CHECK(p.explained_variance(1) >= p.explained_variance(2));
  for (Eigen::Index r = 0; r < 3; ++r) {
    Eigen::Index arg;
    p.components.row(r).cwiseAbs().maxCoeff(&arg);
    CHECK(p.components(r, arg) > 0);
  }
  // Projected coordinates are centred with the reported variances.
  const Eigen::MatrixXd coords = p.transform(points);
  CHECK(coords.colwise().mean().cwiseAbs().maxCoeff() < 1e-9);
  const double var0 = coords.col(0).squaredNorm() / static_cast<double>(points.rows() - 1);
  CHECK(var0 == doctest::Approx(p.explained_variance(0)).epsilon(1e-9));
}

TEST_CASE("invalid ranks and inputs") {
  const Eigen::MatrixXd points = Eigen::MatrixXd::Random(5, 3);
  try {
    fit_pca(points, 4);
    FAIL("expected Flag error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Flag);
  }
  CHECK_THROWS_AS(fit_pca(points, 0), Error);
  CHECK_THROWS_AS(fit_pca(points.topRows(1), 1), Error);
}

TEST_CASE("projection TSV") {
  Eigen::MatrixXd coords(2, 2);
  coords << 1, 2, 3, 4;
  const std::vector<std::string> uris = {"a", "b"};
  std::ostringstream out;
  write_projection_tsv(uris, coords, out);
  CHECK(out.str() == "a\t1\t2\nb\t3\t4\n");
}
