#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "l0ksvm/error.hpp"
#include "l0ksvm/kernels.hpp"

using namespace l0ksvm;

namespace {

KernelSpec gaussian(double rho) {
  KernelSpec s;
  s.rho = rho;
  return s;
}

KernelSpec family(KernelFamily f) {
  KernelSpec s;
  s.family = f;
  if (f == KernelFamily::gaussian || f == KernelFamily::laplacian || f == KernelFamily::exponential) s.rho = 0.7;
  return s;
}

Eigen::MatrixXd random_points(Eigen::Index m, Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd X(m, d);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < d; ++j) X(i, j) = g(rng);
  return X;
}

const KernelFamily kAll[] = {KernelFamily::gaussian,    KernelFamily::linear,     KernelFamily::laplacian,
                             KernelFamily::exponential, KernelFamily::polynomial, KernelFamily::inverse_multiquadric};

}  // namespace

TEST_CASE("eval_kernel examples") {
  Eigen::Vector2d z(0.3, -0.7);
  CHECK(eval_kernel(gaussian(1.0), z, z) == 1.0);

  KernelSpec lin;
  lin.family = KernelFamily::linear;
  CHECK(eval_kernel(lin, Eigen::Vector2d(1, 2), Eigen::Vector2d(3, 4)) == 11.0);

  const double d2 = 4.0;
  CHECK(eval_kernel(gaussian(0.5), Eigen::Vector2d(0, 0), Eigen::Vector2d(2, 0)) ==
        doctest::Approx(std::exp(-0.5 * d2)).epsilon(1e-15));
}

TEST_CASE("distance kernels use the documented norms") {
  const Eigen::Vector2d a(1, -2), b(-2, 2);  // l1 distance 7, l2 distance 5
  CHECK(eval_kernel(family(KernelFamily::laplacian), a, b) == doctest::Approx(std::exp(-0.7 * 7)));
  CHECK(eval_kernel(family(KernelFamily::exponential), a, b) == doctest::Approx(std::exp(-0.7 * 5)));
  CHECK(eval_kernel(family(KernelFamily::gaussian), a, b) == doctest::Approx(std::exp(-0.7 * 25)));

  KernelSpec poly;
  poly.family = KernelFamily::polynomial;
  poly.degree = 2;
  poly.offset = 1;
  CHECK(eval_kernel(poly, a, b) == doctest::Approx(std::pow(-2.0 - 4.0 + 1.0, 2)));

  KernelSpec imq;
  imq.family = KernelFamily::inverse_multiquadric;
  imq.imq_c = 1;
  imq.imq_beta = 0.5;
  CHECK(eval_kernel(imq, a, b) == doctest::Approx(1.0 / std::sqrt(26.0)));
}

TEST_CASE("eval_kernel errors") {
  CHECK_THROWS_AS(eval_kernel(gaussian(1.0), Eigen::Vector2d(0, 0), Eigen::Vector3d(0, 0, 0)), InputError);
  CHECK_THROWS_AS(eval_kernel(gaussian(-1.0), Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 0)), ConfigError);
  CHECK_THROWS_AS(eval_kernel(gaussian(0.0), Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 0)), ConfigError);
}

TEST_CASE("kernel spec helpers") {
  KernelSpec s;
  CHECK(s.resolved(4).rho.value() == doctest::Approx(0.25));
  CHECK(gaussian(2.0).resolved(4).rho.value() == 2.0);
  CHECK(s.strictly_pd());
  CHECK_FALSE(family(KernelFamily::linear).strictly_pd());
  CHECK_FALSE(family(KernelFamily::polynomial).strictly_pd());
  CHECK(parse_kernel_family("rbf") == KernelFamily::gaussian);
  CHECK(parse_kernel_family("imq") == KernelFamily::inverse_multiquadric);
  CHECK_THROWS_AS(parse_kernel_family("sigmoid"), ConfigError);
  for (KernelFamily f : kAll) {
    const KernelSpec spec = family(f);
    CHECK(parse_kernel_family(to_string(f)) == f);
    CHECK(KernelSpec::from_params(f, spec.params()) == spec);
  }
}

TEST_CASE("gram_matrix examples") {
  Eigen::MatrixXd same(2, 2);
  same << 0.4, -1.2, 0.4, -1.2;
  CHECK(gram_matrix(gaussian(1.0), same).entries() == Eigen::Matrix2d::Ones());

  KernelSpec lin;
  lin.family = KernelFamily::linear;
  CHECK(gram_matrix(lin, Eigen::Matrix2d::Identity()).entries() == Eigen::Matrix2d::Identity());

  Eigen::MatrixXd X(2, 2);
  X << 0, 0, 2, 0;
  const Eigen::MatrixXd K = gram_matrix(gaussian(0.5), X).entries();
  const double off = eval_kernel(gaussian(0.5), X.row(0).transpose(), X.row(1).transpose());
  CHECK(K(0, 0) == 1.0);
  CHECK(K(1, 1) == 1.0);
  CHECK(K(0, 1) == off);
  CHECK(K(1, 0) == off);
  CHECK(off == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("gram_matrix equals the entrywise cross-table") {
  for (KernelFamily f : kAll) {
    for (Eigen::Index m : {1, 5, 20}) {
      const Eigen::MatrixXd X = random_points(m, 3, 100 + m);
      const KernelSpec spec = family(f);
      const GramMatrix G = gram_matrix(spec, X);
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
          CHECK(G.entries()(i, j) == eval_kernel(spec, X.row(i).transpose(), X.row(j).transpose()));
      CHECK(G.entries() == G.entries().transpose());
      CHECK(G.entries() == gram_matrix_serial(spec, X).entries());
      CHECK(G.source_fingerprint() == fingerprint(X));
    }
  }
}

TEST_CASE("duplicated rows give unit gaussian entries") {
  Eigen::MatrixXd X = random_points(6, 2, 3);
  X.row(4) = X.row(1);
  const Eigen::MatrixXd K = gram_matrix(gaussian(0.5), X).entries();
  CHECK(K(1, 4) == 1.0);
  CHECK(K(4, 1) == 1.0);
}

TEST_CASE("strictly positive definite families have positive spectrum") {
  for (KernelFamily f : kAll) {
    const KernelSpec spec = family(f);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Eigen::MatrixXd X = random_points(30, 2, seed);
      const Eigen::MatrixXd K = gram_matrix(spec, X).entries();
      const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(K).eigenvalues();
      const double top = ev.maxCoeff();
      if (spec.strictly_pd()) {
        CHECK(ev.minCoeff() > -1e-10 * top);
      } else {
        CHECK(ev.minCoeff() > -1e-8 * top);
      }
    }
  }
}

TEST_CASE("cross_kernel and subset") {
  const Eigen::MatrixXd A = random_points(7, 3, 11);
  const Eigen::MatrixXd B = random_points(4, 3, 12);
  const KernelSpec spec = gaussian(0.3);
  const Eigen::MatrixXd T = cross_kernel(spec, A, B);
  REQUIRE(T.rows() == 7);
  REQUIRE(T.cols() == 4);
  for (Eigen::Index i = 0; i < 7; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) CHECK(T(i, j) == eval_kernel(spec, A.row(i).transpose(), B.row(j).transpose()));
  CHECK_THROWS_AS(cross_kernel(spec, A, random_points(2, 2, 1)), InputError);

  const GramMatrix G = gram_matrix(spec, A);
  const GramMatrix S = G.subset({5, 1, 2});
  CHECK(S.size() == 3);
  CHECK(S.entries()(0, 1) == G.entries()(5, 1));
  CHECK(S.entries()(2, 0) == G.entries()(2, 5));
}
