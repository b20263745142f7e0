// Eigensolvers, the finite-difference radial problems, Kummer's function and
// Gauss-Legendre quadrature.
#include "sis/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sis;

namespace {

PotentialFn scalar(std::function<double(double)> v) {
  return [v](double r) {
    Eigen::MatrixXd m(1, 1);
    m(0, 0) = v(r);
    return m;
  };
}

}  // namespace

TEST_CASE("tridiagonal eigenvalues") {
  Eigen::VectorXd d(3), e = Eigen::VectorXd::Zero(2);
  d << 3, 1, 2;
  const EigenPairs p = tridiag_eig(d, e, 3);
  CHECK(p.values(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.values(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(p.values(2) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("tridiagonal 100x100 against a dense solver") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 100;
  Eigen::VectorXd d(n), e(n - 1);
  for (int i = 0; i < n; ++i) d(i) = u(rng);
  for (int i = 0; i < n - 1; ++i) e(i) = u(rng);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) A(i, i) = d(i);
  for (int i = 0; i < n - 1; ++i) A(i, i + 1) = A(i + 1, i) = e(i);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const EigenPairs p = tridiag_eig(d, e, 20);
  for (int k = 0; k < 20; ++k) {
    CHECK(std::abs(p.values(k) - es.eigenvalues()(k)) < 1e-12);
    const Eigen::VectorXd v = p.vectors.col(k);
    CHECK((A * v - p.values(k) * v).norm() <= 1e-8 * v.norm());
  }
  // orthonormality
  const Eigen::MatrixXd G = p.vectors.transpose() * p.vectors;
  CHECK((G - Eigen::MatrixXd::Identity(20, 20)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("banded eigenvalues and inertia") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 60, bw = 2;
  Eigen::MatrixXd band = Eigen::MatrixXd::Zero(bw + 1, n), A = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j <= bw; ++j)
    for (int i = 0; i + j < n; ++i) {
      band(j, i) = u(rng) + (j == 0 ? 4.0 * i / n : 0.0);
      A(i + j, i) = A(i, i + j) = band(j, i);
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const EigenPairs p = banded_eig(band, 8);
  for (int k = 0; k < 8; ++k) CHECK(std::abs(p.values(k) - es.eigenvalues()(k)) < 1e-10);
  CHECK(banded_count_below(band, 0.5 * (es.eigenvalues()(4) + es.eigenvalues()(5))) == 5);
}

TEST_CASE("free Laplacian stencil eigenvalues match the closed form") {
  const Grid g = make_grid(10.0, 199);
  const FdSolution s = solve_fd(scalar([](double) { return 0.0; }), 1, g, 10);
  for (int k = 1; k <= 10; ++k) {
    const double exact = (2 - 2 * std::cos(M_PI * k / (g.M + 1))) / (g.h * g.h);
    CHECK(std::abs(s.pairs.values(k - 1) - exact) < 1e-10);
  }
}

TEST_CASE("hydrogen channel: ground state -1 for alpha = 2") {
  const auto x = solve_fd_extrapolated(scalar([](double r) { return -2.0 / r; }), 1, 40.0, 4000, 1);
  CHECK(std::abs(x.values(0) + 1.0) < 1e-4);
}

TEST_CASE("odd oscillator states 3, 7, 11") {
  const auto x = solve_fd_extrapolated(scalar([](double r) { return r * r; }), 1, 12.0, 2000, 3, true);
  CHECK(std::abs(x.values(0) - 3.0) < 1e-3);
  CHECK(std::abs(x.values(1) - 7.0) < 1e-3);
  CHECK(std::abs(x.values(2) - 11.0) < 1e-3);
  for (int k = 0; k < 3; ++k) {
    CHECK(x.order(k) >= 1.8);
    CHECK(x.order(k) <= 2.2);
  }
}

TEST_CASE("box doubling leaves certified levels unchanged") {
  const double h = 0.01;
  auto V = scalar([](double r) { return -2.0 / r + 2.0 / (r * r); });  // l = 1 hydrogen: -1/4
  const auto a = solve_fd_extrapolated(V, 1, 50.0, static_cast<int>(50.0 / h) - 1, 1);
  const auto b = solve_fd_extrapolated(V, 1, 100.0, static_cast<int>(100.0 / h) - 1, 1);
  CHECK(std::abs(a.values(0) - b.values(0)) < 1e-6);
  CHECK(std::abs(a.values(0) + 0.25) < 1e-4);
}

TEST_CASE("coupled channels: block matrix is symmetric and solves a decoupled pair") {
  PotentialFn V = [](double r) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
    m(0, 0) = -2.0 / r;
    m(1, 1) = r * r;
    return m;
  };
  const auto x = solve_fd_extrapolated(V, 2, 120.0, 12000, 3);  // box 40 / sqrt(1/9)
  CHECK(std::abs(x.values(0) + 1.0) < 1e-4);
  CHECK(std::abs(x.values(1) + 0.25) < 1e-4);
  CHECK(std::abs(x.values(2) + 1.0 / 9) < 1e-4);
}

TEST_CASE("Richardson and Aitken") {
  // E(h) = 1 + h^2
  CHECK(richardson(1.04, 1.01) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(observed_order(1.04, 1.01, 1.0025) == doctest::Approx(2.0).epsilon(1e-12));
  // E(h) = 1 + h^0.7
  auto e = [](double h) { return 1 + std::pow(h, 0.7); };
  CHECK(aitken(e(0.1), e(0.05), e(0.025)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Kummer's function") {
  CHECK(kummer_1f1(0.3, 1.7, 0.0) == 1.0);
  CHECK(kummer_1f1(-1, 2, 0.8) == doctest::Approx(1 - 0.4).epsilon(1e-15));
  CHECK(kummer_1f1(-2, 3, 1) == doctest::Approx(5.0 / 12).epsilon(1e-15));
  for (double z : {-50.0, -20.0, -3.0, 0.5, 7.0, 30.0, 50.0}) {
    CHECK(kummer_1f1(1, 1, z) == doctest::Approx(std::exp(z)).epsilon(1e-12));
    CHECK(kummer_1f1(1, 2, z) == doctest::Approx(std::expm1(z) / z).epsilon(1e-12));
  }
  CHECK_THROWS_AS(kummer_1f1(1, -2, 1.0), NumericsError);
}

TEST_CASE("Gauss-Legendre exactness") {
  const Quadrature q3 = gauss_legendre(3);
  double s = 0;
  for (int i = 0; i < 3; ++i) s += q3.weights(i) * std::pow(q3.nodes(i), 4);
  CHECK(std::abs(s - 0.4) < 1e-15);
  for (int n = 1; n <= 24; ++n) {
    const Quadrature q = gauss_legendre(n);
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double v = 0;
      for (int i = 0; i < n; ++i) v += q.weights(i) * std::pow(q.nodes(i), p);
      const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
      CHECK(std::abs(v - exact) < 1e-13);
    }
  }
}
