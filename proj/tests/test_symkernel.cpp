// Exact arithmetic over Q(i), the canonical expression form and the
// differential operator algebra.
#include "sis/diff_op.hpp"
#include "sis/scalar_expr.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sis;

namespace {

ScalarExpr X(int a) { return coord(a); }

// Random polynomial-with-radius expression with small integer coefficients.
ScalarExpr random_expr(std::mt19937& rng) {
  std::uniform_int_distribution<int> n_terms(1, 4), coef(-3, 3), exp(0, 2), rexp(-2, 2), pick(0, 2);
  ScalarExpr e;
  const int n = n_terms(rng);
  for (int t = 0; t < n; ++t) {
    ScalarExpr term(coef(rng));
    for (int a = 0; a < 3; ++a) term *= pow(X(a), exp(rng));
    const int r = rexp(rng);
    if (r != 0) term *= radius(r);
    if (pick(rng) == 0) term *= param("alpha");
    if (pick(rng) == 1) term *= radial_fn("f", exp(rng));
    e += term;
  }
  return e;
}

EvalEnv env_at(double x, double y, double z) {
  EvalEnv env;
  env.x = {x, y, z};
  env.params[param_id("alpha")] = 1.7;
  // f(r) = exp(-r) on the sampled radius, with its derivatives.
  const double r = std::sqrt(x * x + y * y + z * z);
  for (int k = 0; k <= 6; ++k) env.jets[{function_id("f"), k}] = (k % 2 ? -1.0 : 1.0) * std::exp(-r);
  return env;
}

}  // namespace

TEST_CASE("Gaussian rationals") {
  const Gauss i = kI;
  CHECK(i * i == Gauss(-1));
  const Gauss z{rational(3, 4), rational(-2, 5)};
  CHECK(z * inverse(z) == Gauss(1));
  CHECK((z - z).is_zero());
}

TEST_CASE("canonical form is unique") {
  const ScalarExpr a = X(0) * radius(2) + param("alpha"), b = X(1) * radial_fn("f");
  CHECK((a + b - a) == b);
  CHECK((a - a).is_zero());
  CHECK((a - a).terms().empty());
  CHECK((a * b) == (b * a));
  CHECK(radius(1) * radius(-1) == ScalarExpr(1));
  CHECK(imag_unit() * imag_unit() == ScalarExpr(-1));
}

TEST_CASE("derivatives") {
  // d/dx1 (x1^2 r) = 2 x1 r + x1^3 / r
  const ScalarExpr e = X(0) * X(0) * radius(1);
  CHECK(scalar_derive(e, 0) == ScalarExpr(2) * X(0) * radius(1) + X(0) * X(0) * X(0) * radius(-1));
  // chain rule on abstract radial functions
  CHECK(scalar_derive(radial_fn("f"), 1) == X(1) * radius(-1) * radial_fn("f", 1));
  CHECK(radial_derive(radial_fn("f")) == radial_fn("f", 1));
  CHECK(radial_derive(radius(-1)) == -radius(-2));
  // substitution of a concrete radial function, derivatives included
  const RadialBindings b{{"f", param("alpha") * radius(-1)}};
  CHECK(substitute_radial(radial_fn("f", 1), b) == -param("alpha") * radius(-2));
}

TEST_CASE("Pauli algebra") {
  CHECK(matrix_mul(sigma(1), sigma(2)) == MatrixExpr(imag_unit()) * sigma(3));
  for (int a = 1; a <= 3; ++a) CHECK(matrix_mul(sigma(a), sigma(a)) == sigma(0));
  // (sigma.n)^2 = 1
  CHECK(matrix_mul(sigma_dot_n(), sigma_dot_n()) == sigma(0));
}

TEST_CASE("Weyl algebra and reflection") {
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const DiffOp c = commutator(DiffOp(X(a)), DiffOp::momentum(b));
      if (a == b) CHECK(c == DiffOp(imag_unit()));
      else CHECK(c.is_zero());
    }
  // P x = -x P
  CHECK(DiffOp::reflection() * DiffOp(X(0)) == DiffOp(-X(0)) * DiffOp::reflection());
  CHECK(DiffOp::reflection() * DiffOp::reflection() == DiffOp(ScalarExpr(1)));
  // 1/r is harmonic away from the origin
  CHECK((laplacian() * DiffOp(radius(-1))).terms().count(OpKey{}) == 0);
}

TEST_CASE("property: ring axioms and Leibniz rule on random expressions") {
  std::mt19937 rng(7);
  for (int t = 0; t < 60; ++t) {
    const ScalarExpr a = random_expr(rng), b = random_expr(rng), c = random_expr(rng);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    for (int ax = 0; ax < 3; ++ax) CHECK(scalar_derive(a * b, ax) == scalar_derive(a, ax) * b + a * scalar_derive(b, ax));
  }
}

TEST_CASE("property: canonical forms agree with numeric evaluation") {
  std::mt19937 rng(11);
  for (int t = 0; t < 40; ++t) {
    const ScalarExpr a = random_expr(rng), b = random_expr(rng);
    const EvalEnv env = env_at(0.3 + 0.01 * t, -0.7, 1.1);
    const auto ab = evaluate(a * b, env), sep = evaluate(a, env) * evaluate(b, env);
    CHECK(std::abs(ab - sep) <= 1e-9 * (1 + std::abs(sep)));
    // derivative against a central difference
    const double h = 1e-5;
    EvalEnv ep = env_at(0.3 + 0.01 * t + h, -0.7, 1.1), em = env_at(0.3 + 0.01 * t - h, -0.7, 1.1);
    const auto fd = (evaluate(a, ep) - evaluate(a, em)) / (2 * h);
    const auto an = evaluate(scalar_derive(a, 0), env);
    CHECK(std::abs(fd - an) <= 1e-5 * (1 + std::abs(an)));
  }
}

TEST_CASE("operator composition is associative") {
  std::mt19937 rng(5);
  for (int t = 0; t < 10; ++t) {
    const DiffOp A = DiffOp(random_expr(rng)) * DiffOp::partial(t % 3);
    const DiffOp B = DiffOp(MatrixExpr(random_expr(rng)) + random_expr(rng) * sigma(1 + t % 3)) * DiffOp::partial(0);
    const DiffOp C = DiffOp(random_expr(rng));
    CHECK((A * B) * C == A * (B * C));
    CHECK(commutator(A, B) == -commutator(B, A));
  }
}
