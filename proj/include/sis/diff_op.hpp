// Pauli-matrix coefficients and normal-ordered differential operators with
// the space reflection P.
#pragma once

#include "sis/scalar_expr.hpp"

#include <array>
#include <functional>
#include <map>
#include <string>

namespace sis {

// A 2x2 matrix expanded as c0 sigma0 + c1 sigma1 + c2 sigma2 + c3 sigma3.
struct MatrixExpr {
  std::array<ScalarExpr, 4> c{};

  MatrixExpr() = default;
  MatrixExpr(const ScalarExpr& scalar) { c[0] = scalar; }

  bool is_zero() const { return c[0].is_zero() && c[1].is_zero() && c[2].is_zero() && c[3].is_zero(); }
  bool operator==(const MatrixExpr& o) const { return c == o.c; }
  MatrixExpr& operator+=(const MatrixExpr& o);
  MatrixExpr& operator-=(const MatrixExpr& o);
};

MatrixExpr operator+(const MatrixExpr& a, const MatrixExpr& b);
MatrixExpr operator-(const MatrixExpr& a, const MatrixExpr& b);
MatrixExpr operator-(const MatrixExpr& a);
MatrixExpr operator*(const ScalarExpr& s, const MatrixExpr& m);
MatrixExpr matrix_mul(const MatrixExpr& a, const MatrixExpr& b);
inline MatrixExpr operator*(const MatrixExpr& a, const MatrixExpr& b) { return matrix_mul(a, b); }

MatrixExpr sigma(int mu);  // mu = 0..3
MatrixExpr sigma_dot(const std::array<ScalarExpr, 3>& v);
MatrixExpr sigma_dot_x();  // sigma.x
MatrixExpr sigma_dot_n();  // sigma.x / r

template <class F>
MatrixExpr map_components(const MatrixExpr& m, F&& f) {
  MatrixExpr out;
  for (int mu = 0; mu < 4; ++mu) out.c[mu] = f(m.c[mu]);
  return out;
}

std::string to_string(const MatrixExpr& m);

struct OpKey {
  std::array<int, 3> d{};  // derivative multi-index
  bool parity = false;     // trailing P
  auto operator<=>(const OpKey&) const = default;
  int order() const { return d[0] + d[1] + d[2]; }
};

// Sum of  M(x) d1^a d2^b d3^c [P], all coefficients to the left and P
// rightmost.
class DiffOp {
 public:
  DiffOp() = default;
  DiffOp(const MatrixExpr& m);
  DiffOp(const ScalarExpr& s) : DiffOp(MatrixExpr(s)) {}

  static DiffOp partial(int a);
  static DiffOp momentum(int a);  // -i d_a
  static DiffOp reflection();     // P
  static DiffOp term(const MatrixExpr& m, OpKey k);

  const std::map<OpKey, MatrixExpr>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int order() const;
  std::size_t size() const;  // number of nonzero scalar terms
  bool operator==(const DiffOp& o) const { return terms_ == o.terms_; }

  DiffOp& operator+=(const DiffOp& o);
  DiffOp& operator-=(const DiffOp& o);
  void add(const OpKey& k, const MatrixExpr& m);

 private:
  std::map<OpKey, MatrixExpr> terms_;
};

DiffOp operator+(const DiffOp& a, const DiffOp& b);
DiffOp operator-(const DiffOp& a, const DiffOp& b);
DiffOp operator-(const DiffOp& a);
DiffOp operator*(const ScalarExpr& s, const DiffOp& a);
DiffOp operator*(const MatrixExpr& m, const DiffOp& a);  // left multiplication
DiffOp op_compose(const DiffOp& a, const DiffOp& b);
inline DiffOp operator*(const DiffOp& a, const DiffOp& b) { return op_compose(a, b); }
DiffOp commutator(const DiffOp& a, const DiffOp& b);
DiffOp anticommutator(const DiffOp& a, const DiffOp& b);

DiffOp laplacian();
DiffOp substitute_radial(const DiffOp& a, const RadialBindings& b);
DiffOp substitute_param(const DiffOp& a, std::string_view name, const ScalarExpr& value);
DiffOp map_coefficients(const DiffOp& a, const std::function<ScalarExpr(const ScalarExpr&)>& f);

// Coefficient of a key, zero if absent.
MatrixExpr coefficient(const DiffOp& a, const OpKey& k);

std::string to_string(const DiffOp& a);

}  // namespace sis
