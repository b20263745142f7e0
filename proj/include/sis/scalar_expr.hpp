// Exact scalar expressions over the Gaussian rationals.
//
// A ScalarExpr is a finite sum of terms  c * x1^e1 x2^e2 x3^e3 * r^k * s^m *
// (parameters)^(integer powers) * (jets of abstract radial functions).
// r = |x| and s = (r^2 + omega)^(1/2) are independent generators; the
// relation r^2 = x1^2 + x2^2 + x3^2 is eliminated by keeping e1 <= 1.
#pragma once

#include <gmpxx.h>

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sis {

using Rational = mpq_class;

struct Gauss {
  Rational re;
  Rational im;

  Gauss() = default;
  Gauss(long v) : re(v) {}
  Gauss(Rational r) : re(std::move(r)) {}
  Gauss(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool operator==(const Gauss& o) const { return re == o.re && im == o.im; }

  Gauss& operator+=(const Gauss& o) { re += o.re; im += o.im; return *this; }
  Gauss& operator-=(const Gauss& o) { re -= o.re; im -= o.im; return *this; }
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
};

Gauss operator+(const Gauss& a, const Gauss& b);
Gauss operator-(const Gauss& a, const Gauss& b);
Gauss operator-(const Gauss& a);
Gauss operator*(const Gauss& a, const Gauss& b);
Gauss inverse(const Gauss& a);
std::string to_string(const Gauss& g);

inline const Gauss kI{Rational(0), Rational(1)};

Rational rational(long num, long den = 1);

// Symbol interning.  Parameters (lambda, alpha, ...) and abstract radial
// functions (f, phi, ...) live in separate tables.  Interning is guarded by a
// mutex; ids are stable for the life of the process.
using SymbolId = std::uint32_t;
SymbolId param_id(std::string_view name);
SymbolId function_id(std::string_view name);
const std::string& param_name(SymbolId id);
const std::string& function_name(SymbolId id);

struct Jet {
  SymbolId fn = 0;
  int order = 0;
  int power = 1;
  auto operator<=>(const Jet&) const = default;
};

struct Monomial {
  std::array<int, 3> x{};  // exponents of x1, x2, x3
  int r = 0;               // power of r
  int s = 0;               // power of the shifted radius sqrt(r^2 + omega)
  std::vector<std::pair<SymbolId, int>> params;  // sorted by id, nonzero exponents
  std::vector<Jet> jets;                         // sorted by (fn, order), power > 0

  auto operator<=>(const Monomial&) const = default;
  int x_degree() const { return x[0] + x[1] + x[2]; }
};

Monomial operator*(const Monomial& a, const Monomial& b);

struct Term {
  Monomial mono;
  Gauss coeff;
};

// Numeric environment for sampling-based sanity checks.
struct EvalEnv {
  std::array<double, 3> x{};
  std::map<SymbolId, std::complex<double>> params;
  std::map<std::pair<SymbolId, int>, double> jets;  // (fn, order) -> value
  double omega = 0.0;                                // shift inside s
};

class ScalarExpr {
 public:
  ScalarExpr() = default;
  ScalarExpr(long v);
  ScalarExpr(const Rational& v);
  ScalarExpr(const Gauss& v);

  // Canonicalizing constructor from arbitrary (possibly non-canonical) terms.
  static ScalarExpr from_terms(std::vector<Term> raw);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Gauss constant_value() const;  // coefficient of the empty monomial
  bool depends_on_x() const;     // any x-monomial present
  std::size_t size() const { return terms_.size(); }

  bool operator==(const ScalarExpr& o) const;

  ScalarExpr& operator+=(const ScalarExpr& o);
  ScalarExpr& operator-=(const ScalarExpr& o);
  ScalarExpr& operator*=(const ScalarExpr& o);

 private:
  std::vector<Term> terms_;  // sorted by monomial, unique, nonzero
  friend ScalarExpr make_sorted(std::vector<Term> t);
};

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator-(const ScalarExpr& a);
ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr scale(const ScalarExpr& a, const Gauss& c);
ScalarExpr pow(const ScalarExpr& a, int n);  // n >= 0

// Generators.  Axes are 0-based (0,1,2 <-> x1,x2,x3).
ScalarExpr coord(int a);
ScalarExpr radius(int k = 1);
ScalarExpr shifted_radius(int k = 1);
ScalarExpr param(std::string_view name, int power = 1);
ScalarExpr radial_fn(std::string_view name, int order = 0);
ScalarExpr imag_unit();

ScalarExpr scalar_derive(const ScalarExpr& e, int a);
// (1/r) x.grad e; coincides with d/dr on functions of r.
ScalarExpr radial_derive(const ScalarExpr& e);
// x -> -x.
ScalarExpr parity_flip(const ScalarExpr& e);
ScalarExpr real_part(const ScalarExpr& e);
ScalarExpr imag_part(const ScalarExpr& e);
ScalarExpr conj(const ScalarExpr& e);

using RadialBindings = std::map<std::string, ScalarExpr>;
// Replace every jet of a bound function by the matching radial derivative of
// its binding.  Bindings must not depend on x.
ScalarExpr substitute_radial(const ScalarExpr& e, const RadialBindings& b);
// Replace a parameter by an expression.  Negative powers require a constant
// nonzero value.
ScalarExpr substitute_param(const ScalarExpr& e, std::string_view name, const ScalarExpr& value);
bool has_param(const ScalarExpr& e, std::string_view name);
bool has_function(const ScalarExpr& e, std::string_view name);
// Rewrite the shifted radius with omega = 0, i.e. s -> r.
ScalarExpr collapse_shift(const ScalarExpr& e);

std::complex<double> evaluate(const ScalarExpr& e, const EvalEnv& env);

// Deterministic text form: terms sorted lexicographically by their printed
// factor string, explicit exponents.
std::string to_string(const ScalarExpr& e);
std::string to_string(const Monomial& m);

}  // namespace sis
