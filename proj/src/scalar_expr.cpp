#include "sis/scalar_expr.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace sis {

// ---------------------------------------------------------------- Gauss

Gauss operator+(const Gauss& a, const Gauss& b) { return {a.re + b.re, a.im + b.im}; }
Gauss operator-(const Gauss& a, const Gauss& b) { return {a.re - b.re, a.im - b.im}; }
Gauss operator-(const Gauss& a) { return {-a.re, -a.im}; }
Gauss operator*(const Gauss& a, const Gauss& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
Gauss inverse(const Gauss& a) {
  Rational n = a.re * a.re + a.im * a.im;
  if (sgn(n) == 0) throw std::domain_error("inverse of zero Gaussian rational");
  return {a.re / n, -a.im / n};
}

std::string to_string(const Gauss& g) {
  if (sgn(g.im) == 0) return g.re.get_str();
  if (sgn(g.re) == 0) return g.im.get_str() + "i";
  std::string im = g.im.get_str();
  if (im[0] != '-') im = "+" + im;
  return "(" + g.re.get_str() + im + "i)";
}

Rational rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------- symbols

namespace {

struct SymbolTable {
  std::mutex mu;
  std::deque<std::string> names;
  std::unordered_map<std::string, SymbolId> ids;

  SymbolId intern(std::string_view name) {
    std::lock_guard lock(mu);
    auto it = ids.find(std::string(name));
    if (it != ids.end()) return it->second;
    auto id = static_cast<SymbolId>(names.size());
    names.emplace_back(name);
    ids.emplace(names.back(), id);
    return id;
  }
  const std::string& name(SymbolId id) {
    std::lock_guard lock(mu);
    return names.at(id);
  }
};

SymbolTable& params_table() {
  static SymbolTable t;
  return t;
}
SymbolTable& functions_table() {
  static SymbolTable t;
  return t;
}

}  // namespace

SymbolId param_id(std::string_view name) { return params_table().intern(name); }
SymbolId function_id(std::string_view name) { return functions_table().intern(name); }
const std::string& param_name(SymbolId id) { return params_table().name(id); }
const std::string& function_name(SymbolId id) { return functions_table().name(id); }

// ---------------------------------------------------------------- monomials

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial m;
  for (int i = 0; i < 3; ++i) m.x[i] = a.x[i] + b.x[i];
  m.r = a.r + b.r;
  m.s = a.s + b.s;

  m.params.reserve(a.params.size() + b.params.size());
  auto pa = a.params.begin(), pb = b.params.begin();
  while (pa != a.params.end() || pb != b.params.end()) {
    if (pb == b.params.end() || (pa != a.params.end() && pa->first < pb->first)) {
      m.params.push_back(*pa++);
    } else if (pa == a.params.end() || pb->first < pa->first) {
      m.params.push_back(*pb++);
    } else {
      int e = pa->second + pb->second;
      if (e != 0) m.params.emplace_back(pa->first, e);
      ++pa;
      ++pb;
    }
  }

  m.jets.reserve(a.jets.size() + b.jets.size());
  auto ja = a.jets.begin(), jb = b.jets.begin();
  auto key = [](const Jet& j) { return std::pair(j.fn, j.order); };
  while (ja != a.jets.end() || jb != b.jets.end()) {
    if (jb == b.jets.end() || (ja != a.jets.end() && key(*ja) < key(*jb))) {
      m.jets.push_back(*ja++);
    } else if (ja == a.jets.end() || key(*jb) < key(*ja)) {
      m.jets.push_back(*jb++);
    } else {
      m.jets.push_back({ja->fn, ja->order, ja->power + jb->power});
      ++ja;
      ++jb;
    }
  }
  return m;
}

// ---------------------------------------------------------------- canonical form

namespace {

bool mono_less(const Term& a, const Term& b) { return a.mono < b.mono; }

// x1^2 -> r^2 - x2^2 - x3^2 until e1 <= 1.
void reduce_x1(std::vector<Term>& in, std::vector<Term>& out) {
  std::vector<Term> work = std::move(in);
  while (!work.empty()) {
    Term t = std::move(work.back());
    work.pop_back();
    if (t.mono.x[0] < 2) {
      out.push_back(std::move(t));
      continue;
    }
    t.mono.x[0] -= 2;
    Term a = t, b = t, c = std::move(t);
    a.mono.r += 2;
    b.mono.x[1] += 2;
    b.coeff = -b.coeff;
    c.mono.x[2] += 2;
    c.coeff = -c.coeff;
    work.push_back(std::move(a));
    work.push_back(std::move(b));
    work.push_back(std::move(c));
  }
}

}  // namespace

ScalarExpr make_sorted(std::vector<Term> raw) {
  std::vector<Term> reduced;
  reduced.reserve(raw.size());
  bool needs_reduce = std::any_of(raw.begin(), raw.end(), [](const Term& t) { return t.mono.x[0] >= 2; });
  if (needs_reduce) {
    reduce_x1(raw, reduced);
  } else {
    reduced = std::move(raw);
  }
  std::sort(reduced.begin(), reduced.end(), mono_less);

  ScalarExpr e;
  auto& out = e.terms_;
  out.reserve(reduced.size());
  for (auto& t : reduced) {
    if (!out.empty() && out.back().mono == t.mono) {
      out.back().coeff += t.coeff;
    } else {
      if (!out.empty() && out.back().coeff.is_zero()) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coeff.is_zero()) out.pop_back();
  return e;
}

ScalarExpr ScalarExpr::from_terms(std::vector<Term> raw) { return make_sorted(std::move(raw)); }

ScalarExpr::ScalarExpr(long v) : ScalarExpr(Gauss(v)) {}
ScalarExpr::ScalarExpr(const Rational& v) : ScalarExpr(Gauss(v)) {}
ScalarExpr::ScalarExpr(const Gauss& v) {
  if (!v.is_zero()) terms_.push_back({Monomial{}, v});
}

bool ScalarExpr::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].mono == Monomial{});
}

Gauss ScalarExpr::constant_value() const {
  for (const auto& t : terms_)
    if (t.mono == Monomial{}) return t.coeff;
  return Gauss{};
}

bool ScalarExpr::depends_on_x() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.mono.x_degree() > 0; });
}

bool ScalarExpr::operator==(const ScalarExpr& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!(terms_[i].mono == o.terms_[i].mono) || !(terms_[i].coeff == o.terms_[i].coeff)) return false;
  }
  return true;
}

namespace {

std::vector<Term> merge_add(const std::vector<Term>& a, const std::vector<Term>& b, bool negate_b) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  auto ia = a.begin(), ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->mono < ib->mono)) {
      out.push_back(*ia++);
    } else if (ia == a.end() || ib->mono < ia->mono) {
      out.push_back(*ib++);
      if (negate_b) out.back().coeff = -out.back().coeff;
    } else {
      Gauss c = negate_b ? ia->coeff - ib->coeff : ia->coeff + ib->coeff;
      if (!c.is_zero()) out.push_back({ia->mono, std::move(c)});
      ++ia;
      ++ib;
    }
  }
  return out;
}

}  // namespace

ScalarExpr& ScalarExpr::operator+=(const ScalarExpr& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge_add(terms_, o.terms_, false);
  return *this;
}

ScalarExpr& ScalarExpr::operator-=(const ScalarExpr& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge_add(terms_, o.terms_, true);
  return *this;
}

ScalarExpr& ScalarExpr::operator*=(const ScalarExpr& o) {
  *this = *this * o;
  return *this;
}

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
  ScalarExpr c = a;
  c += b;
  return c;
}
ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) {
  ScalarExpr c = a;
  c -= b;
  return c;
}
ScalarExpr operator-(const ScalarExpr& a) { return scale(a, Gauss(-1)); }

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Term> raw;
  raw.reserve(a.terms().size() * b.terms().size());
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) raw.push_back({ta.mono * tb.mono, ta.coeff * tb.coeff});
  return make_sorted(std::move(raw));
}

ScalarExpr scale(const ScalarExpr& a, const Gauss& c) {
  if (c.is_zero()) return {};
  std::vector<Term> t = a.terms();
  for (auto& term : t) term.coeff = term.coeff * c;
  return make_sorted(std::move(t));
}

ScalarExpr pow(const ScalarExpr& a, int n) {
  if (n < 0) throw std::invalid_argument("pow: negative exponent");
  ScalarExpr out(1);
  for (int i = 0; i < n; ++i) out *= a;
  return out;
}

// ---------------------------------------------------------------- generators

namespace {

ScalarExpr single(Monomial m, Gauss c = Gauss(1)) { return ScalarExpr::from_terms({Term{std::move(m), std::move(c)}}); }

}  // namespace

ScalarExpr coord(int a) {
  if (a < 0 || a > 2) throw std::out_of_range("coord: axis must be 0, 1 or 2");
  Monomial m;
  m.x[a] = 1;
  return single(m);
}

ScalarExpr radius(int k) {
  Monomial m;
  m.r = k;
  return single(m);
}

ScalarExpr shifted_radius(int k) {
  Monomial m;
  m.s = k;
  return single(m);
}

ScalarExpr param(std::string_view name, int power) {
  if (power == 0) return ScalarExpr(1);
  Monomial m;
  m.params.emplace_back(param_id(name), power);
  return single(m);
}

ScalarExpr radial_fn(std::string_view name, int order) {
  Monomial m;
  m.jets.push_back({function_id(name), order, 1});
  return single(m);
}

ScalarExpr imag_unit() { return ScalarExpr(kI); }

// ---------------------------------------------------------------- calculus

ScalarExpr scalar_derive(const ScalarExpr& e, int a) {
  std::vector<Term> raw;
  for (const auto& t : e.terms()) {
    const Monomial& m = t.mono;
    if (m.x[a] > 0) {
      Term d = t;
      d.mono.x[a] -= 1;
      d.coeff = d.coeff * Gauss(m.x[a]);
      raw.push_back(std::move(d));
    }
    if (m.r != 0) {
      Term d = t;
      d.mono.x[a] += 1;
      d.mono.r -= 2;
      d.coeff = d.coeff * Gauss(m.r);
      raw.push_back(std::move(d));
    }
    if (m.s != 0) {
      Term d = t;
      d.mono.x[a] += 1;
      d.mono.s -= 2;
      d.coeff = d.coeff * Gauss(m.s);
      raw.push_back(std::move(d));
    }
    // chain rule on each jet: d_a g^(n) = (x_a / r) g^(n+1)
    for (std::size_t i = 0; i < m.jets.size(); ++i) {
      Term d = t;
      Jet j = m.jets[i];
      d.coeff = d.coeff * Gauss(j.power);
      if (j.power == 1) {
        d.mono.jets.erase(d.mono.jets.begin() + static_cast<long>(i));
      } else {
        d.mono.jets[i].power -= 1;
      }
      Monomial bump;
      bump.x[a] = 1;
      bump.r = -1;
      bump.jets.push_back({j.fn, j.order + 1, 1});
      d.mono = d.mono * bump;
      raw.push_back(std::move(d));
    }
  }
  return ScalarExpr::from_terms(std::move(raw));
}

ScalarExpr radial_derive(const ScalarExpr& e) {
  // (1/r) x.grad on each factor: x^e r^k -> (|e|+k)/r, s^m -> m r s^-2,
  // g^(n) -> g^(n+1).
  std::vector<Term> raw;
  for (const auto& t : e.terms()) {
    const Monomial& m = t.mono;
    int euler = m.x_degree() + m.r;
    if (euler != 0) {
      Term d = t;
      d.mono.r -= 1;
      d.coeff = d.coeff * Gauss(euler);
      raw.push_back(std::move(d));
    }
    if (m.s != 0) {
      Term d = t;
      d.mono.r += 1;
      d.mono.s -= 2;
      d.coeff = d.coeff * Gauss(m.s);
      raw.push_back(std::move(d));
    }
    for (std::size_t i = 0; i < m.jets.size(); ++i) {
      Term d = t;
      Jet j = m.jets[i];
      d.coeff = d.coeff * Gauss(j.power);
      if (j.power == 1) {
        d.mono.jets.erase(d.mono.jets.begin() + static_cast<long>(i));
      } else {
        d.mono.jets[i].power -= 1;
      }
      Monomial bump;
      bump.jets.push_back({j.fn, j.order + 1, 1});
      d.mono = d.mono * bump;
      raw.push_back(std::move(d));
    }
  }
  return ScalarExpr::from_terms(std::move(raw));
}

ScalarExpr parity_flip(const ScalarExpr& e) {
  std::vector<Term> t = e.terms();
  for (auto& term : t)
    if (term.mono.x_degree() % 2 != 0) term.coeff = -term.coeff;
  return ScalarExpr::from_terms(std::move(t));
}

ScalarExpr real_part(const ScalarExpr& e) {
  std::vector<Term> t;
  for (const auto& term : e.terms())
    if (sgn(term.coeff.re) != 0) t.push_back({term.mono, Gauss(term.coeff.re)});
  return ScalarExpr::from_terms(std::move(t));
}

ScalarExpr imag_part(const ScalarExpr& e) {
  std::vector<Term> t;
  for (const auto& term : e.terms())
    if (sgn(term.coeff.im) != 0) t.push_back({term.mono, Gauss(term.coeff.im)});
  return ScalarExpr::from_terms(std::move(t));
}

ScalarExpr conj(const ScalarExpr& e) {
  std::vector<Term> t = e.terms();
  for (auto& term : t) term.coeff.im = -term.coeff.im;
  return ScalarExpr::from_terms(std::move(t));
}

// ---------------------------------------------------------------- substitution

ScalarExpr substitute_radial(const ScalarExpr& e, const RadialBindings& b) {
  if (b.empty()) return e;
  std::map<SymbolId, std::vector<ScalarExpr>> derivs;  // lazily extended D_r^n g
  for (const auto& [name, g] : b) {
    if (g.depends_on_x()) throw std::invalid_argument("radial binding for '" + name + "' depends on x");
    derivs[function_id(name)].push_back(g);
  }
  auto nth = [&](SymbolId fn, int n) -> const ScalarExpr& {
    auto& v = derivs.at(fn);
    while (static_cast<int>(v.size()) <= n) v.push_back(radial_derive(v.back()));
    return v[static_cast<std::size_t>(n)];
  };

  ScalarExpr out;
  for (const auto& t : e.terms()) {
    Monomial rest = t.mono;
    rest.jets.clear();
    ScalarExpr factor(1);
    bool touched = false;
    for (const auto& j : t.mono.jets) {
      if (derivs.count(j.fn)) {
        factor *= pow(nth(j.fn, j.order), j.power);
        touched = true;
      } else {
        rest.jets.push_back(j);
      }
    }
    if (!touched) {
      out += ScalarExpr::from_terms({t});
    } else {
      out += single(rest, t.coeff) * factor;
    }
  }
  return out;
}

ScalarExpr substitute_param(const ScalarExpr& e, std::string_view name, const ScalarExpr& value) {
  SymbolId id = param_id(name);
  ScalarExpr out;
  for (const auto& t : e.terms()) {
    auto it = std::find_if(t.mono.params.begin(), t.mono.params.end(), [&](const auto& p) { return p.first == id; });
    if (it == t.mono.params.end()) {
      out += ScalarExpr::from_terms({t});
      continue;
    }
    int k = it->second;
    Monomial rest = t.mono;
    rest.params.erase(rest.params.begin() + (it - t.mono.params.begin()));
    ScalarExpr factor;
    if (k > 0) {
      factor = pow(value, k);
    } else {
      if (!value.is_constant() || value.is_zero())
        throw std::invalid_argument("substitute_param: negative power of '" + std::string(name) + "' needs a nonzero constant");
      Gauss inv = inverse(value.constant_value());
      Gauss p(1);
      for (int i = 0; i < -k; ++i) p = p * inv;
      factor = ScalarExpr(p);
    }
    out += single(rest, t.coeff) * factor;
  }
  return out;
}

bool has_param(const ScalarExpr& e, std::string_view name) {
  SymbolId id = param_id(name);
  for (const auto& t : e.terms())
    for (const auto& p : t.mono.params)
      if (p.first == id) return true;
  return false;
}

bool has_function(const ScalarExpr& e, std::string_view name) {
  SymbolId id = function_id(name);
  for (const auto& t : e.terms())
    for (const auto& j : t.mono.jets)
      if (j.fn == id) return true;
  return false;
}

ScalarExpr collapse_shift(const ScalarExpr& e) {
  std::vector<Term> t = e.terms();
  for (auto& term : t) {
    term.mono.r += term.mono.s;
    term.mono.s = 0;
  }
  return ScalarExpr::from_terms(std::move(t));
}

// ---------------------------------------------------------------- evaluation

std::complex<double> evaluate(const ScalarExpr& e, const EvalEnv& env) {
  double r = std::sqrt(env.x[0] * env.x[0] + env.x[1] * env.x[1] + env.x[2] * env.x[2]);
  double s = std::sqrt(r * r + env.omega);
  std::complex<double> sum = 0.0;
  for (const auto& t : e.terms()) {
    std::complex<double> v = t.coeff.to_complex();
    const Monomial& m = t.mono;
    for (int a = 0; a < 3; ++a) v *= std::pow(env.x[a], m.x[a]);
    v *= std::pow(r, m.r);
    v *= std::pow(s, m.s);
    for (const auto& [id, k] : m.params) {
      auto it = env.params.find(id);
      if (it == env.params.end()) throw std::out_of_range("evaluate: unbound parameter " + param_name(id));
      v *= std::pow(it->second, k);
    }
    for (const auto& j : m.jets) {
      auto it = env.jets.find({j.fn, j.order});
      if (it == env.jets.end())
        throw std::out_of_range("evaluate: unbound jet " + function_name(j.fn) + "[" + std::to_string(j.order) + "]");
      v *= std::pow(it->second, j.power);
    }
    sum += v;
  }
  return sum;
}

// ---------------------------------------------------------------- text form

std::string to_string(const Monomial& m) {
  std::vector<std::string> f;
  for (int a = 0; a < 3; ++a)
    if (m.x[a] != 0) f.push_back("x" + std::to_string(a + 1) + "^" + std::to_string(m.x[a]));
  if (m.r != 0) f.push_back("r^" + std::to_string(m.r));
  if (m.s != 0) f.push_back("s^" + std::to_string(m.s));
  std::vector<std::string> named;
  for (const auto& [id, k] : m.params) named.push_back(param_name(id) + "^" + std::to_string(k));
  for (const auto& j : m.jets)
    named.push_back(function_name(j.fn) + "[" + std::to_string(j.order) + "]^" + std::to_string(j.power));
  std::sort(named.begin(), named.end());
  f.insert(f.end(), named.begin(), named.end());
  std::string out;
  for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "*" : "") + f[i];
  return out;
}

std::string to_string(const ScalarExpr& e) {
  if (e.is_zero()) return "0";
  std::vector<std::pair<std::string, std::string>> parts;
  for (const auto& t : e.terms()) parts.emplace_back(to_string(t.mono), to_string(t.coeff));
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += " + ";
    out += parts[i].second;
    if (!parts[i].first.empty()) out += "*" + parts[i].first;
  }
  return out;
}

}  // namespace sis
