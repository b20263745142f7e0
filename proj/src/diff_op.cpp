#include "sis/diff_op.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <vector>

namespace sis {

// ---------------------------------------------------------------- MatrixExpr

MatrixExpr& MatrixExpr::operator+=(const MatrixExpr& o) {
  for (int mu = 0; mu < 4; ++mu) c[mu] += o.c[mu];
  return *this;
}
MatrixExpr& MatrixExpr::operator-=(const MatrixExpr& o) {
  for (int mu = 0; mu < 4; ++mu) c[mu] -= o.c[mu];
  return *this;
}
MatrixExpr operator+(const MatrixExpr& a, const MatrixExpr& b) {
  MatrixExpr m = a;
  m += b;
  return m;
}
MatrixExpr operator-(const MatrixExpr& a, const MatrixExpr& b) {
  MatrixExpr m = a;
  m -= b;
  return m;
}
MatrixExpr operator-(const MatrixExpr& a) {
  return map_components(a, [](const ScalarExpr& s) { return -s; });
}
MatrixExpr operator*(const ScalarExpr& s, const MatrixExpr& m) {
  return map_components(m, [&](const ScalarExpr& x) { return s * x; });
}

// (a0 + a.sigma)(b0 + b.sigma) = a0 b0 + a.b + (a0 b + b0 a + i a x b).sigma
MatrixExpr matrix_mul(const MatrixExpr& a, const MatrixExpr& b) {
  MatrixExpr m;
  m.c[0] = a.c[0] * b.c[0] + a.c[1] * b.c[1] + a.c[2] * b.c[2] + a.c[3] * b.c[3];
  const ScalarExpr i = imag_unit();
  for (int k = 1; k <= 3; ++k) {
    int p = k % 3 + 1, q = (k + 1) % 3 + 1;  // (k, p, q) cyclic
    m.c[k] = a.c[0] * b.c[k] + b.c[0] * a.c[k] + i * (a.c[p] * b.c[q] - a.c[q] * b.c[p]);
  }
  return m;
}

MatrixExpr sigma(int mu) {
  MatrixExpr m;
  m.c.at(static_cast<std::size_t>(mu)) = ScalarExpr(1);
  return m;
}

MatrixExpr sigma_dot(const std::array<ScalarExpr, 3>& v) {
  MatrixExpr m;
  for (int a = 0; a < 3; ++a) m.c[a + 1] = v[a];
  return m;
}

MatrixExpr sigma_dot_x() { return sigma_dot({coord(0), coord(1), coord(2)}); }
MatrixExpr sigma_dot_n() { return radius(-1) * sigma_dot_x(); }

std::string to_string(const MatrixExpr& m) {
  std::string out;
  for (int mu = 0; mu < 4; ++mu) {
    if (m.c[mu].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + to_string(m.c[mu]) + ")*sigma" + std::to_string(mu);
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------- DiffOp

DiffOp::DiffOp(const MatrixExpr& m) { add(OpKey{}, m); }

DiffOp DiffOp::term(const MatrixExpr& m, OpKey k) {
  DiffOp d;
  d.add(k, m);
  return d;
}

DiffOp DiffOp::partial(int a) {
  OpKey k;
  k.d.at(static_cast<std::size_t>(a)) = 1;
  return term(sigma(0), k);
}

DiffOp DiffOp::momentum(int a) { return ScalarExpr(Gauss(0, -1)) * partial(a); }

DiffOp DiffOp::reflection() {
  OpKey k;
  k.parity = true;
  return term(sigma(0), k);
}

void DiffOp::add(const OpKey& k, const MatrixExpr& m) {
  if (m.is_zero()) return;
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, m);
    return;
  }
  it->second += m;
  if (it->second.is_zero()) terms_.erase(it);
}

DiffOp& DiffOp::operator+=(const DiffOp& o) {
  for (const auto& [k, m] : o.terms_) add(k, m);
  return *this;
}
DiffOp& DiffOp::operator-=(const DiffOp& o) {
  for (const auto& [k, m] : o.terms_) add(k, -m);
  return *this;
}

int DiffOp::order() const {
  int o = -1;
  for (const auto& [k, m] : terms_) o = std::max(o, k.order());
  return o;
}

std::size_t DiffOp::size() const {
  std::size_t n = 0;
  for (const auto& [k, m] : terms_)
    for (const auto& c : m.c) n += c.size();
  return n;
}

DiffOp operator+(const DiffOp& a, const DiffOp& b) {
  DiffOp d = a;
  d += b;
  return d;
}
DiffOp operator-(const DiffOp& a, const DiffOp& b) {
  DiffOp d = a;
  d -= b;
  return d;
}
DiffOp operator-(const DiffOp& a) {
  DiffOp d;
  for (const auto& [k, m] : a.terms()) d.add(k, -m);
  return d;
}
DiffOp operator*(const ScalarExpr& s, const DiffOp& a) {
  DiffOp d;
  for (const auto& [k, m] : a.terms()) d.add(k, s * m);
  return d;
}
DiffOp operator*(const MatrixExpr& l, const DiffOp& a) {
  DiffOp d;
  for (const auto& [k, m] : a.terms()) d.add(k, matrix_mul(l, m));
  return d;
}

namespace {

long binomial(int n, int k) {
  long b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

MatrixExpr derive_matrix(const MatrixExpr& m, int a) {
  return map_components(m, [a](const ScalarExpr& s) { return scalar_derive(s, a); });
}

MatrixExpr flip_matrix(const MatrixExpr& m) { return map_components(m, [](const ScalarExpr& s) { return parity_flip(s); }); }

// All mixed derivatives d^g m for g <= top, indexed by g.
struct DerivativeTable {
  std::array<int, 3> top;
  std::vector<MatrixExpr> table;

  DerivativeTable(const MatrixExpr& m, std::array<int, 3> t) : top(t) {
    table.resize(static_cast<std::size_t>((t[0] + 1) * (t[1] + 1) * (t[2] + 1)));
    for (int i = 0; i <= t[0]; ++i)
      for (int j = 0; j <= t[1]; ++j)
        for (int k = 0; k <= t[2]; ++k) {
          MatrixExpr& slot = at({i, j, k});
          if (i == 0 && j == 0 && k == 0) slot = m;
          else if (k > 0) slot = derive_matrix(at({i, j, k - 1}), 2);
          else if (j > 0) slot = derive_matrix(at({i, j - 1, k}), 1);
          else slot = derive_matrix(at({i - 1, j, k}), 0);
        }
  }
  MatrixExpr& at(std::array<int, 3> g) {
    return table[static_cast<std::size_t>((g[0] * (top[1] + 1) + g[1]) * (top[2] + 1) + g[2])];
  }
};

}  // namespace

// (a d^al P^p)(b d^be P^q) = (-1)^(p|be|) a sum_g C(al,g) (d^g b~) d^(al-g+be) P^(p+q)
// where b~ = b(-x) when p = 1.
DiffOp op_compose(const DiffOp& A, const DiffOp& B) {
  DiffOp out;
  for (const auto& [kb, mb] : B.terms()) {
    std::array<int, 3> top{0, 0, 0};
    for (const auto& [ka, ma] : A.terms())
      for (int i = 0; i < 3; ++i) top[i] = std::max(top[i], ka.d[i]);
    DerivativeTable plain(mb, top);
    std::unique_ptr<DerivativeTable> flipped;
    for (const auto& [ka, ma] : A.terms()) {
      DerivativeTable* tab = &plain;
      if (ka.parity) {
        if (!flipped) flipped = std::make_unique<DerivativeTable>(flip_matrix(mb), top);
        tab = flipped.get();
      }
      bool negate = ka.parity && (kb.order() % 2 == 1);
      for (int g0 = 0; g0 <= ka.d[0]; ++g0)
        for (int g1 = 0; g1 <= ka.d[1]; ++g1)
          for (int g2 = 0; g2 <= ka.d[2]; ++g2) {
            const MatrixExpr& dm = tab->at({g0, g1, g2});
            if (dm.is_zero()) continue;
            long c = binomial(ka.d[0], g0) * binomial(ka.d[1], g1) * binomial(ka.d[2], g2);
            if (negate) c = -c;
            OpKey k;
            k.d = {ka.d[0] - g0 + kb.d[0], ka.d[1] - g1 + kb.d[1], ka.d[2] - g2 + kb.d[2]};
            k.parity = ka.parity != kb.parity;
            out.add(k, ScalarExpr(c) * matrix_mul(ma, dm));
          }
    }
  }
  return out;
}

DiffOp commutator(const DiffOp& a, const DiffOp& b) { return op_compose(a, b) - op_compose(b, a); }
DiffOp anticommutator(const DiffOp& a, const DiffOp& b) { return op_compose(a, b) + op_compose(b, a); }

DiffOp laplacian() {
  DiffOp d;
  for (int a = 0; a < 3; ++a) {
    OpKey k;
    k.d[a] = 2;
    d.add(k, sigma(0));
  }
  return d;
}

DiffOp map_coefficients(const DiffOp& a, const std::function<ScalarExpr(const ScalarExpr&)>& f) {
  DiffOp d;
  for (const auto& [k, m] : a.terms()) d.add(k, map_components(m, f));
  return d;
}

DiffOp substitute_radial(const DiffOp& a, const RadialBindings& b) {
  if (b.empty()) return a;
  return map_coefficients(a, [&](const ScalarExpr& s) { return substitute_radial(s, b); });
}

DiffOp substitute_param(const DiffOp& a, std::string_view name, const ScalarExpr& value) {
  return map_coefficients(a, [&](const ScalarExpr& s) { return substitute_param(s, name, value); });
}

MatrixExpr coefficient(const DiffOp& a, const OpKey& k) {
  auto it = a.terms().find(k);
  return it == a.terms().end() ? MatrixExpr{} : it->second;
}

std::string to_string(const DiffOp& a) {
  if (a.is_zero()) return "0";
  std::string out;
  for (const auto& [k, m] : a.terms()) {
    if (!out.empty()) out += "\n";
    out += "D[" + std::to_string(k.d[0]) + "," + std::to_string(k.d[1]) + "," + std::to_string(k.d[2]) + "]";
    if (k.parity) out += "*P";
    out += ": " + to_string(m);
  }
  return out;
}

}  // namespace sis
