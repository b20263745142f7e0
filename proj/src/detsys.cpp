#include "sis/detsys.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace sis {

namespace {

int levi(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0;
  return ((b - a + 3) % 3 == 1) ? 1 : -1;
}

const ScalarExpr kIs(kI);

ScalarExpr d(const ScalarExpr& e, int a) { return scalar_derive(e, a); }

// A scalar differential operator: multi-index -> coefficient (derivatives
// to the right).
using Poly = std::map<std::array<int, 3>, ScalarExpr>;

std::array<int, 3> idx(std::initializer_list<int> axes) {
  std::array<int, 3> k{0, 0, 0};
  for (int a : axes) ++k[a];
  return k;
}

void add(Poly& p, const std::array<int, 3>& k, const ScalarExpr& v) {
  if (v.is_zero()) return;
  ScalarExpr& slot = p[k];
  slot += v;
  if (slot.is_zero()) p.erase(k);
}

void add(Poly& p, const Poly& q, const ScalarExpr& factor = ScalarExpr(1)) {
  for (const auto& [k, v] : q) add(p, k, factor * v);
}

// Q^mu = A^{ab} d_a d_b + B^a d_a + C, summed over all ordered (a, b).
struct ScalarQ {
  std::array<std::array<ScalarExpr, 3>, 3> A{};
  std::array<ScalarExpr, 3> B{};
  ScalarExpr C;
};

ScalarQ scalar_part(const CoeffSet& c, int mu) {
  ScalarQ q;
  q.A = c.phi[mu];
  ScalarExpr quarter(rational(1, 4));
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) q.B[a] += d(c.phi[mu][a][b], b);
    q.B[a] += ScalarExpr(Gauss(0, 2)) * c.lambda[mu][a];
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) q.C += quarter * d(d(c.phi[mu][a][b], a), b);
    q.C += kIs * d(c.lambda[mu][a], a);
  }
  q.C += c.omega[mu];
  return q;
}

// G Q for a multiplication operator G.
Poly product(const ScalarExpr& G, const ScalarQ& q) {
  Poly p;
  if (G.is_zero()) return p;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) add(p, idx({a, b}), G * q.A[a][b]);
    add(p, idx({a}), G * q.B[a]);
  }
  add(p, idx({}), G * q.C);
  return p;
}

// [G, Q] = -2 A^{ab} G_a d_b - A^{ab} G_ab - B^a G_a.
Poly comm_mult(const ScalarExpr& G, const ScalarQ& q) {
  Poly p;
  if (G.is_zero()) return p;
  std::array<ScalarExpr, 3> g;
  for (int a = 0; a < 3; ++a) g[a] = d(G, a);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (q.A[a][b].is_zero()) continue;
      add(p, idx({b}), ScalarExpr(-2) * q.A[a][b] * g[a]);
      add(p, idx({}), -(q.A[a][b] * d(g[a], b)));
    }
    add(p, idx({}), -(q.B[a] * g[a]));
  }
  return p;
}

// [-Laplacian, g d^k] = -(Lap g) d^k - 2 (d_c g) d_c d^k.
Poly comm_lap(const ScalarQ& q) {
  Poly p;
  auto term = [&](const ScalarExpr& g, std::array<int, 3> k) {
    if (g.is_zero()) return;
    for (int c = 0; c < 3; ++c) {
      ScalarExpr gc = d(g, c);
      if (gc.is_zero()) continue;
      add(p, k, -d(gc, c));
      std::array<int, 3> kc = k;
      ++kc[c];
      add(p, kc, ScalarExpr(-2) * gc);
    }
  };
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) term(q.A[a][b], idx({a, b}));
    term(q.B[a], idx({a}));
  }
  term(q.C, idx({}));
  return p;
}

// Components (sigma^0..sigma^3) of [H, Q] computed from the tensor formulas.
std::array<Poly, 4> residual_polys(const CoeffSet& c, const FieldSet& f) {
  std::array<ScalarQ, 4> q;
  for (int mu = 0; mu < 4; ++mu) q[mu] = scalar_part(c, mu);
  std::array<Poly, 4> out;
  // sigma^0: [-Lap + F0, Q0] + sum_k [F^k, Q^k]
  add(out[0], comm_lap(q[0]));
  add(out[0], comm_mult(f.f0, q[0]));
  for (int k = 0; k < 3; ++k) add(out[0], comm_mult(f.f[k], q[k + 1]));
  // sigma^n: [-Lap + F0, Q^n] + [F^n, Q0] + i eps^{kmn} {F^k, Q^m}
  for (int n = 0; n < 3; ++n) {
    Poly& p = out[n + 1];
    add(p, comm_lap(q[n + 1]));
    add(p, comm_mult(f.f0, q[n + 1]));
    add(p, comm_mult(f.f[n], q[0]));
    for (int k = 0; k < 3; ++k)
      for (int m = 0; m < 3; ++m) {
        int e = levi(k, m, n);
        if (e == 0 || f.f[k].is_zero()) continue;
        ScalarExpr ie = ScalarExpr(Gauss(0, e));
        add(p, product(f.f[k], q[m + 1]), ScalarExpr(2) * ie);
        add(p, comm_mult(f.f[k], q[m + 1]), -ie);
      }
  }
  return out;
}

std::string equation_label(int mu, int order) {
  switch (order) {
    case 3: return "e1";
    case 2: return mu == 0 ? "e11" : "e2";
    case 1: return mu == 0 ? "e5" : "e3";
    default: return mu == 0 ? "e6" : "e4";
  }
}

}  // namespace

// ---------------------------------------------------------------- CoeffSet / FieldSet

bool CoeffSet::is_zero() const {
  for (int mu = 0; mu < 4; ++mu) {
    if (!omega[mu].is_zero()) return false;
    for (int a = 0; a < 3; ++a) {
      if (!lambda[mu][a].is_zero()) return false;
      for (int b = 0; b < 3; ++b)
        if (!phi[mu][a][b].is_zero()) return false;
    }
  }
  return true;
}

bool CoeffSet::symmetric() const {
  for (int mu = 0; mu < 4; ++mu)
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        if (!(phi[mu][a][b] == phi[mu][b][a])) return false;
  return true;
}

void CoeffSet::set_phi(int mu, int a, int b, const ScalarExpr& v) {
  phi[mu][a][b] = v;
  phi[mu][b][a] = v;
}

CoeffSet map_coefficients(const CoeffSet& c, const std::function<ScalarExpr(const ScalarExpr&)>& f) {
  CoeffSet o;
  for (int mu = 0; mu < 4; ++mu) {
    o.omega[mu] = f(c.omega[mu]);
    for (int a = 0; a < 3; ++a) {
      o.lambda[mu][a] = f(c.lambda[mu][a]);
      for (int b = 0; b < 3; ++b) o.phi[mu][a][b] = f(c.phi[mu][a][b]);
    }
  }
  return o;
}

CoeffSet operator+(const CoeffSet& a, const CoeffSet& b) {
  CoeffSet o = a;
  for (int mu = 0; mu < 4; ++mu) {
    o.omega[mu] += b.omega[mu];
    for (int i = 0; i < 3; ++i) {
      o.lambda[mu][i] += b.lambda[mu][i];
      for (int j = 0; j < 3; ++j) o.phi[mu][i][j] += b.phi[mu][i][j];
    }
  }
  return o;
}

CoeffSet operator*(const ScalarExpr& s, const CoeffSet& c) {
  return map_coefficients(c, [&](const ScalarExpr& e) { return s * e; });
}

CoeffSet substitute_param(const CoeffSet& c, std::string_view name, const ScalarExpr& value) {
  return map_coefficients(c, [&](const ScalarExpr& e) { return substitute_param(e, name, value); });
}

CoeffSet substitute_radial(const CoeffSet& c, const RadialBindings& b) {
  return map_coefficients(c, [&](const ScalarExpr& e) { return substitute_radial(e, b); });
}

FieldSet FieldSet::rotational(const ScalarExpr& phi0, const ScalarExpr& phi1) {
  FieldSet f;
  f.f0 = phi0;
  for (int a = 0; a < 3; ++a) f.f[a] = coord(a) * phi1;
  return f;
}

FieldSet substitute_param(const FieldSet& f, std::string_view name, const ScalarExpr& value) {
  FieldSet o;
  o.f0 = substitute_param(f.f0, name, value);
  for (int a = 0; a < 3; ++a) o.f[a] = substitute_param(f.f[a], name, value);
  return o;
}

FieldSet substitute_radial(const FieldSet& f, const RadialBindings& b) {
  FieldSet o;
  o.f0 = substitute_radial(f.f0, b);
  for (int a = 0; a < 3; ++a) o.f[a] = substitute_radial(f.f[a], b);
  return o;
}

// ---------------------------------------------------------------- residuals

std::vector<Residual> residuals(const CoeffSet& c, const FieldSet& f, bool include_zero) {
  auto polys = residual_polys(c, f);
  std::vector<Residual> out;
  auto emit = [&](int mu, const std::array<int, 3>& k, const ScalarExpr& v) {
    int order = k[0] + k[1] + k[2];
    for (const char* part : {"re", "im"}) {
      Residual r;
      r.eq = equation_label(mu, order);
      r.indices = {mu, k[0], k[1], k[2]};
      r.part = part;
      r.value = part[0] == 'r' ? real_part(v) : imag_part(v);
      if (include_zero || !r.value.is_zero()) out.push_back(std::move(r));
    }
  };
  if (include_zero) {
    // Every multi-index of order <= 3 for every matrix component.
    for (int mu = 0; mu < 4; ++mu)
      for (int i = 0; i <= 3; ++i)
        for (int j = 0; i + j <= 3; ++j)
          for (int k = 0; i + j + k <= 3; ++k) {
            std::array<int, 3> key{i, j, k};
            auto it = polys[mu].find(key);
            emit(mu, key, it == polys[mu].end() ? ScalarExpr() : it->second);
          }
  } else {
    for (int mu = 0; mu < 4; ++mu)
      for (const auto& [k, v] : polys[mu]) emit(mu, k, v);
  }
  std::stable_sort(out.begin(), out.end(), [](const Residual& a, const Residual& b) {
    static const std::vector<std::string> order{"e1", "e11", "e2", "e3", "e4", "e5", "e6"};
    auto pa = std::find(order.begin(), order.end(), a.eq) - order.begin();
    auto pb = std::find(order.begin(), order.end(), b.eq) - order.begin();
    return pa < pb;
  });
  return out;
}

bool residuals_vanish(const CoeffSet& c, const FieldSet& f) {
  auto polys = residual_polys(c, f);
  return std::all_of(polys.begin(), polys.end(), [](const Poly& p) { return p.empty(); });
}

std::string residual_label(const Residual& r) {
  return r.eq + "[mu=" + std::to_string(r.indices[0]) + ",d=(" + std::to_string(r.indices[1]) + "," +
         std::to_string(r.indices[2]) + "," + std::to_string(r.indices[3]) + ")," + r.part + "]";
}

// ---------------------------------------------------------------- operators

DiffOp assemble_integral(const CoeffSet& c) {
  // Built with the operator algebra (not the tensor formulas) so that the
  // cross-check is independent.
  DiffOp Q;
  const ScalarExpr quarter(rational(1, 4));
  for (int mu = 0; mu < 4; ++mu) {
    const MatrixExpr s = sigma(mu);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (c.phi[mu][a][b].is_zero()) continue;
        DiffOp inner = anticommutator(DiffOp(c.phi[mu][a][b]), DiffOp::partial(a));
        Q += quarter * (s * anticommutator(inner, DiffOp::partial(b)));
      }
      if (!c.lambda[mu][a].is_zero())
        Q += kIs * (s * anticommutator(DiffOp(c.lambda[mu][a]), DiffOp::partial(a)));
    }
    Q += DiffOp(c.omega[mu] * s);
  }
  return Q;
}

DiffOp assemble_hamiltonian(const FieldSet& f) {
  DiffOp H = -laplacian();
  H += DiffOp(MatrixExpr(f.f0) + sigma_dot(f.f));
  return H;
}

DiffOp residual_operator(const CoeffSet& c, const FieldSet& f) {
  auto polys = residual_polys(c, f);
  DiffOp out;
  for (int mu = 0; mu < 4; ++mu)
    for (const auto& [k, v] : polys[mu]) {
      OpKey key;
      key.d = k;
      out.add(key, v * sigma(mu));
    }
  return out;
}

CoeffSet extract_coefficients(const DiffOp& q) {
  if (q.order() > 2) throw DetsysError("extract_coefficients: operator order exceeds 2");
  CoeffSet c;
  std::array<std::array<ScalarExpr, 3>, 4> B{};
  for (const auto& [k, m] : q.terms()) {
    if (k.parity) throw DetsysError("extract_coefficients: operator contains the reflection");
    std::vector<int> axes;
    for (int a = 0; a < 3; ++a)
      for (int n = 0; n < k.d[a]; ++n) axes.push_back(a);
    for (int mu = 0; mu < 4; ++mu) {
      const ScalarExpr& v = m.c[mu];
      if (axes.size() == 2) {
        if (axes[0] == axes[1]) c.phi[mu][axes[0]][axes[0]] = v;
        else c.set_phi(mu, axes[0], axes[1], ScalarExpr(rational(1, 2)) * v);
      } else if (axes.size() == 1) {
        B[mu][axes[0]] = v;
      } else {
        c.omega[mu] = v;  // C for now
      }
    }
  }
  const ScalarExpr half_over_i(Gauss(Rational(0), rational(-1, 2)));  // 1/(2i)
  const ScalarExpr quarter(rational(1, 4));
  for (int mu = 0; mu < 4; ++mu) {
    for (int a = 0; a < 3; ++a) {
      ScalarExpr div;
      for (int b = 0; b < 3; ++b) div += d(c.phi[mu][a][b], b);
      c.lambda[mu][a] = half_over_i * (B[mu][a] - div);
    }
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) c.omega[mu] -= quarter * d(d(c.phi[mu][a][b], a), b);
      c.omega[mu] -= kIs * d(c.lambda[mu][a], a);
    }
  }
  return c;
}

Crosscheck crosscheck_commutator(const CoeffSet& c, const FieldSet& f) {
  Crosscheck x;
  DiffOp comm = commutator(assemble_hamiltonian(f), assemble_integral(c));
  DiffOp tensor = residual_operator(c, f);
  x.residuals_zero = residuals(c, f).empty();
  x.commutator_zero = comm.is_zero();
  x.forms_equal = comm == tensor;
  return x;
}

}  // namespace sis

// ---------------------------------------------------------------- Killing families

namespace sis {

namespace {

ScalarExpr X(int a) { return coord(a); }
ScalarExpr delta(int a, int b) { return ScalarExpr(a == b ? 1 : 0); }
ScalarExpr eps(int a, int b, int c) { return ScalarExpr(levi(a, b, c)); }
ScalarExpr r2() { return radius(2); }
ScalarExpr P(const std::string& name) { return param(name); }

// Vector parameter v^a as three symbols name1, name2, name3.
std::array<ScalarExpr, 3> vec_param(const std::string& name) {
  return {P(name + "1"), P(name + "2"), P(name + "3")};
}

// Symmetric traceless tensor parameter t^{ab}: five symbols, t33 = -t11 - t22.
std::array<std::array<ScalarExpr, 3>, 3> tensor_param(const std::string& name) {
  std::array<std::array<ScalarExpr, 3>, 3> t;
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) {
      if (a == 2 && b == 2) continue;
      t[a][b] = t[b][a] = P(name + std::to_string(a + 1) + std::to_string(b + 1));
    }
  t[2][2] = -t[0][0] - t[1][1];
  return t;
}

std::vector<std::string> tensor_param_names(const std::string& name) {
  return {name + "11", name + "12", name + "13", name + "22", name + "23"};
}

std::vector<std::string> vec_param_names(const std::string& name) { return {name + "1", name + "2", name + "3"}; }

ScalarExpr dot_x(const std::array<ScalarExpr, 3>& v) { return v[0] * X(0) + v[1] * X(1) + v[2] * X(2); }

// t^{ab} x_b
std::array<ScalarExpr, 3> tx(const std::array<std::array<ScalarExpr, 3>, 3>& t) {
  std::array<ScalarExpr, 3> o;
  for (int a = 0; a < 3; ++a) o[a] = dot_x(t[a]);
  return o;
}

ScalarExpr xtx(const std::array<std::array<ScalarExpr, 3>, 3>& t) { return dot_x(tx(t)); }

template <class F>
void fill_phi(CoeffSet& c, int mu, F&& f) {
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) c.set_phi(mu, a, b, f(a, b));
}

// Phi^{0ab} families.
ScalarExpr kt1(int a, int b, const ScalarExpr& l1, const ScalarExpr& l2) {
  return l1 * delta(a, b) + l2 * (delta(a, b) * r2() - X(a) * X(b));
}
ScalarExpr kt2(int a, int b, const std::array<ScalarExpr, 3>& v) {
  return v[a] * X(b) + v[b] * X(a) - ScalarExpr(2) * delta(a, b) * dot_x(v);
}
ScalarExpr kt3(int a, int b, const std::array<std::array<ScalarExpr, 3>, 3>& t1,
               const std::array<std::array<ScalarExpr, 3>, 3>& t2) {
  auto t2x = tx(t2);
  return t1[a][b] + t2[a][b] * r2() - t2x[a] * X(b) - t2x[b] * X(a) + delta(a, b) * xtx(t2);
}
ScalarExpr kt4(int a, int b, const std::array<std::array<ScalarExpr, 3>, 3>& t) {
  ScalarExpr s;
  for (int c = 0; c < 3; ++c)
    for (int dd = 0; dd < 3; ++dd) s += (t[a][c] * eps(c, b, dd) + t[b][c] * eps(c, a, dd)) * X(dd);
  return s;
}

// Phi^{mab} families (m 0-based).
ScalarExpr ktt1(int m, int a, int b, const ScalarExpr& l) {
  return l * (ScalarExpr(2) * X(m) * delta(a, b) - X(a) * delta(m, b) - X(b) * delta(m, a));
}
ScalarExpr ktt2_full(int m, int a, int b, const std::array<ScalarExpr, 3>& l1, const std::array<ScalarExpr, 3>& l2,
                     const std::array<ScalarExpr, 3>& l3, const std::array<ScalarExpr, 3>& l4) {
  ScalarExpr l4x = dot_x(l4);
  return l1[m] * delta(a, b) + delta(m, a) * l2[b] + delta(m, b) * l2[a] + l3[m] * (delta(a, b) * r2() - X(a) * X(b)) +
         delta(m, a) * (X(b) * l4x - l4[b] * r2()) + delta(m, b) * (X(a) * l4x - l4[a] * r2()) -
         X(m) * (ScalarExpr(2) * delta(a, b) * l4x - l4[a] * X(b) - l4[b] * X(a));
}
ScalarExpr ktt3(int m, int a, int b, const std::array<ScalarExpr, 3>& l5, const std::array<ScalarExpr, 3>& l6) {
  ScalarExpr s;
  for (int c = 0; c < 3; ++c) {
    s += (eps(m, c, a) * l5[b] + eps(m, c, b) * l5[a]) * X(c);
    for (int k = 0; k < 3; ++k) s += l6[k] * (delta(m, a) * eps(b, c, k) + delta(m, b) * eps(a, c, k)) * X(c);
  }
  return s;
}
ScalarExpr ktt4(int m, int a, int b, const std::array<std::array<ScalarExpr, 3>, 3>& l3,
                const std::array<std::array<ScalarExpr, 3>, 3>& l4) {
  ScalarExpr s;
  auto l4x = tx(l4);
  for (int c = 0; c < 3; ++c) {
    s += eps(m, a, c) * l3[c][b] + eps(m, b, c) * l3[c][a];
    for (int dd = 0; dd < 3; ++dd) {
      s += (delta(m, a) * eps(dd, c, b) + delta(m, b) * eps(dd, c, a)) * X(c) * l4x[dd];
      s -= l4[a][dd] * X(m) * eps(b, dd, c) * X(c) + l4[b][dd] * X(m) * eps(a, dd, c) * X(c);
    }
  }
  return s;
}
ScalarExpr ktt5(int m, int a, int b, const std::array<std::array<ScalarExpr, 3>, 3>& l1,
                const std::array<std::array<ScalarExpr, 3>, 3>& l2) {
  auto l1x = tx(l1);
  auto l2x = tx(l2);
  return l1[m][a] * X(b) + l1[m][b] * X(a) - ScalarExpr(2) * delta(a, b) * l1x[m] + ScalarExpr(2) * X(m) * l2[a][b] -
         (delta(m, a) * l2x[b] + delta(m, b) * l2x[a]);
}

}  // namespace

const std::vector<std::string>& killing_kinds() {
  static const std::vector<std::string> kinds{"Kv",   "KvvK1", "KvvK2", "KvvK3", "KvvK4", "KvvK5", "KvvK6",
                                              "Kt1",  "Kt2",   "Kt3",   "Kt4",   "Ktt1",  "Ktt2",  "Ktt3",
                                              "Ktt4", "Ktt5",  "Ktt6",  "Ktt7"};
  return kinds;
}

KillingFamily killing_family(const std::string& kind) {
  KillingFamily k;
  k.kind = kind;
  CoeffSet& c = k.coeffs;
  auto add_names = [&](const std::vector<std::string>& n) { k.params.insert(k.params.end(), n.begin(), n.end()); };
  if (kind == "Kv") {
    auto al = vec_param("al"), nu = vec_param("nu");
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b)
        for (int cc = 0; cc < 3; ++cc) c.lambda[0][a] += eps(a, b, cc) * X(cc) * al[b];
      c.lambda[0][a] += nu[a];
    }
    add_names(vec_param_names("al"));
    add_names(vec_param_names("nu"));
    k.block = "0";
    k.parity = "mixed";
  } else if (kind.rfind("KvvK", 0) == 0) {
    int which = kind.back() - '0';
    k.block = "m";
    for (int m = 0; m < 3; ++m)
      for (int a = 0; a < 3; ++a) {
        ScalarExpr v;
        switch (which) {
          case 1: v = P("nu") * delta(m, a); break;
          case 2:
            for (int cc = 0; cc < 3; ++cc) v += P("mu") * eps(m, a, cc) * X(cc);
            break;
          case 3: {
            auto mu = vec_param("mu");
            for (int cc = 0; cc < 3; ++cc) v += eps(m, a, cc) * mu[cc];
            break;
          }
          case 4: {
            auto nu = vec_param("nu");
            v = delta(m, a) * dot_x(nu) - X(m) * nu[a];
            break;
          }
          case 5: {
            // mu^{mc}: a general constant matrix (nine symbols)
            for (int b = 0; b < 3; ++b)
              for (int cc = 0; cc < 3; ++cc)
                v += eps(a, b, cc) * X(b) * P("mu" + std::to_string(m + 1) + std::to_string(cc + 1));
            break;
          }
          case 6: v = P("nu" + std::to_string(m + 1) + std::to_string(a + 1)); break;
        }
        c.lambda[m + 1][a] = v;
      }
    static const char* parities[] = {"", "even", "odd", "even", "odd", "odd", "even"};
    k.parity = parities[which];
    switch (which) {
      case 1: add_names({"nu"}); break;
      case 2: add_names({"mu"}); break;
      case 3: add_names(vec_param_names("mu")); break;
      case 4: add_names(vec_param_names("nu")); break;
      case 5:
        for (int m = 1; m <= 3; ++m)
          for (int cc = 1; cc <= 3; ++cc) add_names({"mu" + std::to_string(m) + std::to_string(cc)});
        break;
      case 6:
        for (int m = 1; m <= 3; ++m)
          for (int a = 1; a <= 3; ++a) add_names({"nu" + std::to_string(m) + std::to_string(a)});
        break;
    }
  } else if (kind == "Kt1") {
    fill_phi(c, 0, [&](int a, int b) { return kt1(a, b, P("l1"), P("l2")); });
    add_names({"l1", "l2"});
    k.block = "0";
    k.parity = "even";
  } else if (kind == "Kt2") {
    auto v = vec_param("l0");
    fill_phi(c, 0, [&](int a, int b) { return kt2(a, b, v); });
    add_names(vec_param_names("l0"));
    k.block = "0";
    k.parity = "odd";
  } else if (kind == "Kt3") {
    auto t1 = tensor_param("ta"), t2 = tensor_param("tb");
    fill_phi(c, 0, [&](int a, int b) { return kt3(a, b, t1, t2); });
    add_names(tensor_param_names("ta"));
    add_names(tensor_param_names("tb"));
    k.block = "0";
    k.parity = "even";
  } else if (kind == "Kt4") {
    auto t = tensor_param("tc");
    fill_phi(c, 0, [&](int a, int b) { return kt4(a, b, t); });
    add_names(tensor_param_names("tc"));
    k.block = "0";
    k.parity = "odd";
  } else if (kind.rfind("Ktt", 0) == 0) {
    int which = kind.back() - '0';
    k.block = "m";
    for (int m = 0; m < 3; ++m) {
      std::function<ScalarExpr(int, int)> f;
      switch (which) {
        case 1: f = [&](int a, int b) { return ktt1(m, a, b, P("l")); }; break;
        case 2: {
          auto l1 = vec_param("la"), l2 = vec_param("lb"), l3 = vec_param("lc"), l4 = vec_param("ld");
          f = [=](int a, int b) { return ktt2_full(m, a, b, l1, l2, l3, l4); };
          break;
        }
        case 3: {
          auto l5 = vec_param("le"), l6 = vec_param("lf");
          f = [=](int a, int b) { return ktt3(m, a, b, l5, l6); };
          break;
        }
        case 4: {
          auto t3 = tensor_param("tc"), t4 = tensor_param("td");
          f = [=](int a, int b) { return ktt4(m, a, b, t3, t4); };
          break;
        }
        case 5: {
          auto t1 = tensor_param("ta"), t2 = tensor_param("tb");
          f = [=](int a, int b) { return ktt5(m, a, b, t1, t2); };
          break;
        }
        case 6: {
          auto t = tensor_param("u" + std::to_string(m + 1));
          f = [=](int a, int b) { return kt4(a, b, t); };
          break;
        }
        case 7: {
          auto t = tensor_param("w" + std::to_string(m + 1));
          std::array<std::array<ScalarExpr, 3>, 3> zero{};
          f = [=](int a, int b) { return kt3(a, b, zero, t); };
          break;
        }
      }
      fill_phi(c, m + 1, f);
    }
    static const char* parities[] = {"", "odd", "even", "odd", "even", "odd", "odd", "even"};
    k.parity = parities[which];
    switch (which) {
      case 1: add_names({"l"}); break;
      case 2:
        for (auto n : {"la", "lb", "lc", "ld"}) add_names(vec_param_names(n));
        break;
      case 3:
        for (auto n : {"le", "lf"}) add_names(vec_param_names(n));
        break;
      case 4:
        add_names(tensor_param_names("tc"));
        add_names(tensor_param_names("td"));
        break;
      case 5:
        add_names(tensor_param_names("ta"));
        add_names(tensor_param_names("tb"));
        break;
      case 6:
        for (int m = 1; m <= 3; ++m) add_names(tensor_param_names("u" + std::to_string(m)));
        break;
      case 7:
        for (int m = 1; m <= 3; ++m) add_names(tensor_param_names("w" + std::to_string(m)));
        break;
    }
  } else {
    throw DetsysError("unknown Killing family '" + kind + "'");
  }
  return k;
}

int block_parity(const CoeffSet& c, const std::string& block) {
  bool even = true, odd = true, any = false;
  auto check = [&](const ScalarExpr& e) {
    if (e.is_zero()) return;
    any = true;
    ScalarExpr f = parity_flip(e);
    if (!(f == e)) even = false;
    if (!(f == -e)) odd = false;
  };
  int lo = block == "0" ? 0 : 1, hi = block == "0" ? 0 : 3;
  for (int mu = lo; mu <= hi; ++mu) {
    check(c.omega[mu]);
    for (int a = 0; a < 3; ++a) {
      check(c.lambda[mu][a]);
      for (int b = 0; b < 3; ++b) check(c.phi[mu][a][b]);
    }
  }
  if (!any) return 0;
  if (even) return 1;
  if (odd) return -1;
  return 0;
}

}  // namespace sis

// ---------------------------------------------------------------- certificates

namespace sis {

namespace {

// Unknown: (point index or -1 for parameter-only products, monomial).
using UnknownKey = std::pair<int, Monomial>;
using Row = std::map<UnknownKey, Rational>;

void accumulate_row(Row& row, const ScalarExpr& e, const CertPoint& pt, int index, bool imag) {
  long r2v = pt.x[0] * pt.x[0] + pt.x[1] * pt.x[1] + pt.x[2] * pt.x[2];
  long r = std::lround(std::sqrt(static_cast<double>(r2v)));
  if (r * r != r2v || r == 0) throw DetsysError("pointwise certificate: points need a positive integer radius");
  for (const auto& t : e.terms()) {
    Rational v = imag ? t.coeff.im : t.coeff.re;
    if (sgn(v) == 0) continue;
    for (int a = 0; a < 3; ++a)
      for (int k = 0; k < t.mono.x[a]; ++k) v *= pt.x[a];
    auto power = [&](long base, int k) {
      if (k == 0) return;
      if (base == 0) throw DetsysError("pointwise certificate: shifted radius needed but not supplied");
      for (int i = 0; i < std::abs(k); ++i) {
        if (k > 0) v *= base;
        else v /= base;
      }
    };
    power(r, t.mono.r);
    power(pt.s, t.mono.s);
    Monomial key = t.mono;
    key.x = {0, 0, 0};
    key.r = 0;
    key.s = 0;
    row[{key.jets.empty() ? -1 : index, key}] += v;
  }
}

void prune(Row& row) {
  for (auto it = row.begin(); it != row.end();) it = sgn(it->second) == 0 ? row.erase(it) : std::next(it);
}

}  // namespace

const std::vector<CertPoint>& default_cert_points() {
  static const std::vector<CertPoint> pts{{{1, 2, 2}, 0}, {{2, 3, 6}, 0}, {{1, 4, 8}, 0}};
  return pts;
}

LinearCertificate pointwise_certificate(const std::vector<Residual>& eqs, const ScalarExpr& target,
                                        const std::vector<CertPoint>& points, int prolong) {
  std::vector<ScalarExpr> exprs;
  for (const auto& eq : eqs) exprs.push_back(eq.value);
  for (std::size_t begin = 0, level = 0; level < static_cast<std::size_t>(std::max(prolong, 0)); ++level) {
    std::size_t end = exprs.size();
    for (std::size_t i = begin; i < end; ++i)
      for (int a = 0; a < 3; ++a) {
        ScalarExpr d = scalar_derive(exprs[i], a);
        if (!d.is_zero()) exprs.push_back(std::move(d));
      }
    begin = end;
  }
  std::vector<Row> rows;
  for (std::size_t p = 0; p < points.size(); ++p)
    for (const auto& e : exprs)
      for (bool imag : {false, true}) {
        Row row;
        accumulate_row(row, e, points[p], static_cast<int>(p), imag);
        prune(row);
        if (!row.empty()) rows.push_back(std::move(row));
      }
  // The target is a constant-coefficient functional; a jet-valued target is
  // read at the first point.
  Row goal;
  accumulate_row(goal, target, points.front(), 0, false);
  prune(goal);

  std::map<UnknownKey, std::size_t> col;
  for (const auto& row : rows)
    for (const auto& [k, v] : row) col.emplace(k, 0);
  for (const auto& [k, v] : goal) col.emplace(k, 0);
  const UnknownKey one{-1, Monomial{}};
  col.emplace(one, 0);
  std::size_t n = 0;
  for (auto& [k, i] : col) i = n++;

  auto dense = [&](const Row& row) {
    std::vector<Rational> v(n);
    for (const auto& [k, x] : row) v[col.at(k)] = x;
    return v;
  };
  std::vector<std::vector<Rational>> A;
  for (const auto& row : rows) A.push_back(dense(row));

  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < n && rank < A.size(); ++c) {
    std::size_t p = rank;
    while (p < A.size() && sgn(A[p][c]) == 0) ++p;
    if (p == A.size()) continue;
    std::swap(A[p], A[rank]);
    Rational inv = 1 / A[rank][c];
    for (auto& x : A[rank]) x *= inv;
    for (std::size_t i = 0; i < A.size(); ++i) {
      if (i == rank || sgn(A[i][c]) == 0) continue;
      Rational f = A[i][c];
      for (std::size_t j = c; j < n; ++j) A[i][j] -= f * A[rank][j];
    }
    pivots.push_back(c);
    ++rank;
  }
  auto in_span = [&](std::vector<Rational> v) {
    for (std::size_t i = 0; i < rank; ++i) {
      Rational f = v[pivots[i]];
      if (sgn(f) == 0) continue;
      for (std::size_t j = 0; j < n; ++j) v[j] -= f * A[i][j];
    }
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; });
  };

  LinearCertificate cert;
  cert.equations = rows.size();
  cert.unknowns = n;
  cert.rank = rank;
  Row unit;
  unit[one] = 1;
  cert.inconsistent = in_span(dense(unit));
  cert.forced = !goal.empty() && in_span(dense(goal));
  return cert;
}

}  // namespace sis
