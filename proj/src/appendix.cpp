// Registry of the solved (and obstructed) coefficient families of the
// classification of second-order integrals of motion.  Every case is a list
// of stages: residual checks of explicit solutions, linear certificates for
// the obstructions, and identities against the model catalog.
//
// Conventions: the integral is Q = 1/4 s^mu {{Phi, d_a}, d_b} + i s^mu
// {Lambda, d_a} + s^mu Omega, the field F^0 = phi0(x), F^a = x^a phi1(x).
// Cases that depend on a constant vector or tensor lambda keep it symbolic in
// the residual checks when that stays cheap; certificates always use numeric
// values (a certificate for one lambda suffices to rule out a generic one).
#include "sis/detsys.hpp"
#include "sis/models.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace sis {

namespace {

using Vec = std::array<ScalarExpr, 3>;
using Ten = std::array<std::array<ScalarExpr, 3>, 3>;

int levi(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0;
  return ((b - a + 3) % 3 == 1) ? 1 : -1;
}
ScalarExpr X(int a) { return coord(a); }
ScalarExpr E(int a, int b, int c) { return ScalarExpr(levi(a, b, c)); }
ScalarExpr D(int a, int b) { return ScalarExpr(a == b ? 1 : 0); }
ScalarExpr P(const std::string& n) { return param(n); }
ScalarExpr RF(const std::string& n) { return radial_fn(n); }
ScalarExpr R(int k) { return radius(k); }
ScalarExpr Q(long p, long q = 1) { return ScalarExpr(rational(p, q)); }

Vec sym_vec(const std::string& n) { return {P(n + "1"), P(n + "2"), P(n + "3")}; }
Vec num_vec(long a, long b, long c) { return {ScalarExpr(a), ScalarExpr(b), ScalarExpr(c)}; }
ScalarExpr dot_x(const Vec& v) { return v[0] * X(0) + v[1] * X(1) + v[2] * X(2); }

// A generic-looking symmetric tensor for the tensor families.
Ten num_tensor() {
  const long t[3][3] = {{1, 2, 0}, {2, -3, 1}, {0, 1, 2}};
  Ten out;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) out[a][b] = ScalarExpr(t[a][b]);
  return out;
}

using Subs = std::vector<std::pair<std::string, ScalarExpr>>;

CoeffSet subs(CoeffSet c, const Subs& s) {
  for (auto& [n, v] : s) c = substitute_param(c, n, v);
  return c;
}
FieldSet subs(FieldSet f, const Subs& s) {
  for (auto& [n, v] : s) f = substitute_param(f, n, v);
  return f;
}

FieldSet field(const ScalarExpr& phi1, const ScalarExpr& phi0 = RF("phi0")) {
  return FieldSet::rotational(phi0, phi1);
}

// Multiply by s^K and rewrite s^2 -> r^2 + omega, so that an expression in
// the shifted radius is zero iff its reduction is.
ScalarExpr reduce_shift(const ScalarExpr& e) {
  int K = 0;
  for (const auto& t : e.terms()) K = std::max(K, -t.mono.s);
  const ScalarExpr base = R(2) + P("omega");
  ScalarExpr out;
  for (const auto& t : e.terms()) {
    const int m = t.mono.s + K;
    Monomial mm = t.mono;
    mm.s = 0;
    out += ScalarExpr::from_terms({Term{mm, t.coeff}}) * pow(base, m / 2) * (m % 2 ? shifted_radius(1) : ScalarExpr(1));
  }
  return out;
}

// ---------------------------------------------------------------- stages

struct StageOpts {
  std::vector<std::string> eqs;
  bool asserted = true;
  bool shifted = false;  // reduce the shifted radius before the zero test
};

std::vector<Residual> select(const CoeffSet& c, const FieldSet& f, const std::vector<std::string>& eqs,
                             bool include_zero, bool shifted) {
  std::vector<Residual> out;
  for (auto& r : residuals(c, f, include_zero || shifted)) {
    if (!eqs.empty() && std::find(eqs.begin(), eqs.end(), r.eq) == eqs.end()) continue;
    if (shifted) r.value = reduce_shift(r.value);
    if (!include_zero && r.zero()) continue;
    out.push_back(std::move(r));
  }
  return out;
}

CaseStage residual_stage(const std::string& label, const CoeffSet& c, const FieldSet& f, bool expect_zero,
                         const StageOpts& o = {}) {
  CaseStage s;
  s.label = label;
  s.equations = o.eqs;
  s.expected = expect_zero;
  s.asserted = o.asserted;
  s.residuals = select(c, f, o.eqs, true, o.shifted);
  s.holds = std::all_of(s.residuals.begin(), s.residuals.end(), [](const Residual& r) { return r.zero(); });
  return s;
}

// target = 1 asks for inconsistency, anything else for "target is forced to 0".
CaseStage certificate_stage(const std::string& label, const CoeffSet& c, const FieldSet& f,
                            const std::vector<std::string>& eqs, const ScalarExpr& target, const std::string& claim,
                            int prolong = 0, const std::vector<CertPoint>& pts = default_cert_points(),
                            bool expected = true, bool asserted = true) {
  CaseStage s;
  s.label = label;
  s.kind = "certificate";
  s.equations = eqs;
  s.claim = claim;
  s.expected = expected;
  s.asserted = asserted;
  const bool incons = target.is_constant() && target == ScalarExpr(1);
  s.certificate = pointwise_certificate(select(c, f, eqs, false, false), target, pts, prolong);
  s.holds = incons ? s.certificate.inconsistent : s.certificate.forced;
  return s;
}

CaseStage identity_stage(const std::string& label, const DiffOp& lhs, const DiffOp& rhs) {
  CaseStage s;
  s.label = label;
  s.kind = "identity";
  s.holds = (lhs - rhs).is_zero();
  return s;
}

// ---------------------------------------------------------------- ansaetze

// First-order scalar: Lambda^{ma} = nu1 delta + nu2 eps^{mac} x_c, Omega^0 = g0, Omega^m = x^m g1.
CoeffSet scalar_first(const ScalarExpr& nu1, const ScalarExpr& nu2, const ScalarExpr& g0, const ScalarExpr& g1) {
  CoeffSet c;
  for (int m = 0; m < 3; ++m) {
    for (int a = 0; a < 3; ++a) {
      ScalarExpr v = nu1 * D(m, a);
      for (int k = 0; k < 3; ++k) v += nu2 * E(m, a, k) * X(k);
      c.lambda[m + 1][a] = v;
    }
    c.omega[m + 1] = X(m) * g1;
  }
  c.omega[0] = g0;
  return c;
}

// Second-order scalar built on the rotation-type Killing tensor.
CoeffSet scalar_second(const ScalarExpr& phi, const ScalarExpr& f, const ScalarExpr& g, const ScalarExpr& h) {
  CoeffSet c = scalar_first(phi, f, h, g);
  for (int m = 0; m < 3; ++m)
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b)
        c.set_phi(m + 1, a, b, ScalarExpr(2) * X(m) * D(a, b) - X(a) * D(m, b) - X(b) * D(m, a));
  return c;
}

// First-order vector families, both parameter vectors at once.
CoeffSet vector_first(const Vec& mu, const Vec& nu, const ScalarExpr& a0, const ScalarExpr& f1, const ScalarExpr& f2,
                      const ScalarExpr& f3, const ScalarExpr& f4) {
  CoeffSet c;
  const ScalarExpr mux = dot_x(mu), nux = dot_x(nu);
  c.omega[0] = mux * f1;
  for (int m = 0; m < 3; ++m) {
    c.lambda[0][m] = a0 * nu[m];
    ScalarExpr om = mu[m] * f2 + X(m) * mux * f3;
    for (int a = 0; a < 3; ++a) {
      ScalarExpr v = D(m, a) * nux - X(m) * nu[a];
      for (int k = 0; k < 3; ++k) {
        v += E(m, a, k) * mu[k];
        om += E(m, a, k) * X(a) * nu[k] * f4;
      }
      c.lambda[m + 1][a] = v;
    }
    c.omega[m + 1] = om;
  }
  return c;
}

// Second-order vector integrals with even coefficients: the five-parameter
// Killing family for Phi^m (n1..n4), Phi^0 = n0 (l x + x l - 2 delta l.x),
// Lambda^0 = n5 eps x l and the general Lambda^m, Omega compatible with it.
struct VectorEven {
  ScalarExpr n0, n1, n2, n3, n4, n5;
  ScalarExpr f1, f2, f3, f4, f5, f6;
};

CoeffSet vector_even(const Vec& l, const VectorEven& v) {
  CoeffSet c;
  const ScalarExpr lx = dot_x(l);
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) c.set_phi(0, a, b, v.n0 * (l[a] * X(b) + l[b] * X(a) - ScalarExpr(2) * D(a, b) * lx));
  c.omega[0] = lx * v.f4;
  for (int m = 0; m < 3; ++m) {
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) {
        const ScalarExpr e =
            v.n1 * l[m] * D(a, b) + v.n2 * (D(m, a) * l[b] + D(m, b) * l[a]) +
            v.n3 * l[m] * (D(a, b) * R(2) - X(a) * X(b)) +
            v.n4 * (D(m, a) * (X(b) * lx - l[b] * R(2)) + D(m, b) * (X(a) * lx - l[a] * R(2)) -
                    X(m) * (ScalarExpr(2) * D(a, b) * lx - l[a] * X(b) - l[b] * X(a)));
        c.set_phi(m + 1, a, b, e);
      }
    for (int a = 0; a < 3; ++a) {
      ScalarExpr lam;
      for (int k = 0; k < 3; ++k) {
        lam += E(m, k, a) * X(k) * lx * v.f2 + E(m, a, k) * l[k] * v.f3;
        for (int q = 0; q < 3; ++q) lam += X(m) * E(a, q, k) * l[q] * X(k) * v.f1;
      }
      c.lambda[m + 1][a] = lam;
    }
    ScalarExpr l0;
    for (int b = 0; b < 3; ++b)
      for (int k = 0; k < 3; ++k) l0 += E(m, b, k) * X(b) * l[k];
    c.lambda[0][m] = v.n5 * l0;
    c.omega[m + 1] = X(m) * lx * v.f5 + l[m] * v.f6;
  }
  return c;
}

// Second-order vector integrals with odd coefficients.
CoeffSet vector_odd(const Vec& l, const ScalarExpr& n1, const ScalarExpr& n2, const ScalarExpr& n3,
                    const std::array<ScalarExpr, 5>& f) {
  CoeffSet c;
  const ScalarExpr lx = dot_x(l);
  for (int m = 0; m < 3; ++m) {
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) {
        ScalarExpr e;
        for (int q = 0; q < 3; ++q) {
          e += n1 * (E(m, q, a) * l[b] + E(m, q, b) * l[a]) * X(q);
          for (int k = 0; k < 3; ++k) e += n2 * l[k] * (D(m, a) * E(b, q, k) + D(m, b) * E(a, q, k)) * X(q);
        }
        c.set_phi(m + 1, a, b, e);
      }
    for (int a = 0; a < 3; ++a)
      c.lambda[m + 1][a] =
          X(m) * X(a) * lx * f[0] + D(m, a) * lx * f[1] + X(m) * l[a] * f[2] + X(a) * l[m] * f[3];
    c.lambda[0][m] = n3 * l[m];
    ScalarExpr e;
    for (int b = 0; b < 3; ++b)
      for (int q = 0; q < 3; ++q) e += E(m, b, q) * X(b) * l[q];
    c.omega[m + 1] = e * f[4];
  }
  return c;
}

// Tensor integrals, odd Phi^0 and even Phi^m (parameters n1..n3).
CoeffSet tensor_odd_even(const Ten& L, const std::array<ScalarExpr, 5>& f) {
  CoeffSet c;
  Vec Lx{};
  for (int a = 0; a < 3; ++a)
    for (int q = 0; q < 3; ++q) Lx[a] += L[a][q] * X(q);
  const ScalarExpr xLx = dot_x(Lx);
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) {
      ScalarExpr e;
      for (int q = 0; q < 3; ++q)
        for (int k = 0; k < 3; ++k) e += P("n1") * (L[a][q] * E(b, q, k) + L[b][q] * E(a, q, k)) * X(k);
      c.set_phi(0, a, b, e);
    }
  for (int m = 0; m < 3; ++m) {
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) {
        ScalarExpr e;
        for (int q = 0; q < 3; ++q) e += P("n2") * (E(m, a, q) * L[q][b] + E(m, b, q) * L[q][a]);
        for (int k = 0; k < 3; ++k)
          for (int q = 0; q < 3; ++q) {
            for (int d = 0; d < 3; ++d)
              e += P("n3") * (D(m, a) * E(b, k, q) + D(m, b) * E(a, k, q)) * L[k][d] * X(q) * X(d);
            e -= P("n3") * X(m) * (L[a][k] * E(b, k, q) + L[b][k] * E(a, k, q)) * X(q);
          }
        c.set_phi(m + 1, a, b, e);
      }
    for (int a = 0; a < 3; ++a)
      c.lambda[m + 1][a] = L[m][a] * f[0] + X(m) * Lx[a] * f[1] + X(a) * Lx[m] * f[2] + D(m, a) * xLx * f[3];
    ScalarExpr o;
    for (int k = 0; k < 3; ++k)
      for (int q = 0; q < 3; ++q) o += E(m, k, q) * Lx[q] * X(k);
    c.omega[m + 1] = o * f[4];
  }
  return c;
}

// Tensor integrals, even Phi^0 and odd Phi^m (parameters n1..n3).
CoeffSet tensor_even_odd(const Ten& L, const std::array<ScalarExpr, 7>& f) {
  CoeffSet c;
  Vec Lx{};
  for (int a = 0; a < 3; ++a)
    for (int q = 0; q < 3; ++q) Lx[a] += L[a][q] * X(q);
  const ScalarExpr xLx = dot_x(Lx);
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) c.set_phi(0, a, b, P("n1") * L[a][b]);
  for (int m = 0; m < 3; ++m) {
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b)
        c.set_phi(m + 1, a, b,
                  P("n2") * (L[m][a] * X(b) + L[m][b] * X(a) - ScalarExpr(2) * D(a, b) * Lx[m]) +
                      P("n3") * (ScalarExpr(2) * X(m) * L[a][b] - D(m, a) * Lx[b] - D(m, b) * Lx[a]));
    for (int b = 0; b < 3; ++b) {
      ScalarExpr e;
      for (int q = 0; q < 3; ++q) {
        e += E(m, q, b) * Lx[q] * f[0] + E(m, b, q) * X(q) * xLx * f[2];
        for (int k = 0; k < 3; ++k) {
          e += E(b, q, k) * L[m][k] * X(q) * f[1];
          e += E(m, k, q) * Lx[k] * X(b) * X(q) * f[3];
        }
      }
      c.lambda[m + 1][b] = e;
    }
    c.omega[m + 1] = Lx[m] * f[4] + X(m) * xLx * f[5];
  }
  c.omega[0] = xLx * f[6];
  return c;
}

// lambda.J as an operator.
DiffOp l_dot_j(const Vec& l) {
  DiffOp out;
  for (int a = 0; a < 3; ++a) out += l[a] * total_momentum(a);
  return out;
}

// ---------------------------------------------------------------- cases

const Vec kNumL = num_vec(1, 2, -1);
const Subs kNumLSubs = {{"l1", ScalarExpr(1)}, {"l2", ScalarExpr(2)}, {"l3", ScalarExpr(-1)}};

CaseReport scalar_first_order() {
  CaseReport r;
  r.id = "scalar-first-order";
  r.citation = "A.2 (quq),(cf)";
  const ScalarExpr al = P("alpha");
  const FieldSet f = field(al * R(-3));
  r.stages.push_back(residual_stage("nu2 = -1/2, f1 = alpha/x, f2 = c, phi1 = alpha/x^3",
                                    scalar_first(0, Q(-1, 2), P("c"), al * R(-1)), f, true));
  r.stages.push_back(residual_stage("control: sigma.p term nu1 = 1 added",
                                    scalar_first(1, Q(-1, 2), P("c"), al * R(-1)), f, false));
  r.stages.push_back(residual_stage("control: f2 = c + x^2", scalar_first(0, Q(-1, 2), P("c") + R(2), al * R(-1)), f,
                                    false));
  r.stages.push_back(residual_stage("control: f1 = alpha/x + x", scalar_first(0, Q(-1, 2), P("c"), al * R(-1) + R(1)),
                                    f, false));
  // With the dipole coupling lambda = -alpha of H1 the solution is -Q1 (c = -1).
  ModelSpec h1 = ModelSpec::symbolic(ModelId::H1);
  h1.params["lambda"] = -al;
  r.stages.push_back(identity_stage("solution with c = -1 equals -Q1 of H1 (lambda = -alpha)",
                                    assemble_integral(scalar_first(0, Q(-1, 2), -1, al * R(-1))),
                                    -build_integral(IntegralId::Q1, h1)));
  r.conclusion = "solved by f1 = alpha/x, phi1 = alpha/x^3: the integral Q1 of H1";
  return r;
}

CaseReport scalar_second_order() {
  CaseReport r;
  r.id = "scalar-second-order";
  r.citation = "A.2 (qu22),(cf3),(phi),(F0),(g3)";
  const ScalarExpr al = P("alpha"), fx = RF("f");
  const FieldSet f = field(radial_fn("f", 1) * R(-1), fx * fx - al * R(-1));
  r.stages.push_back(
      residual_stage("phi = 0, f' = x phi1, g = alpha/x, F0 = f^2 - alpha/x, h = 2f", scalar_second(0, fx, al * R(-1),
                                                                                                    ScalarExpr(2) * fx),
                     f, true));
  r.stages.push_back(residual_stage("control: sigma.p term phi = 1",
                                    scalar_second(1, fx, al * R(-1), ScalarExpr(2) * fx), f, false));
  r.stages.push_back(residual_stage("control: h = 2f + x^2",
                                    scalar_second(0, fx, al * R(-1), ScalarExpr(2) * fx + R(2)), f, false));
  r.stages.push_back(residual_stage("control: g = alpha/x + 1",
                                    scalar_second(0, fx, al * R(-1) + 1, ScalarExpr(2) * fx), f, false));
  const ModelSpec h2 = ModelSpec::symbolic(ModelId::H2);
  r.stages.push_back(identity_stage("solution equals 2 Q2 of H2",
                                    assemble_integral(scalar_second(0, fx, al * R(-1), ScalarExpr(2) * fx)),
                                    ScalarExpr(2) * build_integral(IntegralId::Q2, h2)));
  r.conclusion = "solved for arbitrary f with h' = 2f': the integrals Q2 (H2) and Q3 (H3)";
  return r;
}

CaseReport vector_first_order() {
  CaseReport r;
  r.id = "vector-first-order";
  r.citation = "A.3.1 (cf2),(cf31)";
  r.obstruction = "e3";
  const Vec mu = num_vec(1, 2, -1), nu = num_vec(2, -1, 1);
  const CoeffSet gen = vector_first(mu, nu, P("a0"), RF("f1"), RF("f2"), RF("f3"), RF("f4"));
  r.stages.push_back(residual_stage("general first-order vector ansatz", gen, field(RF("phi1")), false));
  r.stages.push_back(certificate_stage("e3 with abstract f1..f4, phi1", gen, field(RF("phi1")), {"e3"}, RF("phi1"),
                                       "forces phi1 = 0"));
  // With phi1 = 0 and constant F0 the pure rotation-type part commutes.
  const CoeffSet triv = vector_first(mu, nu, 0, 0, 0, 0, 0);
  r.stages.push_back(residual_stage("phi1 = 0, F0 = const, f = 0", triv, field(0, P("c")), true));
  r.stages.push_back(residual_stage("control: phi1 = alpha/x^3", triv, field(P("alpha") * R(-3), P("c")), false));
  r.conclusion = "obstruction phi=0: e3 forces phi1 = 0, no first-order vector integrals with a dipole field";
  return r;
}

CaseReport vector_even_trivial() {
  CaseReport r;
  r.id = "vector-even-trivial-phim";
  r.citation = "A.3.2 (cf16)-(cf21)";
  const ScalarExpr al = P("alpha");
  const Vec l = sym_vec("l");
  auto build = [&](const ScalarExpr& nu, const ScalarExpr& f4, const ScalarExpr& f5, const ScalarExpr& f6) {
    return vector_even(l, {1, 0, 0, 0, 0, 0, 0, 0, nu, f4, f5, f6});
  };
  const FieldSet f = field(al * R(-2));
  r.stages.push_back(residual_stage("printed: nu = 1/4, f5 = 2 alpha/x^2, f6 = 0, F0 = 0",
                                    build(Q(1, 4), 0, ScalarExpr(2) * al * R(-2), 0), field(al * R(-2), 0), true,
                                    {{}, false}));
  const CoeffSet ck = build(Q(1, 2), P("kappa") * R(-1), al * R(-2), P("c"));
  const FieldSet fk = field(al * R(-2), P("kappa") * R(-1));
  r.stages.push_back(residual_stage("nu = 1/2, f5 = alpha/x^2, f6 = c, f4 = F0 = kappa/x: e3, e5, e6", ck, fk, true,
                                    {{"e3", "e5", "e6"}}));
  r.stages.push_back(residual_stage("same, e4", ck, fk, false, {{"e4"}}));
  const CoeffSet cn = subs(ck, Subs{kNumLSubs.begin(), kNumLSubs.end()});
  const FieldSet fn = subs(fk, {{"alpha", ScalarExpr(1)}});
  const CoeffSet cn1 = subs(cn, {{"alpha", ScalarExpr(1)}});
  r.stages.push_back(certificate_stage("e4 at alpha = 1", cn1, fn, {"e4"}, P("c"), "forces c = 0"));
  r.stages.push_back(certificate_stage("e4 at alpha = 1", cn1, fn, {"e4"}, P("kappa"), "forces kappa = 0"));
  const CoeffSet sol = build(Q(1, 2), 0, al * R(-2), 0);
  r.stages.push_back(residual_stage("c = kappa = 0: all equations", sol, field(al * R(-2), 0), true));
  r.stages.push_back(residual_stage("control: nu = 1/4", build(Q(1, 4), 0, al * R(-2), 0), field(al * R(-2), 0),
                                    false));
  // The solution is the spin Runge-Lenz vector of H4 (coupling lambda = alpha), lambda.R up to the factor 2.
  ModelSpec h4 = ModelSpec::symbolic(ModelId::H4);
  h4.params["lambda"] = al;
  DiffOp lr;
  const IntegralId rid[3] = {IntegralId::R1, IntegralId::R2, IntegralId::R3};
  for (int a = 0; a < 3; ++a) lr += l[a] * build_integral(rid[a], h4);
  r.stages.push_back(identity_stage("solution equals 2 lambda.R of H4", assemble_integral(sol),
                                    ScalarExpr(2) * lr));
  r.conclusion = "phi1 = alpha/x^2 with nu = 1/2, f5 = alpha/x^2: the Runge-Lenz vector of H4";
  return r;
}

// Solution of e2 for the five-parameter family with nontrivial Phi^m.
VectorEven cf10_solution(const ScalarExpr& al) {
  const ScalarExpr n3 = P("n3"), n4 = P("n4"), om = P("omega"), si = shifted_radius(-1);
  VectorEven v{0, om * n3, -om * n4, n3, n4, 0, Q(-1, 2) * n3 * al * si, Q(1, 2) * (n3 - ScalarExpr(2) * n4) * al * si,
               Q(-1, 2) * om * n3 * al * si, RF("f4"), RF("f5"), RF("f6")};
  return v;
}

CaseReport vector_even_cf10() {
  CaseReport r;
  r.id = "vector-even-cf10";
  r.citation = "A.3.3 (cf5)-(cf10),(cf13)";
  r.obstruction = "e3";
  const ScalarExpr al = P("alpha");
  const Vec l = sym_vec("l");
  VectorEven v = cf10_solution(al);
  const FieldSet fs = field(al * shifted_radius(-3));
  r.stages.push_back(residual_stage("phi1 = alpha s^-3, s = (x^2+omega)^(1/2), derived f1..f3", vector_even(l, v), fs,
                                    true, {{"e1", "e11", "e2"}, true, true}));
  {
    VectorEven w = v;
    w.f1 = w.f1 + R(1);
    r.stages.push_back(residual_stage("control: f1 + x", vector_even(l, w), fs, false, {{"e2"}, true, true}));
  }
  // e3 with Phi^0, Omega general.
  VectorEven g = v;
  g.n0 = P("n0");
  g.n5 = P("n5");
  const CoeffSet gen = subs(vector_even(kNumL, g), {{"alpha", ScalarExpr(1)}});
  const FieldSet f1 = field(shifted_radius(-3));
  {
    const std::vector<CertPoint> pts{{{1, 2, 2}, 7}, {{1, 4, 8}, 11}};
    const CoeffSet c = subs(gen, {{"omega", ScalarExpr(40)}, {"n3", ScalarExpr(2)}, {"n4", ScalarExpr(1)}});
    r.stages.push_back(
        certificate_stage("omega = 40, nu3 = 2, nu4 = 1, alpha = 1", c, f1, {"e3"}, 1, "inconsistent", 0, pts));
  }
  auto at_zero = [](const CoeffSet& c) { return map_coefficients(c, [](const ScalarExpr& e) { return collapse_shift(e); }); };
  const FieldSet f0 = field(R(-3));
  {
    const CoeffSet c = at_zero(subs(gen, {{"omega", ScalarExpr(0)}, {"n3", ScalarExpr(1)}, {"n4", ScalarExpr(1)}}));
    r.stages.push_back(certificate_stage("omega = 0, nu3 = nu4 = 1, alpha = 1", c, f0, {"e3"}, 1, "inconsistent"));
  }
  // omega = 0, nu3 = 2 nu4: the product of first-order integrals of H1.
  VectorEven s = v;
  s.f4 = Q(-1, 2) * al * R(-1);
  s.f5 = 0;
  s.f6 = Q(-3, 4);
  const CoeffSet sol = at_zero(subs(vector_even(l, s), {{"omega", ScalarExpr(0)}, {"n3", ScalarExpr(-1)},
                                                        {"n4", Q(-1, 2)}}));
  const FieldSet fa = field(al * R(-3));
  r.stages.push_back(residual_stage("omega = 0, nu3 = -1, nu4 = -1/2, f4 = -alpha/(2x), f6 = -3/4", sol, fa, true));
  {
    VectorEven w = s;
    w.f6 = Q(-1, 4);
    const CoeffSet c = at_zero(subs(vector_even(l, w), {{"omega", ScalarExpr(0)}, {"n3", ScalarExpr(-1)},
                                                       {"n4", Q(-1, 2)}}));
    r.stages.push_back(residual_stage("control: f6 = -1/4", c, fa, false));
  }
  ModelSpec h1 = ModelSpec::symbolic(ModelId::H1);
  h1.params["lambda"] = -al;
  const DiffOp q1 = build_integral(IntegralId::Q1, h1);
  const DiffOp lj = l_dot_j(l);
  r.stages.push_back(identity_stage("solution equals lambda.J (Q1 - 3/2) of H1 (lambda_H1 = -alpha)",
                                    assemble_integral(sol), lj * q1 - Q(3, 2) * lj));
  r.conclusion =
      "e3 is incompatible unless omega = 0 and nu3 = 2 nu4; the survivor is J(Q1 - 3/2), a product of known "
      "first-order integrals of H1";
  return r;
}

CaseReport vector_even_cf11() {
  CaseReport r;
  r.id = "vector-even-cf11";
  r.citation = "A.3.3 (cf11),(cf14),(cf15)";
  r.obstruction = "e4";
  const ScalarExpr al = P("alpha"), n1 = P("n1"), n2 = P("n2");
  const Vec l = sym_vec("l");
  auto e2sol = [&](const ScalarExpr& n1v) {
    return VectorEven{0, n1v, n2, 0, 0, 0, Q(-1, 2) * n1v * al, Q(1, 2) * (n1v + ScalarExpr(2) * n2) * al,
                      Q(1, 4) * n1v * al * R(2), 0, 0, 0};
  };
  const FieldSet fa = field(al);
  r.stages.push_back(residual_stage("nu3 = nu4 = 0, phi1 = alpha, f1 = -nu1 alpha/2, f2 = (nu1+2nu2) alpha/2, "
                                    "f3 = nu1 alpha x^2/4",
                                    vector_even(l, e2sol(n1)), fa, true, {{"e1", "e11", "e2"}}));
  r.stages.push_back(residual_stage("printed: f1 = -alpha nu1, f2 = alpha (nu1+nu2), f3 = alpha nu1 x^2/2",
                                    vector_even(l, {0, n1, n2, 0, 0, 0, -n1 * al, (n1 + n2) * al,
                                                    Q(1, 2) * n1 * al * R(2), 0, 0, 0}),
                                    fa, true, {{"e2"}, false}));
  // e3 fixes nu1 = -4 nu2 and the functions below.
  const ScalarExpr a2 = al * al, c1 = P("c1");
  VectorEven s = e2sol(ScalarExpr(-4) * n2);
  s.f5 = n2 * (a2 * R(2) + ScalarExpr(2) * c1);
  s.f6 = Q(-3, 2) * n2 * a2 * R(4) - ScalarExpr(4) * n2 * c1 * R(2) + P("c2");
  const FieldSet fs = field(al, Q(-1, 4) * a2 * R(4) - c1 * R(2));
  const CoeffSet cs = vector_even(l, s);
  r.stages.push_back(residual_stage("nu1 = -4 nu2, f5 = nu2 (alpha^2 x^2 + 2c1), F0 = -alpha^2 x^4/4 - c1 x^2, "
                                    "f6 = -3/2 nu2 alpha^2 x^4 - 4 nu2 c1 x^2 + c2: e3, e5, e6",
                                    cs, fs, true, {{"e3", "e5", "e6"}}));
  {
    VectorEven w = s;
    w.f5 = w.f5 + R(2);
    r.stages.push_back(residual_stage("control: f5 + x^2", vector_even(l, w), fs, false, {{"e3"}}));
  }
  r.stages.push_back(residual_stage("same, e4", cs, fs, false, {{"e4"}}));
  const CoeffSet cn = subs(cs, Subs{{"l1", 1}, {"l2", 2}, {"l3", -1}, {"alpha", 1}});
  const FieldSet fn = subs(fs, {{"alpha", ScalarExpr(1)}});
  r.stages.push_back(certificate_stage("e4 at alpha = 1", cn, fn, {"e4"}, n2, "forces nu2 = 0"));
  r.conclusion = "e3 requires nu1 = -4 nu2; e4 then forces nu2 alpha = 0: only the trivial field admits this branch";
  return r;
}

CaseReport vector_odd() {
  CaseReport r;
  r.id = "vector-odd";
  r.citation = "A.3.4 (n1)-(n5),(bu)";
  r.obstruction = "e4,e5";
  const ScalarExpr al = P("alpha"), n1 = P("n1"), mu = P("mu");
  const Vec l = sym_vec("l");
  auto bu = [&](const Vec& lv, const ScalarExpr& a, const ScalarExpr& f3extra, const ScalarExpr& f5) {
    return vector_odd(lv, n1, 0, P("n3"), {0, mu, -n1 * a * R(-1) - mu + f3extra, 0, f5});
  };
  const FieldSet fb = field(al * R(-3));
  r.stages.push_back(residual_stage("nu2 = 0, f1 = f4 = 0, f2 = mu, f3 = -nu1 alpha/x - mu, phi1 = alpha/x^3",
                                    bu(l, al, 0, RF("f5")), fb, true, {{"e1", "e11", "e2"}}));
  r.stages.push_back(residual_stage("control: f3 + x", bu(l, al, R(1), RF("f5")), fb, false, {{"e2"}}));
  const CoeffSet cn = bu(kNumL, 1, 0, RF("f5"));
  const FieldSet fn = field(R(-3));
  for (const char* t : {"n1", "n3", "mu"})
    r.stages.push_back(certificate_stage("e3..e6 at alpha = 1", cn, fn, {"e3", "e4", "e5", "e6"}, P(t),
                                         std::string("forces ") + t + " = 0"));
  r.stages.push_back(certificate_stage("printed route: e3 and e6 alone", cn, fn, {"e3", "e6"}, n1,
                                       "forces n1 = 0", 0, default_cert_points(), true, false));
  r.conclusion = "e3..e6 force nu1 = nu3 = mu = 0 for alpha != 0: no odd vector integrals with a dipole field";
  return r;
}

CaseReport tensor_odd_even_case() {
  CaseReport r;
  r.id = "tensor-odd-even";
  r.citation = "A.4.1 (Ph1),(Ph2),(coco),(cococo),(kukuri)";
  r.obstruction = "e3,e4";
  const Ten L = num_tensor();
  const ScalarExpr mu = P("mu"), n1 = P("n1"), nu = P("nu");
  // nu2 != 0 branch, normalized nu2 = 1.
  auto coco = [&](const ScalarExpr& f4) {
    return subs(tensor_odd_even(L, {-mu * R(2), 0, 0, f4, RF("f5")}), {{"n3", ScalarExpr(0)}, {"n2", ScalarExpr(1)}});
  };
  const FieldSet fc = field(ScalarExpr(2) * mu);
  r.stages.push_back(residual_stage("nu2 = 1, nu3 = 0, f1 = -mu x^2, f4 = mu, phi1 = 2 mu", coco(mu), fc, true,
                                    {{"e1", "e11", "e2"}}));
  r.stages.push_back(residual_stage("control: f4 = mu + 1", coco(mu + 1), fc, false, {{"e2"}}));
  r.stages.push_back(certificate_stage("mu = 1", subs(coco(mu), {{"mu", ScalarExpr(1)}}), field(2), {"e3"}, 1,
                                       "inconsistent", 2));
  // nu2 = nu3 = 0 branch.
  auto cococo = [&](const ScalarExpr& f1, const ScalarExpr& f5) {
    return subs(tensor_odd_even(L, {f1, 0, 0, 0, f5}), {{"n2", ScalarExpr(0)}, {"n3", ScalarExpr(0)}});
  };
  const FieldSet fk = field(nu);
  r.stages.push_back(residual_stage("nu2 = nu3 = 0, f1 = mut, phi1 = nu", cococo(P("mut"), RF("f5")), fk, true,
                                    {{"e1", "e11", "e2"}}));
  r.stages.push_back(residual_stage("f1 = 3/2 nu1, f5 = -nu nu1: e3", cococo(Q(3, 2) * n1, -nu * n1), fk, true,
                                    {{"e3"}}));
  r.stages.push_back(residual_stage("printed: f5 = 2 nu nu1: e3", cococo(Q(3, 2) * n1, ScalarExpr(2) * nu * n1), fk,
                                    true, {{"e3"}, false}));
  r.stages.push_back(residual_stage("control: f1 = 3/2 nu1 + 1", cococo(Q(3, 2) * n1 + 1, -nu * n1), fk, false,
                                    {{"e3"}}));
  r.stages.push_back(residual_stage("same, e4 and e5", cococo(Q(3, 2) * n1, -nu * n1), fk, false, {{"e4", "e5"}}));
  r.stages.push_back(certificate_stage("nu = 1, abstract f5", cococo(P("mut"), RF("f5")), field(1), {"e3", "e4"}, n1,
                                       "forces n1 = 0", 2));
  r.conclusion = "both branches are obstructed for a nontrivial field: e3 (nu2 != 0) and e4 (nu2 = nu3 = 0)";
  return r;
}

CaseReport tensor_even_odd_case() {
  CaseReport r;
  r.id = "tensor-even-odd";
  r.citation = "A.4.2 (t1)-(t11)";
  r.obstruction = "e2";
  const Ten L = num_tensor();
  const CoeffSet gen = tensor_even_odd(L, {RF("f1"), RF("f2"), RF("f3"), RF("f4"), RF("f5"), RF("f6"), RF("f7")});
  r.stages.push_back(residual_stage("general ansatz", gen, field(RF("phi1")), false, {{"e2"}}));
  r.stages.push_back(certificate_stage("phi1 = 1", gen, field(1), {"e2"}, P("n2"), "forces nu2 = 0", 2));
  r.stages.push_back(certificate_stage("nu2 = 1", subs(gen, {{"n2", ScalarExpr(1)}}), field(RF("phi1")), {"e2"},
                                       RF("phi1"), "forces phi1 = 0", 2));
  const CoeffSet g0 = subs(gen, {{"n2", ScalarExpr(0)}});
  r.stages.push_back(certificate_stage("nu2 = 0, phi1 = 1", g0, field(1), {"e2", "e3", "e4", "e5", "e6"}, P("n3"),
                                       "forces nu3 = 0", 2));
  r.stages.push_back(certificate_stage("nu2 = nu3 = 0, nu1 = 1, phi1 = 1",
                                       subs(g0, {{"n3", ScalarExpr(0)}, {"n1", ScalarExpr(1)}}), field(1),
                                       {"e2", "e3", "e4", "e5", "e6"}, 1, "inconsistent", 2, default_cert_points(),
                                       true, false));
  {
    const ScalarExpr kap = P("kap");
    const CoeffSet t10 = subs(tensor_even_odd(L, {0, P("mu"), Q(1, 2) * P("n2") * kap, 0, RF("f5"), RF("f6"), RF("f7")}),
                              {{"n3", ScalarExpr(0)}});
    r.stages.push_back(residual_stage("printed: f2 = mu, f3 = nu2 kappa/2, phi1 = kappa", t10, field(kap), true,
                                      {{"e2"}, false}));
  }
  r.stages.push_back(residual_stage("control: nu2 = 1, phi1 = 1, all f = 0",
                                    subs(tensor_even_odd(L, {0, 0, 0, 0, 0, 0, 0}),
                                         {{"n1", ScalarExpr(0)}, {"n2", ScalarExpr(1)}, {"n3", ScalarExpr(0)}}),
                                    field(1), false, {{"e2"}}));
  r.conclusion = "compatible only for nu2 = 0 or phi = 0 (e2); with nu2 = 0, nu3 is forced to 0";
  return r;
}

using CaseFn = CaseReport (*)();
const std::vector<std::pair<std::string, CaseFn>>& registry() {
  static const std::vector<std::pair<std::string, CaseFn>> r{
      {"scalar-first-order", scalar_first_order},
      {"scalar-second-order", scalar_second_order},
      {"vector-first-order", vector_first_order},
      {"vector-even-trivial-phim", vector_even_trivial},
      {"vector-even-cf10", vector_even_cf10},
      {"vector-even-cf11", vector_even_cf11},
      {"vector-odd", vector_odd},
      {"tensor-odd-even", tensor_odd_even_case},
      {"tensor-even-odd", tensor_even_odd_case},
  };
  return r;
}

}  // namespace

std::size_t CaseStage::nonzero() const {
  return static_cast<std::size_t>(
      std::count_if(residuals.begin(), residuals.end(), [](const Residual& r) { return !r.zero(); }));
}

bool CaseReport::ok() const {
  return std::all_of(stages.begin(), stages.end(), [](const CaseStage& s) { return s.ok(); });
}

const std::vector<std::string>& appendix_case_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (auto& [id, fn] : registry()) v.push_back(id);
    return v;
  }();
  return ids;
}

CaseReport verify_appendix_case(const std::string& id) {
  for (auto& [cid, fn] : registry())
    if (cid == id) return fn();
  throw DetsysError("unknown appendix case: " + id);
}

}  // namespace sis
