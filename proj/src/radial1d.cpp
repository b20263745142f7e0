#include "sis/radial1d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sis {

namespace {

ScalarExpr P(const char* name, int power = 1) { return param(name, power); }
ScalarExpr R(int k) { return radius(k); }
ScalarExpr Q(long p, long q = 1) { return ScalarExpr(rational(p, q)); }
MatrixExpr S(int mu) { return sigma(mu); }

MatrixExpr derive(const MatrixExpr& m) {
  return map_components(m, [](const ScalarExpr& e) { return radial_derive(e); });
}

long binomial(int n, int k) {
  long b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace

// ---------------------------------------------------------------- Radial1DOp

Radial1DOp::Radial1DOp(const MatrixExpr& m) { add(0, m); }

Radial1DOp Radial1DOp::d(int order) {
  Radial1DOp o;
  o.add(order, MatrixExpr(ScalarExpr(1)));
  return o;
}

int Radial1DOp::order() const { return terms_.empty() ? -1 : terms_.rbegin()->first; }

void Radial1DOp::add(int order, const MatrixExpr& m) {
  if (m.is_zero()) return;
  auto it = terms_.find(order);
  if (it == terms_.end()) {
    terms_.emplace(order, m);
    return;
  }
  it->second += m;
  if (it->second.is_zero()) terms_.erase(it);
}

Radial1DOp& Radial1DOp::operator+=(const Radial1DOp& o) {
  for (const auto& [k, m] : o.terms_) add(k, m);
  return *this;
}

Radial1DOp& Radial1DOp::operator-=(const Radial1DOp& o) {
  for (const auto& [k, m] : o.terms_) add(k, -m);
  return *this;
}

Radial1DOp operator+(const Radial1DOp& a, const Radial1DOp& b) {
  Radial1DOp r = a;
  r += b;
  return r;
}

Radial1DOp operator-(const Radial1DOp& a, const Radial1DOp& b) {
  Radial1DOp r = a;
  r -= b;
  return r;
}

Radial1DOp operator-(const Radial1DOp& a) { return Radial1DOp() - a; }

Radial1DOp operator*(const ScalarExpr& s, const Radial1DOp& a) {
  Radial1DOp r;
  for (const auto& [k, m] : a.terms()) r.add(k, s * m);
  return r;
}

Radial1DOp operator*(const MatrixExpr& m, const Radial1DOp& a) {
  Radial1DOp r;
  for (const auto& [k, c] : a.terms()) r.add(k, matrix_mul(m, c));
  return r;
}

// d^i B = sum_m C(i, m) B^(m) d^(i - m)
Radial1DOp compose(const Radial1DOp& a, const Radial1DOp& b) {
  Radial1DOp r;
  for (const auto& [i, A] : a.terms())
    for (const auto& [j, B] : b.terms()) {
      MatrixExpr Bm = B;
      for (int m = 0; m <= i; ++m) {
        if (m > 0) Bm = derive(Bm);
        if (Bm.is_zero()) break;
        r.add(i - m + j, ScalarExpr(binomial(i, m)) * matrix_mul(A, Bm));
      }
    }
  return r;
}

Radial1DOp anticommutator(const Radial1DOp& a, const Radial1DOp& b) { return a * b + b * a; }
Radial1DOp commutator(const Radial1DOp& a, const Radial1DOp& b) { return a * b - b * a; }

Radial1DOp map_coefficients(const Radial1DOp& a, const std::function<ScalarExpr(const ScalarExpr&)>& f) {
  Radial1DOp r;
  for (const auto& [k, m] : a.terms()) r.add(k, map_components(m, f));
  return r;
}

Radial1DOp substitute_param(const Radial1DOp& a, std::string_view name, const ScalarExpr& value) {
  return map_coefficients(a, [&](const ScalarExpr& e) { return substitute_param(e, name, value); });
}

Radial1DOp substitute_radial(const Radial1DOp& a, const RadialBindings& b) {
  return map_coefficients(a, [&](const ScalarExpr& e) { return substitute_radial(e, b); });
}

std::string to_string(const Radial1DOp& a) {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, m] : a.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << to_string(m) << ")";
    if (k > 0) os << " d^" << k;
  }
  return os.str();
}

// ---------------------------------------------------------------- sector images

namespace {

// K = k sigma_3 (sigma.L + 1), sigma.n = sigma_1.
MatrixExpr K() { return P("k") * S(3); }

Radial1DOp sigma_p() {
  // sigma.p (u/r) Omega = -i sigma.n (u' - K u / r) / r
  const ScalarExpr mi = scale(ScalarExpr(1), Gauss{Rational(0), Rational(-1)});
  return (mi * S(1)) * Radial1DOp::d() + Radial1DOp(-mi * R(-1) * matrix_mul(S(1), K()));
}

Radial1DOp h2_sector(const ScalarExpr& f) {
  const ScalarExpr k = P("k");
  Radial1DOp h = -Radial1DOp::d(2);
  h += Radial1DOp((k * k) * R(-2) * S(0) - k * R(-2) * S(3));
  h += Radial1DOp((f * f - P("alpha") * R(-1)) * S(0) + radial_derive(f) * S(1));
  return h;
}

Radial1DOp q2_sector(const ScalarExpr& f) {
  // (i sigma.p + f)(sigma.L + 1) + (alpha/2) sigma.n
  const ScalarExpr i = imag_unit();
  Radial1DOp q = (i * sigma_p() + Radial1DOp(f)) * Radial1DOp(K());
  q += Radial1DOp(Q(1, 2) * P("alpha") * S(1));
  return q;
}

ScalarExpr f_inverse() { return P("lambda") * R(-1); }

}  // namespace

Radial1DOp sector_operator(const std::string& name) {
  const ScalarExpr k = P("k"), lam = P("lambda");
  if (name == "sigma.p") return sigma_p();
  if (name == "Q1") return Radial1DOp(k * S(3) + lam * S(1));
  if (name == "H1") {
    // -Laplacian - (lambda / r^2) sigma.n + phi
    Radial1DOp h = -Radial1DOp::d(2);
    h += Radial1DOp((k * k) * R(-2) * S(0) - k * R(-2) * S(3) - lam * R(-2) * S(1) + radial_fn("phi") * S(0));
    return h;
  }
  if (name == "H2") return h2_sector(radial_fn("f"));
  if (name == "H3") return h2_sector(f_inverse());
  if (name == "Q2") return q2_sector(radial_fn("f"));
  if (name == "Q3") return q2_sector(f_inverse());
  throw RadialError("no sector image for operator '" + name + "'");
}

// ---------------------------------------------------------------- factorization

Radial1DOp coulomb_radial_hamiltonian(const ScalarExpr& s, const ScalarExpr& alpha) {
  Radial1DOp h = -Radial1DOp::d(2);
  h += Radial1DOp(s * (s - ScalarExpr(1)) * R(-2) - alpha * R(-1));
  return h;
}

namespace {

Factorization build_factorization(const ScalarExpr& s, const ScalarExpr& s_inv, const ScalarExpr& alpha,
                                  FactorForm form) {
  Factorization f;
  if (form == FactorForm::derived) {
    // W = alpha / (2 s) - s / x, c = -alpha^2 / (4 s^2)
    f.W = Q(1, 2) * alpha * s_inv - s * R(-1);
    f.c = -Q(1, 4) * alpha * alpha * s_inv * s_inv;
  } else {
    // W = 2 alpha / (2|nu| + eps + 1) - (2|nu| + eps + 1) / (4x) = alpha / s - s / (2x)
    f.W = alpha * s_inv - Q(1, 2) * s * R(-1);
    f.c = -alpha * alpha * s_inv * s_inv;
  }
  f.a = Radial1DOp::d() + Radial1DOp(f.W);
  f.adag = -Radial1DOp::d() + Radial1DOp(f.W);
  f.H = coulomb_radial_hamiltonian(s, alpha);
  return f;
}

IdentityCheck item(std::string label, std::string citation, Radial1DOp residual, bool asserted = true,
                   bool expect_zero = true) {
  IdentityCheck c;
  c.label = std::move(label);
  c.citation = std::move(citation);
  c.residual = std::move(residual);
  c.asserted = asserted;
  c.expect_zero = expect_zero;
  return c;
}

}  // namespace

Factorization factorize(FactorForm form) { return build_factorization(P("s"), P("s", -1), P("alpha"), form); }

Factorization factorize(const Rational& s, const Rational& alpha, FactorForm form) {
  if (s == 0) throw RadialError("factorize: the small-x exponent must be nonzero");
  return build_factorization(ScalarExpr(s), ScalarExpr(Rational(1) / s), ScalarExpr(alpha), form);
}

std::vector<IdentityCheck> susy_identities() {
  std::vector<IdentityCheck> out;
  const ScalarExpr s = P("s"), one(1);

  // s (s - 1) = nu (nu + 1) on both branches: s = nu + 1 (eps = +1), s = -nu (eps = -1).
  const ScalarExpr nu = P("nu");
  const ScalarExpr barrier = nu * (nu + one);
  out.push_back(item("exponent s = nu + 1 reproduces nu(nu+1)", "ee3",
                     Radial1DOp((nu + one) * nu - barrier)));
  out.push_back(item("exponent s = -nu reproduces nu(nu+1)", "ee3", Radial1DOp((-nu) * (-nu - one) - barrier)));

  const Factorization d = factorize(FactorForm::derived);
  const Radial1DOp H_next = coulomb_radial_hamiltonian(s + one, P("alpha"));
  out.push_back(item("factorization H = a+ a + c", "f", d.adag * d.a + Radial1DOp(d.c) - d.H));
  out.push_back(item("partner a a+ + c = H at s + 1", "f", d.a * d.adag + Radial1DOp(d.c) - H_next));
  out.push_back(item("intertwining H_s a+ = a+ H_{s+1}", "ir", d.H * d.adag - d.adag * H_next));
  // With both sides shifted by their own constants the identity picks up
  // (c_{s+1} - c_s) a+.
  {
    // c_{s+1} needs 1/(s+1); evaluate at s = 1, alpha = 2 where c_s = -1/4, c_{s+1} = -1/16.
    const Factorization d1 = factorize(Rational(1), Rational(2));
    const Factorization d2 = factorize(Rational(2), Rational(2));
    const Radial1DOp hat1 = d1.H - Radial1DOp(d1.c), hat2 = d2.H - Radial1DOp(d2.c);
    out.push_back(item("intertwining with both sides shifted (s = 1, alpha = 2)", "ir", hat1 * d1.adag - d1.adag * hat2,
                       false, false));
  }

  const Factorization p = factorize(FactorForm::printed);
  out.push_back(item("printed superpotential: H = a+ a + c", "f", p.adag * p.a + Radial1DOp(p.c) - p.H, false, false));
  {
    // As above, at s = 1, alpha = 2.
    const Factorization p1 = factorize(Rational(1), Rational(2), FactorForm::printed);
    const Factorization p2 = factorize(Rational(2), Rational(2), FactorForm::printed);
    const Radial1DOp hat1 = p1.H - Radial1DOp(p1.c), hat2 = p2.H - Radial1DOp(p2.c);
    out.push_back(item("printed intertwining (s = 1, alpha = 2)", "ir", hat1 * p1.adag - p1.adag * hat2, false, false));
  }

  // Two-channel system: Q2 = k (-i sigma_2)(d + W), H2 + alpha^2/(4k^2) = (-d + W)(d + W),
  // W = (alpha/(2k) - k/x) sigma_3 - f sigma_1.
  const ScalarExpr k = P("k"), f = radial_fn("f");
  const MatrixExpr W = (Q(1, 2) * P("alpha") * P("k", -1) - k * R(-1)) * S(3) - f * S(1);
  const Radial1DOp A = Radial1DOp::d() + Radial1DOp(W), Adag = -Radial1DOp::d() + Radial1DOp(W);
  const MatrixExpr mis2 = scale(ScalarExpr(1), Gauss{Rational(0), Rational(-1)}) * S(2);
  out.push_back(item("Q2 = k (-i sigma_2)(d/dx + W)", "ev8", sector_operator("Q2") - k * (mis2 * A)));
  out.push_back(item("matrix superpotential U = W^2 - W'", "last",
                     Adag * A - sector_operator("H2") - Radial1DOp(Q(1, 4) * P("alpha", 2) * P("k", -2))));
  out.push_back(item("Q2^2 = k^2 (H2 + alpha^2/(4 k^2))", "E_nu",
                     sector_operator("Q2") * sector_operator("Q2") - (k * k) * sector_operator("H2") -
                         Radial1DOp(Q(1, 4) * P("alpha", 2))));
  // The printed superpotential (mu/x - alpha/(2mu)) sigma_3 + f sigma_1 against
  // the printed coupled system (barriers mu(mu+1), mu(mu-1), coupling +f').
  {
    const MatrixExpr Wp = (k * R(-1) - Q(1, 2) * P("alpha") * P("k", -1)) * S(3) + f * S(1);
    const Radial1DOp Ap = Radial1DOp::d() + Radial1DOp(Wp), Apd = -Radial1DOp::d() + Radial1DOp(Wp);
    Radial1DOp printed = -Radial1DOp::d(2);
    printed += Radial1DOp((k * k) * R(-2) * S(0) + k * R(-2) * S(3) + (f * f - P("alpha") * R(-1)) * S(0) +
                          radial_derive(f) * S(1));
    out.push_back(item("printed superpotential against the printed coupled system", "last",
                       Apd * Ap - printed - Radial1DOp(Q(1, 4) * P("alpha", 2) * P("k", -2)), false, false));
  }

  // Sector consistency of the catalog integrals.
  out.push_back(item("[H2, Q2] = 0 in the sector", "H2", commutator(sector_operator("H2"), sector_operator("Q2"))));
  out.push_back(item("[H1, Q1] = 0 in the sector", "H1", commutator(sector_operator("H1"), sector_operator("Q1"))));
  out.push_back(item("[H3, Q1] = 0 in the sector", "H3", commutator(sector_operator("H3"), sector_operator("Q1"))));
  out.push_back(item("[H3, Q3] = 0 in the sector", "H3", commutator(sector_operator("H3"), sector_operator("Q3"))));
  out.push_back(item("{Q1, Q3} = alpha lambda in the sector", "sq4",
                     anticommutator(sector_operator("Q1"), sector_operator("Q3")) -
                         Radial1DOp(P("alpha") * P("lambda"))));
  return out;
}

// ---------------------------------------------------------------- superalgebra

ScalarExpr reduce_mu(const ScalarExpr& e) {
  const SymbolId lam = param_id("lambda");
  const ScalarExpr base = P("mu", 2) - P("k", 2);
  ScalarExpr out;
  for (const auto& t : e.terms()) {
    int p = 0;
    Monomial m = t.mono;
    for (auto it = m.params.begin(); it != m.params.end(); ++it)
      if (it->first == lam) {
        p = it->second;
        m.params.erase(it);
        break;
      }
    if (p < 2) {
      out += ScalarExpr::from_terms({t});
      continue;
    }
    out += ScalarExpr::from_terms({Term{m, t.coeff}}) * pow(base, p / 2) * (p % 2 ? P("lambda") : ScalarExpr(1));
  }
  return out;
}

Radial1DOp reduce_mu(const Radial1DOp& a) {
  return map_coefficients(a, [](const ScalarExpr& e) { return reduce_mu(e); });
}

std::vector<IdentityCheck> superalgebra_check(const std::optional<Rational>& j, bool perturb) {
  const ScalarExpr k = P("k"), lam = P("lambda"), alpha = P("alpha");
  const ScalarExpr i = imag_unit();
  const Radial1DOp B = sector_operator("Q1");
  Radial1DOp Q3 = sector_operator("Q3");
  if (perturb) Q3 = substitute_param(Q3, "lambda", lam + ScalarExpr(1));
  const Radial1DOp H3 = sector_operator("H3");
  const Radial1DOp Q4 = (Q(1, 2) * i) * commutator(B, Q3);

  // Since {Q1, Q3} = alpha lambda, Q3/k carries a component along Q1.  With
  // it removed, Q3~ = Q3/k - alpha lambda Q1 / (2 k mu^2) and Q4~ = Q4/(k mu)
  // anticommute and square to H~ = H3 + alpha^2 / (4 mu^2).
  const Radial1DOp q3t = P("k", -1) * Q3 - (Q(1, 2) * alpha * lam * P("k", -1) * P("mu", -2)) * B;
  const Radial1DOp q4t = (P("k", -1) * P("mu", -1)) * Q4;
  const Radial1DOp Ht = H3 + Radial1DOp(Q(1, 4) * alpha * alpha * P("mu", -2));

  // The printed rescaling: Q3/(j + 1/2), Q4/nu + alpha Q1/((2j+1) nu) with
  // 1/nu = Q1^{-1} = Q1/mu^2 acting first, and H^ = H3 + alpha^2/(2j+1)^2.
  const Radial1DOp Binv = P("mu", -2) * B;
  const Radial1DOp q3 = P("k", -1) * Q3;
  const Radial1DOp q4 = (Q4 + (Q(1, 2) * alpha * P("k", -1)) * B) * Binv;
  const Radial1DOp q4_left = Binv * (Q4 + (Q(1, 2) * alpha * P("k", -1)) * B);
  const Radial1DOp Hhat = H3 + Radial1DOp(Q(1, 4) * alpha * alpha * P("k", -2));

  auto fix = [&](Radial1DOp op) {
    op = reduce_mu(op);
    if (j) op = reduce_mu(substitute_param(op, "k", ScalarExpr(*j + Rational(1, 2))));
    return op;
  };
  const ScalarExpr two(2);
  std::vector<IdentityCheck> out;
  const bool expect = !perturb;
  out.push_back(item("{Q1, Q3} = alpha lambda", "sq4", fix(anticommutator(B, Q3) - Radial1DOp(alpha * lam)), true, expect));
  out.push_back(item("{Q3^, Q3^} = 2 H^ (printed rescaling)", "ar", fix(anticommutator(q3, q3) - two * Hhat), true,
                     expect));
  out.push_back(item("{Q3~, Q3~} = 2 H~", "ar", fix(anticommutator(q3t, q3t) - two * Ht), true, expect));
  out.push_back(item("{Q3~, Q4~} = 0", "ar", fix(anticommutator(q3t, q4t)), true, expect));
  out.push_back(item("{Q4~, Q4~} = 2 H~", "ar", fix(anticommutator(q4t, q4t) - two * Ht), true, expect));
  out.push_back(item("{Q3~, Q1} = 0", "ar", fix(anticommutator(q3t, B)), true, expect));
  // Holds for any Q3 once {Q1, Q3} is central, so it survives the perturbation.
  out.push_back(item("{Q4~, Q1} = 0", "sq4", fix(anticommutator(q4t, B)), true, true));
  out.push_back(item("[H~, Q3~] = 0", "ar", fix(commutator(Ht, q3t)), true, expect));
  out.push_back(item("{Q3^, Q4^} = 0 (printed rescaling)", "rsc", fix(anticommutator(q3, q4)), false, false));
  out.push_back(item("{Q4^, Q4^} = 2 H^ (printed rescaling)", "rsc", fix(anticommutator(q4, q4) - two * Hhat), false,
                     false));
  out.push_back(item("{Q3^, Q4^} = 0 (printed rescaling, Q1^{-1} on the left)", "rsc",
                     fix(anticommutator(q3, q4_left)), false, false));
  out.push_back(item("{Q4^, Q4^} = 2 H^ (printed rescaling, Q1^{-1} on the left)", "rsc",
                     fix(anticommutator(q4_left, q4_left) - two * Hhat), false, false));
  return out;
}

EnergyConvention energy_convention_check() {
  // E^ = -alpha^2 / (4 N^2), E = E^ / (2m), printed E = -m a^2 / (2 N^2).
  const ScalarExpr m = P("m"), a = P("a");
  auto ehat = [&](const ScalarExpr& alpha) { return -Q(1, 4) * alpha * alpha * P("N", -2); };
  const ScalarExpr printed_rescaled = -Q(1, 2) * m * a * a * P("N", -2);
  const ScalarExpr printed_same = -Q(1, 2) * m * P("alpha", 2) * P("N", -2);
  EnergyConvention c;
  c.holds_rescaled_coupling = (Q(1, 2) * P("m", -1) * ehat(ScalarExpr(2) * m * a) - printed_rescaled).is_zero();
  c.holds_same_coupling = (Q(1, 2) * P("m", -1) * ehat(P("alpha")) - printed_same).is_zero();
  return c;
}

// ---------------------------------------------------------------- numeric problems

void RadialModel::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(lambda) || !std::isfinite(beta) || !std::isfinite(omega))
    throw RadialError("model parameters must be finite");
  if (id == ModelId::H4) throw RadialError("no radial reduction is provided for H4");
  if (id == ModelId::H1 && potential != "coulomb" && potential != "oscillator")
    throw RadialError("unknown potential '" + potential + "' (coulomb, oscillator)");
  if (id == ModelId::H2 && f != "inverse" && f != "screened" && f != "zero")
    throw RadialError("unknown f '" + f + "' (inverse, screened, zero)");
  if (!(fall_to_center_delta > 0)) throw RadialError("fall-to-centre margin must be > 0");
}

double indicial_exponent(double c2) { return 0.5 + std::sqrt(c2 + 0.25); }

double centrifugal(const RadialModel& m, const Sector& s, int eps) {
  const double mu = s.mu(), k = s.k();
  switch (m.id) {
    case ModelId::H1: return k * k + eps * mu + m.beta;  // nu(nu+1) - lambda^2 (+ beta)
    case ModelId::H3: return mu * mu + eps * mu;         // nu(nu+1)
    case ModelId::H2:
      if (m.f != "zero") throw RadialError("H2 decouples into single channels only for f = 0");
      return eps > 0 ? k * (k - 1) : k * (k + 1);  // channel +: l = j - 1/2, channel -: l = j + 1/2
    default: break;
  }
  throw RadialError("no radial reduction is provided for H4");
}

namespace {

double f_value(const RadialModel& m, double r, double& fp) {
  if (m.f == "inverse") {
    fp = -m.lambda / (r * r);
    return m.lambda / r;
  }
  if (m.f == "screened") {
    const double e = std::exp(-r);
    fp = -m.lambda * e * (1.0 / r + 1.0 / (r * r));
    return m.lambda * e / r;
  }
  fp = 0.0;
  return 0.0;
}

double phi_tail(const RadialModel& m, double r) {
  if (m.id == ModelId::H1 && m.potential == "oscillator") return m.omega * m.omega * r * r;
  return -m.alpha / r;
}

std::string model_tag(const RadialModel& m) {
  std::string s = model_name(m.id);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

RadialProblem reduce(const RadialModel& m, const Sector& sec, int branch) {
  m.validate();
  sec.validate();
  RadialProblem p;
  p.model = model_tag(m);
  p.sector = sec;
  p.branch = branch;
  const double k = sec.k(), lam = m.lambda;
  Sector s = sec;
  if (m.id != ModelId::H2) s.lambda = lam;
  if (branch != 0) {
    if (branch != 1 && branch != -1) throw RadialError("branch must be +1, -1 or 0");
    p.channels = 1;
    p.c2 = centrifugal(m, s, branch);
    if (p.c2 < -0.25 + m.fall_to_center_delta)
      throw RadialError("fall to the centre: centrifugal coefficient " + std::to_string(p.c2) + " is below -1/4");
    p.s = indicial_exponent(p.c2);
    const double c2 = p.c2;
    const RadialModel mm = m;
    p.V = [c2, mm](double r) {
      Eigen::MatrixXd v(1, 1);
      v(0, 0) = c2 / (r * r) + phi_tail(mm, r);
      return v;
    };
    std::ostringstream os;
    os << "-u'' + (" << c2 << "/r^2 " << (m.potential == "oscillator" && m.id == ModelId::H1 ? "+ omega^2 r^2" : "- alpha/r")
       << ") u = E u";
    p.description = os.str();
    return p;
  }
  p.channels = 2;
  const RadialModel mm = m;
  const double mu = s.mu();
  if (m.id == ModelId::H2) {
    p.V = [mm, k](double r) {
      double fp = 0.0;
      const double f = f_value(mm, r, fp);
      Eigen::MatrixXd v(2, 2);
      const double common = f * f - mm.alpha / r;
      v << k * (k - 1) / (r * r) + common, fp, fp, k * (k + 1) / (r * r) + common;
      return v;
    };
    p.description = "coupled H2 system, barriers k(k-1), k(k+1), coupling f'";
  } else {
    // (c - B) / r^2 + tail, B = [[k, lambda], [lambda, -k]]; c = mu^2 (H3) or k^2 + beta (H1).
    const double c = m.id == ModelId::H3 ? mu * mu : k * k + m.beta;
    p.V = [mm, k, lam, c](double r) {
      Eigen::MatrixXd v(2, 2);
      const double r2 = r * r, t = phi_tail(mm, r);
      v << (c - k) / r2 + t, -lam / r2, -lam / r2, (c + k) / r2 + t;
      return v;
    };
    p.description = "coupled system (c - Q1 block)/r^2 + tail";
    const double cmin = std::min(c - mu, c + mu);
    if (cmin < -0.25 + m.fall_to_center_delta)
      throw RadialError("fall to the centre: centrifugal eigenvalue " + std::to_string(cmin) + " is below -1/4");
  }
  return p;
}

RadialProblem reduce_swapped(const RadialModel& m, const Sector& s) {
  RadialProblem p = reduce(m, s, 0);
  const PotentialFn V = p.V;
  p.V = [V](double r) {
    Eigen::MatrixXd v = V(r);
    Eigen::MatrixXd w(2, 2);
    w << v(1, 1), v(1, 0), v(0, 1), v(0, 0);
    return w;
  };
  p.description += " (channels swapped)";
  return p;
}

DecoupledH2 decouple_h2(const RadialModel& m, const Sector& s, double Ehat, const Grid& g, const Eigen::MatrixXd& up,
                        const Eigen::MatrixXd& um, int q_sign) {
  if (m.id != ModelId::H2 && m.id != ModelId::H3) throw RadialError("decouple_h2 needs an H2-type model");
  if (q_sign != 1 && q_sign != -1) throw RadialError("decouple_h2: q branch must be +1 or -1");
  if (up.rows() != g.M || um.rows() != g.M || up.cols() != um.cols() || up.cols() < 1)
    throw RadialError("decouple_h2: channel vectors do not match the grid");
  RadialModel mm = m;
  if (m.id == ModelId::H3) {
    mm.id = ModelId::H2;
    mm.f = "inverse";
  }
  const double k = s.k(), a = mm.alpha;
  const double q2 = Ehat + a * a / (4 * k * k);
  if (q2 < 0) throw RadialError("decouple_h2: E + alpha^2/(2j+1)^2 is negative");
  const double qt = q_sign * std::sqrt(q2);
  const double h = g.h;
  auto w = [&](double r) { return -k / r + a / (2 * k); };

  // Interior points away from zeros of f + qt.
  std::vector<int> idx;
  for (int i = 1; i + 1 < g.M; ++i) {
    double fp = 0.0;
    const double f = f_value(mm, g.node(i), fp);
    if (std::abs(f + qt) > 1e-3 * (std::abs(f) + std::abs(qt))) idx.push_back(i);
  }
  if (idx.empty()) throw RadialError("decouple_h2: f + q~ vanishes on the whole grid");

  // Combination of the given states closest to satisfying the first-order
  // relation (f + qt) u- = (d/dx + w) u+.
  const int d = static_cast<int>(up.cols());
  Eigen::MatrixXd L(idx.size(), d);
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const int i = idx[p];
    const double r = g.node(i);
    double fp = 0.0;
    const double f = f_value(mm, r, fp);
    for (int c = 0; c < d; ++c)
      L(p, c) = (f + qt) * um(i, c) - ((up(i + 1, c) - up(i - 1, c)) / (2 * h) + w(r) * up(i, c));
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(L, Eigen::ComputeFullV);
  const Eigen::VectorXd c = svd.matrixV().col(d - 1);
  const Eigen::VectorXd u = up * c, v = um * c;

  DecoupledH2 out;
  out.q_tilde = qt;
  out.q_sign = q_sign;
  double num = 0.0, den = 0.0, res = 0.0, scale = 0.0;
  for (int i : idx) {
    const double r = g.node(i);
    double fp = 0.0;
    const double f = f_value(mm, r, fp);
    const double gq = f + qt;
    const double Au = (u(i + 1) - u(i - 1)) / (2 * h) + w(r) * u(i);
    num = std::max(num, std::abs(Au / gq - v(i)));
    den = std::max(den, std::abs(v(i)));
    const double t1 = -(u(i + 1) - 2 * u(i) + u(i - 1)) / (h * h);
    const double t2 = (w(r) * w(r) - k / (r * r)) * u(i), t3 = fp / gq * Au;
    const double t4 = (f * f - a * a / (4 * k * k) - Ehat) * u(i);
    res = std::max(res, std::abs(t1 + t2 + t3 + t4));
    scale = std::max(scale, std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4));
  }
  out.partner_residual = den > 0 ? num / den : INFINITY;
  out.residual = scale > 0 ? res / scale : 0.0;
  out.points = static_cast<int>(idx.size());
  return out;
}

// ---------------------------------------------------------------- spectra

double printed_N(double c2, int n) { return c2 >= 0 ? std::sqrt(c2) + n + 0.5 : std::nan(""); }

double exact_energy(const RadialModel& m, double s_exp, int n) {
  if (m.id == ModelId::H1 && m.potential == "oscillator") return m.omega * (4.0 * n + 2.0 * s_exp + 1.0);
  const double N = n + s_exp;
  return -m.alpha * m.alpha / (4.0 * N * N);
}

namespace {

bool has_bound_states(const RadialModel& m) {
  if (m.id == ModelId::H1 && m.potential == "oscillator") return m.omega > 0;
  return m.alpha > 0;
}

SpectrumRow make_row(const RadialModel& m, const Sector& s, int eps, int n, double N, double E,
                     const std::string& source) {
  SpectrumRow r;
  r.model = model_tag(m);
  r.j = s.j;
  r.kappa = s.kappa;
  r.branch = eps;
  r.n = n;
  r.N = N;
  r.Ehat = E;
  r.E_over_m = E / 2.0;  // E = E^ / (2m) with m = 1
  r.degeneracy = 1;
  r.source = source;
  return r;
}

}  // namespace

SpectrumTable exact_spectrum(const RadialModel& m, const Sector& sec, int nmax, NFormula form) {
  m.validate();
  sec.validate();
  if (nmax < 0) throw RadialError("nmax must be >= 0");
  Sector s = sec;
  s.lambda = m.lambda;
  SpectrumTable t;
  RadialModel mm = m;
  if (m.id == ModelId::H2) {
    if (m.f == "inverse") {
      mm.id = ModelId::H3;  // f = lambda / x turns H2 into H3
    } else if (m.f != "zero") {
      throw RadialError("no closed-form spectrum for H2 with f = " + m.f);
    }
  }
  if (!has_bound_states(mm)) {
    t.notes.push_back("no bound states: the potential is not attractive (alpha <= 0)");
    return t;
  }
  const bool oscillator = mm.id == ModelId::H1 && mm.potential == "oscillator";
  std::map<int, double> exponents;
  for (int eps : {+1, -1}) {
    const double c2 = centrifugal(mm, s, eps);
    if (c2 < -0.25 + mm.fall_to_center_delta) {
      t.notes.push_back("branch " + std::to_string(eps) + ": fall to the centre (c2 = " + std::to_string(c2) + ")");
      continue;
    }
    const double sx = indicial_exponent(c2);
    exponents[eps] = sx;
    for (int n = 0; n <= nmax; ++n) {
      if (form == NFormula::printed && mm.id == ModelId::H1 && !oscillator) {
        const double N = printed_N(c2, n);
        if (!std::isfinite(N)) {
          t.notes.push_back("branch " + std::to_string(eps) + ": printed N is not real (c2 < 0)");
          break;
        }
        t.rows.push_back(make_row(m, s, eps, n, N, -mm.alpha * mm.alpha / (4 * N * N), "closed-form-printed"));
      } else {
        t.rows.push_back(make_row(m, s, eps, n, n + sx, exact_energy(mm, sx, n), "closed-form"));
      }
    }
  }
  // Degeneracy: the number of branches with a state at the same level,
  // counting states beyond nmax too.
  for (auto& r : t.rows) {
    r.degeneracy = 0;
    for (const auto& [eps, sx] : exponents) {
      double nb = 0.0;
      if (r.source == "closed-form-printed") {
        nb = r.N - printed_N(centrifugal(mm, s, eps), 0);
      } else if (oscillator) {
        nb = (r.Ehat / mm.omega - 2.0 * sx - 1.0) / 4.0;
      } else {
        nb = r.N - sx;
      }
      if (nb > -1e-9 && std::abs(nb - std::round(nb)) < 1e-9) ++r.degeneracy;
    }
  }
  std::stable_sort(t.rows.begin(), t.rows.end(),
                   [](const SpectrumRow& a, const SpectrumRow& b) { return a.Ehat < b.Ehat; });
  return t;
}

void assign_degeneracy(SpectrumTable& t, double rel_tol) {
  for (auto& r : t.rows) {
    r.degeneracy = 0;
    for (const auto& o : t.rows)
      if (std::abs(o.Ehat - r.Ehat) <= rel_tol * std::max(std::abs(r.Ehat), 1e-300)) ++r.degeneracy;
  }
}

NumericSpectrum numeric_spectrum(const RadialModel& m, const Sector& sec, int branch, int count,
                                 const NumericOptions& o) {
  if (count < 1 || count > 20) throw RadialError("state count must be in 1..20");
  Sector s = sec;
  s.lambda = m.lambda;
  const RadialProblem p = reduce(m, s, branch);
  NumericSpectrum out;
  RadialModel mm = m;
  if (m.id == ModelId::H2 && m.f == "inverse") mm.id = ModelId::H3;
  const bool oscillator = m.id == ModelId::H1 && m.potential == "oscillator";
  if (!has_bound_states(mm)) {
    out.table.notes.push_back("no bound states: the potential is not attractive (alpha <= 0)");
    return out;
  }
  double r_max = o.r_max;
  if (r_max <= 0) {
    // Closed-form estimate of the highest requested level (or of a level
    // deep enough for the coupled system).
    double s_est = branch != 0 ? p.s : indicial_exponent(std::max(-0.25 + m.fall_to_center_delta, s.k() * s.k() - s.mu()));
    if (m.id == ModelId::H2 && m.f == "screened") s_est = s.k();
    const int n_est = branch != 0 ? count - 1 : count;
    if (oscillator) {
      const double E = mm.omega * (4.0 * n_est + 2.0 * s_est + 1.0);
      r_max = std::sqrt(E) / mm.omega + 12.0 / std::sqrt(mm.omega);
    } else {
      const double E = exact_energy(mm, s_est, n_est);
      r_max = 40.0 / std::sqrt(-E);
    }
  }
  out.r_max = r_max;
  out.raw = solve_fd_extrapolated(p.V, p.channels, r_max, o.M, count, o.three_grids);
  for (int i = 0; i < out.raw.values.size(); ++i) {
    const double E = out.raw.values(i);
    const double N = (!oscillator && E < 0) ? mm.alpha / (2.0 * std::sqrt(-E)) : std::nan("");
    out.table.rows.push_back(make_row(m, s, branch, i, N, E, "finite-difference"));
  }
  assign_degeneracy(out.table, 1e-6);
  return out;
}

// ---------------------------------------------------------------- wavefunctions

double Wavefunction::value(double x) const {
  return norm * std::pow(x, s) * std::exp(-kappa * x) * kummer_1f1(-n, 2 * s, zscale * x);
}

double Wavefunction::d1(double x) const {
  const double g = std::pow(x, s) * std::exp(-kappa * x), gp = g * (s / x - kappa);
  const double M = kummer_1f1(-n, 2 * s, zscale * x);
  const double Mp = n == 0 ? 0.0 : zscale * (-n / (2 * s)) * kummer_1f1(-n + 1, 2 * s + 1, zscale * x);
  return norm * (gp * M + g * Mp);
}

double Wavefunction::d2(double x) const {
  const double g = std::pow(x, s) * std::exp(-kappa * x);
  const double t = s / x - kappa;
  const double gp = g * t, gpp = g * (t * t - s / (x * x));
  const double z = zscale * x, b = 2 * s;
  const double M = kummer_1f1(-n, b, z);
  const double Mp = n == 0 ? 0.0 : zscale * (-n / b) * kummer_1f1(-n + 1, b + 1, z);
  const double Mpp =
      n <= 1 ? 0.0 : zscale * zscale * (double(-n) * (-n + 1) / (b * (b + 1))) * kummer_1f1(-n + 2, b + 2, z);
  return norm * (gpp * M + 2 * gp * Mp + g * Mpp);
}

namespace {

void normalize(Wavefunction& w) {
  // Composite Gauss-Legendre over [0, X], X well inside the exponential tail.
  const double X = (w.s + 2.0 * w.n + 60.0) / w.kappa;
  const int panels = 200;
  const Quadrature q = gauss_legendre(16);
  w.norm = 1.0;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = X * p / panels, b = X * (p + 1) / panels;
    for (int i = 0; i < q.nodes.size(); ++i) {
      const double x = 0.5 * (a + b) + 0.5 * (b - a) * q.nodes(i);
      const double v = w.value(x);
      acc += 0.5 * (b - a) * q.weights(i) * v * v;
    }
  }
  w.norm = 1.0 / std::sqrt(acc);
}

}  // namespace

Wavefunction wavefunction(const RadialModel& m, const Sector& sec, int branch, int n) {
  if (branch != 1 && branch != -1) throw RadialError("wavefunction: branch must be +1 or -1");
  if (n < 0) throw RadialError("wavefunction: n must be >= 0");
  RadialModel mm = m;
  if (m.id == ModelId::H2 && m.f == "inverse") mm.id = ModelId::H3;
  if (mm.id == ModelId::H1 && mm.potential != "coulomb")
    throw RadialError("closed-form wavefunctions are provided for the Coulomb tail only");
  if (!has_bound_states(mm)) throw RadialError("no bound states: alpha <= 0");
  Sector s = sec;
  s.lambda = m.lambda;
  const RadialProblem p = reduce(mm, s, branch);
  Wavefunction w;
  w.c2 = p.c2;
  w.alpha = mm.alpha;
  w.s = p.s;
  w.n = n;
  w.N = n + p.s;
  w.Ehat = -mm.alpha * mm.alpha / (4 * w.N * w.N);
  w.kappa = mm.alpha / (2 * w.N);
  w.zscale = 2 * w.kappa;
  normalize(w);
  return w;
}

Wavefunction printed_wavefunction(const RadialModel& m, const Sector& sec, int branch, int n) {
  Wavefunction w = wavefunction(m, sec, branch, n);
  RadialModel mm = m;
  if (m.id == ModelId::H2 && m.f == "inverse") mm.id = ModelId::H3;
  Sector s = sec;
  s.lambda = m.lambda;
  if (mm.id == ModelId::H3) {
    w.s = s.mu() + 0.5;  // |nu| + 1/2
    w.kappa = std::sqrt(-w.Ehat);
    w.zscale = w.kappa;
  } else {
    if (w.c2 < 0) throw RadialError("printed exponent sqrt(nu(nu+1) - lambda^2) is not real");
    w.s = std::sqrt(w.c2) + 0.5;
    w.N = printed_N(w.c2, n);
    w.Ehat = -mm.alpha * mm.alpha / (4 * w.N * w.N);
    w.kappa = std::sqrt(-w.Ehat);
    w.zscale = 2 * w.kappa;
  }
  normalize(w);
  return w;
}

double ode_residual(const Wavefunction& w, const std::vector<double>& xs) {
  double res = 0.0, scale = 0.0;
  for (double x : xs) {
    const double u = w.value(x);
    const double t1 = -w.d2(x), t2 = w.c2 / (x * x) * u, t3 = -w.alpha / x * u, t4 = -w.Ehat * u;
    res = std::max(res, std::abs(t1 + t2 + t3 + t4));
    scale = std::max(scale, std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4));
  }
  return scale > 0 ? res / scale : 0.0;
}

int count_nodes(const std::function<double(double)>& u, double x_max, int samples) {
  double peak = 0.0;
  std::vector<double> v(samples);
  for (int i = 0; i < samples; ++i) {
    v[i] = u(x_max * (i + 1) / samples);
    peak = std::max(peak, std::abs(v[i]));
  }
  int nodes = 0, last = 0;
  for (double x : v) {
    if (std::abs(x) < 1e-10 * peak) continue;
    const int sg = x > 0 ? 1 : -1;
    if (last != 0 && sg != last) ++nodes;
    last = sg;
  }
  return nodes;
}

}  // namespace sis
