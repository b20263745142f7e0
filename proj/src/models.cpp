#include "sis/models.hpp"

#include <algorithm>
#include <array>

namespace sis {

namespace {

int levi(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0;
  return ((b - a + 3) % 3 == 1) ? 1 : -1;
}

DiffOp mult(const ScalarExpr& s) { return DiffOp(s); }
DiffOp mult(const MatrixExpr& m) { return DiffOp(m); }

const ScalarExpr kHalf = ScalarExpr(rational(1, 2));

}  // namespace

ModelSpec ModelSpec::symbolic(ModelId id) {
  ModelSpec s;
  s.id = id;
  s.params["lambda"] = param("lambda");
  s.params["alpha"] = param("alpha");
  return s;
}

ScalarExpr ModelSpec::coupling(const std::string& name) const {
  auto it = params.find(name);
  if (it == params.end()) throw ModelError("model " + model_name(id) + ": missing parameter '" + name + "'");
  return it->second;
}

std::optional<ModelId> parse_model(std::string_view s) {
  if (s == "h1") return ModelId::H1;
  if (s == "h2") return ModelId::H2;
  if (s == "h3") return ModelId::H3;
  if (s == "h4") return ModelId::H4;
  return std::nullopt;
}

std::string model_name(ModelId id) {
  static const char* names[] = {"h1", "h2", "h3", "h4"};
  return names[static_cast<int>(id)];
}

std::optional<IntegralId> parse_integral(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(IntegralId::K); ++i)
    if (integral_name(static_cast<IntegralId>(i)) == s) return static_cast<IntegralId>(i);
  return std::nullopt;
}

std::string integral_name(IntegralId id) {
  static const char* names[] = {"j1", "j2", "j3", "q1", "q2", "q3", "q4", "q5", "r1", "r2", "r3", "d", "k"};
  return names[static_cast<int>(id)];
}

// ---------------------------------------------------------------- building blocks

DiffOp orbital_momentum(int a) {
  DiffOp L;
  for (int b = 0; b < 3; ++b)
    for (int c = 0; c < 3; ++c) {
      int e = levi(a, b, c);
      if (e != 0) L += ScalarExpr(e) * coord(b) * DiffOp::momentum(c);
    }
  return L;
}

DiffOp total_momentum(int a) { return orbital_momentum(a) + mult(kHalf * sigma(a + 1)); }

DiffOp j_squared() {
  DiffOp j2;
  for (int a = 0; a < 3; ++a) j2 += total_momentum(a) * total_momentum(a);
  return j2;
}

DiffOp spin_orbit() {
  DiffOp k = mult(ScalarExpr(1));
  for (int a = 0; a < 3; ++a) k += sigma(a + 1) * orbital_momentum(a);
  return k;
}

DiffOp sigma_dot_p() {
  DiffOp d;
  for (int a = 0; a < 3; ++a) d += sigma(a + 1) * DiffOp::momentum(a);
  return d;
}

DiffOp dilation() {
  DiffOp xp;
  for (int a = 0; a < 3; ++a) xp += coord(a) * DiffOp::momentum(a);
  // (x.p + p.x)/2 = x.p - 3i/2
  return xp + mult(ScalarExpr(Gauss(Rational(0), rational(-3, 2))));
}

// ---------------------------------------------------------------- catalog

namespace {

ScalarExpr radial_or_bound(const ModelSpec& spec, const std::string& fn) {
  auto it = spec.bindings.find(fn);
  if (it != spec.bindings.end()) return it->second;
  return radial_fn(fn);
}

void require_dipole(const ModelSpec& spec, const ScalarExpr& lambda) {
  if (lambda.is_zero() && !spec.allow_zero_dipole)
    throw ModelError("model " + model_name(spec.id) + ": dipole coupling lambda = 0 requested with a dipole term");
}

// Sign of the sigma.x / x^3 term.  The printed H1/H3 carry +lambda; Q1 as
// printed commutes only with -lambda.
int dipole_sign(const ModelSpec& spec) { return spec.form == Transcription::printed ? 1 : -1; }

}  // namespace

DiffOp build_hamiltonian(const ModelSpec& spec) {
  DiffOp H = -laplacian();
  switch (spec.id) {
    case ModelId::H1: {
      ScalarExpr lambda = spec.coupling("lambda");
      require_dipole(spec, lambda);
      ScalarExpr phi = radial_or_bound(spec, "phi");
      H += mult(ScalarExpr(dipole_sign(spec)) * lambda * radius(-3) * sigma_dot_x());
      H += mult(phi);
      break;
    }
    case ModelId::H2: {
      ScalarExpr alpha = spec.coupling("alpha");
      ScalarExpr f = radial_or_bound(spec, "f");
      H += mult(radial_derive(f) * sigma_dot_n());
      H += mult(f * f - alpha * radius(-1));
      break;
    }
    case ModelId::H3: {
      ScalarExpr lambda = spec.coupling("lambda");
      ScalarExpr alpha = spec.coupling("alpha");
      require_dipole(spec, lambda);
      if (spec.form == Transcription::printed) {
        H += mult(lambda * radius(-1) * sigma_dot_n());
      } else {
        H += mult(-lambda * radius(-2) * sigma_dot_n());
      }
      H += mult(lambda * lambda * radius(-2) - alpha * radius(-1));
      break;
    }
    case ModelId::H4: {
      ScalarExpr lambda = spec.coupling("lambda");
      require_dipole(spec, lambda);
      H += mult(lambda * radius(-2) * sigma_dot_x());
      break;
    }
  }
  return H;
}

bool compatible(IntegralId id, ModelId model) {
  switch (id) {
    case IntegralId::J1:
    case IntegralId::J2:
    case IntegralId::J3:
    case IntegralId::Q4:
      return true;
    case IntegralId::Q1:
      return model == ModelId::H1 || model == ModelId::H3;
    case IntegralId::Q2:
      return model == ModelId::H2;
    case IntegralId::Q3:
      return model == ModelId::H3;
    case IntegralId::Q5:
      return model == ModelId::H2 || model == ModelId::H3;
    case IntegralId::R1:
    case IntegralId::R2:
    case IntegralId::R3:
      return model == ModelId::H4;
    case IntegralId::D:
    case IntegralId::K:
      return model == ModelId::H1;
  }
  return false;
}

namespace {

DiffOp q2_operator(const ScalarExpr& f, const ScalarExpr& alpha, Q2Ordering ordering) {
  DiffOp left = ScalarExpr(kI) * sigma_dot_p() + mult(f);
  DiffOp K = spin_orbit();
  DiffOp core;
  switch (ordering) {
    case Q2Ordering::printed: core = left * K; break;
    case Q2Ordering::reversed: core = K * left; break;
    case Q2Ordering::symmetrized: core = kHalf * anticommutator(left, K); break;
  }
  return core + mult(kHalf * alpha * sigma_dot_n());
}

DiffOp q5_operator(const ScalarExpr& f, const ScalarExpr& alpha, Q5Variant v) {
  DiffOp P = DiffOp::reflection();
  DiffOp p_part = v == Q5Variant::printed ? sigma_dot_p() : ScalarExpr(kI) * sigma_dot_p();
  DiffOp out = (p_part + mult(f)) * P;
  switch (v) {
    case Q5Variant::printed:
    case Q5Variant::i_sigma_p: out += mult(alpha * sigma_dot_n()); break;
    case Q5Variant::i_sigma_p_half: out += mult(kHalf * alpha * sigma_dot_n()); break;
    case Q5Variant::i_sigma_p_bare: break;
  }
  return out;
}

// R_a = (p x J - J x p)_a / 2 + c x_a (sigma.x) / x^2; the printed c = lambda,
// the commuting one is c = lambda / 2.
DiffOp lenz_component(int a, const ScalarExpr& c_lambda) {
  DiffOp R;
  for (int b = 0; b < 3; ++b)
    for (int c = 0; c < 3; ++c) {
      int e = levi(a, b, c);
      if (e == 0) continue;
      R += ScalarExpr(rational(e, 2)) * (DiffOp::momentum(b) * total_momentum(c) - total_momentum(b) * DiffOp::momentum(c));
    }
  R += mult(c_lambda * coord(a) * radius(-2) * sigma_dot_x());
  return R;
}

}  // namespace

DiffOp build_integral(IntegralId id, const ModelSpec& spec, const IntegralOptions& opts) {
  if (!compatible(id, spec.id))
    throw ModelError("integral " + integral_name(id) + " is not defined for model " + model_name(spec.id));
  switch (id) {
    case IntegralId::J1: return total_momentum(0);
    case IntegralId::J2: return total_momentum(1);
    case IntegralId::J3: return total_momentum(2);
    case IntegralId::Q1: {
      ScalarExpr lambda = spec.params.count("lambda") ? spec.coupling("lambda") : ScalarExpr();
      return spin_orbit() + mult(lambda * sigma_dot_n());
    }
    case IntegralId::Q2: return q2_operator(radial_or_bound(spec, "f"), spec.coupling("alpha"), opts.q2);
    case IntegralId::Q3:
      return q2_operator(spec.coupling("lambda") * radius(-1), spec.coupling("alpha"), opts.q2);
    case IntegralId::Q4: return spin_orbit() * DiffOp::reflection();
    case IntegralId::Q5: {
      ScalarExpr f = spec.id == ModelId::H3 ? spec.coupling("lambda") * radius(-1) : radial_or_bound(spec, "f");
      return q5_operator(f, spec.coupling("alpha"), opts.q5);
    }
    case IntegralId::R1:
    case IntegralId::R2:
    case IntegralId::R3:
    {
      ScalarExpr c = spec.coupling("lambda");
      if (spec.form == Transcription::corrected) c = kHalf * c;
      return lenz_component(static_cast<int>(id) - static_cast<int>(IntegralId::R1), c);
    }
    case IntegralId::D: return dilation();
    case IntegralId::K: return mult(kHalf * radius(2));
  }
  throw ModelError("unknown integral");
}

}  // namespace sis

// ---------------------------------------------------------------- relations

namespace sis {

namespace {

RelationItem item(std::string label, std::string citation, DiffOp residual, bool asserted = true) {
  RelationItem it;
  it.label = std::move(label);
  it.citation = std::move(citation);
  it.zero = residual.is_zero();
  it.residual = std::move(residual);
  it.asserted = asserted;
  return it;
}

ScalarExpr lam() { return param("lambda"); }
ScalarExpr alf() { return param("alpha"); }
const char* axis_name(int a) { return a == 0 ? "1" : (a == 1 ? "2" : "3"); }

ModelSpec spec_of(ModelId id, Transcription form = Transcription::corrected) {
  ModelSpec s = ModelSpec::symbolic(id);
  s.form = form;
  return s;
}

// Spectators of the conformal algebra: H1 with phi = alpha / x^2.
ModelSpec conformal_h1() {
  ModelSpec s = spec_of(ModelId::H1);
  s.bindings["phi"] = alf() * radius(-2);
  return s;
}

RelationReport sq_relation(const std::string& id) {
  RelationReport rep{id, {}};
  DiffOp J2 = j_squared();
  DiffOp quarter = mult(ScalarExpr(rational(1, 4)));
  if (id == "sq1") {
    auto s = spec_of(ModelId::H1);
    DiffOp Q1 = build_integral(IntegralId::Q1, s);
    rep.items.push_back(item("Q1^2 = J^2 + lambda^2 + 1/4", "sq1", Q1 * Q1 - J2 - mult(lam() * lam()) - quarter));
  } else if (id == "sq2") {
    auto s = spec_of(ModelId::H2);
    DiffOp Q2 = build_integral(IntegralId::Q2, s);
    DiffOp H2 = build_hamiltonian(s);
    rep.items.push_back(item("Q2^2 = (J^2 + 1/4) H2 + alpha^2/4", "sq2",
                             Q2 * Q2 - (J2 + quarter) * H2 - mult(ScalarExpr(rational(1, 4)) * alf() * alf())));
  } else if (id == "sq3") {
    auto s = spec_of(ModelId::H3);
    DiffOp Q3 = build_integral(IntegralId::Q3, s);
    DiffOp H3 = build_hamiltonian(s);
    rep.items.push_back(item("Q3^2 = (J^2 + 1/4) H3 + alpha^2/4", "sq3",
                             Q3 * Q3 - (J2 + quarter) * H3 - mult(ScalarExpr(rational(1, 4)) * alf() * alf())));
  } else {
    auto s = spec_of(ModelId::H3);
    DiffOp Q1 = build_integral(IntegralId::Q1, s);
    DiffOp Q3 = build_integral(IntegralId::Q3, s);
    if (id == "sq4a") rep.items.push_back(item("Q1 Q3 + Q3 Q1 = alpha lambda", "sq4", anticommutator(Q1, Q3) - mult(alf() * lam())));
    if (id == "sq4b") rep.items.push_back(item("[Q1^2, Q3] = 0", "sq4", commutator(Q1 * Q1, Q3)));
    if (id == "sq4c") rep.items.push_back(item("[Q3^2, Q1] = 0", "sq4", commutator(Q3 * Q3, Q1)));
  }
  return rep;
}

RelationReport conformal_relations() {
  RelationReport rep{"CA-all", {}};
  auto s = conformal_h1();
  DiffOp H = build_hamiltonian(s);
  DiffOp D = build_integral(IntegralId::D, s);
  DiffOp K = build_integral(IntegralId::K, s);
  DiffOp Q1 = build_integral(IntegralId::Q1, s);
  std::array<DiffOp, 3> J{total_momentum(0), total_momentum(1), total_momentum(2)};
  const ScalarExpr i(kI);

  rep.items.push_back(item("[H1,D] = -2i H1", "CA", commutator(H, D) + ScalarExpr(Gauss(0, 2)) * H));
  rep.items.push_back(item("[K,H1] = 2i D", "CA", commutator(K, H) - ScalarExpr(Gauss(0, 2)) * D));
  rep.items.push_back(item("[K,H1] = i D (as printed)", "CA", commutator(K, H) - i * D, false));
  rep.items.push_back(item("[K,D] = 2i K", "CA", commutator(K, D) - ScalarExpr(Gauss(0, 2)) * K));
  for (int a = 0; a < 3; ++a) {
    int b = (a + 1) % 3, c = (a + 2) % 3;
    rep.items.push_back(item(std::string("[J") + axis_name(a) + ",J" + axis_name(b) + "] = i J" + axis_name(c), "CA",
                             commutator(J[a], J[b]) - i * J[c]));
  }
  // "all the other commutators are trivial"
  const std::vector<std::pair<std::string, const DiffOp*>> gens{{"H1", &H}, {"D", &D}, {"K", &K}, {"Q1", &Q1}};
  for (int a = 0; a < 3; ++a)
    for (const auto& [name, op] : gens)
      rep.items.push_back(item("[" + name + ",J" + axis_name(a) + "] = 0", "CA", commutator(*op, J[a])));
  rep.items.push_back(item("[Q1,H1] = 0", "CA", commutator(Q1, H)));
  rep.items.push_back(item("[Q1,D] = 0", "CA", commutator(Q1, D)));
  rep.items.push_back(item("[Q1,K] = 0", "CA", commutator(Q1, K)));
  return rep;
}

RelationReport core_relations() {
  RelationReport rep{"core-all", {}};
  auto s = spec_of(ModelId::H4);
  DiffOp H = build_hamiltonian(s);
  std::array<DiffOp, 3> J{total_momentum(0), total_momentum(1), total_momentum(2)};
  std::array<DiffOp, 3> R{build_integral(IntegralId::R1, s), build_integral(IntegralId::R2, s),
                          build_integral(IntegralId::R3, s)};
  const ScalarExpr i(kI);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      int c = 3 - a - b;
      int e = (a == b) ? 0 : levi(a, b, c);
      std::string ab = std::string(axis_name(a)) + "," + axis_name(b);
      DiffOp rj = commutator(R[a], J[b]);
      DiffOp jj = commutator(J[a], J[b]);
      DiffOp rr = commutator(R[a], R[b]);
      DiffOp rr_unit = rr;
      if (e != 0) {
        rj -= ScalarExpr(e) * i * R[c];
        jj -= ScalarExpr(e) * i * J[c];
        rr += ScalarExpr(2 * e) * i * (J[c] * H);
        rr_unit += ScalarExpr(e) * i * (J[c] * H);
      }
      std::string ra = std::string("R") + axis_name(a), rb = std::string("R") + axis_name(b);
      if (a < b) rep.items.push_back(item("[J" + std::string(axis_name(a)) + ",J" + axis_name(b) + "] = i eps J", "core", jj));
      rep.items.push_back(item("[" + ra + ",J" + axis_name(b) + "] = i eps R", "core", rj));
      if (a < b) {
        rep.items.push_back(item("[" + ra + "," + rb + "] = -2i eps J H4", "core", rr));
        rep.items.push_back(item("[" + ra + "," + rb + "] = -i eps J H4", "core", rr_unit, false));
      }
    }
  for (int a = 0; a < 3; ++a)
    rep.items.push_back(item(std::string("[H4,R") + axis_name(a) + "] = 0", "H4", commutator(H, R[a])));
  return rep;
}

RelationReport scr_relations() {
  RelationReport rep{"SCR", {}};
  const std::vector<std::pair<IntegralId, ModelId>> pairs{
      {IntegralId::Q1, ModelId::H1}, {IntegralId::Q2, ModelId::H2}, {IntegralId::Q3, ModelId::H3}};
  for (const auto& [q, m] : pairs) {
    DiffOp Q = build_integral(q, spec_of(m));
    for (int a = 0; a < 3; ++a)
      rep.items.push_back(
          item("[" + integral_name(q) + ",J" + axis_name(a) + "] = 0", "SCR", commutator(Q, total_momentum(a))));
  }
  return rep;
}

RelationReport hj_relations() {
  RelationReport rep{"H-J-commute", {}};
  for (int a = 0; a < 3; ++a)
    rep.items.push_back(item(std::string("[-Laplacian,J") + axis_name(a) + "] = 0", "om", commutator(-laplacian(), total_momentum(a))));
  for (auto id : {ModelId::H1, ModelId::H2, ModelId::H3, ModelId::H4})
    for (auto form : {Transcription::corrected, Transcription::printed}) {
      if (form == Transcription::printed && id == ModelId::H2) continue;  // no separate printed form
      DiffOp H = build_hamiltonian(spec_of(id, form));
      for (int a = 0; a < 3; ++a)
        rep.items.push_back(item("[" + model_name(id) + (form == Transcription::printed ? "(printed)" : "") + ",J" +
                                     axis_name(a) + "] = 0",
                                 "om", commutator(H, total_momentum(a))));
    }
  return rep;
}

RelationReport q4_relations() {
  RelationReport rep{"Q4-commutes", {}};
  for (auto id : {ModelId::H1, ModelId::H2, ModelId::H3, ModelId::H4}) {
    auto s = spec_of(id);
    rep.items.push_back(item("[" + model_name(id) + ",Q4] = 0", "P", commutator(build_hamiltonian(s), build_integral(IntegralId::Q4, s))));
  }
  return rep;
}

RelationReport q5_relations() {
  RelationReport rep{"Q5-commutes", {}};
  const std::vector<std::pair<Q5Variant, std::string>> variants{
      {Q5Variant::printed, "(sigma.p + f) P + alpha sigma.n"},
      {Q5Variant::i_sigma_p, "(i sigma.p + f) P + alpha sigma.n"},
      {Q5Variant::i_sigma_p_half, "(i sigma.p + f) P + (alpha/2) sigma.n"},
      {Q5Variant::i_sigma_p_bare, "(i sigma.p + f) P"}};
  for (auto id : {ModelId::H2, ModelId::H3}) {
    auto s = spec_of(id);
    DiffOp H = build_hamiltonian(s);
    for (const auto& [v, text] : variants) {
      IntegralOptions o;
      o.q5 = v;
      rep.items.push_back(item("[" + model_name(id) + ", " + text + "] = 0", "Q5",
                               commutator(H, build_integral(IntegralId::Q5, s, o)), v == Q5Variant::printed));
    }
    // The only local reading that commutes needs alpha = 0.
    auto s0 = s;
    s0.params["alpha"] = ScalarExpr(0);
    IntegralOptions o;
    o.q5 = Q5Variant::i_sigma_p_bare;
    rep.items.push_back(item("[" + model_name(id) + "|alpha=0, (i sigma.p + f) P] = 0", "Q5",
                             commutator(build_hamiltonian(s0), build_integral(IntegralId::Q5, s0, o)), false));
  }
  return rep;
}

}  // namespace

bool RelationReport::zero() const {
  for (const auto& it : items)
    if (it.asserted && !it.zero) return false;
  return true;
}

const std::vector<std::string>& relation_ids() {
  static const std::vector<std::string> ids{"sq1",    "sq2",      "sq3", "sq4a",        "sq4b",        "sq4c",
                                            "CA-all", "core-all", "SCR", "H-J-commute", "Q4-commutes", "Q5-commutes"};
  return ids;
}

RelationReport check_relation(const std::string& id) {
  if (id.rfind("sq", 0) == 0 && std::find(relation_ids().begin(), relation_ids().end(), id) != relation_ids().end())
    return sq_relation(id);
  if (id == "CA-all") return conformal_relations();
  if (id == "core-all") return core_relations();
  if (id == "SCR") return scr_relations();
  if (id == "H-J-commute") return hj_relations();
  if (id == "Q4-commutes") return q4_relations();
  if (id == "Q5-commutes") return q5_relations();
  throw ModelError("unknown relation id '" + id + "'");
}

}  // namespace sis

// ---------------------------------------------------------------- catalog matrix

namespace sis {

namespace {

std::string pair_label(ModelId m, const std::string& q, const std::string& suffix = "") {
  return "[" + model_name(m) + suffix + "," + q + "] = 0";
}

DiffOp pair_commutator(ModelId m, IntegralId q, Transcription form = Transcription::corrected,
                       const IntegralOptions& opts = {}) {
  ModelSpec s = spec_of(m, form);
  return commutator(build_hamiltonian(s), build_integral(q, s, opts));
}

}  // namespace

RelationReport catalog_matrix() {
  RelationReport rep{"catalog", {}};
  auto add = [&](ModelId m, IntegralId q, bool asserted = true) {
    rep.items.push_back(item(pair_label(m, integral_name(q)), model_name(m), pair_commutator(m, q), asserted));
  };
  add(ModelId::H1, IntegralId::Q1);
  add(ModelId::H2, IntegralId::Q2);
  add(ModelId::H3, IntegralId::Q1);
  add(ModelId::H3, IntegralId::Q3);
  for (auto r : {IntegralId::R1, IntegralId::R2, IntegralId::R3}) add(ModelId::H4, r);
  for (auto m : {ModelId::H1, ModelId::H2, ModelId::H3, ModelId::H4}) {
    for (auto j : {IntegralId::J1, IntegralId::J2, IntegralId::J3}) add(m, j);
    add(m, IntegralId::Q4);
  }
  add(ModelId::H2, IntegralId::Q5);
  add(ModelId::H3, IntegralId::Q5);

  // Alternative Q2 orderings, recorded for the conformance note.
  for (auto [o, name] : {std::pair{Q2Ordering::reversed, "q2(reversed)"}, std::pair{Q2Ordering::symmetrized, "q2(symmetrized)"}}) {
    IntegralOptions opts;
    opts.q2 = o;
    rep.items.push_back(item(pair_label(ModelId::H2, name), "H2", pair_commutator(ModelId::H2, IntegralId::Q2, Transcription::corrected, opts), false));
  }
  // Printed transcriptions.
  rep.items.push_back(item(pair_label(ModelId::H1, "q1", "(printed)"), "H1",
                           pair_commutator(ModelId::H1, IntegralId::Q1, Transcription::printed), false));
  rep.items.push_back(item(pair_label(ModelId::H3, "q1", "(printed)"), "H3",
                           pair_commutator(ModelId::H3, IntegralId::Q1, Transcription::printed), false));
  rep.items.push_back(item(pair_label(ModelId::H3, "q3", "(printed)"), "H3",
                           pair_commutator(ModelId::H3, IntegralId::Q3, Transcription::printed), false));
  rep.items.push_back(item(pair_label(ModelId::H4, "r1(printed)"), "H4",
                           pair_commutator(ModelId::H4, IntegralId::R1, Transcription::printed), false));
  return rep;
}

std::vector<ConformanceNote> catalog_conformance() {
  std::vector<ConformanceNote> notes;
  auto zero = [](const DiffOp& d) { return d.is_zero(); };

  notes.push_back({"H1 dipole sign", "H1 = -Lap + lambda sigma.x/x^3 + phi", "H1 = -Lap - lambda sigma.x/x^3 + phi",
                   zero(pair_commutator(ModelId::H1, IntegralId::Q1, Transcription::printed)),
                   zero(pair_commutator(ModelId::H1, IntegralId::Q1)),
                   "Q1 = sigma.L + 1 + lambda sigma.n commutes only with the minus sign; it also makes H3 = H2|f=lambda/x."});
  notes.push_back({"H3 dipole term", "(lambda/x) sigma.n", "-(lambda/x^2) sigma.n",
                   zero(pair_commutator(ModelId::H3, IntegralId::Q3, Transcription::printed)),
                   zero(pair_commutator(ModelId::H3, IntegralId::Q3)),
                   "H3 must equal H2 with f = lambda/x, whose sigma.n term is f' = -lambda/x^2."});

  IntegralOptions rev, sym;
  rev.q2 = Q2Ordering::reversed;
  sym.q2 = Q2Ordering::symmetrized;
  bool printed_q2 = zero(pair_commutator(ModelId::H2, IntegralId::Q2));
  bool rev_q2 = zero(pair_commutator(ModelId::H2, IntegralId::Q2, Transcription::corrected, rev));
  bool sym_q2 = zero(pair_commutator(ModelId::H2, IntegralId::Q2, Transcription::corrected, sym));
  notes.push_back({"Q2 ordering", "(i sigma.p + f)(sigma.L + 1) + (alpha/2) sigma.n", "printed ordering", printed_q2, printed_q2,
                   std::string("reversed ordering ") + (rev_q2 ? "commutes" : "fails") + ", symmetrized ordering " +
                       (sym_q2 ? "commutes" : "fails")});

  notes.push_back({"R coefficient", "R = (p x J - J x p)/2 + lambda x (sigma.x)/x^2",
                   "R = (p x J - J x p)/2 + (lambda/2) x (sigma.x)/x^2",
                   zero(pair_commutator(ModelId::H4, IntegralId::R1, Transcription::printed)),
                   zero(pair_commutator(ModelId::H4, IntegralId::R1)),
                   "Unique rational normalization commuting with H4 (linear solve over the candidate basis)."});

  auto core = core_relations();
  bool printed_core = true, adopted_core = true;
  for (const auto& it : core.items) {
    if (it.label.find("-2i eps J H4") != std::string::npos) printed_core = printed_core && it.zero;
    if (it.label.find("-i eps J H4") != std::string::npos) adopted_core = adopted_core && it.zero;
  }
  notes.push_back({"[R_a,R_b]", "-2i eps_abc J_c H4", "-i eps_abc J_c H4", printed_core, adopted_core,
                   "With the commuting R the coefficient is -i; -2i would need R scaled by sqrt(2)."});

  auto ca = conformal_relations();
  bool printed_ca = false, adopted_ca = false;
  for (const auto& it : ca.items) {
    if (it.label == "[K,H1] = i D (as printed)") printed_ca = it.zero;
    if (it.label == "[K,H1] = 2i D") adopted_ca = it.zero;
  }
  notes.push_back({"[K,H1]", "i D", "2i D", printed_ca, adopted_ca,
                   "With D = (x.p + p.x)/2 and K = x^2/2; [H1,D] = -2i H1 fixes the normalization of D."});

  bool q5_printed = zero(pair_commutator(ModelId::H2, IntegralId::Q5));
  ModelSpec s0 = spec_of(ModelId::H2);
  s0.params["alpha"] = ScalarExpr(0);
  IntegralOptions bare;
  bare.q5 = Q5Variant::i_sigma_p_bare;
  bool q5_alpha0 = commutator(build_hamiltonian(s0), build_integral(IntegralId::Q5, s0, bare)).is_zero();
  notes.push_back({"Q5", "(sigma.p + f) P + alpha sigma.n", "none local for alpha != 0", q5_printed, false,
                   std::string("(i sigma.p + f) P ") + (q5_alpha0 ? "commutes" : "fails") +
                       " at alpha = 0; for alpha != 0 the sector image of the integral is Q2 Q4^-1, which is not a "
                       "differential operator."});
  return notes;
}

}  // namespace sis
