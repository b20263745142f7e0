// Randomized cross-check of the determining equations against the operator
// commutator: integer combinations of catalog integrals (solutions) and
// single-slot perturbations of them (generically not solutions).
#include "sis/detsys.hpp"
#include "sis/models.hpp"

#include <random>

namespace sis {

FieldSet fields_of(const DiffOp& H) {
  const MatrixExpr m = coefficient(H, OpKey{});
  FieldSet f;
  f.f0 = m.c[0];
  for (int a = 0; a < 3; ++a) f.f[a] = m.c[a + 1];
  return f;
}

namespace {

std::vector<IntegralId> integrals_of(ModelId m) {
  std::vector<IntegralId> v{IntegralId::J1, IntegralId::J2, IntegralId::J3};
  switch (m) {
    case ModelId::H1: v.push_back(IntegralId::Q1); break;
    case ModelId::H2: v.push_back(IntegralId::Q2); break;
    case ModelId::H3: v.push_back(IntegralId::Q1); v.push_back(IntegralId::Q3); break;
    case ModelId::H4: for (auto r : {IntegralId::R1, IntegralId::R2, IntegralId::R3}) v.push_back(r); break;
  }
  return v;
}

ScalarExpr random_term(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 5), axis(0, 2), coef(1, 2), sign(0, 1);
  const int c = coef(rng) * (sign(rng) ? 1 : -1);
  switch (kind(rng)) {
    case 0: return ScalarExpr(c);
    case 1: return ScalarExpr(c) * coord(axis(rng));
    case 2: return ScalarExpr(c) * coord(axis(rng)) * coord(axis(rng));
    case 3: return ScalarExpr(c) * radius(-1);
    case 4: return ScalarExpr(c) * param("alpha");
    default: return ScalarExpr(c) * coord(axis(rng)) * radius(-2);
  }
}

}  // namespace

std::vector<EquivalenceSample> randomized_equivalence(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const ModelId models[4] = {ModelId::H1, ModelId::H2, ModelId::H3, ModelId::H4};
  std::uniform_int_distribution<int> pick_model(0, 3), small(-2, 2), coin(0, 1), mu_d(0, 3), slot_d(0, 2),
      ax(0, 2);
  std::vector<EquivalenceSample> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const ModelId m = models[pick_model(rng)];
    const ModelSpec spec = ModelSpec::symbolic(m);
    const FieldSet f = fields_of(build_hamiltonian(spec));
    DiffOp q(ScalarExpr(small(rng)));
    std::string label = model_name(m) + ": ";
    for (IntegralId id : integrals_of(m)) {
      const int c = small(rng);
      if (c == 0) continue;
      q += ScalarExpr(c) * build_integral(id, spec);
      label += (c > 0 ? "+" : "") + std::to_string(c) + " " + integral_name(id) + " ";
    }
    CoeffSet c = extract_coefficients(q);
    if (coin(rng)) {
      const int mu = mu_d(rng), a = ax(rng), b = ax(rng);
      const ScalarExpr t = random_term(rng);
      switch (slot_d(rng)) {
        case 0:
          c.set_phi(mu, a, b, c.phi[mu][a][b] + t);
          label += "+ perturbed Phi^" + std::to_string(mu) + std::to_string(a + 1) + std::to_string(b + 1);
          break;
        case 1:
          c.lambda[mu][a] += t;
          label += "+ perturbed Lambda^" + std::to_string(mu) + std::to_string(a + 1);
          break;
        default:
          c.omega[mu] += t;
          label += "+ perturbed Omega^" + std::to_string(mu);
      }
    }
    const Crosscheck x = crosscheck_commutator(c, f);
    out.push_back({label, x.residuals_zero, x.commutator_zero, x.forms_equal});
  }
  return out;
}

}  // namespace sis
