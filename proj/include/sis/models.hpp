// Catalog of the rotationally invariant Hamiltonians H1..H4, their integrals
// of motion, and the algebraic relations among them.
#pragma once

#include "sis/diff_op.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sis {

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ModelId { H1, H2, H3, H4 };

// `printed` reproduces the formulas exactly as typeset; `corrected` uses the
// dipole sign under which the printed integrals commute (see README).
enum class Transcription { corrected, printed };

struct ModelSpec {
  ModelId id = ModelId::H1;
  // "lambda", "alpha", "omega": symbolic parameters or rational constants.
  std::map<std::string, ScalarExpr> params;
  // Concrete radial functions for "f" (H2) or "phi" (H1); absent = abstract.
  RadialBindings bindings;
  bool allow_zero_dipole = false;
  Transcription form = Transcription::corrected;
  // Energies are in the rescaled units E^ = 2 m E.
  bool rescaled_units = true;

  // All couplings symbolic, radial functions abstract.
  static ModelSpec symbolic(ModelId id);
  ScalarExpr coupling(const std::string& name) const;
};

enum class IntegralId { J1, J2, J3, Q1, Q2, Q3, Q4, Q5, R1, R2, R3, D, K };

enum class Q2Ordering { printed, reversed, symmetrized };

// Q5 readings examined by the conformance checks.
enum class Q5Variant {
  printed,         // (sigma.p + f) P + alpha sigma.n
  i_sigma_p,       // (i sigma.p + f) P + alpha sigma.n
  i_sigma_p_half,  // (i sigma.p + f) P + (alpha/2) sigma.n
  i_sigma_p_bare,  // (i sigma.p + f) P
};

struct IntegralOptions {
  Q2Ordering q2 = Q2Ordering::printed;
  Q5Variant q5 = Q5Variant::printed;
};

std::optional<ModelId> parse_model(std::string_view s);
std::optional<IntegralId> parse_integral(std::string_view s);
std::string model_name(ModelId id);
std::string integral_name(IntegralId id);

// Building blocks.
DiffOp orbital_momentum(int a);  // L_a = (x x p)_a
DiffOp total_momentum(int a);    // J_a = L_a + sigma_a / 2
DiffOp j_squared();
DiffOp spin_orbit();             // sigma.L + 1
DiffOp sigma_dot_p();
DiffOp dilation();               // (x.p + p.x) / 2

DiffOp build_hamiltonian(const ModelSpec& spec);
DiffOp build_integral(IntegralId id, const ModelSpec& spec, const IntegralOptions& opts = {});
bool compatible(IntegralId id, ModelId model);

// ---------------------------------------------------------------- relations

struct RelationItem {
  std::string label;
  std::string citation;
  DiffOp residual;  // lhs - rhs
  bool zero = false;
  bool asserted = true;  // false for printed forms kept for the conformance record
};

struct RelationReport {
  std::string id;
  std::vector<RelationItem> items;
  bool zero() const;  // all asserted items vanish
};

const std::vector<std::string>& relation_ids();
RelationReport check_relation(const std::string& id);

// Commutators [H, Q] for every catalog pair, abstract f and phi.  Ordering
// variants and printed transcriptions appear as non-asserted items.
RelationReport catalog_matrix();

// Machine-readable record of where the printed formulas and the verified ones
// part ways.
struct ConformanceNote {
  std::string item;
  std::string printed;
  std::string adopted;
  bool printed_holds = false;
  bool adopted_holds = false;
  std::string detail;
};

std::vector<ConformanceNote> catalog_conformance();

}  // namespace sis
