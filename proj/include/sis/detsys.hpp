// Determining equations for second-order integrals of motion
//   Q = 1/4 s^mu {{Phi^{mu ab}, d_a}, d_b} + i s^mu {Lambda^{mu a}, d_a} + s^mu Omega^mu
// of H = -Laplacian + sigma.F + F^0, the Killing families that solve their
// leading part, and the registry of solved (or obstructed) coefficient
// families.
#pragma once

#include "sis/diff_op.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sis {

struct DetsysError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CoeffSet {
  // phi[mu][a][b] (symmetric in a, b), lambda[mu][a], omega[mu]; mu = 0..3.
  std::array<std::array<std::array<ScalarExpr, 3>, 3>, 4> phi{};
  std::array<std::array<ScalarExpr, 3>, 4> lambda{};
  std::array<ScalarExpr, 4> omega{};

  bool is_zero() const;
  bool symmetric() const;
  void set_phi(int mu, int a, int b, const ScalarExpr& v);  // sets both (a,b) and (b,a)
};

CoeffSet operator+(const CoeffSet& a, const CoeffSet& b);
CoeffSet operator*(const ScalarExpr& s, const CoeffSet& c);
CoeffSet map_coefficients(const CoeffSet& c, const std::function<ScalarExpr(const ScalarExpr&)>& f);
CoeffSet substitute_param(const CoeffSet& c, std::string_view name, const ScalarExpr& value);
CoeffSet substitute_radial(const CoeffSet& c, const RadialBindings& b);

struct FieldSet {
  ScalarExpr f0;
  std::array<ScalarExpr, 3> f{};

  // Rotational fields F^0 = phi0(x), F^a = x^a phi1(x).
  static FieldSet rotational(const ScalarExpr& phi0, const ScalarExpr& phi1);
};

FieldSet substitute_param(const FieldSet& f, std::string_view name, const ScalarExpr& value);
FieldSet substitute_radial(const FieldSet& f, const RadialBindings& b);

// One scalar equation: the real or imaginary part of the coefficient of
// sigma^mu d^(d1,d2,d3) in [H, Q].  Labels follow the order/matrix split
//   order 3: e1;  order 2: e11 (sigma^0), e2 (sigma^n);
//   order 1: e5 (sigma^0), e3 (sigma^n);  order 0: e6 (sigma^0), e4 (sigma^n).
struct Residual {
  std::string eq;
  std::array<int, 4> indices{};  // mu, d1, d2, d3
  std::string part;              // "re" | "im"
  ScalarExpr value;
  bool zero() const { return value.is_zero(); }
};

// Every equation with a nonzero residual (all residuals vanish iff the list
// is empty); with `include_zero` the vanishing ones are listed too.
std::vector<Residual> residuals(const CoeffSet& c, const FieldSet& f, bool include_zero = false);
bool residuals_vanish(const CoeffSet& c, const FieldSet& f);
std::string residual_label(const Residual& r);

// Operators assembled from the coefficient and field sets.
DiffOp assemble_integral(const CoeffSet& c);
DiffOp assemble_hamiltonian(const FieldSet& f);
// The residual system re-expressed as an operator; equals [H, Q].
DiffOp residual_operator(const CoeffSet& c, const FieldSet& f);

// Inverse of assemble_integral for parity-free operators of order <= 2.
CoeffSet extract_coefficients(const DiffOp& q);

struct Crosscheck {
  bool residuals_zero = false;
  bool commutator_zero = false;
  bool forms_equal = false;  // residual_operator == commutator(H, Q)
  bool agree() const { return residuals_zero == commutator_zero && forms_equal; }
};

Crosscheck crosscheck_commutator(const CoeffSet& c, const FieldSet& f);

// F^0 and F^a read off the zeroth-order part of a Hamiltonian -Lap + sigma.F + F^0.
FieldSet fields_of(const DiffOp& H);

// Seeded random ansaetze: integer combinations of the catalog integrals of a
// model, half of them with one coefficient slot perturbed, each checked both
// through the determining equations and through [H, Q].
struct EquivalenceSample {
  std::string label;
  bool residuals_zero = false;
  bool commutator_zero = false;
  bool forms_equal = false;
  bool agree() const { return residuals_zero == commutator_zero && forms_equal; }
};

std::vector<EquivalenceSample> randomized_equivalence(int count, std::uint64_t seed);

// Pointwise linear obstruction certificate.  The residuals are evaluated at
// integer points with integer radius (and, when the shifted radius occurs,
// the integer value s = sqrt(r^2 + omega) supplied by the caller).  Jet
// products at each point and parameter products are independent unknowns,
// which only weakens the system.  `forced` is true when the span of the
// equations contains the functional `target`, so every solution has
// target = 0; `inconsistent` when it contains the constant 1.  With
// `prolong` = p the first p x-derivatives of every residual are added as
// equations (they vanish identically too), which ties jets of successive
// orders together.
struct CertPoint {
  std::array<long, 3> x{};
  long s = 0;
};

struct LinearCertificate {
  bool forced = false;
  bool inconsistent = false;
  std::size_t equations = 0;
  std::size_t unknowns = 0;
  std::size_t rank = 0;
};

const std::vector<CertPoint>& default_cert_points();  // (1,2,2), (2,3,6), (1,4,8)
LinearCertificate pointwise_certificate(const std::vector<Residual>& eqs, const ScalarExpr& target,
                                        const std::vector<CertPoint>& points = default_cert_points(),
                                        int prolong = 0);

// ---------------------------------------------------------------- Killing families

struct KillingFamily {
  std::string kind;
  std::string parity;  // printed label: "even" | "odd"
  std::string block;   // "0" for Phi^0/Lambda^0, "m" for Phi^m/Lambda^m
  CoeffSet coeffs;     // free parameters are symbolic
  std::vector<std::string> params;
};

const std::vector<std::string>& killing_kinds();
KillingFamily killing_family(const std::string& kind);
// +1 / -1 if every nonzero entry of the block is even / odd under x -> -x, 0 otherwise.
int block_parity(const CoeffSet& c, const std::string& block);

// ---------------------------------------------------------------- appendix registry

// One step of a case: a substitution whose residuals are expected to vanish
// (or not), a linear certificate that forces a parameter to zero or shows
// inconsistency, or an operator identity against the model catalog.
// Non-asserted stages record printed variants for the conformance notes and
// do not affect the verdict.
struct CaseStage {
  std::string label;
  std::string kind = "residuals";      // "residuals" | "certificate" | "identity"
  std::vector<std::string> equations;  // empty = all
  bool expected = true;                // residuals zero / certificate established / identity holds
  bool holds = false;
  bool asserted = true;
  std::vector<Residual> residuals;     // residual stages: every selected residual
  std::string claim;                   // certificate stages, e.g. "forces nu2 = 0"
  LinearCertificate certificate;
  bool ok() const { return !asserted || holds == expected; }
  std::size_t nonzero() const;
};

struct CaseReport {
  std::string id;
  std::string citation;
  std::string obstruction;  // equation carrying the obstruction, empty for existence cases
  std::vector<CaseStage> stages;
  std::string conclusion;
  bool ok() const;
};

const std::vector<std::string>& appendix_case_ids();
CaseReport verify_appendix_case(const std::string& id);

}  // namespace sis
