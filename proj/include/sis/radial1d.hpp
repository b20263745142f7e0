// Radial reduction of the rotationally invariant models: symbolic one-variable
// operators (with 2x2 channel matrices), the supersymmetric factorization of
// the Coulomb-type radial Hamiltonians, closed-form spectra and wavefunctions,
// and the numeric radial problems used as oracles.
//
// Conventions.  psi = (1/r) [u+(r) Omega_+ + u-(r) Omega_-] with
// (sigma.L + 1) Omega_pm = pm k Omega_pm, k = j + 1/2, and sigma.n Omega_pm =
// Omega_mp.  Channel matrices are written over {1, sigma_1, sigma_2, sigma_3}
// acting on (u+, u-).  Decoupled single-channel problems are labelled by the
// branch eps = +-1 of nu = eps mu, for which the centrifugal term is
// nu (nu + 1) (minus lambda^2 for H1); nu is minus the Q1 eigenvalue.
#pragma once

#include "sis/angular.hpp"
#include "sis/diff_op.hpp"
#include "sis/models.hpp"
#include "sis/numerics.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sis {

struct RadialError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- operators

// sum_k M_k(r) (d/dr)^k, coefficients to the left.
class Radial1DOp {
 public:
  Radial1DOp() = default;
  Radial1DOp(const MatrixExpr& m);
  Radial1DOp(const ScalarExpr& s) : Radial1DOp(MatrixExpr(s)) {}

  static Radial1DOp d(int order = 1);

  const std::map<int, MatrixExpr>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int order() const;
  bool operator==(const Radial1DOp& o) const { return terms_ == o.terms_; }

  Radial1DOp& operator+=(const Radial1DOp& o);
  Radial1DOp& operator-=(const Radial1DOp& o);
  void add(int order, const MatrixExpr& m);

 private:
  std::map<int, MatrixExpr> terms_;
};

Radial1DOp operator+(const Radial1DOp& a, const Radial1DOp& b);
Radial1DOp operator-(const Radial1DOp& a, const Radial1DOp& b);
Radial1DOp operator-(const Radial1DOp& a);
Radial1DOp operator*(const ScalarExpr& s, const Radial1DOp& a);
Radial1DOp operator*(const MatrixExpr& m, const Radial1DOp& a);
Radial1DOp compose(const Radial1DOp& a, const Radial1DOp& b);
inline Radial1DOp operator*(const Radial1DOp& a, const Radial1DOp& b) { return compose(a, b); }
Radial1DOp anticommutator(const Radial1DOp& a, const Radial1DOp& b);
Radial1DOp commutator(const Radial1DOp& a, const Radial1DOp& b);
Radial1DOp map_coefficients(const Radial1DOp& a, const std::function<ScalarExpr(const ScalarExpr&)>& f);
Radial1DOp substitute_param(const Radial1DOp& a, std::string_view name, const ScalarExpr& value);
Radial1DOp substitute_radial(const Radial1DOp& a, const RadialBindings& b);
std::string to_string(const Radial1DOp& a);

// Symbolic sector images in the channel basis, with parameters "k", "lambda",
// "alpha" and abstract radial functions "f" (H2, Q2) and "phi" (H1).
//   H1, H2, H3: Hamiltonians;  Q1: dipole-extended spin-orbit operator;
//   Q2: the first-order-in-p integral of H2;  Q3: Q2 with f = lambda / r;
//   sigma.p: Dirac-type operator.
Radial1DOp sector_operator(const std::string& name);

struct IdentityCheck {
  std::string label;
  std::string citation;
  bool asserted = true;
  bool expect_zero = true;
  Radial1DOp residual;
  bool zero() const { return residual.is_zero(); }
  bool ok() const { return !asserted || zero() == expect_zero; }
};

// ---------------------------------------------------------------- factorization

// Coulomb-type radial Hamiltonian -d^2 + s (s - 1) / x^2 - alpha / x with
// the small-x exponent s = |nu| + (eps + 1) / 2 (so s (s - 1) = nu (nu + 1)),
// symbolic in s and alpha.
struct Factorization {
  Radial1DOp a, adag;  // d/dx + W, -d/dx + W
  ScalarExpr W, c;
  Radial1DOp H;
};

enum class FactorForm { derived, printed };

Factorization factorize(FactorForm form = FactorForm::derived);
// The same at numeric s (= |nu| + (eps + 1)/2) and alpha.
Factorization factorize(const Rational& s, const Rational& alpha, FactorForm form = FactorForm::derived);
Radial1DOp coulomb_radial_hamiltonian(const ScalarExpr& s, const ScalarExpr& alpha);

// Factorization, intertwining, the matrix superpotential of the two-channel
// system and its zero mode; printed variants as non-asserted items.
std::vector<IdentityCheck> susy_identities();

// Anticommutators of the rescaled Q3, Q4 in the sector representation, for
// the printed rescaling and for the one that closes,
//   Q3~ = Q3/k - alpha lambda Q1/(2 k mu^2),  Q4~ = Q4/(k mu),
//   H~ = H3 + alpha^2/(4 mu^2).
// With j unset the check is symbolic in k = j + 1/2 as well; lambda^2 is
// eliminated via lambda^2 = mu^2 - k^2.  `perturb` shifts the lambda inside
// Q3 (negative control).
std::vector<IdentityCheck> superalgebra_check(const std::optional<Rational>& j = std::nullopt, bool perturb = false);

// lambda^2 -> mu^2 - k^2 normal form.
ScalarExpr reduce_mu(const ScalarExpr& e);
Radial1DOp reduce_mu(const Radial1DOp& a);

// E = E^ / (2m) against the printed E = -m alpha^2 / (2 N^2): holds when the
// alpha of the rescaled Hamiltonian is 2m times the physical coupling.
struct EnergyConvention {
  bool holds_rescaled_coupling = false;  // alpha = 2 m a
  bool holds_same_coupling = false;      // alpha used unchanged in both formulas
};
EnergyConvention energy_convention_check();

// ---------------------------------------------------------------- numeric problems

// phi for H1: "coulomb": -alpha/x + beta/x^2;  "oscillator": omega^2 x^2 + beta/x^2.
// f for H2: "inverse": lambda / x;  "screened": lambda exp(-x) / x;  "zero".
struct RadialModel {
  ModelId id = ModelId::H3;
  double alpha = 1.0;
  double lambda = 0.0;
  std::string potential = "coulomb";
  double beta = 0.0;
  double omega = 1.0;
  std::string f = "inverse";
  double fall_to_center_delta = 1e-6;

  void validate() const;  // throws RadialError
};

struct RadialProblem {
  std::string model;
  Sector sector;
  int branch = 0;          // +-1 for single-channel problems, 0 for the coupled system
  int channels = 1;
  double c2 = 0.0;         // centrifugal coefficient (single channel)
  double s = 0.0;          // small-r exponent
  PotentialFn V;
  std::string description;
};

// Single channel for branch = +-1 (H1, H3), coupled two-channel system for
// branch = 0 (all models).  Throws RadialError on a fall to the centre.
RadialProblem reduce(const RadialModel& m, const Sector& s, int branch);
// Same for the coupled system with the two channels listed in reverse order.
RadialProblem reduce_swapped(const RadialModel& m, const Sector& s);

double centrifugal(const RadialModel& m, const Sector& s, int eps);  // c2
double indicial_exponent(double c2);                                 // 1/2 + sqrt(c2 + 1/4)

// The coupled H2 system restricted to the Q2 eigenspace with
// q~ = q_sign sqrt(E + alpha^2/(2j+1)^2).  Given the channel components of
// the coupled eigenvectors at energy E (one column per state; several for a
// degenerate level) the combination that best satisfies
// (f + q~) u- = (d/dx + w) u+, w = alpha/(2k) - k/x, is selected and the
// decoupled second-order equation is evaluated on it.
struct DecoupledH2 {
  double q_tilde = 0.0;
  int q_sign = 0;
  // max residual of the decoupled equation over the interior grid points
  // where f + q~ stays away from 0, relative to the largest term
  double residual = 0.0;
  double partner_residual = 0.0;  // u- rebuilt from u+ against the coupled eigenvector
  int points = 0;
};

DecoupledH2 decouple_h2(const RadialModel& m, const Sector& s, double Ehat, const Grid& g, const Eigen::MatrixXd& u_plus,
                        const Eigen::MatrixXd& u_minus, int q_sign);

// ---------------------------------------------------------------- spectra

struct SpectrumRow {
  std::string model;
  double j = 0.0, kappa = 0.0;
  int branch = 0;
  int n = 0;
  double N = 0.0;
  double Ehat = 0.0;
  double E_over_m = 0.0;
  int degeneracy = 0;  // states of the (j, kappa) sector at this level (both branches)
  std::string source;
};

struct SpectrumTable {
  std::vector<SpectrumRow> rows;
  std::vector<std::string> notes;  // e.g. "no bound states", skipped branches
};

enum class NFormula { indicial, printed };

// Closed-form rows for both branches, n = 0..nmax.  Branches that fall to
// the centre or have no bound states are listed in `notes`.
SpectrumTable exact_spectrum(const RadialModel& m, const Sector& s, int nmax, NFormula form = NFormula::indicial);
double exact_energy(const RadialModel& m, double s_exp, int n);  // E^ at small-r exponent s
double printed_N(double c2, int n);                                 // sqrt(c2) + n + 1/2
// Degeneracy from coincident rows of a (numeric) table.
void assign_degeneracy(SpectrumTable& t, double rel_tol);

// Numeric rows from finite differences (two grids + Richardson).
struct NumericOptions {
  int M = 4000;
  double r_max = 0.0;  // 0: 40 / sqrt(-E) from the closed form
  bool three_grids = false;
};

struct NumericSpectrum {
  SpectrumTable table;
  ExtrapolatedSpectrum raw;
  double r_max = 0.0;
};

NumericSpectrum numeric_spectrum(const RadialModel& m, const Sector& s, int branch, int count,
                                 const NumericOptions& o = {});

// ---------------------------------------------------------------- wavefunctions

// u(x) = C x^s exp(-kappa x) 1F1(-n, 2s, z x), kappa = alpha / (2N), with
// z = 2 kappa for the derived states.  c2 and alpha describe the radial
// equation the state is meant to solve.
struct Wavefunction {
  double s = 0.0, kappa = 0.0, zscale = 0.0, N = 0.0, Ehat = 0.0, c2 = 0.0, alpha = 0.0;
  int n = 0;
  double norm = 1.0;
  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;
};

Wavefunction wavefunction(const RadialModel& m, const Sector& s, int branch, int n);
// The printed forms: x^{|nu|+1/2} exp(-sqrt(-E) x) 1F1(-n, 2|nu|+1, sqrt(-E) x)
// for H3, and x^{k+1/2} exp(-sqrt(-E) x) 1F1(-n, 2k+1, 2 sqrt(-E) x) with
// k = sqrt(nu (nu + 1) - lambda^2) and E from the printed N for H1.  Throws
// RadialError where the printed exponent is not real.
Wavefunction printed_wavefunction(const RadialModel& m, const Sector& s, int branch, int n);

// max |-u'' + (c2/x^2 - alpha/x - E) u| relative to the largest term, over
// the given points.
double ode_residual(const Wavefunction& w, const std::vector<double>& xs);
int count_nodes(const std::function<double(double)>& u, double x_max, int samples = 20000);

}  // namespace sis
