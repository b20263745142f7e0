// Spherical spinors: the 2x2 angular blocks of rotationally invariant
// operators in a (j, kappa) sector, the Q1 eigenbasis, and quadrature checks
// on the sphere.
#pragma once

#include "sis/scalar_expr.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sis {

struct AngularError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// j half-integer >= 1/2, kappa in {-j, ..., j}; lambda is the dipole coupling.
struct Sector {
  double j = 0.5;
  double kappa = 0.5;
  double lambda = 0.0;

  void validate() const;              // throws AngularError
  double k() const { return j + 0.5; }  // eigenvalue of sigma.L + 1 on Omega_+
  double mu() const;                  // sqrt((j + 1/2)^2 + lambda^2)
};

// Blocks act on the coefficients (c+, c-) of c+ Omega_+ + c- Omega_-, where
// (sigma.L + 1) Omega_pm = pm (j + 1/2) Omega_pm and sigma.n Omega_pm = Omega_mp.
using Block = Eigen::Matrix2d;

Block q1_block(const Sector& s);
Block spin_orbit_block(const Sector& s);  // sigma.L + 1
Block sigma_n_block();                    // swap
Block j_squared_block(const Sector& s);

// Exact version over the rationals: q1_block(j, lambda)^2 - (j(j+1) + lambda^2 + 1/4) I.
std::array<Rational, 4> q1_square_defect(const Rational& j, const Rational& lambda);

// Unit eigenvector of q1_block for the eigenvalue sign * mu.
Eigen::Vector2d q1_eigenvector(const Sector& s, int sign);

// Y_l^m with the Condon-Shortley phase, from the normalized associated
// Legendre recurrence.
std::complex<double> spherical_harmonic(int l, int m, double theta, double phi);

struct Spinor {
  std::complex<double> up, down;
};

Spinor operator+(const Spinor& a, const Spinor& b);
Spinor operator*(double c, const Spinor& a);
Spinor sigma_dot_n(const Spinor& s, double theta, double phi);

// Omega_+ (l = j - 1/2) for branch = +1, Omega_- (l = j + 1/2) for branch = -1,
// the latter with the phase fixed by sigma.n Omega_+ = Omega_-.
Spinor spinor_harmonic(double j, double kappa, int branch, double theta, double phi);
// The Q1 eigenspinor with eigenvalue sign * mu.
Spinor omega_hat(const Sector& s, int sign, double theta, double phi);

// The two-term expressions as printed for the eigenspinors (without the
// prefactor): the upper component for sign = +1, the lower one for -1.
std::complex<double> printed_omega_hat_component(const Sector& s, int sign, double theta, double phi);

// Gauss-Legendre in cos(theta) times a uniform rule in phi, exact for
// polynomials of the given degree on the sphere.
struct SphereGrid {
  int degree = 0;
  std::vector<double> theta, phi, weight;
};

SphereGrid make_sphere_grid(int degree);
int required_degree(const Sector& s);  // 2 (2j + 2)

std::complex<double> inner(const std::vector<Spinor>& a, const std::vector<Spinor>& b, const SphereGrid& g);
// Sample a spinor field on the grid; throws AngularError when the grid is
// too coarse for the sector.
std::vector<Spinor> sample(const Sector& s, const SphereGrid& g,
                           const std::function<Spinor(double theta, double phi)>& fn);

struct BasisReport {
  int degree = 0;
  double orthonormality_standard = 0.0;  // max |<Omega_a, Omega_b> - delta|
  double orthonormality_hat = 0.0;       // same for the Q1 eigenspinors
  double swap_residual = 0.0;            // max pointwise |sigma.n Omega_+ - Omega_-|
  double q1_eigen_residual = 0.0;        // max pointwise |Q1-image - nu Omega_hat| via the block
  // Fitted constant C with component = C * printed expression, for the +mu
  // (upper component) and -mu (lower component) spinors; NaN when the
  // printed expression vanishes identically in the sector.
  double measured_prefactor = 0.0;
  double measured_prefactor_minus = 0.0;
  double printed_prefactor = 0.0;        // 1 / (2 sqrt(mu))
  double fit_residual = 0.0;             // relative L2 misfit of the +mu fit
  double fit_residual_minus = 0.0;
  double printed_norm = 0.0;             // norm of the printed expression taken as the whole spinor
};

BasisReport basis_check(const Sector& s, int degree = 0);

// Sector image of operators; "sigma.p" is returned as
//   sigma.p (u / r) Omega  ->  (1/r) [d_block u' + inv_r_block u / r] Omega.
struct AngularReduction {
  std::string op;
  Eigen::Matrix2cd block = Eigen::Matrix2cd::Zero();
  Eigen::Matrix2cd d_block = Eigen::Matrix2cd::Zero();
  Eigen::Matrix2cd inv_r_block = Eigen::Matrix2cd::Zero();
};

AngularReduction angular_reduce(const std::string& op, const Sector& s);

}  // namespace sis
