// Numerical kernels: finite-difference radial eigenproblems, a symmetric
// banded eigensolver (bisection + inverse iteration), Kummer's function and
// Gauss-Legendre quadrature.
#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sis {

struct NumericsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Uniform radial grid r_i = (i+1) h, i = 0..M-1, with Dirichlet conditions at
// r = 0 and r = r_max = (M+1) h.
struct Grid {
  double r_min = 0.0;
  double r_max = 0.0;
  int M = 0;
  double h = 0.0;

  double node(int i) const { return (i + 1) * h; }
  Eigen::VectorXd nodes() const;
};

Grid make_grid(double r_max, int M);

struct EigenPairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, l2-normalized
};

// Symmetric tridiagonal matrix: diagonal d (n), off-diagonal e (n-1).
EigenPairs tridiag_eig(const Eigen::VectorXd& d, const Eigen::VectorXd& e, int k);

// Symmetric banded matrix in lower band storage: band(j, i) = A(i + j, i),
// j = 0..bandwidth.  Returns the k lowest eigenpairs.
EigenPairs banded_eig(const Eigen::MatrixXd& band, int k);

// Number of eigenvalues below sigma (Sylvester inertia of A - sigma I).
int banded_count_below(const Eigen::MatrixXd& band, double sigma);

// Effective potential matrix V(r) (channels x channels, symmetric) for
//   -u'' + V(r) u = E u.
using PotentialFn = std::function<Eigen::MatrixXd(double r)>;

struct DiscretizedProblem {
  Grid grid;
  int channels = 1;
  Eigen::MatrixXd band;  // interleaved channel layout, bandwidth = channels
};

DiscretizedProblem discretize(const PotentialFn& V, int channels, const Grid& g);

struct FdSolution {
  Grid grid;
  int channels = 1;
  EigenPairs pairs;
};

FdSolution solve_fd(const PotentialFn& V, int channels, const Grid& g, int k);

// Eigenvalues on grids with M and 2M+1 interior points (h and h/2) combined
// by Richardson extrapolation assuming an h^2 leading error.  With three
// grids the observed order is reported as well, and states whose order falls
// outside [1.8, 2.2] are extrapolated with Aitken's delta^2 instead.
struct ExtrapolatedSpectrum {
  Eigen::VectorXd coarse;     // h
  Eigen::VectorXd fine;       // h/2
  Eigen::VectorXd finest;     // h/4 (empty unless three grids were used)
  Eigen::VectorXd values;     // extrapolated
  Eigen::VectorXd order;      // observed order per level (NaN if unavailable)
  std::vector<std::string> method;  // "richardson" | "aitken" per level
  FdSolution fine_solution;   // eigenvectors on the finest grid used
};

ExtrapolatedSpectrum solve_fd_extrapolated(const PotentialFn& V, int channels, double r_max, int M, int k,
                                           bool three_grids = false);

// Observed order log2((E_h - E_h/2) / (E_h/2 - E_h/4)).
double observed_order(double e_h, double e_h2, double e_h4);
double richardson(double e_h, double e_h2, double order = 2.0);
// Aitken delta^2 limit of three successive refinements.
double aitken(double e_h, double e_h2, double e_h4);

// Confluent hypergeometric 1F1(a; b; z).  Exact polynomial when a is a
// non-positive integer; otherwise a compensated series (with Kummer's
// transformation for z < 0).
double kummer_1f1(double a, double b, double z);

struct Quadrature {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// n-point Gauss-Legendre rule on [-1, 1].
Quadrature gauss_legendre(int n);

}  // namespace sis
