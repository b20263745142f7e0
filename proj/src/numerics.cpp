#include "sis/numerics.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sis {

Eigen::VectorXd Grid::nodes() const {
  Eigen::VectorXd r(M);
  for (int i = 0; i < M; ++i) r[i] = node(i);
  return r;
}

Grid make_grid(double r_max, int M) {
  if (M < 64) throw NumericsError("grid needs at least 64 interior points");
  if (!(r_max > 0)) throw NumericsError("grid needs r_max > 0");
  Grid g;
  g.M = M;
  g.r_max = r_max;
  g.h = r_max / (M + 1);
  g.r_min = g.h;
  return g;
}

// ---------------------------------------------------------------- banded eigensolver

namespace {

int band_size(const Eigen::MatrixXd& band) { return static_cast<int>(band.cols()); }
int band_width(const Eigen::MatrixXd& band) { return static_cast<int>(band.rows()) - 1; }

double band_at(const Eigen::MatrixXd& band, int i, int j) {
  if (i < j) std::swap(i, j);
  int off = i - j;
  if (off > band_width(band)) return 0.0;
  return band(off, j);
}

void gershgorin(const Eigen::MatrixXd& band, double& lo, double& hi) {
  const int n = band_size(band), w = band_width(band);
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (int i = 0; i < n; ++i) {
    double radius = 0;
    for (int j = std::max(0, i - w); j <= std::min(n - 1, i + w); ++j)
      if (j != i) radius += std::abs(band_at(band, i, j));
    lo = std::min(lo, band(0, i) - radius);
    hi = std::max(hi, band(0, i) + radius);
  }
}

Eigen::SparseMatrix<double> to_sparse(const Eigen::MatrixXd& band, double shift) {
  const int n = band_size(band), w = band_width(band);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(n) * (2 * w + 1));
  for (int j = 0; j < n; ++j) {
    t.emplace_back(j, j, band(0, j) - shift);
    for (int o = 1; o <= w && j + o < n; ++o) {
      double v = band(o, j);
      if (v == 0.0) continue;
      t.emplace_back(j + o, j, v);
      t.emplace_back(j, j + o, v);
    }
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

Eigen::VectorXd band_apply(const Eigen::MatrixXd& band, const Eigen::VectorXd& v) {
  const int n = band_size(band), w = band_width(band);
  Eigen::VectorXd out = band.row(0).transpose().cwiseProduct(v);
  for (int o = 1; o <= w; ++o)
    for (int j = 0; j + o < n; ++j) {
      out[j + o] += band(o, j) * v[j];
      out[j] += band(o, j) * v[j + o];
    }
  return out;
}

}  // namespace

int banded_count_below(const Eigen::MatrixXd& band, double sigma) {
  // LDL^T of A - sigma I restricted to the band; the number of negative
  // pivots equals the number of eigenvalues below sigma.
  const int n = band_size(band), w = band_width(band);
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(w + 1, n);  // L(o, j) = L[j+o][j]
  Eigen::VectorXd D(n);
  int count = 0;
  for (int j = 0; j < n; ++j) {
    double d = band(0, j) - sigma;
    for (int k = std::max(0, j - w); k < j; ++k) d -= L(j - k, k) * L(j - k, k) * D[k];
    if (std::abs(d) < tiny) d = -tiny;
    D[j] = d;
    if (d < 0) ++count;
    for (int o = 1; o <= w && j + o < n; ++o) {
      int i = j + o;
      double v = band(o, j);
      for (int k = std::max(0, i - w); k < j; ++k) v -= L(i - k, k) * L(j - k, k) * D[k];
      L(o, j) = v / d;
    }
  }
  return count;
}

EigenPairs banded_eig(const Eigen::MatrixXd& band, int k) {
  const int n = band_size(band);
  if (k < 1 || k > n) throw NumericsError("requested eigenpair count out of range");
  double lo, hi;
  gershgorin(band, lo, hi);
  const double scale = std::max(std::abs(lo), std::abs(hi));
  const double eps = std::numeric_limits<double>::epsilon();

  EigenPairs out;
  out.values.resize(k);
  out.vectors.resize(n, k);
  double floor = lo;
  for (int i = 0; i < k; ++i) {
    // Bisection for the i-th eigenvalue (0-based): count(sigma) <= i on the left.
    double a = floor, b = hi;
    for (int it = 0; it < 200 && b - a > 4 * eps * std::max(scale, 1.0); ++it) {
      double mid = 0.5 * (a + b);
      if (banded_count_below(band, mid) <= i) a = mid;
      else b = mid;
    }
    out.values[i] = 0.5 * (a + b);
    floor = a;
  }

  // Inverse iteration with orthogonalization against earlier vectors.
  for (int i = 0; i < k; ++i) {
    double shift = out.values[i] + 1e3 * eps * std::max(scale, 1.0);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(to_sparse(band, shift));
    if (lu.info() != Eigen::Success) throw NumericsError("inverse iteration: factorization failed");
    Eigen::VectorXd v(n);
    for (int j = 0; j < n; ++j) v[j] = 1.0 + 0.1 * std::sin(0.7 * j + i);
    v.normalize();
    // The attainable residual is limited by rounding at the matrix scale.
    const double res_tol = std::max(1e-10 * std::max(1.0, std::abs(out.values[i])), 1e3 * eps * scale * std::sqrt(double(n)) * 1e-2);
    bool converged = false;
    for (int it = 0; it < 40; ++it) {
      Eigen::VectorXd next = lu.solve(v);
      if (lu.info() != Eigen::Success) throw NumericsError("inverse iteration: solve failed");
      for (int p = 0; p < i; ++p) next -= out.vectors.col(p).dot(next) * out.vectors.col(p);
      next.normalize();
      double change = std::min((next - v).norm(), (next + v).norm());
      v = next;
      Eigen::VectorXd res = band_apply(band, v) - out.values[i] * v;
      if (change < 1e-10 || res.norm() <= res_tol) {
        converged = true;
        if (it >= 2) break;
      }
    }
    if (!converged) throw NumericsError("inverse iteration did not converge");
    // Fix the sign: first significant component positive.
    for (int j = 0; j < n; ++j)
      if (std::abs(v[j]) > 1e-8) {
        if (v[j] < 0) v = -v;
        break;
      }
    out.vectors.col(i) = v;
  }
  return out;
}

EigenPairs tridiag_eig(const Eigen::VectorXd& d, const Eigen::VectorXd& e, int k) {
  const int n = static_cast<int>(d.size());
  if (e.size() != std::max(0, n - 1)) throw NumericsError("tridiagonal: off-diagonal has wrong length");
  Eigen::MatrixXd band = Eigen::MatrixXd::Zero(2, n);
  band.row(0) = d.transpose();
  for (int i = 0; i + 1 < n; ++i) band(1, i) = e[i];
  return banded_eig(band, k);
}

// ---------------------------------------------------------------- radial problems

DiscretizedProblem discretize(const PotentialFn& V, int channels, const Grid& g) {
  if (channels < 1) throw NumericsError("channel count must be positive");
  DiscretizedProblem p;
  p.grid = g;
  p.channels = channels;
  const int n = g.M * channels;
  const double ih2 = 1.0 / (g.h * g.h);
  p.band = Eigen::MatrixXd::Zero(channels + 1, n);
  for (int i = 0; i < g.M; ++i) {
    Eigen::MatrixXd v = V(g.node(i));
    if (v.rows() != channels || v.cols() != channels) throw NumericsError("potential has the wrong shape");
    if (!v.allFinite()) throw NumericsError("potential is not finite on the grid");
    for (int a = 0; a < channels; ++a) {
      int row = i * channels + a;
      p.band(0, row) = 2.0 * ih2 + v(a, a);
      for (int b = a + 1; b < channels; ++b) p.band(b - a, row) = 0.5 * (v(a, b) + v(b, a));
      if (i + 1 < g.M) p.band(channels, row) = -ih2;
    }
  }
  return p;
}

FdSolution solve_fd(const PotentialFn& V, int channels, const Grid& g, int k) {
  DiscretizedProblem p = discretize(V, channels, g);
  FdSolution s;
  s.grid = g;
  s.channels = channels;
  s.pairs = banded_eig(p.band, k);
  return s;
}

double observed_order(double e_h, double e_h2, double e_h4) {
  double num = e_h - e_h2, den = e_h2 - e_h4;
  if (den == 0.0 || num / den <= 0) return std::numeric_limits<double>::quiet_NaN();
  return std::log2(num / den);
}

double richardson(double e_h, double e_h2, double order) {
  double f = std::pow(2.0, order);
  return (f * e_h2 - e_h) / (f - 1.0);
}

double aitken(double e_h, double e_h2, double e_h4) {
  double den = (e_h4 - e_h2) - (e_h2 - e_h);
  if (den == 0.0) return e_h4;
  return e_h4 - (e_h4 - e_h2) * (e_h4 - e_h2) / den;
}

ExtrapolatedSpectrum solve_fd_extrapolated(const PotentialFn& V, int channels, double r_max, int M, int k,
                                           bool three_grids) {
  ExtrapolatedSpectrum out;
  FdSolution c = solve_fd(V, channels, make_grid(r_max, M), k);
  FdSolution f = solve_fd(V, channels, make_grid(r_max, 2 * M + 1), k);
  out.coarse = c.pairs.values;
  out.fine = f.pairs.values;
  out.order = Eigen::VectorXd::Constant(k, std::numeric_limits<double>::quiet_NaN());
  if (three_grids) {
    FdSolution ff = solve_fd(V, channels, make_grid(r_max, 4 * M + 3), k);
    out.finest = ff.pairs.values;
    out.values.resize(k);
    for (int i = 0; i < k; ++i) {
      out.order[i] = observed_order(out.coarse[i], out.fine[i], out.finest[i]);
      // Singular barriers (small-r exponent below 1) converge at a reduced
      // order; there the Aitken limit replaces the h^2 extrapolation.
      const bool regular = out.order[i] >= 1.8 && out.order[i] <= 2.2;
      out.values[i] = regular ? richardson(out.fine[i], out.finest[i])
                              : aitken(out.coarse[i], out.fine[i], out.finest[i]);
      out.method.push_back(regular ? "richardson" : "aitken");
    }
    out.fine_solution = std::move(ff);
  } else {
    out.values.resize(k);
    for (int i = 0; i < k; ++i) {
      out.values[i] = richardson(out.coarse[i], out.fine[i]);
      out.method.push_back("richardson");
    }
    out.fine_solution = std::move(f);
  }
  return out;
}

// ---------------------------------------------------------------- special functions

namespace {

bool nonpositive_integer(double v, long& n) {
  double r = std::round(v);
  if (r <= 0 && std::abs(v - r) < 1e-12) {
    n = static_cast<long>(-r);
    return true;
  }
  return false;
}

double kummer_series(double a, double b, double z) {
  // Kahan-compensated partial sums of sum (a)_k / (b)_k z^k / k!.
  double sum = 1.0, comp = 0.0, term = 1.0;
  for (int k = 0; k < 100000; ++k) {
    term *= (a + k) / (b + k) * z / (k + 1);
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (std::abs(term) <= 1e-17 * std::abs(sum) && k > std::abs(z)) return sum;
  }
  throw NumericsError("kummer_1f1: series did not converge");
}

}  // namespace

double kummer_1f1(double a, double b, double z) {
  long nb = 0, na = 0;
  bool a_poly = nonpositive_integer(a, na);
  if (nonpositive_integer(b, nb) && !(a_poly && na < nb)) throw NumericsError("kummer_1f1: b is a pole");
  if (a_poly) {
    // Finite sum, evaluated by Horner's rule on the term ratios.
    double acc = 1.0;
    for (long k = na - 1; k >= 0; --k) acc = 1.0 + acc * (a + k) / (b + k) * z / (k + 1);
    return acc;
  }
  if (z < 0) return std::exp(z) * kummer_series(b - a, b, -z);
  return kummer_series(a, b, z);
}

Quadrature gauss_legendre(int n) {
  if (n < 1) throw NumericsError("gauss_legendre: degree must be >= 1");
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes[i] = -x;
    q.nodes[n - 1 - i] = x;
    q.weights[i] = w;
    q.weights[n - 1 - i] = w;
  }
  return q;
}

}  // namespace sis
