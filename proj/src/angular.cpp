#include "sis/angular.hpp"

#include "sis/numerics.hpp"

#include <cmath>
#include <numbers>

namespace sis {

namespace {

using cd = std::complex<double>;

bool is_half_odd(double v) {
  const double t = 2.0 * v;
  return std::abs(t - std::round(t)) < 1e-12 && (static_cast<long>(std::llround(t)) % 2 != 0);
}

int as_int(double v) { return static_cast<int>(std::lround(v)); }

// Normalized associated Legendre function, including the Condon-Shortley
// phase, for m >= 0: Y_l^m(theta, 0).
double legendre_normalized(int l, int m, double x) {
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  double pmm = 1.0 / std::sqrt(4.0 * std::numbers::pi);
  for (int i = 1; i <= m; ++i) pmm *= -std::sqrt((2.0 * i + 1.0) / (2.0 * i)) * s;
  if (l == m) return pmm;
  double pm1 = std::sqrt(2.0 * m + 3.0) * x * pmm;
  if (l == m + 1) return pm1;
  double prev = pmm, cur = pm1;
  for (int ll = m + 2; ll <= l; ++ll) {
    const double a = std::sqrt((4.0 * ll * ll - 1.0) / (double(ll) * ll - double(m) * m));
    const double b = std::sqrt((double(ll - 1) * (ll - 1) - double(m) * m) / (4.0 * (ll - 1) * (ll - 1) - 1.0));
    const double next = a * (x * cur - b * prev);
    prev = cur;
    cur = next;
  }
  return cur;
}

// Phase of the l = j + 1/2 spinor relative to the standard Clebsch-Gordan
// form so that sigma.n maps Omega_+ onto Omega_-.
constexpr double kMinusPhase = -1.0;

}  // namespace

void Sector::validate() const {
  if (!std::isfinite(j) || !std::isfinite(kappa) || !std::isfinite(lambda))
    throw AngularError("sector quantum numbers must be finite");
  if (!is_half_odd(j) || j < 0.5) throw AngularError("j must be a positive half-odd integer");
  if (!is_half_odd(kappa) || std::abs(kappa) > j + 1e-12) throw AngularError("kappa must be one of -j, ..., j");
}

double Sector::mu() const { return std::sqrt(k() * k() + lambda * lambda); }

Block q1_block(const Sector& s) {
  Block b;
  b << s.k(), s.lambda, s.lambda, -s.k();
  return b;
}

Block spin_orbit_block(const Sector& s) {
  Block b;
  b << s.k(), 0.0, 0.0, -s.k();
  return b;
}

Block sigma_n_block() {
  Block b;
  b << 0.0, 1.0, 1.0, 0.0;
  return b;
}

Block j_squared_block(const Sector& s) { return s.j * (s.j + 1.0) * Block::Identity(); }

std::array<Rational, 4> q1_square_defect(const Rational& j, const Rational& lambda) {
  const Rational k = j + Rational(1, 2);
  const Rational m[4] = {k, lambda, lambda, -k};
  const Rational target = j * (j + 1) + lambda * lambda + Rational(1, 4);
  std::array<Rational, 4> out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      Rational v = m[2 * r] * m[c] + m[2 * r + 1] * m[2 + c];
      if (r == c) v -= target;
      out[2 * r + c] = v;
    }
  return out;
}

Eigen::Vector2d q1_eigenvector(const Sector& s, int sign) {
  const double k = s.k(), mu = s.mu(), lam = s.lambda;
  const double n = std::sqrt(2.0 * mu * (mu + k));
  if (sign > 0) return Eigen::Vector2d((mu + k) / n, lam / n);
  return Eigen::Vector2d(-lam / n, (mu + k) / n);
}

cd spherical_harmonic(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) return 0.0;
  const int am = std::abs(m);
  const double p = legendre_normalized(l, am, std::cos(theta));
  cd y = p * std::polar(1.0, am * phi);
  if (m < 0) y = ((am % 2) ? -1.0 : 1.0) * std::conj(y);
  return y;
}

Spinor operator+(const Spinor& a, const Spinor& b) { return {a.up + b.up, a.down + b.down}; }
Spinor operator*(double c, const Spinor& a) { return {c * a.up, c * a.down}; }

Spinor sigma_dot_n(const Spinor& s, double theta, double phi) {
  const double nz = std::cos(theta);
  const cd nm = std::sin(theta) * std::polar(1.0, -phi);  // n_x - i n_y
  const cd np = std::conj(nm);
  return {nz * s.up + nm * s.down, np * s.up - nz * s.down};
}

Spinor spinor_harmonic(double j, double kappa, int branch, double theta, double phi) {
  const int mlo = as_int(kappa - 0.5), mhi = as_int(kappa + 0.5);
  if (branch > 0) {
    const int l = as_int(j - 0.5);
    return {std::sqrt((j + kappa) / (2 * j)) * spherical_harmonic(l, mlo, theta, phi),
            std::sqrt((j - kappa) / (2 * j)) * spherical_harmonic(l, mhi, theta, phi)};
  }
  const int l = as_int(j + 0.5);
  return kMinusPhase * Spinor{-std::sqrt((j - kappa + 1) / (2 * j + 2)) * spherical_harmonic(l, mlo, theta, phi),
                              std::sqrt((j + kappa + 1) / (2 * j + 2)) * spherical_harmonic(l, mhi, theta, phi)};
}

Spinor omega_hat(const Sector& s, int sign, double theta, double phi) {
  const Eigen::Vector2d c = q1_eigenvector(s, sign);
  return c(0) * spinor_harmonic(s.j, s.kappa, +1, theta, phi) + c(1) * spinor_harmonic(s.j, s.kappa, -1, theta, phi);
}

cd printed_omega_hat_component(const Sector& s, int sign, double theta, double phi) {
  const double j = s.j, kp = s.kappa, lam = s.lambda, mk = s.mu() + s.k();
  const int lo = as_int(j - 0.5), hi = as_int(j + 0.5);
  if (sign > 0) {
    const int m = as_int(kp - 0.5);
    return std::sqrt(mk * (j + kp) / j) * spherical_harmonic(lo, m, theta, phi) +
           lam * std::sqrt((j - kp + 1) / ((j + 1) * mk)) * spherical_harmonic(hi, m, theta, phi);
  }
  const int m = as_int(kp + 0.5);
  return lam * std::sqrt((j - kp) / (j * mk)) * spherical_harmonic(lo, m, theta, phi) +
         std::sqrt((j + kp + 1) * mk / (j + 1)) * spherical_harmonic(hi, m, theta, phi);
}

SphereGrid make_sphere_grid(int degree) {
  if (degree < 0) throw AngularError("quadrature degree must be non-negative");
  SphereGrid g;
  g.degree = degree;
  const int nt = degree / 2 + 1;  // Gauss-Legendre exact to 2 nt - 1 >= degree
  const int np = degree + 1;      // uniform rule exact for |m| <= degree
  const Quadrature q = gauss_legendre(nt);
  for (int a = 0; a < nt; ++a)
    for (int b = 0; b < np; ++b) {
      g.theta.push_back(std::acos(q.nodes(a)));
      g.phi.push_back(2.0 * std::numbers::pi * b / np);
      g.weight.push_back(q.weights(a) * 2.0 * std::numbers::pi / np);
    }
  return g;
}

int required_degree(const Sector& s) { return 2 * (as_int(2 * s.j) + 2); }

cd inner(const std::vector<Spinor>& a, const std::vector<Spinor>& b, const SphereGrid& g) {
  if (a.size() != g.weight.size() || b.size() != g.weight.size())
    throw AngularError("spinor samples do not match the grid");
  cd acc = 0.0;
  for (std::size_t i = 0; i < g.weight.size(); ++i)
    acc += g.weight[i] * (std::conj(a[i].up) * b[i].up + std::conj(a[i].down) * b[i].down);
  return acc;
}

std::vector<Spinor> sample(const Sector& s, const SphereGrid& g,
                           const std::function<Spinor(double, double)>& fn) {
  s.validate();
  if (g.degree < required_degree(s))
    throw AngularError("quadrature degree " + std::to_string(g.degree) + " is below " +
                       std::to_string(required_degree(s)) + " required for j = " + std::to_string(s.j));
  std::vector<Spinor> out;
  out.reserve(g.weight.size());
  for (std::size_t i = 0; i < g.weight.size(); ++i) out.push_back(fn(g.theta[i], g.phi[i]));
  return out;
}

BasisReport basis_check(const Sector& s, int degree) {
  s.validate();
  BasisReport rep;
  rep.degree = degree > 0 ? degree : required_degree(s);
  const SphereGrid g = make_sphere_grid(rep.degree);

  std::vector<Spinor> std_basis[2], hat[2];
  for (int b = 0; b < 2; ++b) {
    const int sign = b == 0 ? 1 : -1;
    std_basis[b] = sample(s, g, [&](double t, double p) { return spinor_harmonic(s.j, s.kappa, sign, t, p); });
    hat[b] = sample(s, g, [&](double t, double p) { return omega_hat(s, sign, t, p); });
  }
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double delta = a == b ? 1.0 : 0.0;
      rep.orthonormality_standard =
          std::max(rep.orthonormality_standard, std::abs(inner(std_basis[a], std_basis[b], g) - delta));
      rep.orthonormality_hat = std::max(rep.orthonormality_hat, std::abs(inner(hat[a], hat[b], g) - delta));
    }

  // Pointwise checks: sigma.n Omega_+ = Omega_- and the Q1 image of
  // Omega_hat, Q1 = (sigma.L + 1) + lambda sigma.n, built from the basis
  // action (sigma.L + 1 is diagonal on Omega_pm).
  for (std::size_t i = 0; i < g.weight.size(); ++i) {
    const double t = g.theta[i], p = g.phi[i];
    const Spinor sn = sigma_dot_n(std_basis[0][i], t, p);
    rep.swap_residual = std::max(rep.swap_residual, std::abs(sn.up - std_basis[1][i].up) +
                                                        std::abs(sn.down - std_basis[1][i].down));
    for (int b = 0; b < 2; ++b) {
      const int sign = b == 0 ? 1 : -1;
      const Eigen::Vector2d c = q1_eigenvector(s, sign);
      const Spinor so = (s.k() * c(0)) * std_basis[0][i] + (-s.k() * c(1)) * std_basis[1][i];
      const Spinor dip = sigma_dot_n(hat[b][i], t, p);
      const Spinor q1 = so + s.lambda * dip;
      const double nu = sign * s.mu();
      rep.q1_eigen_residual = std::max(rep.q1_eigen_residual, std::abs(q1.up - nu * hat[b][i].up) +
                                                                  std::abs(q1.down - nu * hat[b][i].down));
    }
  }

  // Fit the printed two-term expressions (upper component of the +mu
  // spinor, lower component of the -mu spinor) to the computed components:
  // component = C * expression.
  const auto fit = [&](int sign, double& prefactor, double& misfit, double& norm) {
    cd pp = 0.0, pu = 0.0;
    double uu = 0.0;
    std::vector<cd> pv(g.weight.size()), uv(g.weight.size());
    for (std::size_t i = 0; i < g.weight.size(); ++i) {
      pv[i] = printed_omega_hat_component(s, sign, g.theta[i], g.phi[i]);
      uv[i] = sign > 0 ? hat[0][i].up : hat[1][i].down;
      pp += g.weight[i] * std::norm(pv[i]);
      pu += g.weight[i] * std::conj(pv[i]) * uv[i];
      uu += g.weight[i] * std::norm(uv[i]);
    }
    if (pp.real() < 1e-14) return false;  // the expression vanishes identically
    const cd C = pu / pp;
    double mis = 0.0;
    for (std::size_t i = 0; i < g.weight.size(); ++i) mis += g.weight[i] * std::norm(uv[i] - C * pv[i]);
    prefactor = C.real();
    misfit = uu > 0 ? std::sqrt(mis / uu) : 0.0;
    norm = std::sqrt(pp.real()) / (2.0 * std::sqrt(s.mu()));
    return true;
  };
  rep.printed_prefactor = 1.0 / (2.0 * std::sqrt(s.mu()));
  rep.measured_prefactor = std::nan("");
  rep.measured_prefactor_minus = std::nan("");
  double norm = 0.0;
  if (fit(+1, rep.measured_prefactor, rep.fit_residual, norm)) rep.printed_norm = norm;
  double mis_minus = 0.0;
  if (fit(-1, rep.measured_prefactor_minus, mis_minus, norm)) {
    rep.fit_residual_minus = mis_minus;
    if (rep.printed_norm == 0.0) rep.printed_norm = norm;
  }
  return rep;
}

AngularReduction angular_reduce(const std::string& op, const Sector& s) {
  s.validate();
  AngularReduction r;
  r.op = op;
  const Eigen::Matrix2cd K = spin_orbit_block(s).cast<cd>();
  const Eigen::Matrix2cd S = sigma_n_block().cast<cd>();
  if (op == "sigma.n") {
    r.block = S;
  } else if (op == "sigma.L+1") {
    r.block = K;
  } else if (op == "Q1") {
    r.block = q1_block(s).cast<cd>();
  } else if (op == "J^2") {
    r.block = j_squared_block(s).cast<cd>();
  } else if (op == "sigma.p") {
    // sigma.p = sigma.n [ -i d/dr - i/r + (i/r)(sigma.L + 1) ] on psi = u Omega / r
    r.d_block = cd(0, -1) * S;
    r.inv_r_block = cd(0, 1) * S * K;
  } else {
    throw AngularError("no angular reduction for operator '" + op + "'");
  }
  return r;
}

}  // namespace sis
