// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance                  all criteria
//   acceptance --criterion N    criterion N only (exit 1 if it fails)
//
// A failing criterion prints what was measured; the failures that reflect
// the published formulas rather than the implementation are explained in
// the README.
#include "sis/detsys.hpp"
#include "sis/models.hpp"
#include "sis/radial1d.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace sis;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> failed;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (std::find(failed.begin(), failed.end(), what) == failed.end()) failed.push_back(what);
    }
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RadialModel model(ModelId id, double alpha, double lambda) {
  RadialModel m;
  m.id = id;
  m.alpha = alpha;
  m.lambda = lambda;
  return m;
}

PotentialFn scalar(std::function<double(double)> v) {
  return [v](double r) {
    Eigen::MatrixXd m(1, 1);
    m(0, 0) = v(r);
    return m;
  };
}

// 1. Every catalog Hamiltonian commutes with each of its listed integrals.
void criterion1(Outcome& o) {
  const RelationReport r = catalog_matrix();
  int total = 0, zero = 0;
  std::string failing;
  for (const auto& it : r.items) {
    if (!it.asserted) continue;
    ++total;
    zero += it.zero;
    if (!it.zero) failing += (failing.empty() ? "" : ", ") + it.label;
  }
  o.detail << zero << "/" << total << " catalog commutators vanish";
  if (!failing.empty()) o.detail << "; nonzero: " << failing;
  o.require(zero == total, "catalog commutators");
}

// 2. Squares, anticommutator, conformal algebra and the H4 core algebra.
void criterion2(Outcome& o) {
  for (const char* id : {"sq1", "sq2", "sq3", "sq4a", "sq4b", "sq4c", "CA-all", "core-all"}) {
    const RelationReport r = check_relation(id);
    int total = 0, zero = 0;
    std::string failing, alternative;
    for (const auto& it : r.items) {
      if (!it.asserted) {
        if (it.zero) alternative += (alternative.empty() ? "" : ", ") + it.label;
        continue;
      }
      ++total;
      zero += it.zero;
      if (!it.zero) failing += (failing.empty() ? "" : ", ") + it.label;
    }
    o.detail << " " << id << " " << zero << "/" << total;
    if (!failing.empty()) o.detail << " (nonzero: " << failing << "; holds instead: " << alternative << ")";
    o.require(r.zero(), id);
  }
}

// 3. Appendix families, negative controls, and residuals <=> commutator.
void criterion3(Outcome& o) {
  int ok = 0, controls = 0;
  for (const auto& id : appendix_case_ids()) {
    const CaseReport r = verify_appendix_case(id);
    ok += r.ok();
    o.require(r.ok(), "case " + id);
    int nonzero_controls = 0;
    for (const auto& s : r.stages)
      if (s.asserted && s.kind == "residuals" && !s.expected && s.nonzero() >= 1) ++nonzero_controls;
    controls += nonzero_controls;
    o.require(nonzero_controls >= 1, "negative control for " + id);
  }
  o.detail << ok << "/" << appendix_case_ids().size() << " appendix cases verified, " << controls
           << " case controls nonzero";

  // Perturbing any single coefficient slot of a known integral breaks it.
  const FieldSet f = fields_of(build_hamiltonian(ModelSpec::symbolic(ModelId::H1)));
  const CoeffSet base = extract_coefficients(build_integral(IntegralId::Q1, ModelSpec::symbolic(ModelId::H1)));
  o.require(residuals(base, f).empty(), "Q1 residuals");
  int slots = 0;
  for (int which = 0; which < 3; ++which) {
    CoeffSet p = base;
    if (which == 0) p.set_phi(1, 0, 1, p.phi[1][0][1] + coord(0));
    if (which == 1) p.lambda[0][2] = p.lambda[0][2] + coord(0);
    if (which == 2) p.omega[2] = p.omega[2] + coord(0);
    slots += !residuals(p, f).empty();
  }
  o.detail << "; slot controls " << slots << "/3 nonzero";
  o.require(slots == 3, "slot controls");

  const auto samples = randomized_equivalence(200, 20240607);
  int agree = 0, integrals = 0;
  for (const auto& s : samples) {
    agree += s.agree();
    integrals += s.commutator_zero;
  }
  o.detail << "; equivalence " << agree << "/" << samples.size() << " (" << integrals << " integrals, "
           << samples.size() - integrals << " non-integrals)";
  o.require(agree == static_cast<int>(samples.size()), "equivalence");
}

// 4. Finite-difference oracle for H3 at alpha = 2, lambda = sqrt 2, j = 1/2.
void criterion4(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const RadialModel m = model(ModelId::H3, 2.0, std::sqrt(2.0));
  const Sector s{0.5, 0.5, std::sqrt(2.0)};
  std::vector<double> fd;
  for (int b : {1, -1}) {
    const NumericSpectrum ns = numeric_spectrum(m, s, b, 6);
    for (const auto& r : ns.table.rows) fd.push_back(r.Ehat);
  }
  std::sort(fd.begin(), fd.end());
  fd.resize(6);
  const SpectrumTable ex = exact_spectrum(m, s, 5);
  std::vector<double> ref;
  for (const auto& r : ex.rows) ref.push_back(r.Ehat);
  std::sort(ref.begin(), ref.end());
  double worst = 0.0;
  for (int i = 0; i < 6; ++i) worst = std::max(worst, std::abs(fd[i] - ref[i]) / std::abs(ref[i]));
  // ground state alone, then degenerate pairs
  bool pattern = std::abs(fd[1] - fd[0]) > 1e-3 * std::abs(fd[0]);
  for (int i = 1; i + 1 < 6; i += 2) {
    pattern = pattern && std::abs(fd[i + 1] - fd[i]) <= 1e-4 * std::abs(fd[i]);
    if (i + 2 < 6) pattern = pattern && std::abs(fd[i + 2] - fd[i + 1]) > 1e-3 * std::abs(fd[i]);
  }
  const double elapsed = seconds_since(t0);
  o.detail << "6 lowest levels max rel dev " << fmt(worst) << " (ground " << fd[0] << ", closed form " << ref[0]
           << "); degeneracy 1,2,2,...: " << (pattern ? "yes" : "no") << "; " << fmt(elapsed) << " s";
  o.require(worst <= 1e-4, "eigenvalues");
  o.require(pattern, "degeneracy pattern");
  o.require(elapsed < 10.0, "runtime");
}

// 5. H1: indicial principal number against the printed one.
void criterion5(Outcome& o) {
  int compared = 0, skipped = 0, undefined = 0;
  double worst = 0.0, dev_min = INFINITY, dev_max = 0.0;
  std::string falls;
  for (double lam : {0.5, 1.0, std::sqrt(2.0)})
    for (double j : {0.5, 1.5})
      for (int eps : {1, -1}) {
        const RadialModel m = model(ModelId::H1, 2.0, lam);
        const Sector s{j, j, lam};
        const double c2 = centrifugal(m, s, eps);
        if (c2 < -0.25 + m.fall_to_center_delta) {
          ++skipped;
          char buf[96];
          std::snprintf(buf, sizeof buf, "%s(lambda=%.3g,j=%.1f,eps=%+d)", falls.empty() ? "" : ",", lam, j, eps);
          falls += buf;
          continue;
        }
        const double sx = indicial_exponent(c2);
        NumericOptions opt;
        if (sx < 1.0) {
          // slow h^(2s) convergence: three grids with Aitken extrapolation
          opt.M = 32000;
          opt.three_grids = true;
        }
        const NumericSpectrum ns = numeric_spectrum(m, s, eps, 4, opt);
        for (int n = 0; n <= 3; ++n) {
          const double e = ns.table.rows[n].Ehat;
          const double ind = exact_energy(m, sx, n);
          const double Np = printed_N(c2, n);
          const double pap = -m.alpha * m.alpha / (4 * Np * Np);
          const double d_ind = std::abs(e - ind) / std::abs(ind);
          worst = std::max(worst, d_ind);
          o.require(d_ind <= 1e-4, "indicial N at lambda=" + fmt(lam) + " j=" + fmt(j) + " n=" + std::to_string(n));
          if (std::isfinite(Np)) {
            const double d_pap = std::abs(e - pap) / std::abs(pap);
            dev_min = std::min(dev_min, d_pap);
            dev_max = std::max(dev_max, d_pap);
            o.require(d_ind < d_pap, "indicial closer than printed");
          } else {
            ++undefined;  // sqrt(c2) with c2 < 0
          }
          ++compared;
        }
      }
  o.detail << compared << " levels: indicial N certified (max rel dev " << fmt(worst) << "), printed N off by "
           << fmt(dev_min) << " .. " << fmt(dev_max) << " (undefined for " << undefined << " levels with c2 < 0); "
           << skipped << " fall-to-centre branches skipped: " << falls;
}

// 6. Closed-form radial wavefunctions.
void criterion6(Outcome& o) {
  std::vector<double> xs;
  for (int i = 1; i <= 800; ++i) xs.push_back(0.025 * i);
  struct Case {
    RadialModel m;
    Sector s;
  };
  const double r2 = std::sqrt(2.0);
  const std::vector<Case> cases{{model(ModelId::H3, 2.0, r2), {0.5, 0.5, r2}},
                                {model(ModelId::H3, 2.0, r2), {1.5, -0.5, r2}},
                                {model(ModelId::H1, 2.0, 0.5), {0.5, 0.5, 0.5}},
                                {model(ModelId::H1, 2.0, r2), {1.5, 1.5, r2}}};
  double worst = 0.0, printed_min = INFINITY, printed_max = 0.0;
  int states = 0, printed_undefined = 0;
  for (const auto& c : cases)
    for (int eps : {1, -1}) {
      if (centrifugal(c.m, c.s, eps) < -0.25 + c.m.fall_to_center_delta) continue;
      for (int n = 0; n <= 4; ++n) {
        const Wavefunction w = wavefunction(c.m, c.s, eps, n);
        const double res = ode_residual(w, xs);
        const int nodes = count_nodes([&](double x) { return w.value(x); }, (w.s + 2 * n + 40) / w.kappa);
        worst = std::max(worst, res);
        o.require(res <= 1e-8, "ode residual");
        o.require(nodes == n, "node count");
        ++states;
        try {
          const double pr = ode_residual(printed_wavefunction(c.m, c.s, eps, n), xs);
          printed_min = std::min(printed_min, pr);
          printed_max = std::max(printed_max, pr);
        } catch (const RadialError&) {
          ++printed_undefined;  // complex printed exponent
        }
      }
    }
  o.detail << states << " states, max ODE residual " << fmt(worst) << ", nodes = n for n <= 4; printed forms: residual "
           << fmt(printed_min) << " .. " << fmt(printed_max) << " (not real for " << printed_undefined << " states)";
}

// 7. Factorization, intertwining, superalgebra; coupled solve against H3.
void criterion7(Outcome& o) {
  int total = 0, ok = 0;
  auto tally = [&](const std::vector<IdentityCheck>& v) {
    for (const auto& c : v) {
      if (!c.asserted) continue;
      ++total;
      ok += c.ok();
      o.require(c.ok(), c.label);
    }
  };
  tally(susy_identities());
  tally(superalgebra_check());
  tally(superalgebra_check(Rational(1, 2)));
  tally(superalgebra_check(Rational(3, 2)));
  int broken = 0;
  for (const auto& c : superalgebra_check(std::nullopt, true)) broken += c.asserted && !c.zero();
  o.require(broken >= 1, "perturbed control");
  o.detail << ok << "/" << total << " symbolic identities, perturbed control breaks " << broken;

  RadialModel m = model(ModelId::H2, 2.0, std::sqrt(2.0));
  m.f = "inverse";
  double worst = 0.0;
  for (double j : {0.5, 1.5}) {
    const Sector s{j, 0.5, m.lambda};
    const NumericSpectrum c = numeric_spectrum(m, s, 0, 6);
    std::vector<double> ref;
    for (const auto& r : exact_spectrum(model(ModelId::H3, 2.0, m.lambda), s, 6).rows) ref.push_back(r.Ehat);
    std::sort(ref.begin(), ref.end());
    for (int i = 0; i < 6; ++i) worst = std::max(worst, std::abs(c.table.rows[i].Ehat - ref[i]) / std::abs(ref[i]));
  }
  o.detail << "; coupled f = lambda/x vs H3: max rel dev " << fmt(worst);
  o.require(worst <= 1e-4, "coupled solve");
}

// 8. Spinor basis.
void criterion8(Outcome& o) {
  int exact = 0, sectors = 0;
  for (long twoj = 1; twoj <= 11; twoj += 2)
    for (const Rational& lam : {Rational(0), rational(3, 4), Rational(2), rational(-5, 3)}) {
      const auto d = q1_square_defect(Rational(twoj, 2), lam);
      const bool z = std::all_of(d.begin(), d.end(), [](const Rational& q) { return q == 0; });
      exact += z;
      ++sectors;
    }
  o.require(exact == sectors, "q1 square");
  double ortho = 0.0, swap = 0.0, pref = 0.0, pref_minus = 0.0;
  int prefactor_fits = 0;
  for (double twoj = 1; twoj <= 11; twoj += 2)
    for (double lam : {0.0, 0.75, std::sqrt(2.0)}) {
      const double j = twoj / 2;
      for (double kappa = -j; kappa <= j; kappa += 1.0) {
        const Sector s{j, kappa, lam};
        const BasisReport b = basis_check(s);
        ortho = std::max({ortho, b.orthonormality_standard, b.orthonormality_hat});
        swap = std::max(swap, b.swap_residual);
        if (std::isfinite(b.measured_prefactor)) {
          pref = std::max(pref, std::abs(std::abs(b.measured_prefactor) / b.printed_prefactor - 1));
          ++prefactor_fits;
        }
        pref_minus = std::max(pref_minus, std::abs(std::abs(b.measured_prefactor_minus) / b.printed_prefactor - 1));
      }
    }
  o.require(ortho <= 1e-8, "orthonormality");
  o.require(swap <= 1e-10, "swap");
  o.detail << "q1^2 exact in " << exact << "/" << sectors << " sectors (j <= 11/2); orthonormality " << fmt(ortho)
           << "; swap " << fmt(swap) << "; prefactor 1/(2 sqrt mu): |measured/printed| - 1 <= " << fmt(pref) << " (+mu, "
           << prefactor_fits << " fits), " << fmt(pref_minus) << " (-mu, global sign -1)";
}

// 9. Solver validation on problems with known spectra.
void criterion9(Outcome& o) {
  double coul = 0.0;
  for (double alpha : {1.0, 2.0}) {
    const auto x = solve_fd_extrapolated(scalar([alpha](double r) { return -alpha / r; }), 1, 80.0 / alpha, 4000, 1);
    coul = std::max(coul, std::abs(x.values(0) + alpha * alpha / 4) / (alpha * alpha / 4));
  }
  o.require(coul <= 1e-4, "Coulomb");
  const auto osc = solve_fd_extrapolated(scalar([](double r) { return r * r; }), 1, 12.0, 2000, 3, true);
  double dev = 0.0, omin = INFINITY, omax = -INFINITY;
  for (int k = 0; k < 3; ++k) {
    dev = std::max(dev, std::abs(osc.values(k) - (3.0 + 4 * k)));
    omin = std::min(omin, osc.order(k));
    omax = std::max(omax, osc.order(k));
  }
  o.require(dev <= 1e-3, "oscillator");
  o.require(omin >= 1.8 && omax <= 2.2, "observed order");
  const Grid g = make_grid(10.0, 199);
  const FdSolution fr = solve_fd(scalar([](double) { return 0.0; }), 1, g, 10);
  double stencil = 0.0;
  for (int k = 1; k <= 10; ++k)
    stencil = std::max(stencil, std::abs(fr.pairs.values(k - 1) - (2 - 2 * std::cos(M_PI * k / (g.M + 1))) / (g.h * g.h)));
  o.require(stencil <= 1e-10, "stencil");
  o.detail << "Coulomb -alpha^2/4 rel dev " << fmt(coul) << "; oscillator 3/7/11 dev " << fmt(dev) << ", order "
           << omin << " .. " << omax << "; stencil " << fmt(stencil);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1..9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<void(Outcome&)>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                            criterion6, criterion7, criterion8, criterion9};
  bool all = true;
  for (int c = 1; c <= 9; ++c) {
    if (only && c != only) continue;
    Outcome o;
    try {
      criteria[c - 1](o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.failed.push_back(std::string("exception: ") + e.what());
    }
    std::string detail = o.detail.str();
    if (!o.failed.empty()) {
      detail += " | failed:";
      for (const auto& f : o.failed) detail += " " + f + ";";
    }
    const auto b = detail.find_first_not_of(' ');
    std::printf("criterion %d: %s  %s\n", c, o.pass ? "PASS" : "FAIL", detail.substr(b == std::string::npos ? 0 : b).c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
