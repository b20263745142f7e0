#include "sis/cli.hpp"

#include "sis/angular.hpp"
#include "sis/detsys.hpp"
#include "sis/models.hpp"
#include "sis/radial1d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace sis::cli {

using nlohmann::json;

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"catalog", "relations", "appendix", "conformal", "superalgebra"};
  return names;
}

namespace {

// Seed and size of the randomized residuals <=> commutator sample.
constexpr int kEquivalenceSamples = 200;
constexpr std::uint64_t kEquivalenceSeed = 20240607;

std::size_t term_count(const Radial1DOp& a) {
  std::size_t n = 0;
  for (const auto& [k, m] : a.terms())
    for (const auto& c : m.c) n += c.size();
  return n;
}

std::string fmt(double x, int digits = 12) {
  if (!std::isfinite(x)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// Primary output: a file (atomically) or stdout.
void emit(const RunConfig& cfg, const std::string& content) {
  if (cfg.output.empty() || cfg.output == "-") {
    std::cout << content;
    std::cout.flush();
  } else {
    write_atomic(cfg.output, content);
  }
}

// ---------------------------------------------------------------- verify suites

void relation_records(Report& rep, const std::string& prefix, const RelationReport& r, const std::string& citation) {
  for (const auto& it : r.items) {
    CheckRecord c;
    c.name = prefix + it.label;
    c.metric = "nonzero_terms";
    c.residual = static_cast<double>(it.residual.size());
    c.citation = citation.empty() ? it.citation : citation;
    if (it.asserted) {
      c.status = status_of(it.zero);
    } else {
      c.status = "skip";
      c.detail = std::string("printed variant, not asserted: ") + (it.zero ? "vanishes" : "does not vanish");
    }
    rep.add(c);
  }
}

void identity_records(Report& rep, const std::string& prefix, const std::vector<IdentityCheck>& items) {
  for (const auto& it : items) {
    CheckRecord c;
    c.name = prefix + it.label;
    c.metric = "nonzero_terms";
    c.residual = static_cast<double>(term_count(it.residual));
    c.citation = it.citation;
    if (!it.asserted) {
      c.status = "skip";
      c.detail = std::string("printed variant, not asserted: ") + (it.zero() ? "vanishes" : "does not vanish");
    } else {
      c.status = status_of(it.ok());
      if (!it.expect_zero) c.detail = "negative control: a nonzero residual is expected";
    }
    rep.add(c);
  }
}

json case_json(const CaseReport& r) {
  json j;
  j["case"] = r.id;
  j["citation"] = r.citation;
  j["obstruction"] = r.obstruction;
  j["conclusion"] = r.conclusion;
  j["ok"] = r.ok();
  j["residuals"] = json::array();
  j["stages"] = json::array();
  for (const auto& s : r.stages) {
    json st{{"label", s.label}, {"kind", s.kind}, {"expected", s.expected}, {"holds", s.holds},
            {"asserted", s.asserted}, {"ok", s.ok()}};
    if (s.kind == "residuals") {
      st["nonzero"] = s.nonzero();
      for (const auto& res : s.residuals)
        j["residuals"].push_back({{"eq", res.eq},
                                  {"indices", res.indices},
                                  {"part", res.part},
                                  {"zero", res.zero()},
                                  {"stage", s.label}});
    } else if (s.kind == "certificate") {
      st["claim"] = s.claim;
      st["certificate"] = {{"forced", s.certificate.forced},
                           {"inconsistent", s.certificate.inconsistent},
                           {"equations", s.certificate.equations},
                           {"unknowns", s.certificate.unknowns},
                           {"rank", s.certificate.rank}};
    }
    j["stages"].push_back(st);
  }
  return j;
}

void suite_appendix(Report& rep, const RunConfig& cfg) {
  std::vector<std::string> ids = cfg.cases.empty() ? appendix_case_ids() : cfg.cases;
  for (const auto& id : ids)
    if (std::find(appendix_case_ids().begin(), appendix_case_ids().end(), id) == appendix_case_ids().end())
      throw ConfigError("unknown appendix case '" + id + "'");
  json cases = json::array();
  for (const auto& id : ids) {
    const CaseReport r = verify_appendix_case(id);
    for (const auto& s : r.stages) {
      CheckRecord c;
      c.name = "appendix." + id + ": " + s.label;
      c.citation = r.citation;
      if (s.kind == "residuals") {
        c.metric = "nonzero_residuals";
        c.residual = static_cast<double>(s.nonzero());
      } else if (s.kind == "certificate") {
        c.metric = "rank";
        c.residual = static_cast<double>(s.certificate.rank);
        c.detail = s.claim;
      } else {
        c.metric = "identity";
      }
      if (!s.asserted) {
        c.status = "skip";
        c.detail = std::string("printed variant, not asserted: ") + (s.holds ? "holds" : "fails");
      } else {
        c.status = status_of(s.ok());
        if (s.kind == "residuals" && !s.expected) c.detail = "negative control: a nonzero residual is expected";
      }
      rep.add(c);
    }
    CheckRecord c;
    c.name = "appendix." + id;
    c.status = status_of(r.ok());
    c.metric = "stages_ok";
    c.citation = r.citation;
    c.detail = r.conclusion;
    rep.add(c);
    cases.push_back(case_json(r));
  }
  rep.data["cases"] = cases;

  // The residual system against the operator commutator on random ansaetze.
  if (cfg.cases.empty()) {
    const auto samples = randomized_equivalence(kEquivalenceSamples, kEquivalenceSeed);
    int agree = 0, zero = 0;
    for (const auto& s : samples) {
      agree += s.agree();
      zero += s.commutator_zero;
    }
    CheckRecord c;
    c.name = "appendix.randomized-equivalence";
    c.metric = "disagreements";
    c.residual = static_cast<double>(samples.size() - agree);
    c.citation = "com";
    c.status = status_of(agree == static_cast<int>(samples.size()) && zero > 0 && zero < static_cast<int>(samples.size()));
    c.detail = std::to_string(samples.size()) + " samples (seed " + std::to_string(kEquivalenceSeed) + "), " +
               std::to_string(zero) + " commuting";
    rep.add(c);
  }
}

void suite_superalgebra(Report& rep) {
  identity_records(rep, "susy.", susy_identities());
  identity_records(rep, "superalgebra.", superalgebra_check());
  identity_records(rep, "superalgebra.control.", superalgebra_check(std::nullopt, true));
  const EnergyConvention ec = energy_convention_check();
  CheckRecord c;
  c.name = "energy-convention: E = E^/(2m) against -m alpha^2/(2N^2) with alpha = 2m a";
  c.status = status_of(ec.holds_rescaled_coupling);
  c.metric = "identity";
  c.citation = "ee3";
  c.detail = std::string("with the same alpha in both formulas: ") + (ec.holds_same_coupling ? "holds" : "fails");
  rep.add(c);
}

// ---------------------------------------------------------------- radial helpers

RadialModel radial_model(const RunConfig& cfg) {
  RadialModel m;
  m.id = *parse_model(cfg.model);
  m.alpha = cfg.alpha;
  m.lambda = cfg.lambda;
  m.potential = cfg.potential;
  m.beta = cfg.beta;
  m.omega = cfg.omega;
  m.f = cfg.f;
  m.fall_to_center_delta = cfg.tol.fall_to_center;
  try {
    m.validate();
  } catch (const RadialError& e) {
    throw ConfigError(e.what());
  }
  return m;
}

Sector sector(const RunConfig& cfg) {
  Sector s{cfg.j, cfg.kappa.value_or(cfg.j), cfg.lambda};
  try {
    s.validate();
  } catch (const AngularError& e) {
    throw ConfigError(e.what());
  }
  return s;
}

json row_json(const SpectrumRow& r) {
  return {{"model", r.model},   {"j", r.j},         {"kappa", r.kappa},           {"branch", r.branch},
          {"n", r.n},           {"N", num(r.N)},    {"Ehat", num(r.Ehat)},        {"E_over_m", num(r.E_over_m)},
          {"degeneracy", r.degeneracy}, {"source", r.source}};
}

std::string csv(const std::vector<SpectrumRow>& rows) {
  std::ostringstream os;
  os << "model,j,kappa,branch,n,N,Ehat,E_over_m,degeneracy,source\n";
  for (const auto& r : rows)
    os << r.model << ',' << fmt(r.j) << ',' << fmt(r.kappa) << ',' << r.branch << ',' << r.n << ',' << fmt(r.N) << ','
       << fmt(r.Ehat) << ',' << fmt(r.E_over_m) << ',' << r.degeneracy << ',' << r.source << '\n';
  return os.str();
}

std::string text_table(const std::vector<SpectrumRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(6) << "model" << std::setw(6) << "j" << std::setw(7) << "kappa" << std::setw(7)
     << "branch" << std::setw(4) << "n" << std::setw(16) << "N" << std::setw(20) << "Ehat" << std::setw(20)
     << "E_over_m" << std::setw(5) << "deg" << "source\n";
  for (const auto& r : rows)
    os << std::left << std::setw(6) << r.model << std::setw(6) << fmt(r.j, 4) << std::setw(7) << fmt(r.kappa, 4)
       << std::setw(7) << r.branch << std::setw(4) << r.n << std::setw(16) << fmt(r.N, 10) << std::setw(20)
       << fmt(r.Ehat, 14) << std::setw(20) << fmt(r.E_over_m, 14) << std::setw(5) << r.degeneracy << r.source
       << "\n";
  return os.str();
}

void note_records(Report& rep, const std::string& prefix, const std::vector<std::string>& notes) {
  for (const auto& n : notes) {
    CheckRecord c;
    c.status = "skip";
    c.detail = n;
    if (n.rfind("no bound states", 0) == 0) {
      c.name = prefix + "bound-states";
      c.metric = "none";
    } else {
      c.name = prefix + "branch-note";
      c.metric = "none";
    }
    rep.add(c);
  }
}

// Table commands: csv -> table on the primary output, report to `report`;
// json -> report (with the rows) on the primary output; text -> both as text.
void emit_table_command(const RunConfig& cfg, Report& rep, const std::vector<SpectrumRow>& rows) {
  rep.config = config_json(cfg);
  json jr = json::array();
  for (const auto& r : rows) jr.push_back(row_json(r));
  rep.data["rows"] = jr;
  const std::string format = cfg.format.empty() ? "csv" : cfg.format;
  if (format == "csv") {
    emit(cfg, csv(rows));
  } else if (format == "json") {
    emit(cfg, rep.to_json().dump(2) + "\n");
  } else {
    emit(cfg, text_table(rows) + rep.to_text());
  }
  if (!cfg.report.empty()) write_atomic(cfg.report, rep.to_json().dump(2) + "\n");
}

void emit_report(const RunConfig& cfg, Report& rep) {
  rep.config = config_json(cfg);
  const std::string format = cfg.format.empty() ? "json" : cfg.format;
  if (format == "csv") throw ConfigError("csv output is only available for spectrum and solve");
  emit(cfg, format == "json" ? rep.to_json().dump(2) + "\n" : rep.to_text());
  if (!cfg.report.empty()) write_atomic(cfg.report, rep.to_json().dump(2) + "\n");
}

}  // namespace

// ---------------------------------------------------------------- commands

namespace {

Report build_verify(const RunConfig& cfg) {
  Report rep;
  rep.command = "verify";
  rep.argv = cfg.argv;
  const std::vector<std::string> selected = cfg.suites.value_or(suite_names());
  rep.data["suites"] = selected;
  for (const auto& s : suite_names()) {
    if (std::find(selected.begin(), selected.end(), s) != selected.end()) continue;
    rep.add({"suite." + s, "skip", "none", std::nullopt, std::nullopt, "", "not selected"});
  }
  for (const auto& s : selected) {
    if (s == "catalog") {
      relation_records(rep, "catalog.", catalog_matrix(), "com");
      json notes = json::array();
      for (const auto& n : catalog_conformance())
        notes.push_back({{"item", n.item}, {"printed", n.printed}, {"adopted", n.adopted},
                         {"printed_holds", n.printed_holds}, {"adopted_holds", n.adopted_holds}, {"detail", n.detail}});
      rep.data["conformance"] = notes;
    } else if (s == "relations") {
      for (const auto& id : relation_ids())
        if (id != "CA-all") relation_records(rep, "relations." + id + ": ", check_relation(id), "");
    } else if (s == "conformal") {
      relation_records(rep, "conformal: ", check_relation("CA-all"), "");
    } else if (s == "appendix") {
      suite_appendix(rep, cfg);
    } else if (s == "superalgebra") {
      suite_superalgebra(rep);
    }
  }
  return rep;
}

Report build_basis(const RunConfig& cfg);

}  // namespace

Report cmd_verify(const RunConfig& cfg) {
  Report rep = build_verify(cfg);
  emit_report(cfg, rep);
  return rep;
}

Report cmd_basis(const RunConfig& cfg) {
  Report rep = build_basis(cfg);
  emit_report(cfg, rep);
  return rep;
}

Report cmd_spectrum(const RunConfig& cfg) {
  Report rep;
  rep.command = "spectrum";
  rep.argv = cfg.argv;
  const RadialModel m = radial_model(cfg);
  const Sector s = sector(cfg);
  SpectrumTable t;
  try {
    t = exact_spectrum(m, s, cfg.nmax, cfg.n_formula == "printed" ? NFormula::printed : NFormula::indicial);
  } catch (const RadialError& e) {
    throw ConfigError(e.what());
  }
  if (cfg.branch == "plus" || cfg.branch == "minus") {
    const int b = cfg.branch == "plus" ? 1 : -1;
    std::erase_if(t.rows, [b](const SpectrumRow& r) { return r.branch != b; });
  }
  note_records(rep, "spectrum.", t.notes);
  rep.add({"spectrum.rows", "pass", "rows", static_cast<double>(t.rows.size()), std::nullopt, "ee3",
           std::to_string(t.rows.size()) + " closed-form rows"});
  rep.data["notes"] = t.notes;
  emit_table_command(cfg, rep, t.rows);
  return rep;
}

Report cmd_solve(const RunConfig& cfg) {
  Report rep;
  rep.command = "solve";
  rep.argv = cfg.argv;
  const RadialModel m = radial_model(cfg);
  const Sector s = sector(cfg);

  std::vector<int> branches;
  const bool coupled_only = m.id == ModelId::H2 && m.f != "zero";
  if (cfg.branch == "coupled" || coupled_only) {
    branches = {0};
  } else if (cfg.branch == "plus") {
    branches = {1};
  } else if (cfg.branch == "minus") {
    branches = {-1};
  } else {
    branches = {1, -1};
  }
  const int per_branch = std::min(cfg.nmax + 1, 20);

  // Closed forms where available.
  std::optional<SpectrumTable> exact;
  const bool closed = !(m.id == ModelId::H2 && m.f == "screened");
  if (closed) {
    try {
      exact = exact_spectrum(m, s, 2 * per_branch + 2);
    } catch (const RadialError& e) {
      throw ConfigError(e.what());
    }
    for (const auto& n : exact->notes)
      if (n.rfind("no bound states", 0) == 0) {
        note_records(rep, "solve.", {n});
        rep.data["notes"] = exact->notes;
        emit_table_command(cfg, rep, {});
        return rep;
      }
  }

  std::vector<SpectrumRow> rows;
  json branch_data = json::array();
  double max_abs = 0.0, max_rel = 0.0;
  bool compared = false;
  std::ostringstream dump;
  NumericOptions o;
  o.M = cfg.M;
  o.r_max = cfg.r_max;
  o.three_grids = cfg.three_grids;

  for (int b : branches) {
    const std::string bname = b == 0 ? "coupled" : b > 0 ? "plus" : "minus";
    const int count = b == 0 ? std::min(2 * per_branch, 20) : per_branch;
    NumericSpectrum ns;
    try {
      ns = numeric_spectrum(m, s, b, count, o);
    } catch (const RadialError& e) {
      rep.add({"solve." + bname, "skip", "none", std::nullopt, std::nullopt, "rep", e.what()});
      continue;
    }
    // Reference levels: the branch rows, or all rows for the coupled system.
    std::vector<double> ref;
    if (exact) {
      for (const auto& r : exact->rows)
        if (b == 0 || r.branch == b) ref.push_back(r.Ehat);
      std::sort(ref.begin(), ref.end());
    }
    json bd{{"branch", b}, {"r_max", ns.r_max}, {"M", o.M}, {"three_grids", o.three_grids}};
    json states = json::array();
    for (std::size_t i = 0; i < ns.table.rows.size(); ++i) {
      const double E = ns.table.rows[i].Ehat;
      json st{{"n", i}, {"Ehat", num(E)}, {"coarse", num(ns.raw.coarse(i))}, {"fine", num(ns.raw.fine(i))},
              {"method", i < ns.raw.method.size() ? ns.raw.method[i] : "richardson"}};
      if (ns.raw.order.size() > static_cast<Eigen::Index>(i)) st["order"] = num(ns.raw.order(i));
      CheckRecord c;
      c.name = "solve." + bname + ".n" + std::to_string(i);
      c.metric = "rel_delta";
      c.tolerance = cfg.tol.eigenvalue;
      c.citation = b == 0 ? "ep5" : "ee3";
      if (i < ref.size()) {
        const double d = std::abs(E - ref[i]), rel = d / std::abs(ref[i]);
        st["closed_form"] = ref[i];
        st["abs_delta"] = d;
        c.residual = rel;
        c.status = status_of(rel <= cfg.tol.eigenvalue);
        max_abs = std::max(max_abs, d);
        max_rel = std::max(max_rel, rel);
        compared = true;
      } else {
        c.status = "skip";
        c.detail = closed ? "no closed-form level to compare" : "no closed form for this f";
      }
      rep.add(c);
      states.push_back(st);
    }
    bd["states"] = states;
    branch_data.push_back(bd);
    rows.insert(rows.end(), ns.table.rows.begin(), ns.table.rows.end());

    if (!cfg.dump_wavefunctions.empty()) {
      const auto& sol = ns.raw.fine_solution;
      const double scale = 1.0 / std::sqrt(sol.grid.h);  // integral of u^2 dr = 1
      for (int i = 0; i < static_cast<int>(ns.table.rows.size()); ++i) {
        // Sign convention: the largest component is positive.
        Eigen::Index imax = 0;
        sol.pairs.vectors.col(i).cwiseAbs().maxCoeff(&imax);
        const double sign = sol.pairs.vectors(imax, i) < 0 ? -1.0 : 1.0;
        for (int ch = 0; ch < sol.channels; ++ch) {
          dump << "# model=" << cfg.model << " j=" << fmt(s.j) << " kappa=" << fmt(s.kappa) << " branch=" << b
               << " state=" << i << " channel=" << ch << " Ehat=" << fmt(ns.table.rows[i].Ehat) << "\n";
          dump << "# r\tu\n";
          for (int p = 0; p < sol.grid.M; ++p)
            dump << fmt(sol.grid.node(p), 10) << '\t' << fmt(sign * scale * sol.pairs.vectors(p * sol.channels + ch, i), 10)
                 << '\n';
          dump << "\n\n";
        }
      }
    }
  }
  if (compared) {
    rep.add({"solve.max-delta", status_of(max_abs <= cfg.tol.eigenvalue), "max_abs_delta", max_abs,
             cfg.tol.eigenvalue, "ee3", "max relative delta " + fmt(max_rel, 3)});
  }
  rep.data["branches"] = branch_data;
  rep.data["max_abs_delta"] = compared ? json(max_abs) : json(nullptr);
  rep.data["max_rel_delta"] = compared ? json(max_rel) : json(nullptr);
  if (exact) rep.data["notes"] = exact->notes;
  if (!cfg.dump_wavefunctions.empty()) write_atomic(cfg.dump_wavefunctions, dump.str());

  {
    SpectrumTable numeric{rows, {}};
    assign_degeneracy(numeric, cfg.tol.eigenvalue);
    rows = numeric.rows;
  }
  std::vector<SpectrumRow> table;
  if (exact) {
    for (int b : branches) {
      int taken = 0;
      const int limit = b == 0 ? std::min(2 * per_branch, 20) : per_branch;
      for (const auto& r : exact->rows)
        if ((b == 0 || r.branch == b) && taken < limit) {
          table.push_back(r);
          ++taken;
        }
    }
  }
  table.insert(table.end(), rows.begin(), rows.end());
  emit_table_command(cfg, rep, table);
  return rep;
}

namespace {

Report build_basis(const RunConfig& cfg) {
  Report rep;
  rep.command = "basis";
  rep.argv = cfg.argv;
  const Sector s = sector(cfg);
  const BasisReport b = basis_check(s);

  const auto defect = q1_square_defect(Rational(s.j), Rational(s.lambda));
  const bool exact_zero = std::all_of(defect.begin(), defect.end(), [](const Rational& q) { return q == 0; });
  rep.add({"basis.q1-square", status_of(exact_zero), "exact_defect_zero", exact_zero ? 0.0 : 1.0, std::nullopt, "sq1",
           "q1_block^2 - (j(j+1) + lambda^2 + 1/4) I over the rationals"});
  rep.add({"basis.orthonormality", status_of(b.orthonormality_standard <= cfg.tol.orthonormality), "max_abs_deviation",
           b.orthonormality_standard, cfg.tol.orthonormality, "ome1", ""});
  rep.add({"basis.orthonormality-hat", status_of(b.orthonormality_hat <= cfg.tol.orthonormality), "max_abs_deviation",
           b.orthonormality_hat, cfg.tol.orthonormality, "ome2", ""});
  rep.add({"basis.swap", status_of(b.swap_residual <= cfg.tol.swap), "max_pointwise", b.swap_residual, cfg.tol.swap,
           "sigma.n", "sigma.n Omega_+ = Omega_-"});
  rep.add({"basis.q1-eigen", status_of(b.q1_eigen_residual <= cfg.tol.swap), "max_pointwise", b.q1_eigen_residual,
           cfg.tol.swap, "ome1", ""});

  auto prefactor = [&](const std::string& name, double measured, double fit, const std::string& cite, const std::string& which) {
    CheckRecord c;
    c.name = name;
    c.metric = "rel_deviation_of_abs";
    c.citation = cite;
    c.tolerance = cfg.tol.orthonormality;
    if (!std::isfinite(measured)) {
      c.status = "skip";
      c.detail = "the printed expression vanishes identically in this sector";
    } else {
      const double dev = std::abs(std::abs(measured) - b.printed_prefactor) / b.printed_prefactor;
      c.residual = dev;
      c.status = status_of(dev <= cfg.tol.orthonormality && fit <= cfg.tol.orthonormality);
      c.detail = "measured " + fmt(measured) + " vs printed 1/(2 sqrt(mu)) = " + fmt(b.printed_prefactor) + " (" +
                 which + "), fit misfit " + fmt(fit, 3) + (measured < 0 ? "; global sign -1" : "");
    }
    rep.add(c);
  };
  prefactor("basis.prefactor(+mu)", b.measured_prefactor, b.fit_residual, "ome1", "upper component");
  prefactor("basis.prefactor(-mu)", b.measured_prefactor_minus, b.fit_residual_minus, "ome2", "lower component");

  rep.data = {{"j", s.j},
              {"kappa", s.kappa},
              {"lambda", s.lambda},
              {"mu", s.mu()},
              {"degree", b.degree},
              {"orthonormality_standard", b.orthonormality_standard},
              {"orthonormality_hat", b.orthonormality_hat},
              {"swap_residual", b.swap_residual},
              {"q1_eigen_residual", b.q1_eigen_residual},
              {"measured_prefactor", num(b.measured_prefactor)},
              {"measured_prefactor_minus", num(b.measured_prefactor_minus)},
              {"printed_prefactor", b.printed_prefactor},
              {"fit_residual", num(b.fit_residual)},
              {"fit_residual_minus", num(b.fit_residual_minus)},
              {"printed_norm", num(b.printed_norm)}};
  return rep;
}

}  // namespace

Report cmd_report(const RunConfig& cfg) {
  Report rep;
  rep.command = "report";
  rep.argv = cfg.argv;
  if (cfg.inputs.empty()) {
    // Full verification plus the default basis check.
    RunConfig sub = cfg;
    sub.suites.reset();
    Report v = build_verify(sub);
    for (auto& c : v.checks) rep.add(c);
    rep.data["verify"] = v.data;
    Report b = build_basis(sub);
    for (auto& c : b.checks) rep.add(c);
    rep.data["basis"] = b.data;
  } else {
    json sources = json::array();
    for (const auto& path : cfg.inputs) {
      std::ifstream in(path);
      if (!in) throw ConfigError("cannot read report " + path);
      json j;
      try {
        in >> j;
      } catch (const json::exception& e) {
        throw ConfigError("report " + path + " is not valid JSON: " + e.what());
      }
      if (!j.contains("checks") || !j["checks"].is_array()) throw ConfigError("report " + path + " has no checks");
      const std::string cmd = j.value("command", "");
      for (const auto& c : j["checks"]) {
        CheckRecord r = record_from_json(c);
        r.name = cmd + ":" + r.name;
        rep.add(r);
      }
      sources.push_back({{"path", path}, {"command", cmd}, {"summary", j.value("summary", json::object())}});
    }
    rep.data["sources"] = sources;
  }
  emit_report(cfg, rep);
  return rep;
}

}  // namespace sis::cli
