#include "sis/cli.hpp"

#include "sis/angular.hpp"
#include "sis/radial1d.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>

namespace sis::cli {

namespace {

struct Override {
  std::string section, key, value;
};

// A flag that becomes a config override, so that flags win over the file.
void flag_value(CLI::App* app, std::vector<Override>& ov, const std::string& name, const std::string& section,
                const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(
      name, [&ov, section, key](const std::string& v) { ov.push_back({section, key, v}); }, help);
}

void common_options(CLI::App* app, std::vector<Override>& ov, std::string& config_path) {
  app->add_option("--config", config_path, "configuration file (key = value with [sections])");
  flag_value(app, ov, "--model", "model", "id", "h1 | h2 | h3");
  flag_value(app, ov, "--alpha", "model", "alpha", "Coulomb coupling alpha");
  flag_value(app, ov, "--lambda", "model", "lambda", "dipole coupling lambda");
  flag_value(app, ov, "--potential", "model", "potential", "H1 potential: coulomb | oscillator");
  flag_value(app, ov, "--beta", "model", "beta", "H1 inverse-square coefficient");
  flag_value(app, ov, "--omega", "model", "omega", "H1 oscillator frequency");
  flag_value(app, ov, "--f", "model", "f", "H2 function f: inverse | screened | zero");
  flag_value(app, ov, "--j", "sector", "j", "total angular momentum (half-integer)");
  flag_value(app, ov, "--kappa", "sector", "kappa", "J3 eigenvalue (default j)");
  flag_value(app, ov, "--branch", "sector", "branch", "both | plus | minus | coupled");
  flag_value(app, ov, "--nmax", "spectrum", "nmax", "highest radial quantum number");
  flag_value(app, ov, "--n-formula", "spectrum", "n_formula", "H1 principal number: indicial | printed");
  flag_value(app, ov, "--M", "grid", "M", "interior grid points of the coarse grid");
  flag_value(app, ov, "--r-max", "grid", "r_max", "box size (0: from the closed-form estimate)");
  flag_value(app, ov, "--three-grids", "grid", "three_grids", "true | false");
  flag_value(app, ov, "--tol-eigenvalue", "tolerance", "eigenvalue", "relative eigenvalue tolerance");
  flag_value(app, ov, "--tol-ode", "tolerance", "ode", "ODE residual tolerance");
  flag_value(app, ov, "--tol-orthonormality", "tolerance", "orthonormality", "quadrature tolerance");
  flag_value(app, ov, "--tol-swap", "tolerance", "swap", "pointwise spinor identity tolerance");
  flag_value(app, ov, "--fall-to-center", "tolerance", "fall_to_center", "margin delta in c2 >= -1/4 + delta");
  flag_value(app, ov, "--format", "output", "format", "json | csv | text");
  flag_value(app, ov, "-o,--output", "output", "path", "primary output file (default stdout)");
  flag_value(app, ov, "--report", "output", "report", "also write the JSON report here");
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Verification tool for spin-1/2 rotationally invariant Hamiltonians with dipole interactions", "sis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::vector<Override> ov;
  std::string config_path;
  std::vector<std::string> suites, cases, appendix, inputs;

  auto* verify = app.add_subcommand("verify", "symbolic verification suites");
  common_options(verify, ov, config_path);
  verify->add_option("--suite", suites, "catalog, relations, appendix, conformal, superalgebra (comma list or repeated)")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  verify->add_option("--case", cases, "appendix case id (repeatable)")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  verify->add_option("--appendix", appendix, "run the appendix suite for one case id, or all")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  auto* spectrum = app.add_subcommand("spectrum", "closed-form spectrum table");
  common_options(spectrum, ov, config_path);

  auto* solve = app.add_subcommand("solve", "finite-difference spectrum against the closed forms");
  common_options(solve, ov, config_path);
  flag_value(solve, ov, "--dump-wavefunctions", "output", "dump_wavefunctions", "write radial wavefunctions (TSV)");

  auto* basis = app.add_subcommand("basis", "spherical spinor checks");
  common_options(basis, ov, config_path);

  auto* report = app.add_subcommand("report", "merge reports, or run the full verification");
  common_options(report, ov, config_path);
  report->add_option("inputs,--input", inputs, "report files to merge");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  RunConfig cfg;
  try {
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.argv.assign(argv + 1, argv + argc);
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    for (const auto& o : ov) set_config_value(cfg, o.section, o.key, o.value);
    if (verify->count("--suite")) {
      std::string joined;
      for (const auto& s : suites) joined += s + ",";
      set_config_value(cfg, "verify", "suites", joined);
    }
    if (verify->count("--case")) cfg.cases = cases;
    if (verify->count("--appendix")) {
      // shorthand for --suite appendix [--case id]
      std::vector<std::string> sel = cfg.suites && verify->count("--suite") ? *cfg.suites : std::vector<std::string>{};
      if (std::find(sel.begin(), sel.end(), "appendix") == sel.end()) sel.push_back("appendix");
      cfg.suites = sel;
      for (const auto& a : appendix)
        if (a != "all") cfg.cases.push_back(a);
      if (std::find(appendix.begin(), appendix.end(), "all") != appendix.end()) cfg.cases.clear();
    }
    cfg.inputs = inputs;
    validate(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "sis: " << e.what() << "\n";
    return 2;
  }

  try {
    Report rep;
    if (cfg.command == "verify") rep = cmd_verify(cfg);
    else if (cfg.command == "spectrum") rep = cmd_spectrum(cfg);
    else if (cfg.command == "solve") rep = cmd_solve(cfg);
    else if (cfg.command == "basis") rep = cmd_basis(cfg);
    else rep = cmd_report(cfg);
    const int code = rep.exit_code();
    if (code != 0) std::cerr << "sis: " << rep.count("fail") << " check(s) failed\n";
    return code;
  } catch (const ConfigError& e) {
    std::cerr << "sis: " << e.what() << "\n";
    return 2;
  } catch (const AngularError& e) {
    std::cerr << "sis: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "sis: error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace sis::cli
