// Command-line layer: run configuration (key = value file with sections,
// overridden by flags), check records and reports, and the subcommands.
#pragma once

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sis::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Bad configuration or usage: exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double eigenvalue = 1e-4;      // relative, finite differences vs closed form
  double ode = 1e-8;             // relative ODE residual of closed-form states
  double orthonormality = 1e-8;  // sphere quadrature
  double swap = 1e-10;           // sigma.n Omega_+ = Omega_-
  double fall_to_center = 1e-6;  // margin delta in c2 >= -1/4 + delta
};

struct RunConfig {
  std::string command;
  std::vector<std::string> argv;  // echoed in the report
  // [model]
  std::string model = "h3";
  double alpha = 2.0;
  double lambda = 1.4142135623730951;
  std::string potential = "coulomb";
  double beta = 0.0;
  double omega = 1.0;
  std::string f = "inverse";
  // [sector]
  double j = 0.5;
  std::optional<double> kappa;  // defaults to j
  std::string branch = "both";  // both | plus | minus | coupled
  // [spectrum]
  int nmax = 3;
  std::string n_formula = "indicial";  // indicial | printed
  // [grid]
  int M = 4000;
  double r_max = 0.0;
  bool three_grids = false;
  // [tolerance]
  Tolerances tol;
  // [verify]
  std::optional<std::vector<std::string>> suites;  // unset = all
  std::vector<std::string> cases;                  // appendix cases; empty = all
  // [output]
  std::string format;  // json | csv | text (command default when empty)
  std::string output;  // primary output path, empty = stdout
  std::string report;  // JSON report path for table commands
  std::string dump_wavefunctions;
  std::vector<std::string> inputs;  // report: reports to merge
};

// Parses the configuration text into `cfg`.  Unknown sections or keys,
// malformed values and non-positive tolerances raise ConfigError.
void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin = "config");
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);
// Sets one key of a section (used for both file values and flags).
void set_config_value(RunConfig& cfg, const std::string& section, const std::string& key, const std::string& value);
void validate(const RunConfig& cfg);
const std::map<std::string, std::vector<std::string>>& config_keys();
// Resolved configuration, echoed in every report.
nlohmann::json config_json(const RunConfig& cfg);

// ---------------------------------------------------------------- reports

struct CheckRecord {
  std::string name;
  std::string status;  // pass | fail | skip
  std::string metric;  // what `residual` measures
  std::optional<double> residual;
  std::optional<double> tolerance;
  std::string citation;
  std::string detail;
};

struct Report {
  std::string command;
  std::vector<std::string> argv;
  std::vector<CheckRecord> checks;
  nlohmann::json config = nlohmann::json::object();  // resolved configuration
  nlohmann::json data = nlohmann::json::object();    // command-specific payload

  void add(CheckRecord r) { checks.push_back(std::move(r)); }
  int count(const std::string& status) const;
  int exit_code() const { return count("fail") > 0 ? 1 : 0; }
  // Everything except "timestamp" is a function of the inputs.
  nlohmann::json to_json(bool with_timestamp = true) const;
  std::string to_text() const;
};

nlohmann::json to_json(const CheckRecord& r);
CheckRecord record_from_json(const nlohmann::json& j);
std::string status_of(bool ok);

// Write via a temporary file in the same directory and rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

// ---------------------------------------------------------------- commands

// Outputs are written by the commands themselves; the report is returned.
Report cmd_verify(const RunConfig& cfg);
Report cmd_spectrum(const RunConfig& cfg);
Report cmd_solve(const RunConfig& cfg);
Report cmd_basis(const RunConfig& cfg);
Report cmd_report(const RunConfig& cfg);

const std::vector<std::string>& suite_names();

// Full entry point; returns the process exit code.
int run(int argc, char** argv);

}  // namespace sis::cli
