#include "sis/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sis::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || !std::isfinite(x)) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return x;
}

int parse_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long x = 0;
  try {
    x = std::stol(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return static_cast<int>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
  const std::string s = lower(v);
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<std::string> parse_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_tolerance(const std::string& key, const std::string& v) {
  const double x = parse_double(key, v);
  if (!(x > 0)) throw ConfigError(key + ": tolerances must be > 0");
  return x;
}

}  // namespace

const std::map<std::string, std::vector<std::string>>& config_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"model", {"id", "alpha", "lambda", "potential", "beta", "omega", "f"}},
      {"sector", {"j", "kappa", "branch"}},
      {"spectrum", {"nmax", "n_formula"}},
      {"grid", {"M", "r_max", "three_grids"}},
      {"tolerance", {"eigenvalue", "ode", "orthonormality", "swap", "fall_to_center"}},
      {"verify", {"suites", "cases"}},
      {"output", {"format", "path", "report", "dump_wavefunctions"}},
  };
  return keys;
}

void set_config_value(RunConfig& c, const std::string& section, const std::string& key, const std::string& value) {
  const auto sec = config_keys().find(section);
  if (sec == config_keys().end()) throw ConfigError("unknown section [" + section + "]");
  if (std::find(sec->second.begin(), sec->second.end(), key) == sec->second.end())
    throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
  const std::string k = section + "." + key;
  const std::string& v = value;

  if (section == "model") {
    if (key == "id") c.model = lower(v);
    else if (key == "alpha") c.alpha = parse_double(k, v);
    else if (key == "lambda") c.lambda = parse_double(k, v);
    else if (key == "potential") c.potential = lower(v);
    else if (key == "beta") c.beta = parse_double(k, v);
    else if (key == "omega") c.omega = parse_double(k, v);
    else if (key == "f") c.f = lower(v);
  } else if (section == "sector") {
    if (key == "j") c.j = parse_double(k, v);
    else if (key == "kappa") c.kappa = parse_double(k, v);
    else if (key == "branch") c.branch = lower(v);
  } else if (section == "spectrum") {
    if (key == "nmax") c.nmax = parse_int(k, v);
    else if (key == "n_formula") c.n_formula = lower(v);
  } else if (section == "grid") {
    if (key == "M") c.M = parse_int(k, v);
    else if (key == "r_max") c.r_max = parse_double(k, v);
    else if (key == "three_grids") c.three_grids = parse_bool(k, v);
  } else if (section == "tolerance") {
    if (key == "eigenvalue") c.tol.eigenvalue = parse_tolerance(k, v);
    else if (key == "ode") c.tol.ode = parse_tolerance(k, v);
    else if (key == "orthonormality") c.tol.orthonormality = parse_tolerance(k, v);
    else if (key == "swap") c.tol.swap = parse_tolerance(k, v);
    else if (key == "fall_to_center") c.tol.fall_to_center = parse_tolerance(k, v);
  } else if (section == "verify") {
    if (key == "suites") c.suites = parse_list(v);
    else if (key == "cases") c.cases = parse_list(v);
  } else if (section == "output") {
    if (key == "format") c.format = lower(v);
    else if (key == "path") c.output = v;
    else if (key == "report") c.report = v;
    else if (key == "dump_wavefunctions") c.dump_wavefunctions = v;
  }
}

void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno) + ": ";
    // A '#' or ';' at the start of a line or after whitespace starts a comment.
    for (std::size_t i = 0; i < line.size(); ++i)
      if ((line[i] == '#' || line[i] == ';') && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line.erase(i);
        break;
      }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "malformed section header");
      section = lower(trim(line.substr(1, line.size() - 2)));
      if (!config_keys().count(section)) throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    if (section.empty()) throw ConfigError(where + "key outside of a section");
    try {
      set_config_value(cfg, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str(), path.string());
}

nlohmann::json config_json(const RunConfig& c) {
  nlohmann::json j;
  j["model"] = {{"id", c.model}, {"alpha", c.alpha}, {"lambda", c.lambda}, {"potential", c.potential},
                {"beta", c.beta}, {"omega", c.omega}, {"f", c.f}};
  j["sector"] = {{"j", c.j}, {"kappa", c.kappa ? nlohmann::json(*c.kappa) : nlohmann::json(c.j)}, {"branch", c.branch}};
  j["spectrum"] = {{"nmax", c.nmax}, {"n_formula", c.n_formula}};
  j["grid"] = {{"M", c.M}, {"r_max", c.r_max}, {"three_grids", c.three_grids}};
  j["tolerance"] = {{"eigenvalue", c.tol.eigenvalue}, {"ode", c.tol.ode}, {"orthonormality", c.tol.orthonormality},
                    {"swap", c.tol.swap}, {"fall_to_center", c.tol.fall_to_center}};
  j["verify"] = {{"suites", c.suites ? nlohmann::json(*c.suites) : nlohmann::json(suite_names())}, {"cases", c.cases}};
  return j;
}

void validate(const RunConfig& c) {
  auto one_of = [](const std::string& v, std::initializer_list<const char*> allowed, const std::string& what) {
    for (const char* a : allowed)
      if (v == a) return;
    std::string msg = what + ": '" + v + "' is not one of";
    for (const char* a : allowed) msg += std::string(" ") + a;
    throw ConfigError(msg);
  };
  one_of(c.model, {"h1", "h2", "h3"}, "model");
  one_of(c.potential, {"coulomb", "oscillator"}, "potential");
  one_of(c.f, {"inverse", "screened", "zero"}, "f");
  one_of(c.branch, {"both", "plus", "minus", "coupled"}, "branch");
  one_of(c.n_formula, {"indicial", "printed"}, "n_formula");
  if (!c.format.empty()) one_of(c.format, {"json", "csv", "text"}, "format");
  for (double t : {c.tol.eigenvalue, c.tol.ode, c.tol.orthonormality, c.tol.swap, c.tol.fall_to_center})
    if (!(t > 0)) throw ConfigError("tolerances must be > 0");
  if (c.nmax < 0 || c.nmax > 19) throw ConfigError("nmax must be in 0..19");
  if (c.M < 64) throw ConfigError("grid M must be >= 64");
  if (c.r_max < 0) throw ConfigError("r_max must be >= 0 (0 selects the default box)");
  const double twice = 2 * c.j;
  if (!(c.j > 0) || std::abs(twice - std::round(twice)) > 1e-12 || std::lround(twice) % 2 != 1)
    throw ConfigError("j must be a positive half-integer");
  if (c.kappa) {
    const double d = *c.kappa + c.j;
    if (std::abs(d - std::round(d)) > 1e-12 || *c.kappa < -c.j - 1e-12 || *c.kappa > c.j + 1e-12)
      throw ConfigError("kappa must be one of -j, -j+1, ..., j");
  }
  if (c.suites)
    for (const auto& s : *c.suites)
      if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
        throw ConfigError("unknown suite '" + s + "'");
}

}  // namespace sis::cli
