// Configuration parsing, exit codes, report layout and output handling of
// the sis command line.
#include "sis/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sis::cli;
namespace fs = std::filesystem;

namespace {

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "sis");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("sis_test_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json load(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("config text: sections, comments and values") {
  RunConfig c;
  apply_config_text(c,
                    "# comment\n"
                    "[model]\n"
                    "id = H1\n"
                    "alpha = 1.5\n"
                    "; another comment\n"
                    "[sector]\n"
                    "j = 1.5\n"
                    "kappa = -0.5\n"
                    "branch = minus\n"
                    "[grid]\n"
                    "three_grids = yes\n"
                    "M = 2000\n"
                    "[verify]\n"
                    "suites = catalog, appendix\n"
                    "[tolerance]\n"
                    "eigenvalue = 1e-5\n");
  CHECK(c.model == "h1");
  CHECK(c.alpha == 1.5);
  CHECK(c.j == 1.5);
  REQUIRE(c.kappa.has_value());
  CHECK(*c.kappa == -0.5);
  CHECK(c.branch == "minus");
  CHECK(c.three_grids);
  CHECK(c.M == 2000);
  REQUIRE(c.suites.has_value());
  CHECK(*c.suites == std::vector<std::string>{"catalog", "appendix"});
  CHECK(c.tol.eigenvalue == 1e-5);
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("the documented example configuration parses") {
  const std::string readme = slurp(fs::path(SIS_SOURCE_DIR) / "README.md");
  const auto b = readme.find("```ini\n");
  REQUIRE(b != std::string::npos);
  const auto e = readme.find("```", b + 7);
  RunConfig c;
  REQUIRE_NOTHROW(apply_config_text(c, readme.substr(b + 7, e - b - 7), "README.md"));
  CHECK_NOTHROW(validate(c));
  CHECK(c.model == "h3");
  CHECK(c.f == "inverse");
  CHECK(c.tol.swap == 1e-10);
  CHECK(c.cases.empty());
  CHECK(c.suites->size() == 5);
}

TEST_CASE("inline comments") {
  RunConfig c;
  apply_config_text(c, "[output]\npath = a#b.json   # comment\n[model]\nalpha = 3 ; other\n");
  CHECK(c.output == "a#b.json");
  CHECK(c.alpha == 3);
}

TEST_CASE("config errors") {
  RunConfig c;
  CHECK_THROWS_AS(apply_config_text(c, "[model]\nmass = 1\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text(c, "[nonsense]\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text(c, "alpha = 1\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text(c, "[model]\nalpha = two\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text(c, "[model]\nalpha\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text(c, "[grid]\nthree_grids = maybe\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text(c, "[tolerance]\node = 0\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text(c, "[tolerance]\nswap = -1e-3\n"), ConfigError);
  try {
    apply_config_text(c, "[model]\n\nbogus = 1\n", "x.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("x.cfg:3") != std::string::npos);
  }

  auto bad = [](auto&& mutate) {
    RunConfig r;
    mutate(r);
    CHECK_THROWS_AS(validate(r), ConfigError);
  };
  bad([](RunConfig& r) { r.j = 1.0; });
  bad([](RunConfig& r) { r.kappa = 1.5; });
  bad([](RunConfig& r) { r.model = "h4"; });
  bad([](RunConfig& r) { r.M = 10; });
  bad([](RunConfig& r) { r.nmax = -1; });
  bad([](RunConfig& r) { r.suites = std::vector<std::string>{"nope"}; });
  bad([](RunConfig& r) { r.format = "xml"; });
}

TEST_CASE("usage and configuration errors exit with 2") {
  const fs::path d = scratch_dir("usage");
  CHECK(invoke({"verify", "--bogus"}) == 2);
  CHECK(invoke({}) == 2);
  CHECK(invoke({"spectrum", "--j", "1"}) == 2);
  CHECK(invoke({"spectrum", "--config", (d / "missing.cfg").string()}) == 2);
  const fs::path cfg = scratch_dir("usage_cfg") / "bad.cfg";
  write(cfg, "[model]\nmass = 3\n");
  CHECK(invoke({"spectrum", "--config", cfg.string(), "-o", (d / "s.csv").string()}) == 2);
  CHECK(invoke({"verify", "--suite", "nonsense"}) == 2);
  // nothing was written
  CHECK(fs::is_empty(d));
}

TEST_CASE("flags override the configuration file") {
  const fs::path d = scratch_dir("override");
  write(d / "run.cfg", "[model]\nalpha = 3\nlambda = 0.75\n[sector]\nj = 1.5\n[spectrum]\nnmax = 1\n");
  REQUIRE(invoke({"spectrum", "--config", (d / "run.cfg").string(), "--alpha", "2", "--format", "json", "-o",
                  (d / "s.json").string()}) == 0);
  const auto j = load(d / "s.json");
  const auto& rows = j["data"]["rows"];
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK(r["j"] == 1.5);
    CHECK(r["n"].get<int>() <= 1);
  }
  CHECK(j["config"]["model"]["alpha"] == 2.0);
  CHECK(j["config"]["model"]["lambda"] == 0.75);
}

TEST_CASE("empty suite selection is a skip-only run") {
  const fs::path d = scratch_dir("empty");
  REQUIRE(invoke({"verify", "--suite", "", "-o", (d / "v.json").string()}) == 0);
  const auto j = load(d / "v.json");
  CHECK(j["summary"]["skip"] == 5);
  CHECK(j["summary"]["pass"] == 0);
  CHECK(j["exit_code"] == 0);
}

TEST_CASE("no bound states is not a failure") {
  const fs::path d = scratch_dir("nobound");
  CHECK(invoke({"solve", "--alpha", "-1", "--format", "json", "-o", (d / "s.json").string()}) == 0);
  const auto j = load(d / "s.json");
  bool noted = false;
  for (const auto& c : j["checks"])
    noted |= c["status"] == "skip" && c["detail"].get<std::string>().find("no bound states") != std::string::npos;
  CHECK(noted);
}

TEST_CASE("failing checks exit with 1") {
  const fs::path d = scratch_dir("fail");
  // the printed Q5 does not commute with H2 and H3
  CHECK(invoke({"verify", "--suite", "catalog", "-o", (d / "v.json").string()}) == 1);
  const auto j = load(d / "v.json");
  CHECK(j["exit_code"] == 1);
  CHECK(j["summary"]["fail"].get<int>() >= 2);
}

TEST_CASE("JSON reports are deterministic apart from the timestamp") {
  const fs::path d = scratch_dir("determinism");
  const fs::path out = d / "basis.json";
  REQUIRE(invoke({"basis", "--j", "1.5", "--lambda", "0.75", "-o", out.string()}) == 0);
  auto a = load(out);
  REQUIRE(invoke({"basis", "--j", "1.5", "--lambda", "0.75", "-o", out.string()}) == 0);
  auto b = load(out);
  CHECK(a.contains("timestamp"));
  a.erase("timestamp");
  b.erase("timestamp");
  CHECK(a.dump() == b.dump());
  for (const char* key : {"tool", "version", "command", "argv", "checks", "summary", "exit_code", "config", "data"})
    CHECK(a.contains(key));
  for (const auto& c : a["checks"])
    for (const char* key : {"name", "status", "metric", "residual", "tolerance", "citation"}) CHECK(c.contains(key));
}

TEST_CASE("atomic writes leave no temporaries and replace existing files") {
  const fs::path d = scratch_dir("atomic");
  write(d / "out.csv", "stale");
  REQUIRE(invoke({"spectrum", "--format", "csv", "-o", (d / "out.csv").string(), "--report",
                  (d / "rep.json").string()}) == 0);
  int files = 0;
  for (const auto& e : fs::directory_iterator(d)) {
    ++files;
    CHECK(e.path().filename().string().find(".tmp") == std::string::npos);
  }
  CHECK(files == 2);
  const std::string csv = slurp(d / "out.csv");
  CHECK(csv.rfind("model,", 0) == 0);
  CHECK(load(d / "rep.json")["command"] == "spectrum");

  write_atomic(d / "x.txt", "hello");
  CHECK(slurp(d / "x.txt") == "hello");
  CHECK_THROWS(write_atomic(d / "no" / "such" / "dir.txt", "x"));
}

TEST_CASE("single appendix case") {
  const fs::path d = scratch_dir("case");
  REQUIRE(invoke({"verify", "--suite", "appendix", "--case", "vector-first-order", "-o", (d / "v.json").string()}) ==
          0);
  const auto j = load(d / "v.json");
  REQUIRE(j["data"]["cases"].size() == 1);
  const auto& c = j["data"]["cases"][0];
  CHECK(c["case"] == "vector-first-order");
  CHECK(c["obstruction"] == "e3");
  CHECK(c["ok"] == true);
  CHECK(c["conclusion"].get<std::string>().find("obstruction phi=0") != std::string::npos);
  CHECK(invoke({"verify", "--suite", "appendix", "--case", "no-such-case"}) == 2);
  // --appendix <id|all> is shorthand for the appendix suite
  REQUIRE(invoke({"verify", "--appendix", "vector-first-order", "-o", (d / "a.json").string()}) == 0);
  auto a = load(d / "a.json"), v = j;
  CHECK(a["data"]["cases"] == v["data"]["cases"]);
  REQUIRE(invoke({"verify", "--appendix", "all", "-o", (d / "all.json").string()}) == 0);
  CHECK(load(d / "all.json")["data"]["cases"].size() == 9);
}

TEST_CASE("report merges command reports") {
  const fs::path d = scratch_dir("merge");
  REQUIRE(invoke({"basis", "-o", (d / "basis.json").string()}) == 0);
  REQUIRE(invoke({"verify", "--suite", "relations", "-o", (d / "rel.json").string()}) == 1);
  CHECK(invoke({"report", (d / "basis.json").string(), (d / "rel.json").string(), "-o", (d / "all.json").string()}) ==
        1);
  const auto all = load(d / "all.json");
  const auto basis = load(d / "basis.json"), rel = load(d / "rel.json");
  CHECK(all["checks"].size() == basis["checks"].size() + rel["checks"].size());
  CHECK(all["checks"][0]["name"].get<std::string>().rfind("basis:", 0) == 0);
  write(d / "broken.json", "{not json");
  CHECK(invoke({"report", (d / "broken.json").string()}) == 2);
}
