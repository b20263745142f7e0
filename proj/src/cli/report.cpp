#include "sis/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace sis::cli {

std::string status_of(bool ok) { return ok ? "pass" : "fail"; }

int Report::count(const std::string& status) const {
  int n = 0;
  for (const auto& c : checks) n += c.status == status;
  return n;
}

nlohmann::json to_json(const CheckRecord& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["status"] = r.status;
  j["metric"] = r.metric;
  // NaN / inf are not JSON; they are reported as null.
  j["residual"] = r.residual && std::isfinite(*r.residual) ? nlohmann::json(*r.residual) : nlohmann::json(nullptr);
  j["tolerance"] = r.tolerance ? nlohmann::json(*r.tolerance) : nlohmann::json(nullptr);
  j["citation"] = r.citation;
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

CheckRecord record_from_json(const nlohmann::json& j) {
  CheckRecord r;
  r.name = j.value("name", "");
  r.status = j.value("status", "");
  r.metric = j.value("metric", "");
  if (j.contains("residual") && j["residual"].is_number()) r.residual = j["residual"].get<double>();
  if (j.contains("tolerance") && j["tolerance"].is_number()) r.tolerance = j["tolerance"].get<double>();
  r.citation = j.value("citation", "");
  r.detail = j.value("detail", "");
  if (r.status != "pass" && r.status != "fail" && r.status != "skip")
    throw ConfigError("record '" + r.name + "' has an invalid status '" + r.status + "'");
  return r;
}

nlohmann::json Report::to_json(bool with_timestamp) const {
  nlohmann::json j;
  j["tool"] = "sis";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["argv"] = argv;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) j["checks"].push_back(sis::cli::to_json(c));
  j["summary"] = {{"pass", count("pass")}, {"fail", count("fail")}, {"skip", count("skip")},
                  {"total", static_cast<int>(checks.size())}};
  j["exit_code"] = exit_code();
  j["config"] = config;
  j["data"] = data;
  if (with_timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ts;
    ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    j["timestamp"] = ts.str();
  }
  return j;
}

std::string Report::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.status == "pass" ? "PASS" : c.status == "fail" ? "FAIL" : "SKIP") << "  " << c.name;
    if (c.residual) os << "  " << c.metric << "=" << std::setprecision(3) << *c.residual;
    if (c.tolerance) os << " (tol " << std::setprecision(3) << *c.tolerance << ")";
    if (!c.citation.empty()) os << "  [" << c.citation << "]";
    if (!c.detail.empty()) os << "  " << c.detail;
    os << "\n";
  }
  os << "summary: " << count("pass") << " pass, " << count("fail") << " fail, " << count("skip") << " skip\n";
  return os.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::random_device rd;
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(rd()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw std::runtime_error("write failed for " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

}  // namespace sis::cli
