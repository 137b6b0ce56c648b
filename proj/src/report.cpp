#include "fmpo/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "fmpo/errors.hpp"
#include "fmpo/tensor_io.hpp"

namespace fmpo {

using nlohmann::json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256 failed");
  std::ostringstream os;
  for (unsigned int k = 0; k < len; ++k) os << std::hex << std::setw(2) << std::setfill('0') << int(md[k]);
  return os.str();
}

void RunReport::add_input_file(const std::string& path) { inputs.emplace_back(path, sha256_hex(read_file(path))); }

void RunReport::add_input_value(const std::string& name, const std::string& value) {
  inputs.emplace_back(name, sha256_hex(value));
}

void RunReport::add_result(const std::string& name, const std::string& value) { results.emplace_back(name, value); }

bool RunReport::add_residual(const std::string& name, double value, double tolerance) {
  const bool ok = std::isfinite(value) && value <= tolerance;
  residuals.push_back({name, value, tolerance, ok});
  if (!ok) pass = false;
  return ok;
}

void RunReport::finish() {
  if (!error.empty()) {
    pass = false;
    if (exit_code == 0) exit_code = 2;
    return;
  }
  exit_code = pass ? 0 : 1;
}

std::string RunReport::to_json() const {
  json j;
  j["command"] = command;
  j["inputs"] = json::array();
  for (const auto& [n, h] : inputs) j["inputs"].push_back({{"name", n}, {"sha256", h}});
  j["results"] = json::object();
  for (const auto& [n, v] : results) j["results"][n] = v;
  j["residuals"] = json::array();
  for (const auto& r : residuals)
    j["residuals"].push_back({{"name", r.name},
                              {"value", std::isfinite(r.value) ? json(r.value) : json(std::to_string(r.value))},
                              {"tolerance", r.tolerance},
                              {"pass", r.pass}});
  j["warnings"] = warnings;
  j["pass"] = pass;
  j["exit_code"] = exit_code;
  if (!error.empty()) j["error"] = error;
  j["wall_time_s"] = wall_seconds;
  return j.dump(2);
}

std::string RunReport::to_text() const {
  std::ostringstream os;
  os << command << '\n';
  for (const auto& [n, v] : results) os << "  " << n << ": " << v << '\n';
  for (const auto& r : residuals)
    os << "  " << r.name << " = " << std::scientific << std::setprecision(3) << r.value << " (tol "
       << r.tolerance << ") " << (r.pass ? "ok" : "FAIL") << '\n'
       << std::defaultfloat;
  for (const auto& w : warnings) os << "  warning: " << w << '\n';
  if (!error.empty()) os << "  error: " << error << '\n';
  os << (pass ? "PASS" : "FAIL") << '\n';
  return os.str();
}

std::vector<std::string> validate_report_json(const std::string& text) {
  std::vector<std::string> bad;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error&) {
    return {"not valid JSON"};
  }
  if (!j.is_object()) return {"report is not an object"};
  auto need = [&](const char* key, bool ok) {
    if (!j.contains(key)) bad.push_back(std::string("missing ") + key);
    else if (!ok) bad.push_back(std::string("wrong type for ") + key);
  };
  need("command", j.contains("command") && j["command"].is_string());
  need("inputs", j.contains("inputs") && j["inputs"].is_array());
  need("results", j.contains("results") && j["results"].is_object());
  need("residuals", j.contains("residuals") && j["residuals"].is_array());
  need("warnings", j.contains("warnings") && j["warnings"].is_array());
  need("pass", j.contains("pass") && j["pass"].is_boolean());
  need("exit_code", j.contains("exit_code") && j["exit_code"].is_number_integer());
  need("wall_time_s", j.contains("wall_time_s") && j["wall_time_s"].is_number());
  if (j.contains("inputs") && j["inputs"].is_array())
    for (const auto& i : j["inputs"])
      if (!i.is_object() || !i.contains("name") || !i.contains("sha256") || !i["sha256"].is_string() ||
          i["sha256"].get<std::string>().size() != 64)
        bad.push_back("malformed input entry");
  if (j.contains("residuals") && j["residuals"].is_array())
    for (const auto& r : j["residuals"])
      if (!r.is_object() || !r.contains("name") || !r.contains("value") ||
          !(r["value"].is_number() || r["value"].is_string()) ||
          !r.contains("tolerance") || !r.contains("pass") || !r["pass"].is_boolean())
        bad.push_back("malformed residual entry");
  return bad;
}

}  // namespace fmpo
