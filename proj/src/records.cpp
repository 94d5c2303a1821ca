#include "ncdil/records.hpp"

#include "ncdil/errors.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

namespace ncdil {

nlohmann::ordered_json json_number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string artifact_version() { return NCDIL_VERSION; }

void ResultRecord::set_certified(const CertifiedValue& v) {
  value = v.value;
  error_bound = std::isfinite(v.error_bound) ? v.error_bound : 0.0;
  bound_kind = to_string(v.kind);
  details["lower"] = json_number(v.lower);
  details["upper"] = json_number(v.upper);
  details["grid_step"] = v.method.grid_step;
  details["lipschitz"] = v.method.lipschitz;
  details["symmetry_reduction"] = v.method.symmetry_reduction;
  details["evaluations"] = v.method.evaluations;
  details["method"] = v.method.description;
}

nlohmann::ordered_json ResultRecord::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = schema_version;
  j["command"] = command;
  j["params"] = params;
  j["value"] = json_number(value);
  j["error_bound"] = json_number(error_bound);
  j["bound_kind"] = bound_kind;
  j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
  j["runtime_ms"] = runtime_ms;
  j["artifact_version"] = artifact_version;
  j["timestamp"] = timestamp;
  j["details"] = details;
  return j;
}

namespace {

double number_or_throw(const nlohmann::ordered_json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw UsageError(std::string("record field '") + key + "' is not a number");
  return v.get<double>();
}

}  // namespace

ResultRecord ResultRecord::from_json(const nlohmann::ordered_json& j) {
  try {
    ResultRecord r;
    r.schema_version = j.at("schema_version").get<int>();
    r.command = j.at("command").get<std::string>();
    r.params = j.at("params");
    r.value = number_or_throw(j, "value");
    r.error_bound = number_or_throw(j, "error_bound");
    r.bound_kind = j.at("bound_kind").get<std::string>();
    bound_kind_from_string(r.bound_kind);
    if (!j.at("seed").is_null()) r.seed = j.at("seed").get<std::uint64_t>();
    r.runtime_ms = j.at("runtime_ms").get<std::int64_t>();
    r.artifact_version = j.at("artifact_version").get<std::string>();
    r.timestamp = j.at("timestamp").get<std::string>();
    r.details = j.at("details");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed result record: ") + e.what());
  }
}

}  // namespace ncdil
