#pragma once

// Result records: one JSON object per line on standard output.

#include "ncdil/certified.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace ncdil {

inline constexpr int kSchemaVersion = 1;

struct ResultRecord {
  std::string command;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  double value = 0;
  double error_bound = 0;
  std::string bound_kind = "heuristic";
  std::optional<std::uint64_t> seed;
  std::int64_t runtime_ms = 0;
  std::string artifact_version;
  std::string timestamp;  // ISO-8601, UTC
  int schema_version = kSchemaVersion;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();

  void set_certified(const CertifiedValue& v);
  nlohmann::ordered_json to_json() const;
  static ResultRecord from_json(const nlohmann::ordered_json& j);  // throws UsageError
  std::string to_line() const { return to_json().dump(); }

  friend bool operator==(const ResultRecord& a, const ResultRecord& b) { return a.to_json() == b.to_json(); }
};

/// JSON numbers cannot hold infinities; those become null.
nlohmann::ordered_json json_number(double x);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

std::string artifact_version();

}  // namespace ncdil
