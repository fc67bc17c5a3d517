#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

#include "hybell/sweep.hpp"

namespace hybell {

using json = nlohmann::json;

// NaN fields serialize as null and read back as NaN.
json to_json(const ViolationParams& p);
ViolationParams params_from_json(const json& j);
json to_json(const CriticalPoint& c);
CriticalPoint critical_from_json(const json& j);
json to_json(const CurvePoint& p);
CurvePoint curve_point_from_json(const json& j);
json to_json(const OptimizerConfig& o);
/// Everything that determines the curve values (not the checkpoint path).
json to_json(const CurveConfig& c);

/// 64-bit FNV-1a of the compact JSON form, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);
std::string config_hash(const CurveConfig& c);

/// Line-delimited checkpoint: a header line carrying the config hash, then
/// one record per completed grid point.
class CheckpointFile {
 public:
  /// Reads the records of an existing file (throws CheckpointMismatchError
  /// if its header names a different hash) and opens it for appending.
  CheckpointFile(const std::string& path, const std::string& hash, const json& config);

  const std::map<int, CurvePoint>& completed() const { return completed_; }
  void append(int index, const CurvePoint& point);

 private:
  std::string path_;
  std::map<int, CurvePoint> completed_;
  std::ofstream out_;
};

}  // namespace hybell
