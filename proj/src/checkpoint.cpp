#include "hybell/checkpoint.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "hybell/errors.hpp"

namespace hybell {
namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return kNaN;
  return it->get<double>();
}

}  // namespace

json to_json(const ViolationParams& p) {
  return {{"gamma", number(p.gamma)},
          {"nu", number(p.nu)},
          {"alpha_re", number(p.alpha.real())},
          {"alpha_im", number(p.alpha.imag())},
          {"theta", number(p.theta)},
          {"binning", p.binning.to_string()}};
}

ViolationParams params_from_json(const json& j) {
  ViolationParams p;
  p.gamma = number_from(j, "gamma");
  p.nu = number_from(j, "nu");
  p.alpha = {number_from(j, "alpha_re"), number_from(j, "alpha_im")};
  p.theta = number_from(j, "theta");
  p.binning = BinningSet::parse(j.at("binning").get<std::string>());
  return p;
}

json to_json(const CriticalPoint& c) {
  return {{"fixed", to_string(c.fixed)},     {"fixed_value", c.fixed_value},
          {"swept", to_string(c.swept)},     {"critical", number(c.critical)},
          {"lower", number(c.lower)},        {"chsh", number(c.value)},
          {"params", to_json(c.params)},     {"truncation_weight", c.truncation_weight},
          {"probes", c.probes}};
}

CriticalPoint critical_from_json(const json& j) {
  CriticalPoint c;
  c.fixed = parse_parameter(j.at("fixed").get<std::string>());
  c.fixed_value = j.at("fixed_value").get<double>();
  c.swept = parse_parameter(j.at("swept").get<std::string>());
  c.critical = number_from(j, "critical");
  c.lower = number_from(j, "lower");
  c.value = number_from(j, "chsh");
  c.params = params_from_json(j.at("params"));
  c.truncation_weight = j.at("truncation_weight").get<double>();
  c.probes = j.at("probes").get<int>();
  return c;
}

json to_json(const CurvePoint& p) {
  json j = {{"grid_value", p.grid_value}};
  j["point"] = p.point ? to_json(*p.point) : json(nullptr);
  j["gap"] = p.gap;
  return j;
}

CurvePoint curve_point_from_json(const json& j) {
  CurvePoint p;
  p.grid_value = j.at("grid_value").get<double>();
  if (!j.at("point").is_null()) p.point = critical_from_json(j.at("point"));
  p.gap = j.value("gap", "");
  return p;
}

json to_json(const OptimizerConfig& o) {
  json j = {{"gamma_points", o.gamma_points},
            {"nu_points", o.nu_points},
            {"alpha_points", o.alpha_points},
            {"alpha_phase_points", o.alpha_phase_points},
            {"theta_points", o.theta_points},
            {"alpha_min", o.alpha_min},
            {"alpha_max", o.alpha_max},
            {"max_iterations", o.max_iterations},
            {"tolerance", o.tolerance},
            {"seed", o.seed},
            {"multistart", o.multistart},
            {"alpha_mode", o.alpha_mode == AlphaMode::Imaginary ? "imaginary" : "complex"},
            {"binning_mode", to_string(o.binning_mode)},
            {"cat_n_max", o.cat_n_max},
            {"bisection_width", o.bisection_width}};
  j["binning"] = o.binning ? json(o.binning->to_string()) : json(nullptr);
  j["theta"] = o.theta ? json(*o.theta) : json(nullptr);
  return j;
}

json to_json(const CurveConfig& c) {
  json g = json::array();
  for (double v : c.grid) g.push_back(v);
  return {{"scenario", to_string(c.scenario)},
          {"state", to_string(c.family)},
          {"grid_parameter", to_string(c.grid_parameter)},
          {"grid", g},
          {"optimizer", to_json(c.opt)}};
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const CurveConfig& c) { return fnv1a_hex(to_json(c).dump()); }

CheckpointFile::CheckpointFile(const std::string& path, const std::string& hash, const json& config) : path_(path) {
  bool fresh = true;
  if (std::filesystem::exists(path) && std::filesystem::file_size(path) > 0) {
    std::string text;
    {
      std::ifstream in(path, std::ios::binary);
      std::ostringstream buf;
      buf << in.rdbuf();
      text = buf.str();
    }
    std::size_t pos = 0;
    std::size_t good_end = 0;  // end of the last complete, parsed line
    int lineno = 0;
    while (pos < text.size()) {
      const std::size_t nl = text.find('\n', pos);
      const bool last = nl == std::string::npos || nl + 1 == text.size();
      const std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
      const std::size_t next = nl == std::string::npos ? text.size() : nl + 1;
      ++lineno;
      if (line.empty()) {
        pos = next;
        good_end = next;
        continue;
      }
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception&) {
        // A torn last line from an interrupted run is dropped; anything else is corruption.
        if (last) break;
        throw CheckpointMismatchError(path + ":" + std::to_string(lineno) + ": unreadable checkpoint record");
      }
      if (fresh) {
        if (j.value("kind", "") != "header")
          throw CheckpointMismatchError(path + ": first line is not a checkpoint header");
        if (j.value("config_hash", "") != hash)
          throw CheckpointMismatchError(path + ": checkpoint config hash " + j.value("config_hash", "?") +
                                        " does not match this run (" + hash + ")");
        fresh = false;
      } else {
        completed_[j.at("index").get<int>()] = curve_point_from_json(j.at("record"));
      }
      pos = next;
      good_end = next;
    }
    if (good_end < text.size()) std::filesystem::resize_file(path, good_end);
    if (!fresh && good_end > 0 && text[good_end - 1] != '\n') std::ofstream(path, std::ios::app) << '\n';
    if (fresh) std::filesystem::resize_file(path, 0);
  }
  out_.open(path, std::ios::app);
  if (!out_) throw Error("cannot open checkpoint file " + path);
  if (fresh) {
    out_ << json{{"kind", "header"}, {"format", "hybell-curve-checkpoint"}, {"version", 1}, {"config_hash", hash},
                 {"config", config}}
                .dump()
         << '\n'
         << std::flush;
  }
}

void CheckpointFile::append(int index, const CurvePoint& point) {
  out_ << json{{"index", index}, {"record", to_json(point)}}.dump() << '\n' << std::flush;
  completed_[index] = point;
}

}  // namespace hybell
