#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hilbert/domain.hpp"

namespace cli {

inline constexpr const char* kVersion = "0.1.0";

struct RunInfo {
  std::string command;
  nlohmann::json config;
  std::string config_hash;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir;
};

nlohmann::json load_config(const std::string& path);
std::string fnv1a_hex(const std::string& text);

// Header comment lines carried by every output file.
std::string metadata_header(const RunInfo& run, const char* comment);

// Write via a temporary sibling and rename.
void write_atomic(const std::filesystem::path& path, const std::string& body);

// Minimal SVG scene in a 1000x1000 viewbox.
class SvgScene {
 public:
  SvgScene(double xmin, double xmax, double ymin, double ymax);
  static SvgScene fitting(const std::vector<hilbert::Vec>& pts);
  void polyline(const std::vector<hilbert::Vec>& pts, const std::string& color, bool closed, double width = 2);
  void dot(const hilbert::Vec& p, const std::string& color, double r = 3);
  void text(const hilbert::Vec& p, const std::string& s);
  std::string str(const RunInfo& run) const;

 private:
  double x(double u) const;
  double y(double v) const;
  double x0_, y0_, scale_;
  std::string body_;
};

// Boundary points on rays from the base point (planar domains).
std::vector<hilbert::Vec> boundary_polygon(const hilbert::ConvexDomain& d, int n = 360);

}  // namespace cli
