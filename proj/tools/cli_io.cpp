#include "cli_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "hilbert/errors.hpp"

namespace cli {

using hilbert::ErrorCode;
using hilbert::Vec;

nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) hilbert::fail(ErrorCode::InvalidSpec, "cannot read config " + path);
  try {
    return nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::exception& e) {
    hilbert::fail(ErrorCode::InvalidSpec, std::string("config parse: ") + e.what());
  }
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string metadata_header(const RunInfo& run, const char* comment) {
  std::ostringstream os;
  os << comment << " command=" << run.command << " config_hash=" << run.config_hash << " seed=" << run.seed
     << " version=" << kVersion;
  return os.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) hilbert::fail(ErrorCode::InvalidParameter, "cannot write " + tmp);
    out << body;
    if (!out) hilbert::fail(ErrorCode::InvalidParameter, "write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

SvgScene::SvgScene(double xmin, double xmax, double ymin, double ymax) {
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
  scale_ = 900 / span;
  x0_ = 0.5 * (xmin + xmax);
  y0_ = 0.5 * (ymin + ymax);
}

SvgScene SvgScene::fitting(const std::vector<Vec>& pts) {
  double a = 1e300, b = -1e300, c = 1e300, d = -1e300;
  for (const auto& p : pts) {
    a = std::min(a, p(0));
    b = std::max(b, p(0));
    c = std::min(c, p(1));
    d = std::max(d, p(1));
  }
  if (pts.empty()) a = c = -1, b = d = 1;
  return SvgScene(a, b, c, d);
}

double SvgScene::x(double u) const { return 500 + scale_ * (u - x0_); }
double SvgScene::y(double v) const { return 500 - scale_ * (v - y0_); }

void SvgScene::polyline(const std::vector<Vec>& pts, const std::string& color, bool closed, double width) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << "<" << (closed ? "polygon" : "polyline") << " fill=\"none\" stroke=\""
     << color << "\" stroke-width=\"" << width << "\" points=\"";
  for (const auto& p : pts) os << x(p(0)) << ',' << y(p(1)) << ' ';
  os << "\"/>\n";
  body_ += os.str();
}

void SvgScene::dot(const Vec& p, const std::string& color, double r) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << "<circle cx=\"" << x(p(0)) << "\" cy=\"" << y(p(1)) << "\" r=\"" << r
     << "\" fill=\"" << color << "\"/>\n";
  body_ += os.str();
}

void SvgScene::text(const Vec& p, const std::string& s) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << "<text x=\"" << x(p(0)) << "\" y=\"" << y(p(1))
     << "\" font-size=\"20\" font-family=\"monospace\">" << s << "</text>\n";
  body_ += os.str();
}

std::string SvgScene::str(const RunInfo& run) const {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\">\n<!--" + metadata_header(run, "") +
         " -->\n<rect width=\"1000\" height=\"1000\" fill=\"white\"/>\n" + body_ + "</svg>\n";
}

std::vector<Vec> boundary_polygon(const hilbert::ConvexDomain& d, int n) {
  std::vector<Vec> out;
  const Vec c = d.base_point();
  for (int i = 0; i < n; ++i) {
    const double th = 2 * std::numbers::pi * i / n;
    Vec u(2);
    u << std::cos(th), std::sin(th);
    out.push_back(d.chord(c, u).xplus);
  }
  return out;
}

}  // namespace cli
