#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "cli_io.hpp"
#include "hilbert/boundary.hpp"
#include "hilbert/entropy.hpp"
#include "hilbert/flow.hpp"
#include "hilbert/group.hpp"
#include "hilbert/transport.hpp"

using namespace hilbert;
using nlohmann::json;

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::uint64_t seed = 1;
  int threads = 1;
  std::optional<double> horizon;
  std::optional<int> max_len;
  std::optional<int> samples;
};

struct Group {
  std::vector<GroupElement> generators;
  std::optional<CoxeterPresentation> presentation;
  std::optional<Vec> interior_hint;
};

Vec to_vec(const json& j) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::InvalidSpec, "expected a numeric array");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

Mat to_mat(const json& j) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::InvalidSpec, "expected a matrix");
  Mat m(j.size(), j[0].size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Vec r = to_vec(j[i]);
    if (r.size() != m.cols()) fail(ErrorCode::InvalidSpec, "ragged matrix");
    m.row(i) = r.transpose();
  }
  return m;
}

const json& section(const json& cfg, const char* name) {
  if (!cfg.contains(name)) fail(ErrorCode::InvalidSpec, std::string("config needs a '") + name + "' section");
  return cfg.at(name);
}

json experiment(const json& cfg) { return cfg.value("experiment", json::object()); }

Group make_group(const json& cfg) {
  const json& g = section(cfg, "group");
  const std::string family = g.value("family", "matrices");
  Group out;
  if (family == "triangle") {
    const auto f = triangle_reflection_family(g.at("p"), g.at("q"), g.at("r"), g.value("s", 1.0));
    out.generators = f.rotations;
    out.presentation = f.rotation_presentation;
    out.interior_hint = f.chamber_point;
  } else if (family == "fuchsian") {
    const int p = g.at("p"), q = g.at("q"), r = g.at("r");
    for (const Mat& m : fuchsian_triangle_rotations(p, q, r))
      out.generators.push_back(so21_embed(m(0, 0), m(0, 1), m(1, 0), m(1, 1)));
    out.presentation = triangle_rotation_presentation(p, q, r);
    out.interior_hint = Vec::Unit(3, 2);
  } else if (family == "matrices") {
    for (const auto& m : g.at("generators")) out.generators.emplace_back(to_mat(m));
    if (g.contains("interior_hint")) out.interior_hint = to_vec(g["interior_hint"]);
  } else {
    fail(ErrorCode::InvalidSpec, "unknown group family '" + family + "'");
  }
  if (out.generators.empty()) fail(ErrorCode::InvalidSpec, "group has no generators");
  return out;
}

FlowState make_state(const json& exp, int n) {
  if (!exp.contains("state")) {
    FlowState w{Vec::Zero(n), Vec::Unit(n, 0)};
    return w;
  }
  const json& s = exp["state"];
  FlowState w{to_vec(s.at("x")), to_vec(s.at("direction"))};
  if (w.x.size() != n || w.direction.size() != n) fail(ErrorCode::InvalidSpec, "state dimension mismatch");
  if (!(w.direction.norm() > 0)) fail(ErrorCode::InvalidSpec, "state direction is zero");
  w.direction.normalize();
  return w;
}

std::string word_string(const Word& w) {
  std::string s;
  for (int l : w) s += static_cast<char>(l > 0 ? 'a' + l - 1 : 'A' - l - 1);
  return s.empty() ? "e" : s;
}

class Runner {
 public:
  Runner(const Flags& f, cli::RunInfo run) : f_(f), run_(std::move(run)) {}

  int dispatch() {
    static const std::map<std::string, void (Runner::*)()> table = {
        {"distance", &Runner::distance},
        {"norm", &Runner::norm},
        {"flow", &Runner::flow},
        {"curvature", &Runner::curvature},
        {"transport", &Runner::transport},
        {"lyapunov", &Runner::lyapunov},
        {"group-scan", &Runner::group_scan},
        {"entropy-vol", &Runner::entropy_vol},
        {"entropy-orbit", &Runner::entropy_orbit},
        {"boundary-exponent", &Runner::boundary_exponent},
        {"beta", &Runner::beta},
    };
    (this->*table.at(run_.command))();
    return 0;
  }

 private:
  const json& cfg() const { return run_.config; }

  ConvexDomain domain() const { return make_domain(section(cfg(), "domain")); }

  void emit(const std::string& name, const std::string& body, const char* comment = "#") const {
    if (run_.out_dir.empty()) return;
    cli::write_atomic(run_.out_dir / name, cli::metadata_header(run_, comment) + "\n" + body);
  }

  void emit_svg(const std::string& name, const cli::SvgScene& scene) const {
    if (run_.out_dir.empty()) return;
    cli::write_atomic(run_.out_dir / name, scene.str(run_));
  }

  void distance() {
    const MetricContext ctx(domain());
    const json exp = experiment(cfg());
    const json& pts = section(exp, "points");
    if (!pts.is_array() || pts.size() != 2) fail(ErrorCode::InvalidSpec, "distance needs two points");
    const Vec x = to_vec(pts[0]), y = to_vec(pts[1]);
    const double d = hilbert_distance(ctx, x, y);
    std::printf("%.7f\n", d);
    std::ostringstream os;
    os << "distance\n" << std::setprecision(17) << d << "\n";
    emit("distance.csv", os.str());
  }

  void norm() {
    const MetricContext ctx(domain());
    const json exp = experiment(cfg());
    const double v = finsler_norm(ctx, to_vec(section(exp, "x")), to_vec(section(exp, "xi")));
    std::printf("%.7f\n", v);
    std::ostringstream os;
    os << "norm\n" << std::setprecision(17) << v << "\n";
    emit("norm.csv", os.str());
  }

  void flow() {
    const MetricContext ctx(domain());
    const int n = ctx.dimension();
    const FlowState w = make_state(experiment(cfg()), n);
    const double T = f_.horizon.value_or(5.0);
    const int steps = f_.samples.value_or(100);
    if (!(T > 0) || steps < 1) fail(ErrorCode::InvalidParameter, "horizon and samples must be positive");
    std::ostringstream os;
    os << "t";
    for (int i = 0; i < n; ++i) os << ",x" << i + 1;
    os << ",distance\n" << std::setprecision(12);
    std::vector<Vec> path;
    double worst = 0;
    for (int k = 0; k <= steps; ++k) {
      const double t = T * k / steps;
      const FlowState s = flow_point(ctx, w, t);
      const double d = k == 0 ? 0 : hilbert_distance(ctx, w.x, s.x);
      worst = std::max(worst, std::abs(d - t));
      path.push_back(s.x);
      os << t;
      for (int i = 0; i < n; ++i) os << ',' << s.x(i);
      os << ',' << d << '\n';
    }
    std::printf("steps=%d horizon=%g max|d-t|=%.3e\n", steps, T, worst);
    emit("flow.csv", os.str());
    if (n == 2) {
      const auto bd = cli::boundary_polygon(ctx.domain());
      auto scene = cli::SvgScene::fitting(bd);
      scene.polyline(bd, "black", true);
      const auto ch = ctx.domain().chord(w.x, w.direction);
      scene.polyline({ch.xminus, ch.xplus}, "#999999", false, 1);
      scene.polyline(path, "#c0392b", false, 3);
      scene.dot(w.x, "#2c3e50", 6);
      emit_svg("flow.svg", scene);
    }
  }

  void curvature() {
    const ConvexDomain d = domain();
    const MetricContext ctx(d);
    const int N = f_.samples.value_or(1000);
    if (N < 1) fail(ErrorCode::InvalidParameter, "samples must be positive");
    std::mt19937_64 rng(run_.seed);
    double lo = 1e300, hi = -1e300;
    std::ostringstream os;
    os << "index,curvature\n" << std::setprecision(17);
    for (int k = 0; k < N; ++k) {
      const FlowState w{d.random_interior(rng), random_unit(d.dimension(), rng)};
      const double c = curvature_scalar(ctx, w);
      lo = std::min(lo, c);
      hi = std::max(hi, c);
      os << k << ',' << c << '\n';
    }
    std::printf("min=%.6f max=%.6f\n", lo, hi);
    emit("curvature.csv", os.str());
  }

  void transport() {
    const MetricContext ctx(domain());
    const json exp = experiment(cfg());
    const FlowState w = make_state(exp, ctx.dimension());
    const Vec v0 = exp.contains("v0") ? to_vec(exp["v0"]) : default_transverse(w);
    const double T = f_.horizon.value_or(10.0);
    const int steps = f_.samples.value_or(std::max(40, static_cast<int>(20 * T)));
    const OrbitRecord rec = transport_norm_curve(ctx, w, v0, T, steps);
    const ExponentEstimate e = eta_estimate(rec);
    std::printf("eta=%.6f stderr=%.2e window=[%g,%g]\n", e.eta, e.stderr_, e.t_min, e.t_max);
    std::ostringstream os;
    write_orbit_csv(os, rec);
    emit("transport.csv", os.str());
  }

  void lyapunov() {
    if (cfg().contains("group")) {
      const Group g = make_group(cfg());
      const int L = f_.max_len.value_or(8);
      std::ostringstream os;
      os << "word,length,translation_length,eta\n" << std::setprecision(12);
      int count = 0;
      for (const auto& c : enumerate_conjugacy_classes(g.generators, L, g.presentation)) {
        if (!is_biproximal(c)) continue;
        for (const auto& p : periodic_lyapunov(c))
          os << word_string(c.word) << ',' << c.word.size() << ',' << translation_length(c) << ',' << p.eta << '\n';
        ++count;
      }
      std::printf("biproximal_classes=%d max_len=%d\n", count, L);
      emit("lyapunov.csv", os.str());
      return;
    }
    const MetricContext ctx(domain());
    const FlowState w = make_state(experiment(cfg()), ctx.dimension());
    const double T = f_.horizon.value_or(10.0);
    const AnosovRates r = anosov_rates(ctx, w, T);
    std::printf("alpha=%.6f beta=%.6f\n", r.alpha, r.beta);
    std::ostringstream os;
    os << "alpha,beta\n" << std::setprecision(12) << r.alpha << ',' << r.beta << '\n';
    emit("lyapunov.csv", os.str());
  }

  void group_scan() {
    const Group g = make_group(cfg());
    const int L = f_.max_len.value_or(8);
    const auto classes = enumerate_conjugacy_classes(g.generators, L, g.presentation);
    std::ostringstream os;
    os << "word,length,biproximal,translation_length,eta\n" << std::setprecision(12);
    int bip = 0;
    for (const auto& c : classes) {
      const bool b = is_biproximal(c);
      bip += b;
      os << word_string(c.word) << ',' << c.word.size() << ',' << b << ',';
      if (b) os << translation_length(c) << ',' << periodic_lyapunov(c).front().eta;
      else os << ",";
      os << '\n';
    }
    std::printf("classes=%zu biproximal=%d max_len=%d\n", classes.size(), bip, L);
    emit("group_scan.csv", os.str());
    if (g.interior_hint && g.generators.front().size() == 3) {
      const HullResult h = generate_domain_hull(g.generators, L, *g.interior_hint, g.presentation);
      std::printf("hull_points=%d hausdorff_gap=%.3e conic_residual=%.3e\n", h.points, h.hausdorff_gap,
                  h.conic_residual);
      const auto bd = cli::boundary_polygon(h.domain);
      auto scene = cli::SvgScene::fitting(bd);
      scene.polyline(bd, "black", true);
      for (const auto& p : bd) scene.dot(p, "#2980b9", 2);
      emit_svg("hull.svg", scene);
    }
  }

  void entropy_vol() {
    const MetricContext ctx(domain());
    const json exp = experiment(cfg());
    const Vec x0 = exp.contains("x0") ? to_vec(exp["x0"]) : ctx.domain().base_point();
    VolumeEntropyOptions o;
    o.seed = run_.seed;
    const auto e = volume_entropy(ctx, x0, f_.horizon.value_or(10.0), f_.samples.value_or(2000), o);
    std::printf("h_vol=%.6f stderr=%.2e window=[%g,%g] samples=%d\n", e.value, e.fit_stderr, e.window_lo, e.window_hi,
                e.count);
    std::ostringstream os;
    write_entropy_csv(os, e);
    emit("entropy_vol.csv", os.str());
  }

  void entropy_orbit() {
    const Group g = make_group(cfg());
    const int L = f_.max_len.value_or(12);
    const auto e = orbit_entropy(g.generators, L, g.presentation);
    std::printf("h_orbit=%.6f stderr=%.2e window=[%g,%g] orbits=%d\n", e.value, e.fit_stderr, e.window_lo,
                e.window_hi, e.count);
    std::ostringstream os;
    write_entropy_csv(os, e);
    emit("entropy_orbit.csv", os.str());
  }

  void boundary_exponent() {
    const ConvexDomain d = domain();
    const json exp = experiment(cfg());
    ShapeOptions o;
    if (exp.contains("xminus")) o.xminus = to_vec(exp["xminus"]);
    const auto s = shape_exponent(d, to_vec(section(exp, "xplus")), to_vec(section(exp, "v")), o);
    std::printf("exponent=%.6f eta=%.6f stderr=%.2e plus=%.6f minus=%.6f\n", s.exponent, s.eta, s.stderr_,
                s.exponent_plus, s.exponent_minus);
    std::ostringstream os;
    write_shape_csv(os, s);
    emit("boundary_exponent.csv", os.str());
    std::vector<Vec> pts;
    for (std::size_t i = 0; i < s.scales.size(); ++i) {
      Vec p(2);
      p << std::log2(s.scales[i]), std::log2(std::sqrt(s.y_plus[i] * s.y_minus[i]));
      pts.push_back(p);
    }
    auto scene = cli::SvgScene::fitting(pts);
    scene.polyline(pts, "#7f8c8d", false, 1);
    for (const auto& p : pts) scene.dot(p, "#c0392b", 5);
    std::ostringstream label;
    label << "slope " << std::fixed << std::setprecision(4) << s.exponent;
    scene.text(pts.back(), label.str());
    emit_svg("boundary_exponent.svg", scene);
  }

  void beta() {
    const ConvexDomain d = domain();
    const auto b = beta_convexity(d, f_.samples.value_or(1000), run_.seed);
    const double bound = entropy_lower_bound(std::max(2.0, b.beta), d.dimension());
    std::printf("beta=%.6f alpha=%.6f bound=%.6f pairs=%d\n", b.beta, b.alpha, bound, b.pairs);
    std::ostringstream os;
    os << "beta,alpha,bound\n" << std::setprecision(12) << b.beta << ',' << b.alpha << ',' << bound << '\n';
    emit("beta.csv", os.str());
  }

  Flags f_;
  cli::RunInfo run_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hilbert geometry experiments"};
  app.set_version_flag("--version", cli::kVersion);
  Flags f;
  std::string command;
  const std::vector<std::string> commands = {"distance",   "norm",        "flow",          "curvature",
                                             "transport",  "lyapunov",    "group-scan",    "entropy-vol",
                                             "entropy-orbit", "boundary-exponent", "beta"};
  app.add_option("command", command, "Experiment to run")->required()->check(CLI::IsMember(commands));
  app.add_option("--config", f.config, "JSON experiment config")->required();
  app.add_option("--out", f.out, "Output directory for CSV and SVG files");
  app.add_option("--seed", f.seed, "Random seed");
  app.add_option("--threads", f.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--horizon", f.horizon, "Time horizon or ball radius");
  app.add_option("--max-len", f.max_len, "Maximal word length");
  app.add_option("--samples", f.samples, "Sample count");
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    cli::RunInfo run;
    run.command = command;
    run.config = cli::load_config(f.config);
    run.config_hash = cli::fnv1a_hex(run.config.dump());
    run.seed = f.seed;
    run.out_dir = f.out;
    return Runner(f, run).dispatch();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_config_error() ? 2 : 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
