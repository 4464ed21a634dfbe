// Batch front end: loads a declarative scene config, dispatches one of the
// analysis commands, and writes a structured text report plus CSV/SVG
// artifacts to the output directory.  Exit codes: 0 = verdict computed
// (Borderline included), 2 = input error, 3 = numeric failure.
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sio/indices.hpp"
#include "sio/lab.hpp"
#include "sio/scene.hpp"

namespace fs = std::filesystem;
using namespace sio;

namespace {

// ---------------------------------------------------------------------------
// Deterministic formatting: %.12g with the C locale's '.' decimal point.

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// CSV complex convention: two columns re,im.
std::string csv_cplx(cplx z) { return fmt(z.real()) + "," + fmt(z.imag()); }

// Report complex convention: (re,im).
std::string rep_cplx(cplx z) {
  return "(" + fmt(z.real()) + "," + fmt(z.imag()) + ")";
}

struct Options {
  std::string config;
  std::string out = ".";
  double tol = -1;  // < 0: use the scene's tolerance
  int grid_decades = 0;
  bool grid_given = false;
  unsigned seed = 1;
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot write '" + p.string() + "'");
  f << text;
}

SceneConfig require_scene(const Options& opt) {
  if (opt.config.empty())
    throw std::invalid_argument("this command needs --config <scene.json>");
  SceneConfig cfg = load_scene(opt.config);
  if (opt.tol >= 0) {
    if (!(opt.tol > 0)) throw std::invalid_argument("--tol must be positive");
    cfg.tol = opt.tol;
  }
  return cfg;
}

std::string header(const std::string& command, const SceneConfig* cfg) {
  std::string s = "command: " + command + "\n";
  if (cfg)
    s += "scene: " + (cfg->name.empty() ? std::string("(unnamed)") : cfg->name) +
         "\n";
  return s;
}

const char* verdict_word(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "Yes";
    case Verdict::No: return "No";
    case Verdict::Borderline: return "Borderline";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// SVG: 800x800 viewbox, world box framed and annotated, leaf boundaries,
// essential range of the quotient symbol, z1/z2 markers, origin crosshair.

struct WorldBox {
  double x0 = 0, y0 = 0, side = 1;
  double px(double x) const { return (x - x0) / side * 760.0 + 20.0; }
  double py(double y) const { return 780.0 - (y - y0) / side * 760.0; }
};

WorldBox fit_box(const std::vector<cplx>& pts) {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;  // origin always included
  for (cplx z : pts) {
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag());
    ymax = std::max(ymax, z.imag());
  }
  const double side = std::max({xmax - xmin, ymax - ymin, 1e-3}) * 1.15;
  WorldBox b;
  b.x0 = 0.5 * (xmin + xmax) - side / 2;
  b.y0 = 0.5 * (ymin + ymax) - side / 2;
  b.side = side;
  return b;
}

void svg_polyline(std::string& s, const WorldBox& b,
                  const std::vector<cplx>& pts, const char* style) {
  if (pts.size() < 2) return;
  s += "<polyline fill=\"none\" ";
  s += style;
  s += " points=\"";
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i) s += " ";
    s += fmt6(b.px(pts[i].real())) + "," + fmt6(b.py(pts[i].imag()));
  }
  s += "\"/>\n";
}

void svg_marker(std::string& s, const WorldBox& b, cplx z, const char* label) {
  const std::string x = fmt6(b.px(z.real())), y = fmt6(b.py(z.imag()));
  s += "<circle cx=\"" + x + "\" cy=\"" + y +
       "\" r=\"5\" fill=\"#d62728\"/>\n";
  s += "<text x=\"" + fmt6(b.px(z.real()) + 8) + "\" y=\"" +
       fmt6(b.py(z.imag()) - 8) + "\" font-size=\"16\">" + label + "</text>\n";
}

std::string leaf_svg(const Leaf& lf, const std::vector<cplx>& range) {
  std::vector<cplx> pts = {lf.z1(), lf.z2(), {0, 0}};
  pts.insert(pts.end(), lf.lower_boundary().begin(), lf.lower_boundary().end());
  pts.insert(pts.end(), lf.upper_boundary().begin(), lf.upper_boundary().end());
  pts.insert(pts.end(), range.begin(), range.end());
  const WorldBox b = fit_box(pts);

  std::string s =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
      "viewBox=\"0 0 800 800\">\n"
      "<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"white\"/>\n"
      "<rect x=\"20\" y=\"20\" width=\"760\" height=\"760\" fill=\"none\" "
      "stroke=\"#bbbbbb\"/>\n";
  // Axes through the origin with min/max annotations.
  s += "<line x1=\"" + fmt6(b.px(0)) + "\" y1=\"20\" x2=\"" + fmt6(b.px(0)) +
       "\" y2=\"780\" stroke=\"#dddddd\"/>\n";
  s += "<line x1=\"20\" y1=\"" + fmt6(b.py(0)) + "\" x2=\"780\" y2=\"" +
       fmt6(b.py(0)) + "\" stroke=\"#dddddd\"/>\n";
  s += "<text x=\"24\" y=\"796\" font-size=\"14\">Re " + fmt6(b.x0) +
       " .. " + fmt6(b.x0 + b.side) + "</text>\n";
  s += "<text x=\"4\" y=\"16\" font-size=\"14\">Im " + fmt6(b.y0) + " .. " +
       fmt6(b.y0 + b.side) + "</text>\n";

  svg_polyline(s, b, range, "stroke=\"#999999\" stroke-width=\"1\"");
  svg_polyline(s, b, lf.lower_boundary(),
               "stroke=\"#1f77b4\" stroke-width=\"2\"");
  svg_polyline(s, b, lf.upper_boundary(),
               "stroke=\"#1f77b4\" stroke-width=\"2\"");
  svg_marker(s, b, lf.z1(), "z1");
  svg_marker(s, b, lf.z2(), "z2");
  // Origin crosshair.
  const double ox = b.px(0), oy = b.py(0);
  s += "<line x1=\"" + fmt6(ox - 10) + "\" y1=\"" + fmt6(oy) + "\" x2=\"" +
       fmt6(ox + 10) + "\" y2=\"" + fmt6(oy) +
       "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
  s += "<line x1=\"" + fmt6(ox) + "\" y1=\"" + fmt6(oy - 10) + "\" x2=\"" +
       fmt6(ox) + "\" y2=\"" + fmt6(oy + 10) +
       "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
  s += "</svg>\n";
  return s;
}

std::string leaf_csv(const Leaf& lf) {
  std::string s = "x,lower_re,lower_im,upper_re,upper_im\n";
  for (size_t i = 0; i < lf.boundary_x().size(); ++i)
    s += fmt(lf.boundary_x()[i]) + "," + csv_cplx(lf.lower_boundary()[i]) +
         "," + csv_cplx(lf.upper_boundary()[i]) + "\n";
  return s;
}

double exponent_at(const SceneConfig& cfg, cplx t) {
  const int idx = cfg.space.curve.snap_to_sample(t);
  return cfg.space.exponent(idx * cfg.space.curve.spacing());
}

// ---------------------------------------------------------------------------
// Commands

int cmd_carleson(const Options& opt) {
  const SceneConfig cfg = require_scene(opt);
  const auto& c = cfg.space.curve.carleson_constant();
  std::string rep = header("carleson", &cfg);
  rep += "carleson constant: " + fmt(c.value) + "\n";
  rep += "argmax t: " + rep_cplx(c.argmax_t) + "\n";
  rep += "argmax r: " + fmt(c.argmax_r) + "\n";
  rep += std::string("diverged: ") + (c.diverged ? "yes" : "no") + "\n";
  std::string csv = "value,argmax_re,argmax_im,argmax_r,diverged\n";
  csv += fmt(c.value) + "," + csv_cplx(c.argmax_t) + "," + fmt(c.argmax_r) +
         "," + (c.diverged ? "1" : "0") + "\n";
  write_file(fs::path(opt.out) / "carleson.csv", csv);
  write_file(fs::path(opt.out) / "report.txt", rep);
  std::cout << rep;
  return 0;
}

int cmd_indices(const Options& opt) {
  const SceneConfig cfg = require_scene(opt);
  std::vector<cplx> points;
  for (const auto& f : cfg.space.weight.factors) points.push_back(f.t0);
  if (points.empty()) {
    if (!cfg.has_point)
      throw std::invalid_argument(
          "indices needs weight factors or a scene 'point'");
    points.push_back(cfg.point);
  }
  std::string rep = header("indices", &cfg);
  std::string csv = "t_re,t_im,alpha,beta,alpha_ci,beta_ci\n";
  for (cplx t : points) {
    const IndexPair ip =
        index_pair(section_ratio_limit(cfg.space.curve, t, cfg.space.weight));
    rep += "t=" + rep_cplx(t) + " alpha=" + fmt(ip.alpha) +
           " beta=" + fmt(ip.beta) + " alpha_ci=" + fmt(ip.alpha_ci) +
           " beta_ci=" + fmt(ip.beta_ci) + "\n";
    csv += csv_cplx(t) + "," + fmt(ip.alpha) + "," + fmt(ip.beta) + "," +
           fmt(ip.alpha_ci) + "," + fmt(ip.beta_ci) + "\n";
  }
  write_file(fs::path(opt.out) / "indices.csv", csv);
  write_file(fs::path(opt.out) / "report.txt", rep);
  std::cout << rep;
  return 0;
}

int cmd_spirality(const Options& opt) {
  const SceneConfig cfg = require_scene(opt);
  const cplx t = cfg.has_point ? cfg.point : cfg.space.curve.sample(0);
  const auto [lo, hi] = spirality(cfg.space.curve, t);
  std::string rep = header("spirality", &cfg);
  rep += "t: " + rep_cplx(t) + "\n";
  rep += "spirality lower: " + fmt(lo) + "\n";
  rep += "spirality upper: " + fmt(hi) + "\n";
  std::string csv = "t_re,t_im,lower,upper\n";
  csv += csv_cplx(t) + "," + fmt(lo) + "," + fmt(hi) + "\n";
  write_file(fs::path(opt.out) / "spirality.csv", csv);
  write_file(fs::path(opt.out) / "report.txt", rep);
  std::cout << rep;
  return 0;
}

int cmd_bounded(const Options& opt, bool maximal) {
  const SceneConfig cfg = require_scene(opt);
  const BoundednessReport rep_data =
      maximal ? decide_maximal_bounded(cfg.space, cfg.tol)
              : decide_S_bounded(cfg.space, cfg.tol);
  std::string rep = header(maximal ? "bounded-m" : "bounded-s", &cfg);
  rep += std::string("verdict: ") + verdict_word(rep_data.verdict) + "\n";
  rep += "reason: " + rep_data.reason + "\n";
  rep += "tolerance: " + fmt(rep_data.tolerance) + "\n";
  std::string csv = "t_re,t_im,inv_p,alpha,beta,lower,upper\n";
  for (const auto& pt : rep_data.points) {
    rep += "point t=" + rep_cplx(pt.t) + " 1/p=" + fmt(pt.inv_p) +
           " alpha=" + fmt(pt.alpha) + " beta=" + fmt(pt.beta) +
           " lower=" + fmt(pt.lower) + " upper=" + fmt(pt.upper) + "\n";
    csv += csv_cplx(pt.t) + "," + fmt(pt.inv_p) + "," + fmt(pt.alpha) + "," +
           fmt(pt.beta) + "," + fmt(pt.lower) + "," + fmt(pt.upper) + "\n";
  }
  write_file(fs::path(opt.out) / "points.csv", csv);
  write_file(fs::path(opt.out) / "report.txt", rep);
  std::cout << rep;
  return 0;
}

int cmd_profile(const Options& opt) {
  const SceneConfig cfg = require_scene(opt);
  if (!cfg.has_point)
    throw std::invalid_argument("profile needs a scene 'point'");
  std::vector<double> grid;
  if (opt.grid_given) {
    if (opt.grid_decades < 1)
      throw std::invalid_argument("--grid-decades must be >= 1");
    for (int i = -4 * opt.grid_decades; i <= 4 * opt.grid_decades; ++i)
      grid.push_back(0.25 * i);
  }
  const IndicatorProfile prof =
      indicator_profile(cfg.space, cfg.point, grid);
  std::string rep = header("profile", &cfg);
  rep += "t: " + rep_cplx(prof.t) + "\n";
  rep += "1/p: " + fmt(prof.inv_p) + "\n";
  rep += "alpha slopes: " + fmt(prof.alpha_slope_minus) + " (x<0), " +
         fmt(prof.alpha_slope_plus) + " (x>0)\n";
  rep += "beta slopes: " + fmt(prof.beta_slope_minus) + " (x<0), " +
         fmt(prof.beta_slope_plus) + " (x>0)\n";
  std::string csv = "x,alpha_star,beta_star,alpha_ci,beta_ci\n";
  for (size_t i = 0; i < prof.x_grid.size(); ++i)
    csv += fmt(prof.x_grid[i]) + "," + fmt(prof.alpha_star[i]) + "," +
           fmt(prof.beta_star[i]) + "," + fmt(prof.alpha_ci[i]) + "," +
           fmt(prof.beta_ci[i]) + "\n";
  write_file(fs::path(opt.out) / "profile.csv", csv);
  write_file(fs::path(opt.out) / "report.txt", rep);
  std::cout << rep;
  return 0;
}

// Leaves of the quotient symbol's jumps; shared by `leaf` and `fredholm`.
struct JumpLeaf {
  cplx t;
  Leaf lf;
};

std::vector<JumpLeaf> quotient_leaves(const SceneConfig& cfg,
                                      const PCSymbol& c) {
  std::vector<JumpLeaf> out;
  for (const auto& j : c.jumps()) {
    const IndicatorProfile prof = indicator_profile(cfg.space, j.t);
    out.push_back(
        {j.t, leaf(j.before, j.after, exponent_at(cfg, j.t), prof)});
  }
  return out;
}

void emit_leaves(const Options& opt, const std::vector<JumpLeaf>& leaves,
                 const std::vector<cplx>& range, std::string& rep) {
  for (size_t i = 0; i < leaves.size(); ++i) {
    const auto& L = leaves[i];
    const std::string stem = "leaf_" + std::to_string(i);
    write_file(fs::path(opt.out) / (stem + ".csv"), leaf_csv(L.lf));
    write_file(fs::path(opt.out) / (stem + ".svg"), leaf_svg(L.lf, range));
    rep += "leaf " + std::to_string(i) + ": t=" + rep_cplx(L.t) +
           " z1=" + rep_cplx(L.lf.z1()) + " z2=" + rep_cplx(L.lf.z2()) +
           " contains_origin=" + (L.lf.contains({0, 0}) ? "yes" : "no") +
           " origin_distance=" + fmt(L.lf.origin_distance()) + "\n";
  }
}

PCSymbol scene_quotient(const SceneConfig& cfg) {
  if (!cfg.symbol_a)
    throw std::invalid_argument("this command needs 'symbol_a' in the scene");
  if (cfg.symbol_b) return *cfg.symbol_a / *cfg.symbol_b;
  return *cfg.symbol_a;
}

int cmd_leaf(const Options& opt) {
  const SceneConfig cfg = require_scene(opt);
  const PCSymbol c = scene_quotient(cfg);
  if (c.jumps().empty())
    throw std::invalid_argument("leaf: the symbol has no jumps");
  std::string rep = header("leaf", &cfg);
  emit_leaves(opt, quotient_leaves(cfg, c), c.samples(), rep);
  write_file(fs::path(opt.out) / "report.txt", rep);
  std::cout << rep;
  return 0;
}

int cmd_fredholm(const Options& opt) {
  const SceneConfig cfg = require_scene(opt);
  if (!cfg.symbol_a || !cfg.symbol_b)
    throw std::invalid_argument(
        "fredholm needs 'symbol_a' and 'symbol_b' in the scene");
  const FredholmReport fr =
      decide_fredholm(*cfg.symbol_a, *cfg.symbol_b, cfg.space, cfg.tol);

  std::string rep = header("fredholm", &cfg);
  const char* word = fr.verdict == Verdict::Yes
                         ? "FREDHOLM"
                         : fr.verdict == Verdict::No ? "NOT FREDHOLM"
                                                     : "BORDERLINE";
  rep += std::string("verdict: ") + word + "\n";
  rep += "reason: " + fr.reason + "\n";
  rep += "inf |b|: " + fmt(fr.inf_abs_b) + "\n";
  rep += "range distance: " + fmt(fr.quotient.range_distance) + "\n";
  if (fr.witness) rep += "witness: " + rep_cplx(*fr.witness) + "\n";

  std::string csv =
      "t_re,t_im,before_re,before_im,after_re,after_im,gamma_re,gamma_im,"
      "criterion_gap,leaf_contains_origin,leaf_distance,k\n";
  for (const auto& d : fr.quotient.jumps) {
    rep += "jump: t=" + rep_cplx(d.t) + " before=" + rep_cplx(d.before) +
           " after=" + rep_cplx(d.after) + " gamma=" + rep_cplx(d.gamma) +
           " criterion_gap=" + fmt(d.criterion_gap) +
           " leaf_contains_origin=" + (d.leaf_contains_origin ? "yes" : "no") +
           " leaf_distance=" + fmt(d.leaf_distance) +
           " k=" + (d.k ? std::to_string(*d.k) : std::string("none")) + "\n";
    csv += csv_cplx(d.t) + "," + csv_cplx(d.before) + "," +
           csv_cplx(d.after) + "," + csv_cplx(d.gamma) + "," +
           fmt(d.criterion_gap) + "," + (d.leaf_contains_origin ? "1" : "0") +
           "," + fmt(d.leaf_distance) + "," +
           (d.k ? std::to_string(*d.k) : std::string()) + "\n";
  }
  write_file(fs::path(opt.out) / "jumps.csv", csv);

  // Leaf artifacts for the quotient's jumps.
  const PCSymbol c = scene_quotient(cfg);
  emit_leaves(opt, quotient_leaves(cfg, c), c.samples(), rep);

  write_file(fs::path(opt.out) / "report.txt", rep);
  std::cout << rep;
  return 0;
}

int cmd_validate(const Options& opt) {
  const CurveModel circle = CurveModel::unit_circle();
  const auto cases = agreement_suite(circle);
  std::string rep = header("validate", nullptr);
  rep += "seed: " + std::to_string(opt.seed) + "\n";
  std::string csv =
      "before_re,before_im,after_re,after_im,p,lambda,verdict,trend,agrees\n";
  int agree = 0;
  for (const auto& c : cases) {
    if (c.agrees) ++agree;
    rep += "case: before=" + rep_cplx(c.before) + " after=" +
           rep_cplx(c.after) + " p=" + fmt(c.p) + " lambda=" + fmt(c.lambda) +
           " verdict=" + verdict_word(c.fredholm) +
           " trend=" + to_string(c.trend) +
           " agrees=" + (c.agrees ? "yes" : "no") + "\n";
    csv += csv_cplx(c.before) + "," + csv_cplx(c.after) + "," + fmt(c.p) +
           "," + fmt(c.lambda) + "," + verdict_word(c.fredholm) + "," +
           to_string(c.trend) + "," + (c.agrees ? "1" : "0") + "\n";
  }
  rep += std::to_string(agree) + "/" + std::to_string(cases.size()) +
         " non-Borderline agreements\n";
  write_file(fs::path(opt.out) / "agreement.csv", csv);
  write_file(fs::path(opt.out) / "report.txt", rep);
  std::cout << rep;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Singular-integral workbench: boundedness, Fredholm verdicts, index "
      "and leaf geometry on weighted variable-exponent spaces"};
  Options opt;
  app.add_option("--config", opt.config, "scene config file (JSON, schema 1)");
  app.add_option("--out", opt.out, "output directory (default: .)");
  app.add_option("--tol", opt.tol, "tolerance override for verdicts");
  auto* gd = app.add_option("--grid-decades", opt.grid_decades,
                            "half-width of the profile argument grid");
  app.add_option("--seed", opt.seed, "seed for randomized property suites");
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"carleson", "Carleson constant of the scene curve"},
      {"indices", "index pair of the scene weight at its singularities"},
      {"spirality", "spirality of the curve at the scene point"},
      {"bounded-m", "maximal-operator boundedness verdict"},
      {"bounded-s", "singular-operator boundedness verdict"},
      {"profile", "indicator profile at the scene point"},
      {"leaf", "leaves of the quotient symbol's jumps"},
      {"fredholm", "Fredholm verdict for aP + bQ"},
      {"validate", "fixed trend-vs-verdict agreement suite"}};
  for (const auto& [name, desc] : commands)
    app.add_subcommand(name, desc)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  opt.grid_given = gd->count() > 0;

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    fs::create_directories(opt.out);
    if (cmd == "carleson") return cmd_carleson(opt);
    if (cmd == "indices") return cmd_indices(opt);
    if (cmd == "spirality") return cmd_spirality(opt);
    if (cmd == "bounded-m") return cmd_bounded(opt, true);
    if (cmd == "bounded-s") return cmd_bounded(opt, false);
    if (cmd == "profile") return cmd_profile(opt);
    if (cmd == "leaf") return cmd_leaf(opt);
    if (cmd == "fredholm") return cmd_fredholm(opt);
    if (cmd == "validate") return cmd_validate(opt);
    std::cerr << "error: unknown command '" << cmd << "'\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  }
}
