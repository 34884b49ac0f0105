// pillowcurve: evaluate tangle curves, compute Floer chain data, run oracle checks.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "pillow/charvar.hpp"
#include "pillow/errors.hpp"
#include "pillow/floer.hpp"
#include "pillow/io.hpp"
#include "pillow/oracle.hpp"
#include "pillow/tangle.hpp"

namespace {

using namespace pillow;
constexpr double kPi = std::numbers::pi;

enum Exit { kOk = 0, kUsage = 1, kTransversality = 2, kBudget = 3, kOracle = 4 };

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string verdict(bool ok) { return ok ? "pass" : "FAIL"; }

// ---- eval / plot ----

struct EvalArgs {
  std::string expr;
  std::string out;
  std::string svg;
  bool no_resolve = false;
  bool no_auto_shear = false;
  std::string eps = "1/50";
  std::string earring_eps = "1/100";
};

void print_summary(std::ostream& os, const Multicurve& m) {
  int arcs = 0, circles = 0;
  bool h_circles = false;
  for (const Component& c : m.components) {
    (c.kind == Kind::Arc ? arcs : circles)++;
    if (c.tags & TagHCircle) h_circles = true;
  }
  os << "components: " << m.components.size() << " (arcs: " << arcs << ", circles: " << circles
     << ")\n";
  for (std::size_t i = 0; i < m.components.size(); ++i) {
    const Component& c = m.components[i];
    os << "  [" << i << "] " << (c.kind == Kind::Arc ? "arc" : "circle") << ", "
       << c.lift.edge_count() << " segments";
    for (const std::string& t : tag_names(c.tags)) os << ", " << t;
    os << "\n";
  }
  if (!h_circles) os << "self-intersections: " << self_intersections(m).size() << "\n";
}

int cmd_eval(const EvalArgs& a) {
  EvalOptions opts;
  opts.resolve = !a.no_resolve;
  opts.auto_shear = !a.no_auto_shear;
  opts.eps = parse_q(a.eps);
  opts.earring_eps = parse_q(a.earring_eps);
  ExprPtr e = parse(a.expr);
  EvalReport report;
  Multicurve m = eval(e, opts, &report);
  std::string json = write_curve_file(m);
  bool to_stdout = a.out.empty() || a.out == "-";
  if (!to_stdout) save_text(a.out, json);
  if (!a.svg.empty()) save_text(a.svg, render_svg(m, print(e)));
  std::ostream& info = to_stdout ? std::cerr : std::cout;
  info << "expr: " << print(e) << "\n";
  print_summary(info, m);
  info << (opts.resolve ? "resolution sites: " : "circle fibres: ") << report.circles << "\n";
  if (report.corner_shears > 0) info << "corner shears applied: " << report.corner_shears << "\n";
  if (to_stdout) std::cout << json;
  return kOk;
}

int cmd_plot(const std::string& file, const std::string& svg) {
  Multicurve m = load_curve_file(file);
  std::string out = render_svg(m, file);
  if (svg.empty() || svg == "-")
    std::cout << out;
  else
    save_text(svg, out);
  return kOk;
}

// ---- floer ----

struct FloerArgs {
  std::string file1, file2;
  std::optional<int> cochain;
  bool witness = false;
  double budget = -1;
};

std::string point_list(const Polygon& p) {
  std::string s;
  for (std::size_t i = 0; i < p.boundary.size(); ++i) {
    if (i) s += " -> ";
    s += to_string(p.boundary[i]);
  }
  return s;
}

int cmd_floer(const FloerArgs& a) {
  Multicurve l1 = load_curve_file(a.file1), l2 = load_curve_file(a.file2);
  validate(l1);
  validate(l2);
  ChainData c = floer_chain(l1, l2, a.cochain, a.budget);
  int d = 0;
  for (const auto& row : c.differential)
    for (int v : row) d += v != 0;
  std::cout << "generators: " << c.generators.size() << ", differentials: " << d
            << ", rank: " << homology_rank(c) << "\n";
  std::cout << "bigons: " << c.bigons.size() << ", triangles: " << c.triangles.size() << "\n";
  if (a.witness) {
    for (std::size_t i = 0; i < c.generators.size(); ++i) {
      const Generator& g = c.generators[i];
      std::cout << "x" << i << " = (" << to_string(g.point.gamma) << ", "
                << to_string(g.point.theta) << "), ungraded\n";
    }
    for (const Bigon& b : c.bigons)
      std::cout << "bigon x" << b.from << " -> x" << b.to << ": " << point_list(b.disk) << "\n";
    for (const Triangle& t : c.triangles)
      std::cout << "triangle x" << t.from << " -> x" << t.to << ": " << point_list(t.disk)
                << "\n";
  }
  return kOk;
}

// ---- oracle ----

int oracle_c3(std::optional<double> t, int samples, std::uint64_t seed, int grid,
              const std::string& csv) {
  oracle::C3Report r = oracle::c3_check(t, samples, seed);
  bool ok = r.max_route_diff < 1e-10;
  std::cout << "samples: " << r.samples << "\n";
  std::cout << "max |quaternion - closed form|: " << fmt_double(r.max_route_diff)
            << " (tol 1e-10) " << verdict(r.max_route_diff < 1e-10) << "\n";
  if (t && *t == 0) {
    bool ok0 = r.max_t0_residual < 1e-12;
    ok = ok && ok0;
    std::cout << "max |Phi_0 - sin(gamma) cos(alpha)|: " << fmt_double(r.max_t0_residual)
              << " (tol 1e-12) " << verdict(ok0) << "\n";
  }
  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw PreconditionError("cannot write '" + csv + "'");
    oracle::write_csv(out, oracle::sample_variety(t.value_or(0), grid));
  }
  std::cout << "c3: " << verdict(ok) << "\n";
  return ok ? kOk : kOracle;
}

int oracle_hessian(double t, double step) {
  oracle::HessianResult r = oracle::corner_hessian(t, step);
  const char* names[4] = {"gamma", "theta", "alpha", "beta"};
  std::cout << "hessian at (0, 0, pi/2, 0), t = " << t << ":\n";
  for (int i = 0; i < 4; ++i) {
    std::cout << "  " << names[i];
    for (int j = 0; j < 4; ++j) {
      char buf[32];
      std::snprintf(buf, sizeof buf, " % .9f", r.h[i][j]);
      std::cout << buf;
    }
    std::cout << "\n";
  }
  std::cout << "eigenvalues:";
  for (double e : r.eigenvalues) std::cout << " " << e;
  std::cout << "\n";
  std::cout << (r.nonsingular ? "nonsingular" : "singular") << ", signature " << r.signature
            << "\n";
  double expect = -2 * std::cos(t) * std::sin(t);
  double res = std::abs(r.h[0][1] - expect);
  bool entry_ok = res < 1e-6;
  std::cout << "|H(gamma, theta) + 2 cos t sin t|: " << fmt_double(res) << " (tol 1e-6) "
            << verdict(entry_ok) << "\n";
  bool ok = entry_ok && r.nonsingular && r.signature == 0;
  std::cout << "hessian: " << verdict(ok) << "\n";
  return ok ? kOk : kOracle;
}

int oracle_fiber(const std::string& z2s, const std::string& z3s) {
  Q z2 = parse_q(z2s), z3 = parse_q(z3s);
  if (!(z2 > 0 && z2 < 1 && z3 > 0 && z3 < 1))
    throw PreconditionError("fiber needs z2, z3 in (0, 1) (units of pi)");
  Q lo = z2 - z3;
  if (lo < 0) lo = -lo;
  Q hi = z2 + z3;
  if (hi > 1) hi = 2 - hi;
  double n_lo = oracle::spherical_theta3(to_double(z2) * kPi, to_double(z3) * kPi, 0);
  double n_hi = oracle::spherical_theta3(to_double(z2) * kPi, to_double(z3) * kPi, kPi);
  double res = std::max(std::abs(n_lo - to_double(lo) * kPi), std::abs(n_hi - to_double(hi) * kPi));
  auto [r0, rpi] = oracle::endpoint_representations(to_double(z2) * kPi, to_double(z3) * kPi, 0);
  double s_res = std::abs(r0.s + rpi.s);
  std::cout << "endpoints: " << to_string(lo) << " pi, " << to_string(hi) << " pi\n";
  std::cout << "spherical route residual: " << fmt_double(res) << " (tol 1e-9) "
            << verdict(res < 1e-9) << "\n";
  std::cout << "s-values: psi=0 " << r0.s << ", psi=pi " << rpi.s
            << ", |s0 + s_pi|: " << fmt_double(s_res) << " (tol 1e-10) " << verdict(s_res < 1e-10)
            << "\n";
  bool ok = res < 1e-9 && s_res < 1e-10;
  std::cout << "fiber: " << verdict(ok) << "\n";
  return ok ? kOk : kOracle;
}

int oracle_coords(const std::string& gs, const std::string& ts, int samples, std::uint64_t seed) {
  Q g = parse_q(gs), t = parse_q(ts);
  PillowPoint p = normalize({g, t});
  double gamma = to_double(p.gamma) * kPi, theta = to_double(p.theta) * kPi;
  oracle::Quat a = oracle::ek_i(0), b = oracle::ek_i(gamma), c = oracle::ek_i(theta);
  oracle::Quat d = c * a.conj() * b;
  std::mt19937_64 rng(seed);
  double res = 0;
  for (int i = 0; i < samples; ++i) {
    oracle::Quat u = i == 0 ? oracle::Quat{1, 0, 0, 0} : oracle::random_unit(rng);
    auto conj = [&](const oracle::Quat& q) { return u * q * u.conj(); };
    auto [cg, ct] = oracle::pillowcase_coords(conj(a), conj(b), conj(c), conj(d));
    double dt = std::remainder(ct - theta, 2 * kPi);
    // On the edges the angle is only defined up to reflection.
    if (p.gamma == 0 || p.gamma == 1) dt = std::min(std::abs(dt), std::abs(std::remainder(ct + theta, 2 * kPi)));
    res = std::max({res, std::abs(cg - gamma), std::abs(dt)});
  }
  std::cout << "point: (" << to_string(p.gamma) << " pi, " << to_string(p.theta) << " pi)\n";
  std::cout << "max coordinate residual over " << samples
            << " conjugates: " << fmt_double(res) << " (tol 1e-9) " << verdict(res < 1e-9) << "\n";
  std::cout << "coords: " << verdict(res < 1e-9) << "\n";
  return res < 1e-9 ? kOk : kOracle;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pillowcase curves of tangles and their Floer chain data"};
  app.require_subcommand(1);

  EvalArgs ea;
  auto* ev = app.add_subcommand("eval", "Evaluate a tangle expression to a curve file");
  ev->add_option("expr", ea.expr, "Tangle expression, e.g. \"Q(1/3)+Q(1/5)\"")->required();
  ev->add_option("-o,--output", ea.out, "Curve file to write (default: stdout)");
  ev->add_option("--svg", ea.svg, "Also render an SVG");
  ev->add_flag("--no-resolve{true},--resolve{false}", ea.no_resolve,
               "Keep circle fibres unresolved (default: resolve)");
  ev->add_flag("--no-auto-shear", ea.no_auto_shear, "Fail on corner circles instead of shearing");
  ev->add_option("--eps", ea.eps, "Resolution parameter p/q")->capture_default_str();
  ev->add_option("--earring-eps", ea.earring_eps, "Earring offset p/q")->capture_default_str();

  FloerArgs fa;
  int cochain = -1;
  auto* fl = app.add_subcommand("floer", "Floer chain data of two curve files");
  fl->add_option("file1", fa.file1)->required()->check(CLI::ExistingFile);
  fl->add_option("file2", fa.file2)->required()->check(CLI::ExistingFile);
  fl->add_option("--cochain", cochain, "Self-intersection index used as bounding cochain");
  fl->add_flag("--witness", fa.witness, "Print generators and polygon vertex paths");
  fl->add_option("--budget", fa.budget, "Path budget per side in units of pi")
      ->check(CLI::PositiveNumber);

  auto* orc = app.add_subcommand("oracle", "Floating-point oracle checks");
  orc->require_subcommand(1);
  std::optional<double> c3_t;
  int samples = 10000, grid = 64;
  std::uint64_t seed = 1;
  std::string csv;
  auto* c3 = orc->add_subcommand("c3", "Quaternion vs closed-form trace function");
  c3->add_option("--t", c3_t, "Perturbation parameter (default: random in [0, 0.3])");
  c3->add_option("--samples", samples)->capture_default_str()->check(CLI::PositiveNumber);
  c3->add_option("--seed", seed)->capture_default_str();
  c3->add_option("--csv", csv, "Write zero-set samples of |Phi_t| as CSV");
  c3->add_option("--grid", grid, "Grid size for --csv")->capture_default_str();
  double h_t = 0.1, h_step = 1e-5;
  auto* hs = orc->add_subcommand("hessian", "Hessian of Phi_t at the corner");
  hs->add_option("--t", h_t)->capture_default_str();
  hs->add_option("--step", h_step)->capture_default_str();
  std::string z2, z3;
  auto* fb = orc->add_subcommand("fiber", "Circle fibre endpoints for edge angles z2, z3");
  fb->add_option("--z2", z2, "Angle p/q in units of pi")->required();
  fb->add_option("--z3", z3, "Angle p/q in units of pi")->required();
  std::string cg, ct;
  int coord_samples = 100;
  auto* co = orc->add_subcommand("coords", "Pillowcase coordinates under conjugation");
  co->add_option("--gamma", cg, "p/q in units of pi")->required();
  co->add_option("--theta", ct, "p/q in units of pi")->required();
  co->add_option("--samples", coord_samples)->capture_default_str()->check(CLI::PositiveNumber);
  co->add_option("--seed", seed)->capture_default_str();

  std::string plot_file, plot_svg;
  auto* pl = app.add_subcommand("plot", "Render a curve file as SVG");
  pl->add_option("file", plot_file)->required()->check(CLI::ExistingFile);
  pl->add_option("-o,--svg", plot_svg, "SVG file to write (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*ev) return cmd_eval(ea);
    if (*fl) {
      if (cochain >= 0) fa.cochain = cochain;
      return cmd_floer(fa);
    }
    if (*pl) return cmd_plot(plot_file, plot_svg);
    if (*c3) return oracle_c3(c3_t, samples, seed, grid, csv);
    if (*hs) return oracle_hessian(h_t, h_step);
    if (*fb) return oracle_fiber(z2, z3);
    if (*co) return oracle_coords(cg, ct, coord_samples, seed);
  } catch (const TransversalityError& e) {
    std::cerr << "error: " << e.what() << "\n"
              << "hint: the curves are not transverse; perturb one of them, e.g. wrap it as "
                 "shear(<expr>,theta,1/64) and evaluate again\n";
    return kTransversality;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n"
              << "hint: raise the path budget with --budget or PILLOWCURVE_BUDGET\n";
    return kBudget;
  } catch (const OracleToleranceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOracle;
  } catch (const ConsistencyError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
