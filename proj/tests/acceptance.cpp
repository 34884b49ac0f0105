// Acceptance suite: one pass/fail line per criterion, tolerances and time
// limits pinned below. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "bigon_oracle.hpp"
#include "pillow/charvar.hpp"
#include "pillow/errors.hpp"
#include "pillow/floer.hpp"
#include "pillow/oracle.hpp"
#include "pillow/tangle.hpp"

using namespace pillow;

namespace {

constexpr double kPi = std::numbers::pi;

constexpr double kFiberTol = 1e-9;
constexpr double kRouteTol = 1e-10;
constexpr double kT0Tol = 1e-12;
constexpr double kSignTol = 1e-10;
constexpr double kHessianEntryTol = 1e-6;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void run(int id, const char* name, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= limit_s) {
    o.ok = false;
    o.detail << " [over time limit " << limit_s << "s]";
  }
  if (!o.ok) ++failures;
  std::printf("criterion %d %s: %s (%.3fs)%s\n", id, o.ok ? "PASS" : "FAIL", name, secs,
              o.detail.str().c_str());
  std::fflush(stdout);
}

Multicurve ev(const std::string& text, EvalOptions opts = {}) { return eval(parse(text), opts); }

std::string slope_str(const Slope& s) { return to_string(s); }

// Edge crossings of the straight lift (0,0)-(q,p) on gamma = side mod 2,
// folded into [0, 1].
std::vector<Q> edge_crossings(long p, long q, int side) {
  std::vector<Q> out;
  for (long k = 1; k < q; ++k) {
    if (k % 2 != side) continue;
    Q th = mod2(make_q(p * k, q));
    if (th > 1) th = 2 - th;
    out.push_back(th);
  }
  return out;
}

void criterion1(Outcome& o) {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<long> pd(-20, 20), qd(1, 20), nd(-5, 5);
  int done = 0;
  while (done < 50) {
    long p = pd(rng), q = qd(rng);
    if (std::gcd(p < 0 ? -p : p, q) != 1) continue;
    ++done;
    Q s = make_q(p, q);
    long n = nd(rng);
    ExprPtr e = make_rational(p, q);
    std::string tag = "Q(" + std::to_string(p) + "/" + std::to_string(q) + ")";
    Slope want{false, s};
    o.require(slope(e) == want, "slope " + tag);
    o.require(slope(make_twist(e, n)) == Slope{false, Q(s + n)}, "twist " + tag);
    Slope rot = s == 0 ? Slope{true, Q(0)} : Slope{false, Q(-1 / s)};
    o.require(slope(make_rotate(e)) == rot, "rot " + tag);
    o.require(slope(make_mirror(e)) == Slope{false, Q(-s)}, "mirror " + tag);
    // Same rules read off the evaluated curves.
    for (const ExprPtr& x : {e, make_twist(e, n), make_rotate(e), make_mirror(e)}) {
      Multicurve m = eval(x);
      const Component* arc = binary_dihedral_arc(m);
      o.require(arc && slope_str(arc_slope(*arc)) == slope_str(slope(x)), "curve " + print(x));
    }
  }
  o.detail << " 50 slopes, 4 rules each";
}

void criterion2(Outcome& o) {
  SumResult r = sum_curves(ev("Q(1/2)"), ev("Q(-1/3)"));
  o.require(r.circles.size() == 1, "one circle");
  if (r.circles.size() != 1) return;
  const CircleFiber& cf = r.circles[0];
  Q a = edge_crossings(1, 2, 1).at(0), b = edge_crossings(-1, 3, 1).at(0);
  Q lo = a > b ? Q(a - b) : Q(b - a), hi = a + b > 1 ? Q(2 - a - b) : Q(a + b);
  o.require(cf.gamma0 == 1, "gamma0 = pi");
  o.require(!cf.corner_circle, "internal");
  o.require(cf.theta_min == lo && cf.theta_max == hi && lo == make_q(1, 6) && hi == make_q(5, 6),
            "range [pi/6, 5pi/6]");
  double e0 = std::abs(oracle::spherical_theta3(to_double(a) * kPi, to_double(b) * kPi, 0) -
                       to_double(cf.theta_min) * kPi);
  double epi = std::abs(oracle::spherical_theta3(to_double(a) * kPi, to_double(b) * kPi, kPi) -
                        to_double(cf.theta_max) * kPi);
  o.require(e0 < kFiberTol && epi < kFiberTol, "spherical endpoints");
  SumResult c = sum_curves(ev("Q(1/2)"), ev("Q(1/2)"));
  bool flagged = c.circles.size() == 1 && c.circles[0].corner_circle;
  o.require(flagged, "Q(1/2)+Q(1/2) corner circle flagged");
  CornerShear cs = remove_corner_circles(ev("Q(1/2)"), ev("Q(1/2)"));
  bool cleared = !cs.applied.empty();
  for (const CircleFiber& f : sum_curves(cs.curve, ev("Q(1/2)")).circles)
    cleared = cleared && !f.corner_circle;
  o.require(cleared, "remove_corner_circles clears it");
  o.detail << " range [" << to_string(cf.theta_min) << ", " << to_string(cf.theta_max)
           << "] pi, endpoint residuals " << e0 << ", " << epi;
}

void criterion3(Outcome& o) {
  std::size_t expected_sites = 0;
  for (int side : {0, 1})
    expected_sites += edge_crossings(1, 3, side).size() * edge_crossings(1, 5, side).size();
  o.require(expected_sites == 4, "four edge-crossing pairs");
  std::set<std::size_t> comps, crossings;
  for (long den : {50, 100, 200}) {
    EvalOptions opts;
    opts.eps = make_q(1, den);
    EvalReport rep;
    Multicurve m = eval(parse("Q(1/3)+Q(1/5)"), opts, &rep);
    o.require(rep.circles == static_cast<int>(expected_sites),
              "4 resolution sites at eps 1/" + std::to_string(den));
    comps.insert(m.components.size());
    crossings.insert(self_intersections(m).size());
  }
  o.require(comps.size() == 1, "component count invariant");
  o.require(crossings.size() == 1, "self-intersection count invariant");
  o.detail << " sites 4, components " << *comps.begin() << ", self-intersections "
           << *crossings.begin();
}

int differential_count(const ChainData& c) {
  int d = 0;
  for (const auto& row : c.differential)
    for (int v : row) d += v;
  return d;
}

void criterion4(Outcome& o) {
  Multicurve l1 = ev("shear(Q(0),theta,1/10)"), l2 = ev("earring(Q(0))");
  ChainData c = floer_chain(l1, l2);
  o.require(c.generators.size() == 2, "2 generators");
  o.require(c.bigons.empty(), "0 bigons");
  o.require(homology_rank(c) == 2, "rank 2");
  std::size_t self = cochain_candidates(l1, l2).size();
  o.require(self == 1, "single self-intersection");
  ChainData t = floer_chain(l1, l2, 0);
  o.require(t.triangles.size() == 1, "1 triangle");
  o.require(homology_rank(t) == 0, "rank 0 with cochain");
  o.detail << " generators " << c.generators.size() << ", bigons " << c.bigons.size()
           << ", rank " << homology_rank(c) << "; with cochain: triangles " << t.triangles.size()
           << ", rank " << homology_rank(t);
}

void criterion5(Outcome& o) {
  Multicurve l1 = ev("earring(hat(Q(-1/2)))"), l2 = ev("Q(1/3)+Q(1/5)");
  ChainData c = floer_chain(l1, l2);
  o.require(c.generators.size() == 9, "9 generators");
  o.require(c.bigons.size() == 2, "2 bigons");
  std::set<int> v;
  for (const Bigon& b : c.bigons) {
    v.insert(b.from);
    v.insert(b.to);
  }
  o.require(v.size() == 2 * c.bigons.size(), "pairwise-distinct vertices");
  o.require(homology_rank(c) == 5, "rank 5");
  o.detail << " generators " << c.generators.size() << ", bigons " << c.bigons.size()
           << ", differentials " << differential_count(c) << ", rank " << homology_rank(c);
}

void criterion6(Outcome& o) {
  oracle::C3Report r = oracle::c3_check(std::nullopt, 100000, 606, 0.3);
  oracle::C3Report r0 = oracle::c3_check(0.0, 100000, 607);
  o.require(r.max_route_diff < kRouteTol, "route agreement");
  o.require(r0.max_t0_residual < kT0Tol, "t = 0 product form");
  o.detail << " max route diff " << r.max_route_diff << " (tol " << kRouteTol
           << "), max |Phi_0 - sin g cos a| " << r0.max_t0_residual << " (tol " << kT0Tol << ")";
}

void criterion7(Outcome& o) {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> a(std::nextafter(0.0, 1.0), kPi);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    double t1 = a(rng), t2 = a(rng);
    if (!(t1 < kPi && t2 < kPi)) continue;
    auto [r0, rpi] = oracle::endpoint_representations(t1, t2, i % 2 ? kPi : 0);
    worst = std::max(worst, std::abs(r0.s + rpi.s));
  }
  o.require(worst < kSignTol, "s0 = -s_pi");
  o.detail << " max |s0 + s_pi| " << worst << " (tol " << kSignTol << ")";
}

void criterion8(Outcome& o) {
  double t = 0.1;
  oracle::HessianResult h = oracle::corner_hessian(t);
  double err = std::abs(h.h[0][1] + 2 * std::cos(t) * std::sin(t));
  o.require(h.nonsingular, "nonsingular");
  o.require(h.signature == 0, "signature 0");
  o.require(err < kHessianEntryTol, "entry (gamma, theta)");
  o.detail << " signature " << h.signature << ", eigenvalues";
  for (double e : h.eigenvalues) o.detail << " " << e;
  o.detail << ", |H_gt + 2 cos t sin t| " << err << " (tol " << kHessianEntryTol << ")";
}

void criterion9(Outcome& o) {
  std::mt19937_64 rng(909);
  int configs = 0, pairs = 0, with_bigon = 0, mismatches = 0;
  while (configs < 200) {
    bigon_oracle::Config cfg = bigon_oracle::random_config(rng, 6);
    bigon_oracle::Oracle orc;
    if (!orc.build(cfg)) continue;
    Multicurve l1, l2;
    l1.components.push_back(make_closed(cfg.p1, GroupElem{}, 0));
    l2.components.push_back(make_closed(cfg.p2, GroupElem{}, 0));
    std::vector<Generator> gens;
    try {
      validate(l1);
      validate(l2);
      gens = intersect(l1, l2);
    } catch (const TransversalityError&) {
      continue;
    }
    ++configs;
    if (gens.size() != orc.crossings().size()) {
      ++mismatches;
      continue;
    }
    auto find = [&](const Point& p) {
      for (const Generator& g : gens)
        if (g.lift == p) return &g;
      return static_cast<const Generator*>(nullptr);
    };
    for (const auto& x : orc.crossings())
      for (const auto& y : orc.crossings()) {
        if (&x == &y) continue;
        const Generator *gx = find(x.p), *gy = find(y.p);
        if (!gx || !gy) {
          ++mismatches;
          continue;
        }
        int want = orc.bigon_parity(x, y);
        int got = count_bigons(l1, l2, *gx, *gy, 8).parity;
        ++pairs;
        with_bigon += want;
        mismatches += got != want;
      }
  }
  o.require(mismatches == 0, "parity agreement");
  o.detail << " " << configs << " configurations, " << pairs << " generator pairs ("
           << with_bigon << " with odd count), " << mismatches << " mismatches";
}

}  // namespace

int main() {
  run(1, "slope algebra", 1.0, criterion1);
  run(2, "tangle-sum fibres", 1.0, criterion2);
  run(3, "resolution stability", 2.0, criterion3);
  run(4, "unlink golden test", 2.0, criterion4);
  run(5, "P(-2,3,5) golden test", 30.0, criterion5);
  run(6, "oracle formula agreement", 10.0, criterion6);
  run(7, "sign antisymmetry", 1.0, criterion7);
  run(8, "corner Hessian", 1.0, criterion8);
  run(9, "bigon oracle equivalence", 30.0, criterion9);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures;
}
