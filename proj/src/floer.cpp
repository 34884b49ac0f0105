#include "pillow/floer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <set>

#include "pillow/errors.hpp"

namespace pillow {

namespace {

// A component lift placed in the plane by a deck transformation. Points are
// addressed by a real parameter: integer part = edge index (continued
// periodically through the holonomy for closed curves), fraction = position.
struct Traj {
  const LiftPolyline* l;
  GroupElem frame;
};

long edges(const Traj& t) { return static_cast<long>(t.l->edge_count()); }

GroupElem hol_power(const GroupElem& h, const Q& m) {
  if (h.sign != 1) throw ConsistencyError("closed component with reflection holonomy");
  GroupElem r;
  r.shift = m * h.shift;
  return r;
}

Point base_point(const LiftPolyline& l, const Q& p) {
  long i = floor_q(p).get_num().get_si();
  if (!l.closed && i == static_cast<long>(l.edge_count())) return l.vertices.back();
  return lerp(l.edge_start(i), l.edge_end(i), p - i);
}

Q period_index(const Traj& t, const Q& p) { return floor_q(p / edges(t)); }

// Frame in which the point at parameter p sits on the base lift.
GroupElem frame_at(const Traj& t, const Q& p) {
  if (!t.l->closed) return t.frame;
  return compose(t.frame, hol_power(t.l->holonomy, period_index(t, p)));
}

Point position(const Traj& t, const Q& p) {
  if (!t.l->closed) {
    if (p < 0 || p > edges(t)) throw ConsistencyError("arc parameter out of range");
    return t.frame.apply(base_point(*t.l, p));
  }
  Q r = p - period_index(t, p) * edges(t);
  return frame_at(t, p).apply(base_point(*t.l, r));
}

std::vector<Point> path(const Traj& t, const Q& a, const Q& b) {
  std::vector<Point> out{position(t, a)};
  if (b > a) {
    for (Q k = floor_q(a) + 1; k < b; k += 1) out.push_back(position(t, k));
  } else {
    for (Q k = -floor_q(-a) - 1; k > b; k -= 1) out.push_back(position(t, k));
  }
  out.push_back(position(t, b));
  return out;
}

double length(const std::vector<Point>& pts) {
  double s = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) s += length(pts[i - 1], pts[i]);
  return s;
}

double period_length(const Traj& t) {
  double s = 0;
  for (std::size_t i = 0; i < t.l->edge_count(); ++i)
    s += length(t.l->edge_start(i), t.l->edge_end(i));
  return s;
}

// Parameters of the lifts of base parameter p0 met when walking from `from`
// in direction dir, up to arc length `budget`. Arcs and curves closing up in
// the plane have finitely many and are always returned in full.
std::vector<Q> lifts_within(const Traj& t, const Q& p0, const Q& from, int dir, double budget) {
  std::vector<Q> out;
  if (!t.l->closed) {
    if ((p0 - from) * dir > 0) out.push_back(p0);
    return out;
  }
  Q n(edges(t));
  Q m = floor_q((from - p0) / n);
  Q p = p0 + m * n;
  if (dir > 0) {
    while (p <= from) p += n;
  } else {
    while (p >= from) p -= n;
  }
  if (t.l->holonomy.is_identity()) return {p};
  double per = period_length(t);
  while (true) {
    double approx = per * std::floor(std::abs(to_double(Q(p - from))) / to_double(n));
    if (approx > budget) break;
    if (length(path(t, from, p)) > budget) break;
    out.push_back(p);
    p += dir * n;
  }
  return out;
}

// Parameters q on t (equivalent to p0 under the periodicity) with position z.
std::vector<Q> match_params(const Traj& t, const Q& p0, const Point& z, const Q& from) {
  std::vector<Q> out;
  Point base = base_point(*t.l, p0);
  Point zl = t.frame.inverse().apply(z);
  if (!t.l->closed) {
    if (zl == base) out.push_back(p0);
    return out;
  }
  Q n(edges(t));
  const GroupElem& h = t.l->holonomy;
  if (h.is_identity()) {
    if (zl != base) return out;
    for (int dir : {1, -1}) {
      Q p = p0 + floor_q((from - p0) / n) * n;
      if (dir > 0) {
        while (p <= from) p += n;
      } else {
        while (p >= from) p -= n;
      }
      out.push_back(p);
    }
    return out;
  }
  Point diff = zl - base;
  Q m = h.shift.g != 0 ? Q(diff.g / h.shift.g) : Q(diff.t / h.shift.t);
  if (m.get_den() != 1 || diff != m * h.shift) return out;
  out.push_back(p0 + m * n);
  return out;
}

Q loc_param(const CurveLoc& c) { return Q(c.seg) + c.param; }

bool on_segment(const Point& p, const Point& a, const Point& b) {
  if (cross(b - a, p - a) != 0) return false;
  return dot(p - a, b - a) >= 0 && dot(p - b, a - b) >= 0;
}

bool simple_polygon(const std::vector<Point>& v) {
  std::size_t n = v.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    Point a0 = v[i], a1 = v[(i + 1) % n];
    if (a0 == a1) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      Point b0 = v[j], b1 = v[(j + 1) % n];
      bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) {
        Point shared = j == i + 1 ? a1 : a0;
        Point pa = j == i + 1 ? a0 : a1;
        Point pb = j == i + 1 ? b1 : b0;
        Point d1 = pa - shared, d2 = pb - shared;
        if (cross(d1, d2) == 0 && dot(d1, d2) > 0) return false;  // fold back
        if (n == 3) continue;
        continue;
      }
      if (!segment_intersections(a0, a1, b0, b1).empty()) return false;
    }
  }
  return true;
}

Q signed_area2(const std::vector<Point>& v) {
  Q s(0);
  for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], v[(i + 1) % v.size()]);
  return s;
}

int winding(const std::vector<Point>& v, const Point& p) {
  int w = 0;
  std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % n];
    if (a.t <= p.t) {
      if (b.t > p.t && cross(b - a, p - a) > 0) ++w;
    } else {
      if (b.t <= p.t && cross(b - a, p - a) < 0) --w;
    }
  }
  return w;
}

double turning_number(const std::vector<Point>& v) {
  double total = 0;
  std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    Point d1 = v[i] - v[(i + n - 1) % n];
    Point d2 = v[(i + 1) % n] - v[i];
    total += std::atan2(to_double(cross(d1, d2)), to_double(dot(d1, d2)));
  }
  return total / (2 * std::numbers::pi);
}

bool convex_corner(const std::vector<Point>& v, std::size_t i) {
  std::size_t n = v.size();
  Point d1 = v[i] - v[(i + n - 1) % n];
  Point d2 = v[(i + 1) % n] - v[i];
  return cross(d1, d2) > 0;
}

bool avoids_lattice(const std::vector<Point>& v) {
  Q glo = v[0].g, ghi = v[0].g, tlo = v[0].t, thi = v[0].t;
  for (const Point& p : v) {
    glo = std::min(glo, p.g);
    ghi = std::max(ghi, p.g);
    tlo = std::min(tlo, p.t);
    thi = std::max(thi, p.t);
  }
  for (Q g = -floor_q(-glo); g <= ghi; g += 1) {
    for (Q t = -floor_q(-tlo); t <= thi; t += 1) {
      Point c{g, t};
      for (std::size_t i = 0; i < v.size(); ++i)
        if (on_segment(c, v[i], v[(i + 1) % v.size()])) return false;
      if (winding(v, c) != 0) return false;
    }
  }
  return true;
}

enum class Verdict { Accept, Reject, Wrapped };

// Embedded-lift test: simple, counterclockwise, convex at the marked corners
// and free of lattice points. Non-simple loops that still look like immersed
// disks (turning number one, convex corners) are reported as Wrapped.
Verdict judge(Polygon& poly) {
  auto& v = poly.boundary;
  std::vector<Point> clean;
  std::vector<std::size_t> remap(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (clean.empty() || clean.back() != v[i]) clean.push_back(v[i]);
    remap[i] = clean.size() - 1;
  }
  while (clean.size() > 1 && clean.back() == clean.front()) clean.pop_back();
  for (auto& c : poly.corners) c = std::min(remap[c], clean.size() - 1);
  v = clean;
  if (v.size() < 3) return Verdict::Reject;
  for (std::size_t c : poly.corners)
    if (!convex_corner(v, c)) return Verdict::Reject;
  if (!simple_polygon(v)) {
    return std::abs(turning_number(v) - 1.0) < 1e-6 ? Verdict::Wrapped : Verdict::Reject;
  }
  if (signed_area2(v) <= 0) return Verdict::Reject;
  if (!avoids_lattice(v)) return Verdict::Reject;
  return Verdict::Accept;
}

std::string key_of(std::initializer_list<Q> qs) {
  std::string s;
  for (const Q& q : qs) s += q.get_str() + ";";
  return s;
}

void consider(Polygon poly, double side_max, double budget, Count& out, const char* what) {
  Verdict v = judge(poly);
  if (v == Verdict::Accept) {
    out.parity ^= 1;
    out.witnesses.push_back(std::move(poly));
  } else if (v == Verdict::Wrapped && side_max > budget) {
    throw BudgetError(std::string("a ") + what +
                      " candidate wraps around beyond the path-length budget; raise "
                      "PILLOWCURVE_BUDGET or shear the curves");
  }
}

const Component& comp_of(const Multicurve& m, int i) {
  if (i < 0 || static_cast<std::size_t>(i) >= m.components.size())
    throw PreconditionError("component index out of range");
  return m.components[i];
}

struct Branch {
  int comp;
  Q param;
  GroupElem to_other;  // frame change onto the other branch
  int other_comp;
  Q other_param;
};

std::vector<Branch> branches(const SelfIntersection& b) {
  Q pa = Q(b.edge_a) + b.u_a, pb = Q(b.edge_b) + b.u_b;
  return {{b.comp_a, pa, b.g, b.comp_b, pb}, {b.comp_b, pb, b.g.inverse(), b.comp_a, pa}};
}

void check_curve(const Multicurve& m, const char* which) {
  for (const Component& c : m.components)
    if (c.tags & TagHCircle)
      throw PreconditionError(std::string(which) +
                              " contains an unresolved circle fibre, which is not an immersed curve");
}

}  // namespace

double path_budget() {
  const char* env = std::getenv("PILLOWCURVE_BUDGET");
  if (!env || !*env) return 4.0;
  char* end = nullptr;
  double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v > 0))
    throw PreconditionError(std::string("PILLOWCURVE_BUDGET must be a positive number, got '") +
                            env + "'");
  return v;
}

std::vector<Generator> intersect(const Multicurve& l1, const Multicurve& l2) {
  check_curve(l1, "first curve");
  check_curve(l2, "second curve");
  std::vector<Generator> out;
  for (std::size_t c1 = 0; c1 < l1.components.size(); ++c1) {
    const LiftPolyline& a = l1.components[c1].lift;
    for (std::size_t c2 = 0; c2 < l2.components.size(); ++c2) {
      const LiftPolyline& b = l2.components[c2].lift;
      for (std::size_t e1 = 0; e1 < a.edge_count(); ++e1) {
        for (std::size_t e2 = 0; e2 < b.edge_count(); ++e2) {
          for (const OrbitHit& oh : orbit_intersections(a.edge_start(e1), a.edge_end(e1),
                                                        b.edge_start(e2), b.edge_end(e2))) {
            const SegmentHit& h = oh.hit;
            std::string where = "segment " + std::to_string(e1) + " of L1 component " +
                                std::to_string(c1) + " and segment " + std::to_string(e2) +
                                " of L2 component " + std::to_string(c2) + " at " +
                                to_string(h.point);
            if (is_lattice(h.point))
              throw TransversalityError("curves meet at a corner: " + where +
                                        "; shear one curve");
            if (!h.transverse)
              throw TransversalityError("non-transverse intersection between " + where +
                                        "; apply a small shear");
            Generator g;
            g.point = normalize(h.point);
            g.lift = h.point;
            g.loc1 = {static_cast<int>(c1), static_cast<int>(e1), h.ua};
            g.loc2 = {static_cast<int>(c2), static_cast<int>(e2), h.ub};
            g.g = oh.g;
            out.push_back(g);
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Generator& x, const Generator& y) {
    if (!(x.point == y.point)) return x.point < y.point;
    if (x.loc1.comp != y.loc1.comp) return x.loc1.comp < y.loc1.comp;
    if (x.loc2.comp != y.loc2.comp) return x.loc2.comp < y.loc2.comp;
    if (x.loc1.seg != y.loc1.seg) return x.loc1.seg < y.loc1.seg;
    return x.loc2.seg < y.loc2.seg;
  });
  return out;
}

Count count_bigons(const Multicurve& l1, const Multicurve& l2, const Generator& x,
                   const Generator& y, double budget) {
  Count out;
  if (x.loc1.comp != y.loc1.comp || x.loc2.comp != y.loc2.comp) return out;
  Traj t1{&comp_of(l1, x.loc1.comp).lift, GroupElem{}};
  Traj t2{&comp_of(l2, x.loc2.comp).lift, x.g};
  Q p1x = loc_param(x.loc1), p2x = loc_param(x.loc2);
  Q p1y = loc_param(y.loc1), p2y = loc_param(y.loc2);
  std::set<std::string> seen;
  auto test = [&](const Q& p1, const Q& p2) {
    if (!seen.insert(key_of({p1, p2})).second) return;
    std::vector<Point> s1 = path(t1, p1x, p1);
    std::vector<Point> s2 = path(t2, p2x, p2);
    Polygon poly;
    poly.boundary = s1;
    for (std::size_t i = s2.size() - 1; i-- > 1;) poly.boundary.push_back(s2[i]);
    poly.corners = {0, s1.size() - 1};
    consider(std::move(poly), std::max(length(s1), length(s2)), budget, out, "bigon");
  };
  for (int dir : {1, -1}) {
    for (const Q& p1 : lifts_within(t1, p1y, p1x, dir, budget))
      for (const Q& p2 : match_params(t2, p2y, position(t1, p1), p2x)) test(p1, p2);
    for (const Q& p2 : lifts_within(t2, p2y, p2x, dir, budget))
      for (const Q& p1 : match_params(t1, p1y, position(t2, p2), p1x)) test(p1, p2);
  }
  return out;
}

std::vector<CochainPoint> cochain_candidates(const Multicurve& l1, const Multicurve& l2) {
  std::vector<CochainPoint> out;
  for (const SelfIntersection& s : self_intersections(l1)) out.push_back({1, s});
  for (const SelfIntersection& s : self_intersections(l2)) out.push_back({2, s});
  return out;
}

Count count_triangles_with_cochain(const Multicurve& l1, const Multicurve& l2,
                                   const CochainPoint& b, const Generator& x, const Generator& y,
                                   double budget) {
  Count out;
  Traj t1{&comp_of(l1, x.loc1.comp).lift, GroupElem{}};
  Traj t2{&comp_of(l2, x.loc2.comp).lift, x.g};
  Q p1x = loc_param(x.loc1), p2x = loc_param(x.loc2);
  Q p1y = loc_param(y.loc1), p2y = loc_param(y.loc2);
  std::set<std::string> seen;

  if (b.curve == 2) {
    // x -(L1)-> y -(L2)-> b -(L2)-> x
    if (y.loc1.comp != x.loc1.comp) return out;
    for (const Branch& br : branches(b.b)) {
      if (br.comp != x.loc2.comp) continue;
      for (int bdir : {1, -1}) {
        for (const Q& pb : lifts_within(t2, br.param, p2x, bdir, budget)) {
          Traj to{&comp_of(l2, br.other_comp).lift, compose(frame_at(t2, pb), br.to_other)};
          if (position(to, br.other_param) != position(t2, pb))
            throw ConsistencyError("self-intersection branches disagree");
          if (y.loc2.comp != br.other_comp) continue;
          for (int ydir : {1, -1}) {
            for (const Q& p1 : lifts_within(t1, p1y, p1x, ydir, budget)) {
              for (const Q& poy : match_params(to, p2y, position(t1, p1), br.other_param)) {
                if (!seen.insert(key_of({pb, br.param, p1, poy})).second) continue;
                std::vector<Point> s1 = path(t1, p1x, p1);
                std::vector<Point> s2 = path(to, poy, br.other_param);
                std::vector<Point> s3 = path(t2, pb, p2x);
                Polygon poly;
                poly.boundary = s1;
                poly.boundary.insert(poly.boundary.end(), s2.begin() + 1, s2.end());
                poly.boundary.insert(poly.boundary.end(), s3.begin() + 1, s3.end() - 1);
                poly.corners = {0, s1.size() - 1, s1.size() + s2.size() - 2};
                double m = std::max({length(s1), length(s2), length(s3)});
                consider(std::move(poly), m, budget, out, "triangle");
              }
            }
          }
        }
      }
    }
    return out;
  }

  // x -(L1)-> b -(L1)-> y -(L2)-> x
  if (y.loc2.comp != x.loc2.comp) return out;
  for (const Branch& br : branches(b.b)) {
    if (br.comp != x.loc1.comp) continue;
    for (int bdir : {1, -1}) {
      for (const Q& pb : lifts_within(t1, br.param, p1x, bdir, budget)) {
        Traj to{&comp_of(l1, br.other_comp).lift, compose(frame_at(t1, pb), br.to_other)};
        if (position(to, br.other_param) != position(t1, pb))
          throw ConsistencyError("self-intersection branches disagree");
        if (y.loc1.comp != br.other_comp) continue;
        for (int ydir : {1, -1}) {
          for (const Q& p2 : lifts_within(t2, p2y, p2x, ydir, budget)) {
            for (const Q& poy : match_params(to, p1y, position(t2, p2), br.other_param)) {
              if (!seen.insert(key_of({pb, br.param, p2, poy})).second) continue;
              std::vector<Point> s1 = path(t1, p1x, pb);
              std::vector<Point> s2 = path(to, br.other_param, poy);
              std::vector<Point> s3 = path(t2, p2, p2x);
              Polygon poly;
              poly.boundary = s1;
              poly.boundary.insert(poly.boundary.end(), s2.begin() + 1, s2.end());
              poly.boundary.insert(poly.boundary.end(), s3.begin() + 1, s3.end() - 1);
              poly.corners = {0, s1.size() - 1, s1.size() + s2.size() - 2};
              double m = std::max({length(s1), length(s2), length(s3)});
              consider(std::move(poly), m, budget, out, "triangle");
            }
          }
        }
      }
    }
  }
  return out;
}

int f2_rank(std::vector<std::vector<int>> m) {
  int rank = 0;
  std::size_t rows = m.size();
  std::size_t cols = rows ? m[0].size() : 0;
  for (std::size_t c = 0; c < cols && static_cast<std::size_t>(rank) < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && !(m[piv][c] & 1)) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = 0; r < rows; ++r)
      if (r != static_cast<std::size_t>(rank) && (m[r][c] & 1))
        for (std::size_t k = 0; k < cols; ++k) m[r][k] ^= m[rank][k] & 1;
    ++rank;
  }
  return rank;
}

namespace {

bool squares_to_zero(const std::vector<std::vector<int>>& d) {
  std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      int s = 0;
      for (std::size_t j = 0; j < n; ++j) s ^= d[i][j] & d[j][k] & 1;
      if (s) return false;
    }
  return true;
}

}  // namespace

ChainData floer_chain(const Multicurve& l1, const Multicurve& l2, std::optional<int> cochain_index,
                      double budget) {
  if (budget <= 0) budget = path_budget();
  ChainData c;
  c.generators = intersect(l1, l2);
  std::size_t n = c.generators.size();
  c.differential.assign(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      Count k = count_bigons(l1, l2, c.generators[i], c.generators[j], budget);
      c.differential[i][j] = k.parity;
      for (Polygon& w : k.witnesses)
        c.bigons.push_back({static_cast<int>(i), static_cast<int>(j), std::move(w)});
    }
  }
  if (!squares_to_zero(c.differential))
    throw ConsistencyError("bigon differential does not square to zero");
  if (cochain_index) {
    std::vector<CochainPoint> cands = cochain_candidates(l1, l2);
    if (cands.empty()) throw PreconditionError("neither curve has a self-intersection to use as b");
    if (*cochain_index < 0 || static_cast<std::size_t>(*cochain_index) >= cands.size())
      throw PreconditionError("cochain index " + std::to_string(*cochain_index) +
                              " out of range (" + std::to_string(cands.size()) +
                              " self-intersections)");
    const CochainPoint& b = cands[*cochain_index];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Count k = count_triangles_with_cochain(l1, l2, b, c.generators[i], c.generators[j], budget);
        c.differential[i][j] ^= k.parity;
        for (Polygon& w : k.witnesses)
          c.triangles.push_back({static_cast<int>(i), static_cast<int>(j), std::move(w)});
      }
    }
    if (!squares_to_zero(c.differential))
      throw ConsistencyError("differential twisted by the cochain does not square to zero");
  }
  return c;
}

int homology_rank(const ChainData& c) {
  if (!squares_to_zero(c.differential))
    throw ConsistencyError("differential does not square to zero");
  return static_cast<int>(c.generators.size()) - 2 * f2_rank(c.differential);
}

}  // namespace pillow
