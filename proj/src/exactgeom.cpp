#include "pillow/exactgeom.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pillow/errors.hpp"

namespace pillow {

Q make_q(long num, long den) {
  if (den == 0) throw PreconditionError("zero denominator");
  Q q(num, den);
  q.canonicalize();
  return q;
}

Q parse_q(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  if (s.empty()) throw PreconditionError("empty rational");
  auto valid_int = [](const std::string& x) {
    std::size_t i = (!x.empty() && (x[0] == '-' || x[0] == '+')) ? 1 : 0;
    if (i >= x.size()) return false;
    for (; i < x.size(); ++i)
      if (x[i] < '0' || x[i] > '9') return false;
    return true;
  };
  std::size_t slash = s.find('/');
  std::string n = s.substr(0, slash);
  std::string d = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(n) || !valid_int(d) || d[0] == '-' || d[0] == '+')
    throw PreconditionError("malformed rational '" + text + "'");
  mpz_class num(n[0] == '+' ? n.substr(1) : n);
  mpz_class den(d);
  if (den == 0) throw PreconditionError("zero denominator in '" + text + "'");
  Q q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Q& q) { return q.get_str(); }

Q floor_q(const Q& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Q(f);
}

Q mod2(const Q& q) {
  Q half = q / 2;
  Q r = q - 2 * floor_q(half);
  return r;
}

double to_double(const Q& q) { return q.get_d(); }

bool operator==(const Point& a, const Point& b) { return a.g == b.g && a.t == b.t; }
bool operator!=(const Point& a, const Point& b) { return !(a == b); }
bool operator<(const Point& a, const Point& b) {
  if (a.g != b.g) return a.g < b.g;
  return a.t < b.t;
}
Point operator+(const Point& a, const Point& b) { return {a.g + b.g, a.t + b.t}; }
Point operator-(const Point& a, const Point& b) { return {a.g - b.g, a.t - b.t}; }
Point operator*(const Q& s, const Point& a) { return {s * a.g, s * a.t}; }
Q cross(const Point& a, const Point& b) { return a.g * b.t - a.t * b.g; }
Q dot(const Point& a, const Point& b) { return a.g * b.g + a.t * b.t; }
Point lerp(const Point& a, const Point& b, const Q& u) { return a + u * (b - a); }
double length(const Point& a, const Point& b) {
  double dg = to_double(b.g - a.g), dt = to_double(b.t - a.t);
  return std::hypot(dg, dt);
}
std::string to_string(const Point& p) { return "(" + to_string(p.g) + ", " + to_string(p.t) + ")"; }

bool is_lattice(const Point& p) {
  return p.g.get_den() == 1 && p.t.get_den() == 1;
}

bool operator==(const PillowPoint& a, const PillowPoint& b) {
  return a.gamma == b.gamma && a.theta == b.theta;
}
bool operator<(const PillowPoint& a, const PillowPoint& b) {
  if (a.gamma != b.gamma) return a.gamma < b.gamma;
  return a.theta < b.theta;
}

PillowPoint normalize(const Point& p) {
  Q g = mod2(p.g);
  Q t = mod2(p.t);
  if (g > 1) {
    g = 2 - g;
    t = mod2(-t);
  }
  if ((g == 0 || g == 1) && t > 1) t = 2 - t;
  return {g, t};
}

bool is_corner(const PillowPoint& p) {
  return (p.gamma == 0 || p.gamma == 1) && (p.theta == 0 || p.theta == 1);
}

Point GroupElem::apply(const Point& p) const { return Q(sign) * p + shift; }

GroupElem GroupElem::inverse() const {
  GroupElem r;
  r.sign = sign;
  r.shift = Q(-sign) * shift;
  return r;
}

bool GroupElem::is_identity() const { return sign == 1 && shift.g == 0 && shift.t == 0; }

GroupElem GroupElem::reflection_through(const Point& c) {
  if (!is_lattice(c)) throw PreconditionError("reflection centre must be a lattice point");
  GroupElem r;
  r.sign = -1;
  r.shift = Q(2) * c;
  return r;
}

GroupElem GroupElem::translation(const Point& v) {
  Point half = Q(1, 2) * v;
  if (!is_lattice(half)) throw PreconditionError("translation must be by even integers");
  GroupElem r;
  r.shift = v;
  return r;
}

GroupElem compose(const GroupElem& a, const GroupElem& b) {
  GroupElem r;
  r.sign = a.sign * b.sign;
  r.shift = Q(a.sign) * b.shift + a.shift;
  return r;
}

bool operator==(const GroupElem& a, const GroupElem& b) {
  return a.sign == b.sign && a.shift == b.shift;
}

std::size_t LiftPolyline::edge_count() const {
  if (vertices.size() < 2 && !closed) return 0;
  return closed ? vertices.size() : vertices.size() - 1;
}

Point LiftPolyline::edge_start(std::size_t i) const { return vertices[i]; }

Point LiftPolyline::edge_end(std::size_t i) const {
  if (i + 1 < vertices.size()) return vertices[i + 1];
  return holonomy.apply(vertices[0]);
}

Matrix2 multiply(const Matrix2& x, const Matrix2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
          x.c * y.b + x.d * y.d};
}

Point apply(const Matrix2& m, const Point& p) {
  return {Q(m.a) * p.g + Q(m.b) * p.t, Q(m.c) * p.g + Q(m.d) * p.t};
}

LiftPolyline apply_psl2z(const Matrix2& m, const LiftPolyline& l) {
  long det = m.a * m.d - m.b * m.c;
  if (det != 1 && det != -1) throw PreconditionError("matrix is not unimodular");
  LiftPolyline r;
  r.closed = l.closed;
  r.vertices.reserve(l.vertices.size());
  for (const Point& v : l.vertices) r.vertices.push_back(apply(m, v));
  // M h M^{-1} : p -> sign p + M shift
  r.holonomy.sign = l.holonomy.sign;
  r.holonomy.shift = apply(m, l.holonomy.shift);
  return r;
}

ShearSpec ShearSpec::tent(ShearDir dir, const Q& t) {
  ShearSpec s;
  s.direction = dir;
  s.profile = {{Q(0), Q(0)}, {Q(1, 2), Q(1)}, {Q(1), Q(0)}};
  s.t = t;
  return s;
}

void ShearSpec::validate() const {
  if (profile.size() < 2) throw PreconditionError("shear profile needs at least two breakpoints");
  if (profile.front().first != 0 || profile.back().first != 1)
    throw PreconditionError("shear profile must span [0, 1]");
  if (profile.front().second != 0 || profile.back().second != 0)
    throw PreconditionError("shear profile must vanish at 0 and 1");
  for (std::size_t i = 1; i < profile.size(); ++i)
    if (profile[i].first <= profile[i - 1].first)
      throw PreconditionError("shear profile breakpoints must increase");
}

Q ShearSpec::eval(const Q& x) const {
  Q r = mod2(x);
  Q sgn(1);
  if (r > 1) {
    r = 2 - r;
    sgn = -1;
  }
  for (std::size_t i = 1; i < profile.size(); ++i) {
    const auto& [x0, y0] = profile[i - 1];
    const auto& [x1, y1] = profile[i];
    if (r <= x1) {
      Q u = (r - x0) / (x1 - x0);
      return sgn * (y0 + u * (y1 - y0));
    }
  }
  return Q(0);
}

std::vector<Q> ShearSpec::breakpoints_in(const Q& lo, const Q& hi) const {
  std::set<Q> out;
  Q k0 = floor_q(lo / 2) - 1;
  Q k1 = floor_q(hi / 2) + 1;
  for (Q k = k0; k <= k1; k += 1) {
    for (const auto& bp : profile) {
      for (const Q& c : {Q(2 * k + bp.first), Q(2 * k - bp.first)}) {
        if (c > lo && c < hi) out.insert(c);
      }
    }
  }
  return {out.begin(), out.end()};
}

Point shear_point(const Point& p, const ShearSpec& s) {
  if (s.direction == ShearDir::Theta) return {p.g, p.t - 2 * s.t * s.eval(p.g)};
  return {p.g - 2 * s.t * s.eval(p.t), p.t};
}

namespace {

// Split the segment a-b at the profile breakpoints of the sheared coordinate.
std::vector<Point> split_for_shear(const Point& a, const Point& b, const ShearSpec& s) {
  const Q& ca = s.direction == ShearDir::Theta ? a.g : a.t;
  const Q& cb = s.direction == ShearDir::Theta ? b.g : b.t;
  std::vector<Point> out;
  if (ca == cb) return out;
  Q lo = ca < cb ? ca : cb;
  Q hi = ca < cb ? cb : ca;
  std::vector<Q> bps = s.breakpoints_in(lo, hi);
  if (ca > cb) std::reverse(bps.begin(), bps.end());
  for (const Q& c : bps) out.push_back(lerp(a, b, (c - ca) / (cb - ca)));
  return out;
}

}  // namespace

LiftPolyline shear(const LiftPolyline& l, const ShearSpec& s) {
  s.validate();
  if (s.t == 0) return l;
  LiftPolyline r;
  r.closed = l.closed;
  r.holonomy = l.holonomy;
  std::size_t n = l.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    r.vertices.push_back(shear_point(l.vertices[i], s));
    bool has_edge = i + 1 < n || l.closed;
    if (!has_edge) continue;
    for (const Point& mid : split_for_shear(l.edge_start(i), l.edge_end(i), s))
      r.vertices.push_back(shear_point(mid, s));
  }
  return r;
}

std::vector<SegmentHit> segment_intersections(const Point& a0, const Point& a1,
                                              const Point& b0, const Point& b1) {
  std::vector<SegmentHit> hits;
  Point da = a1 - a0;
  Point db = b1 - b0;
  Q den = cross(da, db);
  Point w = b0 - a0;
  if (den == 0) {
    if (cross(w, da) != 0) return hits;  // parallel, disjoint lines
    Q len2 = dot(da, da);
    Q s0 = dot(b0 - a0, da) / len2;
    Q s1 = dot(b1 - a0, da) / len2;
    Q lo = std::max(Q(0), std::min(s0, s1));
    Q hi = std::min(Q(1), std::max(s0, s1));
    if (lo > hi) return hits;
    Point p = lerp(a0, a1, lo);
    Q ub = dot(p - b0, db) / dot(db, db);
    hits.push_back({p, false, lo, ub, lo < hi});
    return hits;
  }
  Q ua = cross(w, db) / den;
  Q ub = cross(w, da) / den;
  if (ua < 0 || ua > 1 || ub < 0 || ub > 1) return hits;
  bool interior = ua > 0 && ua < 1 && ub > 0 && ub < 1;
  hits.push_back({lerp(a0, a1, ua), interior, ua, ub, false});
  return hits;
}

namespace {

Q ceil_q(const Q& q) { return -floor_q(-q); }

}  // namespace

std::vector<OrbitHit> orbit_intersections(const Point& a0, const Point& a1, const Point& b0,
                                          const Point& b1) {
  std::vector<OrbitHit> out;
  Q ag_lo = std::min(a0.g, a1.g), ag_hi = std::max(a0.g, a1.g);
  Q at_lo = std::min(a0.t, a1.t), at_hi = std::max(a0.t, a1.t);
  for (int sign : {1, -1}) {
    Point c0 = Q(sign) * b0, c1 = Q(sign) * b1;
    Q bg_lo = std::min(c0.g, c1.g), bg_hi = std::max(c0.g, c1.g);
    Q bt_lo = std::min(c0.t, c1.t), bt_hi = std::max(c0.t, c1.t);
    Q wg0 = ceil_q((ag_lo - bg_hi) / 2), wg1 = floor_q((ag_hi - bg_lo) / 2);
    Q wt0 = ceil_q((at_lo - bt_hi) / 2), wt1 = floor_q((at_hi - bt_lo) / 2);
    for (Q wg = wg0; wg <= wg1; wg += 1) {
      for (Q wt = wt0; wt <= wt1; wt += 1) {
        GroupElem g;
        g.sign = sign;
        g.shift = {2 * wg, 2 * wt};
        for (const SegmentHit& h : segment_intersections(a0, a1, g.apply(b0), g.apply(b1)))
          out.push_back({g, h});
      }
    }
  }
  return out;
}

GroupElem strip_map(long k) {
  GroupElem g;
  if (k % 2 == 0) {
    g.sign = 1;
    g.shift = {Q(-k), Q(0)};
  } else {
    g.sign = -1;
    g.shift = {Q(k + 1), Q(0)};
  }
  return g;
}

}  // namespace pillow
