#pragma once

// Exact rational geometry of the pillowcase. All angles are rationals in
// units of pi.

#include <gmpxx.h>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace pillow {

using Q = mpq_class;

// num/den * pi, always canonicalized.
using RationalAngle = Q;

Q make_q(long num, long den = 1);
Q parse_q(const std::string& text);  // "p/q" or "p"; throws PreconditionError
std::string to_string(const Q& q);
Q floor_q(const Q& q);
Q mod2(const Q& q);  // representative in [0, 2)
double to_double(const Q& q);

struct Point {
  Q g;  // gamma
  Q t;  // theta
};

bool operator==(const Point& a, const Point& b);
bool operator!=(const Point& a, const Point& b);
bool operator<(const Point& a, const Point& b);
Point operator+(const Point& a, const Point& b);
Point operator-(const Point& a, const Point& b);
Point operator*(const Q& s, const Point& a);
Q cross(const Point& a, const Point& b);
Q dot(const Point& a, const Point& b);
Point lerp(const Point& a, const Point& b, const Q& u);
double length(const Point& a, const Point& b);
std::string to_string(const Point& p);

bool is_lattice(const Point& p);

// Canonical pillowcase representative: 0 <= gamma <= 1, 0 <= theta < 2, and
// theta folded into [0, 1] on the edges gamma in {0, 1}.
struct PillowPoint {
  Q gamma;
  Q theta;
};

bool operator==(const PillowPoint& a, const PillowPoint& b);
bool operator<(const PillowPoint& a, const PillowPoint& b);

PillowPoint normalize(const Point& p);
bool is_corner(const PillowPoint& p);

// Element p -> sign * p + shift of the deck group; shift has even integer
// coordinates.
struct GroupElem {
  int sign = 1;
  Point shift{Q(0), Q(0)};

  Point apply(const Point& p) const;
  Point apply_vec(const Point& v) const { return Q(sign) * v; }
  GroupElem inverse() const;
  bool is_identity() const;
  static GroupElem reflection_through(const Point& lattice_point);
  static GroupElem translation(const Point& even_shift);
};

GroupElem compose(const GroupElem& a, const GroupElem& b);  // a after b
bool operator==(const GroupElem& a, const GroupElem& b);

struct LiftPolyline {
  std::vector<Point> vertices;
  bool closed = false;
  // For closed curves the implicit closing edge runs from the last vertex to
  // holonomy(vertices[0]). Curves that close up in the plane use the identity.
  GroupElem holonomy;

  std::size_t edge_count() const;
  Point edge_start(std::size_t i) const;
  Point edge_end(std::size_t i) const;
};

struct Matrix2 {
  long a, b, c, d;
};

Matrix2 multiply(const Matrix2& m1, const Matrix2& m2);
Point apply(const Matrix2& m, const Point& p);
LiftPolyline apply_psl2z(const Matrix2& m, const LiftPolyline& l);

enum class ShearDir { Theta, Gamma };

struct ShearSpec {
  ShearDir direction = ShearDir::Theta;
  // Breakpoints (x, f(x)) on [0, 1], strictly increasing x, with f(0)=f(1)=0.
  std::vector<std::pair<Q, Q>> profile;
  Q t;

  static ShearSpec tent(ShearDir dir, const Q& t);
  void validate() const;
  Q eval(const Q& x) const;  // odd, 2-periodic extension
  std::vector<Q> breakpoints_in(const Q& lo, const Q& hi) const;
};

Point shear_point(const Point& p, const ShearSpec& s);
LiftPolyline shear(const LiftPolyline& l, const ShearSpec& s);

struct SegmentHit {
  Point point;
  bool transverse;
  Q ua;  // parameter along a
  Q ub;  // parameter along b
  bool overlap = false;  // collinear overlap of positive length starting at point
};

std::vector<SegmentHit> segment_intersections(const Point& a0, const Point& a1,
                                              const Point& b0, const Point& b1);

// All hits of segment a with g(segment b), g ranging over the deck group.
struct OrbitHit {
  GroupElem g;
  SegmentHit hit;  // hit.point lies on a; ub is the parameter along b
};
std::vector<OrbitHit> orbit_intersections(const Point& a0, const Point& a1, const Point& b0,
                                          const Point& b1);

// Strip map: a point with gamma in [k, k+1] goes to strip coordinates in
// [0, 1] x R. Returns the group element realising it.
GroupElem strip_map(long k);

}  // namespace pillow
