#pragma once

// Pillowcase images of tangle expressions: rational arcs, matrix actions,
// fibrewise tangle sums, circle resolution and the earring modification.

#include <array>
#include <string>
#include <vector>

#include "pillow/exactgeom.hpp"
#include "pillow/tangle.hpp"

namespace pillow {

enum class Kind { Arc, Circle };

enum Tag : unsigned {
  TagBinaryDihedral = 1u << 0,
  TagHCircle = 1u << 1,
  TagResolvedArc = 1u << 2,
  TagEarringCopy = 1u << 3,
  TagFigureEight = 1u << 4,
};

std::vector<std::string> tag_names(unsigned tags);
unsigned tag_from_name(const std::string& name);  // throws PreconditionError

struct Component {
  Kind kind = Kind::Arc;
  LiftPolyline lift;
  unsigned tags = 0;
  std::vector<PillowPoint> endpoint_corners;  // arcs only
};

struct Multicurve {
  std::vector<Component> components;
};

Component make_arc(std::vector<Point> vertices, unsigned tags);
Component make_closed(std::vector<Point> vertices, GroupElem holonomy, unsigned tags);
void validate(const Multicurve& m);  // immersion and corner checks

Multicurve apply_psl2z(const Matrix2& m, const Multicurve& c);
Multicurve shear(const Multicurve& c, const ShearSpec& s);

// One end of an A-part sheet: side 0 lies on gamma = 0, side 1 on gamma = pi.
struct SheetEndRef {
  int sheet = -1;
  int side = 0;
};

struct CircleFiber {
  int gamma0 = 0;  // 0 or 1 (units of pi)
  RationalAngle theta1, theta2;
  RationalAngle theta_min, theta_max;
  bool corner_circle = false;
  // A+ and A- ends at the psi = 0 point, then A+ and A- at psi = pi.
  std::array<SheetEndRef, 4> attached;
};

// Fibre-product graph of a sum. Sheets are graphs over gamma in [0, 1] in
// strip coordinates; links glue sheet ends across an edge.
struct SumGraph {
  struct Sheet {
    std::vector<Point> pts;  // gamma increasing from 0 to 1
    unsigned tags = 0;
    std::array<int, 2> link{-1, -1};  // -1: terminal (corner)
  };
  struct Link {
    SheetEndRef a, b;
    GroupElem h;  // involution taking b's strip frame into a's
    bool connector = false;
  };
  std::vector<Sheet> sheets;
  std::vector<Link> links;
};

struct SumResult {
  Multicurve a_part;
  std::vector<CircleFiber> circles;
  SumGraph graph;
};

struct EvalOptions {
  bool resolve = true;
  Q eps{1, 50};
  Q earring_eps{1, 100};
  bool auto_shear = true;
};

// Totals over every sum in the expression.
struct EvalReport {
  int circles = 0;        // circle fibres met (resolution sites when resolving)
  int corner_shears = 0;  // shear specs applied by the auto-shear pass
};

Multicurve eval(const ExprPtr& e, const EvalOptions& opts = {}, EvalReport* report = nullptr);

SumResult sum_curves(const Multicurve& l1, const Multicurve& l2);
Multicurve resolve_circles(const SumResult& sum, const Q& eps);
Multicurve earring(const Multicurve& l, const Q& earring_eps);
// Circle fibres drawn as degenerate closed components (unresolved view).
Multicurve with_circle_images(const SumResult& sum);

struct CornerShear {
  Multicurve curve;
  std::vector<ShearSpec> applied;  // empty when no shear was needed
};
CornerShear remove_corner_circles(const Multicurve& l1, const Multicurve& l2);

// Transverse double points of a multicurve, each reported once.
struct SelfIntersection {
  PillowPoint point;
  Point lift_point;  // on branch a, in component comp_a's lift frame
  int comp_a, edge_a;
  Q u_a;
  int comp_b, edge_b;
  Q u_b;
  GroupElem g;  // lift_point = g(point of branch b in comp_b's frame)
};
std::vector<SelfIntersection> self_intersections(const Multicurve& m);

// Slope of the straight line through the first and last lift vertex of an arc.
Slope arc_slope(const Component& c);
const Component* binary_dihedral_arc(const Multicurve& m);

}  // namespace pillow
