#pragma once

// Floer chain data for two immersed multicurves in the pillowcase:
// generators, embedded bigons and triangles in the planar unfolding, and the
// F2 homology rank.

#include <optional>
#include <string>
#include <vector>

#include "pillow/charvar.hpp"

namespace pillow {

struct CurveLoc {
  int comp = 0;
  int seg = 0;
  Q param;  // in [0, 1) along the segment
};

struct Generator {
  PillowPoint point;
  Point lift;  // in L1 component loc1.comp's lift frame
  CurveLoc loc1, loc2;
  GroupElem g;  // lift = g(point of L2 component loc2.comp at loc2)
};

// A polygon in the planar unfolding, listed counterclockwise from x.
struct Polygon {
  std::vector<Point> boundary;
  std::vector<std::size_t> corners;  // indices of x, y (and b) in boundary
};

struct Bigon {
  int from = 0, to = 0;
  Polygon disk;
};

struct Triangle {
  int from = 0, to = 0;
  Polygon disk;
};

struct Count {
  int parity = 0;
  std::vector<Polygon> witnesses;
};

struct ChainData {
  std::vector<Generator> generators;
  std::vector<std::vector<int>> differential;  // differential[x][y] over F2
  std::vector<Bigon> bigons;
  std::vector<Triangle> triangles;
};

// Arc-length budget per side, in units of pi; PILLOWCURVE_BUDGET overrides.
double path_budget();

std::vector<Generator> intersect(const Multicurve& l1, const Multicurve& l2);

Count count_bigons(const Multicurve& l1, const Multicurve& l2, const Generator& x,
                   const Generator& y, double budget);

// Self-intersections of L1 come first, then those of L2.
struct CochainPoint {
  int curve = 0;  // 1 or 2
  SelfIntersection b;
};
std::vector<CochainPoint> cochain_candidates(const Multicurve& l1, const Multicurve& l2);

Count count_triangles_with_cochain(const Multicurve& l1, const Multicurve& l2,
                                   const CochainPoint& b, const Generator& x, const Generator& y,
                                   double budget);

ChainData floer_chain(const Multicurve& l1, const Multicurve& l2,
                      std::optional<int> cochain_index = std::nullopt, double budget = -1);

// F2 rank of a square 0/1 matrix.
int f2_rank(std::vector<std::vector<int>> m);
int homology_rank(const ChainData& c);

}  // namespace pillow
