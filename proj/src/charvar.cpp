#include "pillow/charvar.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "pillow/errors.hpp"

namespace pillow {

namespace {

const std::vector<std::pair<unsigned, std::string>> kTagNames = {
    {TagBinaryDihedral, "binary_dihedral"}, {TagHCircle, "H_circle"},
    {TagResolvedArc, "resolved_arc"},       {TagEarringCopy, "earring_copy"},
    {TagFigureEight, "figure_eight"},
};

Q abs_q(const Q& q) { return q < 0 ? Q(-q) : q; }

void finalize(Component& c) {
  c.endpoint_corners.clear();
  if (c.kind == Kind::Arc && !c.lift.vertices.empty()) {
    c.endpoint_corners.push_back(normalize(c.lift.vertices.front()));
    c.endpoint_corners.push_back(normalize(c.lift.vertices.back()));
  }
}

// Drop vertices in the middle of straight runs.
void simplify(LiftPolyline& l) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::size_t n = l.vertices.size();
    std::size_t min_keep = 2;
    if (n <= min_keep) return;
    for (std::size_t i = 0; i < n; ++i) {
      if (!l.closed && (i == 0 || i + 1 == n)) continue;
      Point prev = i > 0 ? l.vertices[i - 1] : l.holonomy.inverse().apply(l.vertices[n - 1]);
      Point next = i + 1 < n ? l.vertices[i + 1] : l.holonomy.apply(l.vertices[0]);
      Point d1 = l.vertices[i] - prev, d2 = next - l.vertices[i];
      if (cross(d1, d2) == 0 && dot(d1, d2) > 0) {
        l.vertices.erase(l.vertices.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
  }
}

// Strip-frame value of a sheet (gamma increasing) at gamma = g.
Q sheet_value(const std::vector<Point>& pts, const Q& g) {
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (g <= pts[i].g) {
      Q u = (g - pts[i - 1].g) / (pts[i].g - pts[i - 1].g);
      return pts[i - 1].t + u * (pts[i].t - pts[i - 1].t);
    }
  }
  return pts.back().t;
}

// ---------------------------------------------------------------------------
// Strip decomposition of an input multicurve.

struct CurveSheet {
  std::vector<Point> pts;  // strip frame, gamma increasing from 0 to 1
  unsigned tags = 0;
  std::array<SheetEndRef, 2> partner{SheetEndRef{-1, 0}, SheetEndRef{-1, 0}};
};

std::vector<CurveSheet> decompose(const Multicurve& m, const char* which) {
  std::vector<CurveSheet> sheets;
  for (std::size_t ci = 0; ci < m.components.size(); ++ci) {
    const Component& comp = m.components[ci];
    if (comp.tags & TagHCircle)
      throw PreconditionError(std::string(which) +
                              " contains an unresolved circle fibre; resolve it before summing");
    const LiftPolyline& l = comp.lift;
    std::vector<Point> seq;
    for (std::size_t i = 0; i < l.edge_count(); ++i) {
      Point a = l.edge_start(i), b = l.edge_end(i);
      if (a.g == b.g)
        throw PreconditionError(std::string(which) + " component " + std::to_string(ci) +
                                " has a vertical segment at " + to_string(a) +
                                "; shear it before summing");
      seq.push_back(a);
      Q lo = std::min(a.g, b.g), hi = std::max(a.g, b.g);
      std::vector<Q> cuts;
      for (Q k = floor_q(lo) + 1; k < hi; k += 1) cuts.push_back(k);
      if (a.g > b.g) std::reverse(cuts.begin(), cuts.end());
      for (const Q& k : cuts) seq.push_back(lerp(a, b, (k - a.g) / (b.g - a.g)));
    }
    seq.push_back(l.edge_end(l.edge_count() - 1));

    std::vector<std::size_t> cut_idx;
    std::size_t last = l.closed ? seq.size() - 1 : seq.size();
    for (std::size_t i = 0; i < last; ++i)
      if (seq[i].g.get_den() == 1) cut_idx.push_back(i);

    std::vector<std::vector<Point>> pieces;
    if (!l.closed) {
      if (!is_lattice(seq.front()) || !is_lattice(seq.back()))
        throw PreconditionError(std::string(which) + " arc " + std::to_string(ci) +
                                " does not end at corners");
      for (std::size_t j = 0; j + 1 < cut_idx.size(); ++j)
        pieces.emplace_back(seq.begin() + static_cast<long>(cut_idx[j]),
                            seq.begin() + static_cast<long>(cut_idx[j + 1]) + 1);
    } else {
      if (cut_idx.empty())
        throw PreconditionError(std::string(which) + " closed component " + std::to_string(ci) +
                                " never meets the pillowcase edges and is not a graph over gamma");
      for (std::size_t j = 0; j + 1 < cut_idx.size(); ++j)
        pieces.emplace_back(seq.begin() + static_cast<long>(cut_idx[j]),
                            seq.begin() + static_cast<long>(cut_idx[j + 1]) + 1);
      std::vector<Point> wrap(seq.begin() + static_cast<long>(cut_idx.back()), seq.end());
      for (std::size_t i = 1; i <= cut_idx.front(); ++i) wrap.push_back(l.holonomy.apply(seq[i]));
      pieces.push_back(std::move(wrap));
    }

    std::size_t base = sheets.size();
    std::vector<std::array<int, 2>> travel_sides;  // side of start, side of end
    for (auto& piece : pieces) {
      bool increasing = piece[1].g > piece[0].g;
      for (std::size_t i = 1; i < piece.size(); ++i) {
        if ((piece[i].g > piece[i - 1].g) != increasing)
          throw PreconditionError(std::string(which) + " component " + std::to_string(ci) +
                                  " turns back in gamma near " + to_string(piece[i - 1]) +
                                  "; it is not a graph over gamma");
      }
      Q lo = std::min(piece.front().g, piece.back().g);
      long k = floor_q(lo).get_num().get_si();
      GroupElem sm = strip_map(k);
      CurveSheet s;
      s.tags = comp.tags;
      for (const Point& p : piece) s.pts.push_back(sm.apply(p));
      if (s.pts.front().g > s.pts.back().g) std::reverse(s.pts.begin(), s.pts.end());
      int start_side = sm.apply(piece.front()).g == 0 ? 0 : 1;
      travel_sides.push_back({start_side, 1 - start_side});
      sheets.push_back(std::move(s));
    }
    std::size_t np = pieces.size();
    for (std::size_t j = 0; j < np; ++j) {
      bool has_next = l.closed || j + 1 < np;
      if (!has_next) continue;
      std::size_t nj = (j + 1) % np;
      int end_side = travel_sides[j][1];
      int next_side = travel_sides[nj][0];
      if (end_side != next_side || (nj == j))
        throw ConsistencyError("strip decomposition produced mismatched sheet ends");
      sheets[base + j].partner[end_side] = {static_cast<int>(base + nj), next_side};
      sheets[base + nj].partner[next_side] = {static_cast<int>(base + j), end_side};
    }
  }
  return sheets;
}

struct Feature {
  bool corner = false;
  SheetEndRef e1, e2;  // e1 has value theta mod 2, e2 has -theta
  Q theta;
};

std::array<std::vector<Feature>, 2> edge_features(const std::vector<CurveSheet>& sheets,
                                                  const char* which) {
  std::array<std::vector<Feature>, 2> out;
  for (std::size_t si = 0; si < sheets.size(); ++si) {
    for (int side = 0; side < 2; ++side) {
      const CurveSheet& s = sheets[si];
      Q v = side == 0 ? s.pts.front().t : s.pts.back().t;
      SheetEndRef me{static_cast<int>(si), side};
      SheetEndRef pa = s.partner[side];
      if (pa.sheet < 0) {
        Feature f;
        f.corner = true;
        f.e1 = me;
        f.theta = mod2(v);
        out[side].push_back(f);
        continue;
      }
      if (pa.sheet < me.sheet) continue;  // already recorded from the partner
      Q r = mod2(v);
      if (r == 0 || r == 1)
        throw PreconditionError(std::string(which) + " passes through a corner at gamma = " +
                                std::to_string(side) + "; shear it first");
      const CurveSheet& o = sheets[pa.sheet];
      Q w = pa.side == 0 ? o.pts.front().t : o.pts.back().t;
      if (mod2(v + w) != 0) throw ConsistencyError("sheet ends do not match across an edge");
      Feature f;
      if (r < 1) {
        f.e1 = me;
        f.e2 = pa;
        f.theta = r;
      } else {
        f.e1 = pa;
        f.e2 = me;
        f.theta = 2 - r;
      }
      out[side].push_back(f);
    }
  }
  return out;
}

Q end_value(const SumGraph& g, const SheetEndRef& e) {
  const auto& pts = g.sheets[e.sheet].pts;
  return e.side == 0 ? pts.front().t : pts.back().t;
}

int add_link(SumGraph& g, SheetEndRef a, SheetEndRef b, const Q& delta, bool connector) {
  Q c = (end_value(g, a) + delta + end_value(g, b)) / 2;
  if (c.get_den() != 1) throw ConsistencyError("gluing centre is not a lattice point");
  SumGraph::Link link;
  link.a = a;
  link.b = b;
  link.h = GroupElem::reflection_through({Q(a.side), c});
  link.connector = connector;
  g.links.push_back(link);
  int id = static_cast<int>(g.links.size() - 1);
  g.sheets[a.sheet].link[a.side] = id;
  g.sheets[b.sheet].link[b.side] = id;
  return id;
}

// Points of a sheet restricted to gamma in [lo, hi], ordered from `from_side`.
std::vector<Point> sheet_run(const std::vector<Point>& pts, const Q& lo, const Q& hi,
                             int from_side) {
  std::vector<Point> out;
  out.push_back({lo, sheet_value(pts, lo)});
  for (const Point& p : pts)
    if (p.g > lo && p.g < hi) out.push_back(p);
  out.push_back({hi, sheet_value(pts, hi)});
  if (from_side == 1) std::reverse(out.begin(), out.end());
  return out;
}

Multicurve trace(const SumGraph& g, const Q& eps) {
  std::size_t n = g.sheets.size();
  std::vector<bool> visited(n, false);
  Multicurve out;

  auto is_connector = [&](int sheet, int side) {
    int id = g.sheets[sheet].link[side];
    return id >= 0 && g.links[id].connector;
  };

  auto walk = [&](int start, int from_side, std::vector<Point>& pts, bool& closed,
                  GroupElem& holonomy, bool& used_connector) {
    int cur = start, side = from_side;
    GroupElem frame;
    closed = false;
    used_connector = false;
    while (true) {
      visited[cur] = true;
      Q lo = is_connector(cur, 0) ? eps : Q(0);
      Q hi = is_connector(cur, 1) ? Q(1 - eps) : Q(1);
      for (const Point& p : sheet_run(g.sheets[cur].pts, lo, hi, side)) {
        Point q = frame.apply(p);
        if (pts.empty() || pts.back() != q) pts.push_back(q);
      }
      int exit_side = 1 - side;
      int id = g.sheets[cur].link[exit_side];
      if (id < 0) return;
      const SumGraph::Link& link = g.links[id];
      used_connector = used_connector || link.connector;
      SheetEndRef other = (link.a.sheet == cur && link.a.side == exit_side) ? link.b : link.a;
      frame = compose(frame, link.h);
      if (other.sheet == start && other.side == from_side) {
        closed = true;
        holonomy = frame;
        return;
      }
      if (visited[other.sheet]) throw ConsistencyError("sheet graph revisits a sheet");
      cur = other.sheet;
      side = other.side;
    }
  };

  // Arcs first, the one leaving the origin on a binary dihedral sheet leading.
  std::vector<SheetEndRef> terminals;
  for (std::size_t i = 0; i < n; ++i)
    for (int side = 0; side < 2; ++side)
      if (g.sheets[i].link[side] < 0) terminals.push_back({static_cast<int>(i), side});
  std::stable_partition(terminals.begin(), terminals.end(), [&](const SheetEndRef& e) {
    return e.side == 0 && g.sheets[e.sheet].pts.front().t == 0 &&
           (g.sheets[e.sheet].tags & TagBinaryDihedral);
  });
  for (const SheetEndRef& t : terminals) {
    if (visited[t.sheet]) continue;
    std::vector<Point> pts;
    bool closed, conn;
    GroupElem hol;
    walk(t.sheet, t.side, pts, closed, hol, conn);
    Component c;
    c.kind = Kind::Arc;
    c.lift.vertices = std::move(pts);
    bool bd = t.side == 0 && g.sheets[t.sheet].pts.front().t == 0 &&
              (g.sheets[t.sheet].tags & TagBinaryDihedral);
    c.tags = (bd ? TagBinaryDihedral : 0u) | (conn ? TagResolvedArc : 0u);
    simplify(c.lift);
    finalize(c);
    out.components.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (visited[i]) continue;
    std::vector<Point> pts;
    bool closed, conn;
    GroupElem hol;
    walk(static_cast<int>(i), 0, pts, closed, hol, conn);
    if (!closed) throw ConsistencyError("unvisited sheet chain is not closed");
    if (pts.size() >= 2 && pts.back() == hol.apply(pts.front())) pts.pop_back();
    Component c;
    c.kind = Kind::Circle;
    c.lift.vertices = std::move(pts);
    c.lift.closed = true;
    c.lift.holonomy = hol;
    c.tags = conn ? TagResolvedArc : 0u;
    simplify(c.lift);
    finalize(c);
    out.components.push_back(std::move(c));
  }
  return out;
}

bool same_curve_point(const LiftPolyline& l, std::size_t ea, const Q& ua, std::size_t eb,
                      const Q& ub, const GroupElem& g) {
  Q pa = Q(static_cast<long>(ea)) + ua;
  Q pb = Q(static_cast<long>(eb)) + ub;
  if (pa == pb && g.is_identity()) return true;
  if (!l.closed) return false;
  Q n(static_cast<long>(l.edge_count()));
  if (pa - pb == n && g == l.holonomy) return true;
  if (pb - pa == n && g == l.holonomy.inverse()) return true;
  return false;
}

bool at_arc_end(const Component& c, std::size_t e, const Q& u) {
  if (c.kind != Kind::Arc) return false;
  return (e == 0 && u == 0) || (e + 1 == c.lift.edge_count() && u == 1);
}

Point l1_normal(const Point& d) {
  Q n = abs_q(d.g) + abs_q(d.t);
  return {-d.t / n, d.g / n};
}

// Vertex normals of a lift, averaged across each vertex.
std::vector<Point> vertex_normals(const LiftPolyline& l) {
  std::size_t n = l.vertices.size();
  std::vector<Point> edge_n;
  for (std::size_t i = 0; i < l.edge_count(); ++i)
    edge_n.push_back(l1_normal(l.edge_end(i) - l.edge_start(i)));
  std::vector<Point> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    bool has_prev = i > 0 || l.closed;
    bool has_next = i < l.edge_count();
    Point prev, next;
    if (has_prev) prev = i > 0 ? edge_n[i - 1] : l.holonomy.inverse().apply_vec(edge_n.back());
    if (has_next) next = edge_n[i];
    if (has_prev && has_next) {
      Point avg = Q(1, 2) * (prev + next);
      if (avg.g == 0 && avg.t == 0) throw PreconditionError("curve doubles back on itself");
      out[i] = avg;
    } else {
      out[i] = has_prev ? prev : next;
    }
  }
  return out;
}

Component earring_arc(const Component& c, const Q& e) {
  const auto& v = c.lift.vertices;
  std::size_t m = v.size() - 1;
  if (!is_lattice(v.front()) || !is_lattice(v.back()))
    throw PreconditionError("earring needs arcs that end at corners");
  std::vector<Q> s(m + 1, Q(0));
  for (std::size_t i = 1; i <= m; ++i) {
    Point d = v[i] - v[i - 1];
    s[i] = s[i - 1] + abs_q(d.g) + abs_q(d.t);
  }
  Q total = s[m];
  for (Q& x : s) x /= total;
  std::size_t mid = 0;
  while (mid + 1 < m && s[mid + 1] < Q(1, 2)) ++mid;
  Q star = (s[mid] + s[mid + 1]) / 2;
  std::vector<Point> normals = vertex_normals(c.lift);
  std::vector<Point> a(m + 1), b(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    Q o = s[i] <= star ? Q(e * (1 - s[i] / star)) : Q(-e * (s[i] - star) / (1 - star));
    a[i] = v[i] + o * normals[i];
    b[i] = v[i] - o * normals[i];
  }
  GroupElem r0 = GroupElem::reflection_through(v.front());
  GroupElem r1 = GroupElem::reflection_through(v.back());
  Component out;
  out.kind = Kind::Circle;
  out.tags = TagFigureEight;
  out.lift.closed = true;
  out.lift.vertices = a;
  for (std::size_t i = m; i-- > 1;) out.lift.vertices.push_back(r1.apply(b[i]));
  out.lift.holonomy = compose(r1, r0);
  return out;
}

}  // namespace

std::vector<std::string> tag_names(unsigned tags) {
  std::vector<std::string> out;
  for (const auto& [bit, name] : kTagNames)
    if (tags & bit) out.push_back(name);
  return out;
}

unsigned tag_from_name(const std::string& name) {
  for (const auto& [bit, n] : kTagNames)
    if (n == name) return bit;
  throw PreconditionError("unknown component tag '" + name + "'");
}

Component make_arc(std::vector<Point> vertices, unsigned tags) {
  Component c;
  c.kind = Kind::Arc;
  c.lift.vertices = std::move(vertices);
  c.tags = tags;
  finalize(c);
  return c;
}

Component make_closed(std::vector<Point> vertices, GroupElem holonomy, unsigned tags) {
  Component c;
  c.kind = Kind::Circle;
  c.lift.vertices = std::move(vertices);
  c.lift.closed = true;
  c.lift.holonomy = holonomy;
  c.tags = tags;
  finalize(c);
  return c;
}

void validate(const Multicurve& m) {
  for (std::size_t ci = 0; ci < m.components.size(); ++ci) {
    const Component& c = m.components[ci];
    if (c.tags & TagHCircle) continue;
    const LiftPolyline& l = c.lift;
    std::string where = "component " + std::to_string(ci);
    if (l.vertices.empty() || l.edge_count() == 0) throw PreconditionError(where + " is empty");
    if (c.kind == Kind::Arc && l.closed) throw PreconditionError(where + " is an arc but closed");
    if (c.kind == Kind::Circle && !l.closed)
      throw PreconditionError(where + " is a circle but not closed");
    for (std::size_t i = 0; i < l.edge_count(); ++i)
      if (l.edge_start(i) == l.edge_end(i))
        throw PreconditionError(where + " has a zero-length edge at " + to_string(l.edge_start(i)));
    for (std::size_t i = 0; i < l.vertices.size(); ++i) {
      bool end = c.kind == Kind::Arc && (i == 0 || i + 1 == l.vertices.size());
      if (end && !is_lattice(l.vertices[i]))
        throw PreconditionError(where + " ends away from a corner at " + to_string(l.vertices[i]));
      if (!end && is_lattice(l.vertices[i]))
        throw PreconditionError(where + " passes through the corner " + to_string(l.vertices[i]));
    }
    if (l.closed && l.holonomy.sign == -1)
      throw PreconditionError(where + " has a reflection as holonomy, so it is not immersed");
  }
  self_intersections(m);
}

Multicurve apply_psl2z(const Matrix2& m, const Multicurve& c) {
  Multicurve out = c;
  for (Component& comp : out.components) {
    comp.lift = apply_psl2z(m, comp.lift);
    finalize(comp);
  }
  return out;
}

Multicurve shear(const Multicurve& c, const ShearSpec& s) {
  Multicurve out = c;
  for (Component& comp : out.components) {
    comp.lift = shear(comp.lift, s);
    finalize(comp);
  }
  return out;
}

SumResult sum_curves(const Multicurve& l1, const Multicurve& l2) {
  std::vector<CurveSheet> s1 = decompose(l1, "first summand");
  std::vector<CurveSheet> s2 = decompose(l2, "second summand");
  auto f1 = edge_features(s1, "first summand");
  auto f2 = edge_features(s2, "second summand");

  SumResult res;
  SumGraph& g = res.graph;
  std::size_t n2 = s2.size();
  auto idx = [&](int a, int b) { return static_cast<int>(a * n2 + b); };
  for (const CurveSheet& a : s1) {
    for (const CurveSheet& b : s2) {
      std::set<Q> gs;
      for (const Point& p : a.pts) gs.insert(p.g);
      for (const Point& p : b.pts) gs.insert(p.g);
      SumGraph::Sheet sh;
      for (const Q& x : gs) sh.pts.push_back({x, sheet_value(a.pts, x) + sheet_value(b.pts, x)});
      sh.tags = a.tags & b.tags & TagBinaryDihedral;
      g.sheets.push_back(std::move(sh));
    }
  }

  for (int side = 0; side < 2; ++side) {
    for (const Feature& x : f1[side]) {
      for (const Feature& y : f2[side]) {
        if (x.corner && y.corner) continue;  // terminal A-endpoint
        if (x.corner) {
          add_link(g, {idx(x.e1.sheet, y.e1.sheet), side}, {idx(x.e1.sheet, y.e2.sheet), side}, 0,
                   false);
          continue;
        }
        if (y.corner) {
          add_link(g, {idx(x.e1.sheet, y.e1.sheet), side}, {idx(x.e2.sheet, y.e1.sheet), side}, 0,
                   false);
          continue;
        }
        SheetEndRef pi_a{idx(x.e1.sheet, y.e1.sheet), side};
        SheetEndRef pi_b{idx(x.e2.sheet, y.e2.sheet), side};
        SheetEndRef z_a{idx(x.e1.sheet, y.e2.sheet), side};
        SheetEndRef z_b{idx(x.e2.sheet, y.e1.sheet), side};
        add_link(g, pi_a, pi_b, 0, false);
        add_link(g, z_a, z_b, 0, false);

        CircleFiber cf;
        cf.gamma0 = side;
        cf.theta1 = x.theta;
        cf.theta2 = y.theta;
        cf.theta_min = abs_q(x.theta - y.theta);
        cf.theta_max = std::min(Q(x.theta + y.theta), Q(2 - x.theta - y.theta));
        cf.corner_circle = cf.theta_min == 0 || cf.theta_max == 1;
        auto plus = [&](const SheetEndRef& e) {
          Q r = mod2(end_value(g, e));
          return r > 0 && r < 1;
        };
        cf.attached[0] = plus(z_a) ? z_a : z_b;
        cf.attached[1] = plus(z_a) ? z_b : z_a;
        cf.attached[2] = plus(pi_a) ? pi_a : pi_b;
        cf.attached[3] = plus(pi_a) ? pi_b : pi_a;
        res.circles.push_back(cf);
      }
    }
  }
  res.a_part = trace(g, Q(0));
  return res;
}

Multicurve resolve_circles(const SumResult& sum, const Q& eps) {
  if (eps <= 0 || eps >= Q(1, 2)) throw PreconditionError("resolution eps must lie in (0, 1/2)");
  SumGraph g = sum.graph;
  for (const CircleFiber& cf : sum.circles) {
    if (cf.corner_circle)
      throw PreconditionError("circle fibre at gamma = " + std::to_string(cf.gamma0) +
                              " meets a corner (theta1 = " + to_string(cf.theta1) +
                              ", theta2 = " + to_string(cf.theta2) +
                              "); shear a summand to remove it");
    Q spread = cf.theta_max - cf.theta_min;
    add_link(g, cf.attached[0], cf.attached[3], spread, true);
    add_link(g, cf.attached[2], cf.attached[1], -spread, true);
  }
  return trace(g, eps);
}

Multicurve with_circle_images(const SumResult& sum) {
  Multicurve out = sum.a_part;
  for (const CircleFiber& cf : sum.circles) {
    Component c = make_closed({{Q(cf.gamma0), cf.theta_min}, {Q(cf.gamma0), cf.theta_max}},
                              GroupElem{}, TagHCircle);
    out.components.push_back(std::move(c));
  }
  return out;
}

Multicurve earring(const Multicurve& l, const Q& e) {
  if (e <= 0 || e >= Q(1, 4)) throw PreconditionError("earring offset must lie in (0, 1/4)");
  Multicurve out;
  for (const Component& c : l.components) {
    if (c.tags & TagHCircle)
      throw PreconditionError("earring of an unresolved circle fibre is not defined");
    if (c.kind == Kind::Arc) {
      Component f = earring_arc(c, e);
      finalize(f);
      out.components.push_back(std::move(f));
      continue;
    }
    std::vector<Point> normals = vertex_normals(c.lift);
    for (int sgn : {1, -1}) {
      std::vector<Point> v;
      for (std::size_t i = 0; i < c.lift.vertices.size(); ++i)
        v.push_back(c.lift.vertices[i] + Q(sgn) * e * normals[i]);
      out.components.push_back(make_closed(std::move(v), c.lift.holonomy, TagEarringCopy));
    }
  }
  return out;
}

CornerShear remove_corner_circles(const Multicurve& l1, const Multicurve& l2) {
  auto has_corner = [](const SumResult& r) {
    return std::any_of(r.circles.begin(), r.circles.end(),
                       [](const CircleFiber& c) { return c.corner_circle; });
  };
  if (!has_corner(sum_curves(l1, l2))) return {l1, {}};
  for (Q t(1, 64); t >= Q(1, 1 << 20); t /= 2) {
    ShearSpec a = ShearSpec::tent(ShearDir::Theta, t);
    ShearSpec b = ShearSpec::tent(ShearDir::Gamma, t);
    Multicurve c = shear(shear(l1, a), b);
    try {
      if (!has_corner(sum_curves(c, l2))) return {c, {a, b}};
    } catch (const PreconditionError&) {
      continue;
    }
  }
  throw PreconditionError("no small shear removes the corner circle fibres");
}

std::vector<SelfIntersection> self_intersections(const Multicurve& m) {
  std::vector<SelfIntersection> out;
  const auto& comps = m.components;
  for (std::size_t ca = 0; ca < comps.size(); ++ca) {
    if (comps[ca].tags & TagHCircle) continue;
    for (std::size_t cb = ca; cb < comps.size(); ++cb) {
      if (comps[cb].tags & TagHCircle) continue;
      const LiftPolyline& la = comps[ca].lift;
      const LiftPolyline& lb = comps[cb].lift;
      for (std::size_t ea = 0; ea < la.edge_count(); ++ea) {
        for (std::size_t eb = ca == cb ? ea : 0; eb < lb.edge_count(); ++eb) {
          for (const OrbitHit& oh : orbit_intersections(la.edge_start(ea), la.edge_end(ea),
                                                        lb.edge_start(eb), lb.edge_end(eb))) {
            const SegmentHit& h = oh.hit;
            if (ca == cb && ea == eb) {
              if (oh.g.is_identity()) continue;
              if (h.transverse && h.ua > h.ub) continue;  // counted via the inverse element
            }
            if (ca == cb && same_curve_point(la, ea, h.ua, eb, h.ub, oh.g)) continue;
            if (h.overlap)
              throw TransversalityError("overlapping segments from " + to_string(h.point) +
                                        " (edge " + std::to_string(ea) + " of component " +
                                        std::to_string(ca) + ", edge " + std::to_string(eb) +
                                        " of component " + std::to_string(cb) + ")");
            if (is_lattice(h.point)) {
              if (h.transverse == false && at_arc_end(comps[ca], ea, h.ua) &&
                  at_arc_end(comps[cb], eb, h.ub))
                continue;
              throw TransversalityError("curve passes through the corner " +
                                        to_string(h.point) + " (components " +
                                        std::to_string(ca) + ", " + std::to_string(cb) + ")");
            }
            if (!h.transverse)
              throw TransversalityError(
                  "non-transverse self-intersection at " + to_string(h.point) + " between edge " +
                  std::to_string(ea) + " of component " + std::to_string(ca) + " and edge " +
                  std::to_string(eb) + " of component " + std::to_string(cb) +
                  "; apply a small shear");
            SelfIntersection si;
            si.point = normalize(h.point);
            si.lift_point = h.point;
            si.comp_a = static_cast<int>(ca);
            si.edge_a = static_cast<int>(ea);
            si.u_a = h.ua;
            si.comp_b = static_cast<int>(cb);
            si.edge_b = static_cast<int>(eb);
            si.u_b = h.ub;
            si.g = oh.g;
            out.push_back(si);
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const SelfIntersection& x, const SelfIntersection& y) {
    if (!(x.point == y.point)) return x.point < y.point;
    if (x.comp_a != y.comp_a) return x.comp_a < y.comp_a;
    return x.comp_b < y.comp_b;
  });
  return out;
}

Slope arc_slope(const Component& c) {
  if (c.kind != Kind::Arc) throw PreconditionError("slope is defined for arcs only");
  Point d = c.lift.vertices.back() - c.lift.vertices.front();
  if (d.g == 0) return {true, Q(0)};
  return {false, Q(d.t / d.g)};
}

const Component* binary_dihedral_arc(const Multicurve& m) {
  for (const Component& c : m.components)
    if (c.kind == Kind::Arc && (c.tags & TagBinaryDihedral)) return &c;
  return nullptr;
}

Multicurve eval(const ExprPtr& e, const EvalOptions& opts, EvalReport* report) {
  if (!e) throw PreconditionError("null tangle expression");
  EvalOptions inner = opts;
  inner.resolve = true;
  return std::visit(
      [&](const auto& n) -> Multicurve {
        using T = std::decay_t<decltype(n)>;
        Multicurve out;
        if constexpr (std::is_same_v<T, Rational>) {
          Point end = n.q == 0 ? Point{Q(0), Q(1)} : Point{Q(n.q), Q(n.p)};
          out.components.push_back(make_arc({{Q(0), Q(0)}, end}, TagBinaryDihedral));
        } else if constexpr (std::is_same_v<T, Sum>) {
          Multicurve a = eval(n.left, inner, report);
          Multicurve b = eval(n.right, inner, report);
          SumResult r = sum_curves(a, b);
          bool corner = std::any_of(r.circles.begin(), r.circles.end(),
                                    [](const CircleFiber& c) { return c.corner_circle; });
          if (corner && opts.auto_shear) {
            CornerShear cs = remove_corner_circles(a, b);
            r = sum_curves(cs.curve, b);
            if (report) report->corner_shears += static_cast<int>(cs.applied.size());
          }
          if (report) report->circles += static_cast<int>(r.circles.size());
          out = opts.resolve ? resolve_circles(r, opts.eps) : with_circle_images(r);
        } else if constexpr (std::is_same_v<T, Rotate>) {
          out = apply_psl2z(Matrix2{0, -1, 1, 0}, eval(n.inner, opts, report));
        } else if constexpr (std::is_same_v<T, Twist>) {
          out = apply_psl2z(Matrix2{1, 0, n.n, 1}, eval(n.inner, opts, report));
        } else if constexpr (std::is_same_v<T, Mirror>) {
          out = apply_psl2z(Matrix2{-1, 0, 0, 1}, eval(n.inner, opts, report));
        } else if constexpr (std::is_same_v<T, Hat>) {
          out = apply_psl2z(Matrix2{1, 0, 0, -1}, eval(n.inner, opts, report));
        } else if constexpr (std::is_same_v<T, Earring>) {
          out = earring(eval(n.inner, inner, report), opts.earring_eps);
        } else {
          out = shear(eval(n.inner, opts, report), n.spec);
        }
        return out;
      },
      e->node);
}

}  // namespace pillow
