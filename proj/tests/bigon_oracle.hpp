#pragma once

// Brute-force bigon oracle for synthetic configurations: two closed polygons
// in the open unit square (no deck images or corners come into play). A
// boundary cycle bounds an embedded bigon iff its winding number is 0 or 1 on
// every cell of the arrangement, 1 on at least one, and it turns left at both
// corners. Cells come from a vertical decomposition of all segments.

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "pillow/exactgeom.hpp"

namespace bigon_oracle {

using pillow::Point;
using pillow::Q;

struct Crossing {
  Point p;
  int i;  // edge of the first polygon
  Q u;
  int j;  // edge of the second polygon
  Q v;
};

inline Q cr(const Point& a, const Point& b) { return a.g * b.t - a.t * b.g; }

// Proper crossing of two segments; nullopt when disjoint. Degenerate contact
// sets `degenerate`.
inline std::optional<std::pair<Q, Q>> cross_params(const Point& a0, const Point& a1,
                                                   const Point& b0, const Point& b1,
                                                   bool& degenerate) {
  Point da{a1.g - a0.g, a1.t - a0.t}, db{b1.g - b0.g, b1.t - b0.t}, w{b0.g - a0.g, b0.t - a0.t};
  Q den = cr(da, db);
  if (den == 0) {
    if (cr(w, da) == 0) {
      // Collinear: any shared point is degenerate.
      auto proj = [&](const Point& p) -> Q { return (p.g - a0.g) * da.g + (p.t - a0.t) * da.t; };
      Q l = da.g * da.g + da.t * da.t, s0 = proj(b0), s1 = proj(b1);
      if (std::max(s0, s1) >= 0 && std::min(s0, s1) <= l) degenerate = true;
    }
    return std::nullopt;
  }
  Q s = cr(w, db) / den, t = cr(w, da) / den;
  if (s < 0 || s > 1 || t < 0 || t > 1) return std::nullopt;
  if (s == 0 || s == 1 || t == 0 || t == 1) {
    degenerate = true;
    return std::nullopt;
  }
  return std::pair{s, t};
}

inline Point at(const Point& a, const Point& b, const Q& s) {
  return {a.g + s * (b.g - a.g), a.t + s * (b.t - a.t)};
}

struct Config {
  std::vector<Point> p1, p2;
};

inline Config random_config(std::mt19937_64& rng, int max_segments = 6) {
  std::uniform_int_distribution<int> n(3, max_segments), k(13, 84);
  Config c;
  int n1 = n(rng), n2 = n(rng);
  for (int i = 0; i < n1; ++i) c.p1.push_back({pillow::make_q(k(rng), 97), pillow::make_q(k(rng), 97)});
  for (int i = 0; i < n2; ++i) c.p2.push_back({pillow::make_q(k(rng), 97), pillow::make_q(k(rng), 97)});
  return c;
}

class Oracle {
 public:
  // Returns false if the configuration is not generic.
  bool build(const Config& c) {
    c_ = c;
    std::vector<std::pair<Point, Point>> segs;
    for (const auto* poly : {&c.p1, &c.p2})
      for (std::size_t i = 0; i < poly->size(); ++i)
        segs.push_back({(*poly)[i], (*poly)[(i + 1) % poly->size()]});
    std::vector<Q> xs;
    for (const auto& s : segs) {
      if (s.first.g == s.second.g && s.first.t == s.second.t) return false;
      xs.push_back(s.first.g);
    }
    bool degenerate = false;
    for (std::size_t a = 0; a < segs.size(); ++a)
      for (std::size_t b = a + 1; b < segs.size(); ++b) {
        bool adjacent = false;
        // Adjacent edges of one polygon share a vertex; only collinearity
        // counts against them.
        std::size_t n1 = c.p1.size();
        bool same1 = a < n1 && b < n1, same2 = a >= n1 && b >= n1;
        std::size_t n = same1 ? n1 : c.p2.size();
        std::size_t ia = same1 ? a : a - n1, ib = same1 ? b : b - n1;
        if ((same1 || same2) && (ib == ia + 1 || (ia == 0 && ib == n - 1))) adjacent = true;
        if (adjacent) {
          const auto& sa = segs[a];
          const auto& sb = segs[b];
          Point da{sa.second.g - sa.first.g, sa.second.t - sa.first.t};
          Point db{sb.second.g - sb.first.g, sb.second.t - sb.first.t};
          if (cr(da, db) == 0) return false;
          continue;
        }
        auto h = cross_params(segs[a].first, segs[a].second, segs[b].first, segs[b].second,
                              degenerate);
        if (degenerate) return false;
        if (!h) continue;
        Point p = at(segs[a].first, segs[a].second, h->first);
        xs.push_back(p.g);
        if (a < n1 && b >= n1)
          crossings_.push_back({p, static_cast<int>(a), h->first, static_cast<int>(b - n1),
                                h->second});
      }
    // Crossing points must be distinct from each other.
    for (std::size_t a = 0; a < crossings_.size(); ++a)
      for (std::size_t b = a + 1; b < crossings_.size(); ++b)
        if (crossings_[a].p.g == crossings_[b].p.g && crossings_[a].p.t == crossings_[b].p.t)
          return false;
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
      Q xm = (xs[k] + xs[k + 1]) / 2;
      std::vector<Q> ys;
      for (const auto& s : segs) {
        Q lo = std::min(s.first.g, s.second.g), hi = std::max(s.first.g, s.second.g);
        if (!(lo < xm && xm < hi)) continue;
        ys.push_back(s.first.t + (xm - s.first.g) / (s.second.g - s.first.g) *
                                     (s.second.t - s.first.t));
      }
      std::sort(ys.begin(), ys.end());
      for (std::size_t m = 0; m + 1 < ys.size(); ++m)
        if (ys[m] != ys[m + 1]) samples_.push_back({xm, (ys[m] + ys[m + 1]) / 2});
    }
    return true;
  }

  const std::vector<Crossing>& crossings() const { return crossings_; }

  // Parity of embedded bigons from x to y: boundary runs x -> y on the first
  // polygon and y -> x on the second, counterclockwise.
  int bigon_parity(const Crossing& x, const Crossing& y) const {
    int parity = 0;
    for (int d1 : {1, -1})
      for (int d2 : {1, -1}) {
        std::vector<Point> cyc = walk(c_.p1, x.i, x.u, y.i, y.u, d1);
        std::size_t ycorner = cyc.size() - 1;
        std::vector<Point> back = walk(c_.p2, y.j, y.v, x.j, x.v, d2);
        for (std::size_t k = 1; k + 1 < back.size(); ++k) cyc.push_back(back[k]);
        if (!left_turn(cyc, 0) || !left_turn(cyc, ycorner)) continue;
        if (embedded_disk(cyc)) parity ^= 1;
      }
    return parity;
  }

 private:
  // Points from (i, u) to (k, w) walking direction dir around a closed polygon.
  static std::vector<Point> walk(const std::vector<Point>& poly, int i, const Q& u, int k,
                                 const Q& w, int dir) {
    int n = static_cast<int>(poly.size());
    auto edge_pt = [&](int e, const Q& s) { return at(poly[e], poly[(e + 1) % n], s); };
    std::vector<Point> out{edge_pt(i, u)};
    if (dir > 0) {
      bool direct = i == k && w > u;
      if (!direct) {
        int e = i;
        do {
          e = (e + 1) % n;
          out.push_back(poly[e]);
        } while (e != k);
      }
    } else {
      bool direct = i == k && w < u;
      if (!direct) {
        int e = i;
        out.push_back(poly[e]);
        while (e != (k + 1) % n) {
          e = (e + n - 1) % n;
          out.push_back(poly[e]);
        }
      }
    }
    out.push_back(edge_pt(k, w));
    return out;
  }

  static bool left_turn(const std::vector<Point>& v, std::size_t i) {
    std::size_t n = v.size();
    const Point& a = v[(i + n - 1) % n];
    const Point& b = v[i];
    const Point& c = v[(i + 1) % n];
    return cr({b.g - a.g, b.t - a.t}, {c.g - b.g, c.t - b.t}) > 0;
  }

  static int winding(const std::vector<Point>& v, const Point& p) {
    int w = 0;
    std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& a = v[i];
      const Point& b = v[(i + 1) % n];
      bool up = a.t <= p.t && b.t > p.t, down = b.t <= p.t && a.t > p.t;
      if (!up && !down) continue;
      Q side = cr({b.g - a.g, b.t - a.t}, {p.g - a.g, p.t - a.t});
      if (up && side > 0) ++w;
      if (down && side < 0) --w;
    }
    return w;
  }

  bool embedded_disk(const std::vector<Point>& cyc) const {
    Q glo = cyc[0].g, ghi = glo, tlo = cyc[0].t, thi = tlo;
    for (const Point& p : cyc) {
      glo = std::min(glo, p.g);
      ghi = std::max(ghi, p.g);
      tlo = std::min(tlo, p.t);
      thi = std::max(thi, p.t);
    }
    bool inside = false;
    for (const Point& s : samples_) {
      if (s.g < glo || s.g > ghi || s.t < tlo || s.t > thi) continue;
      int w = winding(cyc, s);
      if (w < 0 || w > 1) return false;
      inside = inside || w == 1;
    }
    return inside;
  }

  Config c_;
  std::vector<Crossing> crossings_;
  std::vector<Point> samples_;
};

}  // namespace bigon_oracle
