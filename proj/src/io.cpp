#include "pillow/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pillow/errors.hpp"

namespace pillow {

namespace {

using nlohmann::json;

json integer_json(const mpz_class& z) {
  if (z.fits_slong_p()) return json(z.get_si());
  return json(z.get_str());  // beyond 64 bits: decimal string
}

mpz_class integer_from(const json& j, const std::string& where) {
  if (j.is_number_integer()) return mpz_class(j.get<long>());
  if (j.is_string()) {
    mpz_class z;
    if (z.set_str(j.get<std::string>(), 10) == 0) return z;
  }
  throw ParseError(where + ": expected an integer");
}

Q rational_from(const json& num, const json& den, const std::string& where) {
  mpz_class n = integer_from(num, where), d = integer_from(den, where);
  if (d <= 0) throw ParseError(where + ": denominator must be positive");
  Q q(n, d);
  q.canonicalize();
  if (q.get_den() != d) throw ParseError(where + ": rational not in lowest terms");
  return q;
}

json vertex_json(const Point& p) {
  return json::array({integer_json(p.g.get_num()), integer_json(p.g.get_den()),
                      integer_json(p.t.get_num()), integer_json(p.t.get_den())});
}

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing \"" + key + "\"");
  return *it;
}

}  // namespace

json to_json(const Multicurve& m) {
  json comps = json::array();
  for (const Component& c : m.components) {
    json jc;
    jc["kind"] = c.kind == Kind::Arc ? "arc" : "circle";
    jc["tags"] = tag_names(c.tags);
    json lift = json::array();
    for (const Point& p : c.lift.vertices) lift.push_back(vertex_json(p));
    jc["lift"] = lift;
    if (c.lift.closed) {
      const GroupElem& h = c.lift.holonomy;
      jc["holonomy"] = json::array(
          {h.sign, integer_json(h.shift.g.get_num()), integer_json(h.shift.t.get_num())});
    }
    comps.push_back(jc);
  }
  json j;
  j["version"] = kCurveFileVersion;
  j["components"] = comps;
  return j;
}

Multicurve from_json(const json& j) {
  if (!j.is_object()) throw ParseError("curve file: expected an object");
  const json& ver = field(j, "version", "curve file");
  if (!ver.is_number_integer() || ver.get<long>() != kCurveFileVersion)
    throw ParseError("curve file: unsupported version");
  const json& comps = field(j, "components", "curve file");
  if (!comps.is_array()) throw ParseError("curve file: \"components\" must be a list");
  Multicurve m;
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    const json& jc = comps[ci];
    std::string where = "component " + std::to_string(ci);
    if (!jc.is_object()) throw ParseError(where + ": expected an object");
    const json& kind = field(jc, "kind", where);
    if (!kind.is_string() || (kind != "arc" && kind != "circle"))
      throw ParseError(where + ": kind must be \"arc\" or \"circle\"");
    unsigned tags = 0;
    const json& jt = field(jc, "tags", where);
    if (!jt.is_array()) throw ParseError(where + ": \"tags\" must be a list");
    for (const json& t : jt) {
      if (!t.is_string()) throw ParseError(where + ": tags must be strings");
      try {
        tags |= tag_from_name(t.get<std::string>());
      } catch (const PreconditionError& e) {
        throw ParseError(where + ": " + e.what());
      }
    }
    std::vector<Point> verts;
    const json& lift = field(jc, "lift", where);
    if (!lift.is_array() || lift.empty()) throw ParseError(where + ": \"lift\" must be non-empty");
    for (const json& v : lift) {
      if (!v.is_array() || v.size() != 4)
        throw ParseError(where + ": lift vertices are [num_g, den_g, num_t, den_t]");
      verts.push_back({rational_from(v[0], v[1], where), rational_from(v[2], v[3], where)});
    }
    if (kind == "arc") {
      if (jc.contains("holonomy")) throw ParseError(where + ": arcs have no holonomy");
      m.components.push_back(make_arc(std::move(verts), tags));
      continue;
    }
    GroupElem h;
    if (jc.contains("holonomy")) {
      const json& jh = jc["holonomy"];
      if (!jh.is_array() || jh.size() != 3 || !jh[0].is_number_integer())
        throw ParseError(where + ": holonomy is [sign, shift_g, shift_t]");
      long sign = jh[0].get<long>();
      if (sign != 1 && sign != -1) throw ParseError(where + ": holonomy sign must be +-1");
      h.sign = static_cast<int>(sign);
      h.shift = {Q(integer_from(jh[1], where)), Q(integer_from(jh[2], where))};
      if (h.shift.g.get_num() % 2 != 0 || h.shift.t.get_num() % 2 != 0)
        throw ParseError(where + ": holonomy shift must be even");
    }
    m.components.push_back(make_closed(std::move(verts), h, tags));
  }
  return m;
}

std::string write_curve_file(const Multicurve& m) { return to_json(m).dump(2) + "\n"; }

Multicurve read_curve_file(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("curve file: ") + e.what(), e.byte);
  }
  return from_json(j);
}

Multicurve load_curve_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return read_curve_file(ss.str());
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write '" + path + "'");
  out << text;
}

namespace {

constexpr double kScale = 240;  // pixels per pi
constexpr double kMargin = 24;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

double px(const Q& g) { return kMargin + kScale * to_double(g); }
double py(const Q& t) { return kMargin + kScale * (2 - to_double(t)); }

const char* color_for(unsigned tags) {
  if (tags & TagHCircle) return "#7f7f7f";
  if (tags & TagFigureEight) return "#d62728";
  if (tags & TagEarringCopy) return "#ff7f0e";
  if (tags & TagResolvedArc) return "#2ca02c";
  if (tags & TagBinaryDihedral) return "#1f77b4";
  return "#9467bd";
}

// Cut an edge where it crosses gamma in Z or theta in 2Z, and fold each piece
// into the fundamental domain.
void folded_pieces(const Point& a, const Point& b, std::vector<std::pair<Point, Point>>& out) {
  std::vector<Q> cuts{Q(0), Q(1)};
  auto add_cuts = [&](const Q& x0, const Q& x1, long step) {
    if (x0 == x1) return;
    Q lo = x0 < x1 ? x0 : x1, hi = x0 < x1 ? x1 : x0;
    Q k = floor_q(lo / step) + 1;
    for (; Q(k * step) < hi; k += 1) cuts.push_back((k * step - x0) / (x1 - x0));
  };
  add_cuts(a.g, b.g, 1);
  add_cuts(a.t, b.t, 2);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i] == cuts[i + 1]) continue;
    Point p = lerp(a, b, cuts[i]), q = lerp(a, b, cuts[i + 1]);
    Point mid = lerp(a, b, (cuts[i] + cuts[i + 1]) / 2);
    GroupElem s = strip_map(floor_q(mid.g).get_num().get_si());
    Q shift = 2 * floor_q(s.apply(mid).t / 2);
    GroupElem down = compose(GroupElem::translation({Q(0), Q(-shift)}), s);
    out.emplace_back(down.apply(p), down.apply(q));
  }
}

}  // namespace

std::string render_svg(const Multicurve& m, const std::string& title) {
  std::ostringstream os;
  double w = 2 * kMargin + kScale, h = 2 * kMargin + 2 * kScale;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\""
     << num(h) << "\" viewBox=\"0 0 " << num(w) << " " << num(h) << "\">\n";
  if (!title.empty()) {
    std::string esc;
    for (char c : title) {
      if (c == '<') esc += "&lt;";
      else if (c == '>') esc += "&gt;";
      else if (c == '&') esc += "&amp;";
      else esc += c;
    }
    os << "<title>" << esc << "</title>\n";
  }
  os << "<rect x=\"" << num(kMargin) << "\" y=\"" << num(kMargin) << "\" width=\"" << num(kScale)
     << "\" height=\"" << num(2 * kScale) << "\" fill=\"none\" stroke=\"#000\" />\n";
  os << "<line x1=\"" << num(px(Q(0))) << "\" y1=\"" << num(py(Q(1))) << "\" x2=\""
     << num(px(Q(1))) << "\" y2=\"" << num(py(Q(1)))
     << "\" stroke=\"#bbb\" stroke-dasharray=\"4 4\" />\n";
  for (std::size_t ci = 0; ci < m.components.size(); ++ci) {
    const Component& c = m.components[ci];
    std::vector<std::pair<Point, Point>> pieces;
    for (std::size_t i = 0; i < c.lift.edge_count(); ++i)
      folded_pieces(c.lift.edge_start(i), c.lift.edge_end(i), pieces);
    os << "<g id=\"component-" << ci << "\" stroke=\"" << color_for(c.tags)
       << "\" stroke-width=\"" << ((c.tags & TagHCircle) ? "4" : "2") << "\" fill=\"none\">\n";
    for (const auto& [p, q] : pieces)
      os << "<line x1=\"" << num(px(p.g)) << "\" y1=\"" << num(py(p.t)) << "\" x2=\""
         << num(px(q.g)) << "\" y2=\"" << num(py(q.t)) << "\" />\n";
    os << "</g>\n";
  }
  for (int g = 0; g <= 1; ++g)
    for (int t = 0; t <= 2; ++t)
      os << "<circle cx=\"" << num(px(Q(g))) << "\" cy=\"" << num(py(Q(t)))
         << "\" r=\"4\" fill=\"#000\" />\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace pillow
