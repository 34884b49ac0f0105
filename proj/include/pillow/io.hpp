#pragma once

// CurveFile JSON and SVG rendering of multicurves.

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "pillow/charvar.hpp"

namespace pillow {

inline constexpr int kCurveFileVersion = 1;

// {"version": 1, "components": [{"kind", "tags", "lift", "holonomy"?}]}; each
// lift vertex is [num_gamma, den_gamma, num_theta, den_theta]. Closed
// components carry "holonomy": [sign, shift_gamma, shift_theta].
nlohmann::json to_json(const Multicurve& m);
Multicurve from_json(const nlohmann::json& j);  // throws ParseError

std::string write_curve_file(const Multicurve& m);
Multicurve read_curve_file(const std::string& text);
Multicurve load_curve_file(const std::string& path);
void save_text(const std::string& path, const std::string& text);

// Fundamental domain [0, pi] x [0, 2pi] with corners marked; components are
// folded into it and colored by tag.
std::string render_svg(const Multicurve& m, const std::string& title = "");

}  // namespace pillow
