#pragma once

// Floating-point quaternion checks of the trace function on the three-punctured
// character variety and of the pillowcase coordinate formulas.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace pillow::oracle {

struct Quat {
  double w = 0, x = 0, y = 0, z = 0;

  Quat conj() const { return {w, -x, -y, -z}; }
  Quat im() const { return {0, x, y, z}; }
  double norm() const;
  Quat normalized() const;
};

Quat operator*(const Quat& a, const Quat& b);
Quat operator+(const Quat& a, const Quat& b);
Quat operator*(double s, const Quat& a);
double dot(const Quat& a, const Quat& b);
Quat exp_pure(const Quat& v);  // exponential of a purely imaginary quaternion
Quat ek_i(double angle);       // e^{angle k} i
Quat random_unit(std::mt19937_64& rng);

// Angle between unit quaternions as vectors in R^4, in [0, pi].
double angle(const Quat& a, const Quat& b);
// Angle from x to y measured in the direction in which z lies, in [0, 2pi).
double rel_angle(const Quat& x, const Quat& y, const Quat& z);
// (gamma, theta) in radians of a traceless quadruple with a c^-1 = b d^-1.
std::pair<double, double> pillowcase_coords(const Quat& a, const Quat& b, const Quat& c,
                                            const Quat& d);

struct C3Point {
  double gamma = 0, theta = 0, alpha = 0, beta = 0;
  double t = 0;
};

Quat gamma_x(double alpha, double beta);  // sin a cos b i + sin a sin b j + cos a k
double sinc(double n);
double phi_t_quaternion(const C3Point& p);
double phi_t_closed(const C3Point& p);
// Both routes; throws OracleToleranceError if they differ by more than tol.
double phi_t(const C3Point& p, double tol = 1e-10);

// Random-sample agreement of the two routes. With t unset, t is drawn from
// [0, t_max]; at t = 0 the quaternion route is also compared with
// sin(gamma) cos(alpha).
struct C3Report {
  int samples = 0;
  double max_route_diff = 0;
  double max_t0_residual = 0;
};
C3Report c3_check(std::optional<double> t, int samples, std::uint64_t seed = 1,
                  double t_max = 0.3);

double s_sign(double theta, double beta);
double spherical_theta3(double z2, double z3, double psi);

// Fibre endpoints over a pair of edge crossings with angles theta1, theta2 in
// (0, pi) on the edge gamma0: psi = 0 first, psi = pi second.
struct EndpointRep {
  C3Point point;
  double psi = 0;
  double s = 0;
};
std::pair<EndpointRep, EndpointRep> endpoint_representations(double theta1, double theta2,
                                                             double gamma0);

struct VarietySample {
  double gamma, theta, alpha, beta, abs_phi;
};
std::vector<VarietySample> sample_variety(double t, int grid_size, double tol = 1e-8);
void write_csv(std::ostream& os, const std::vector<VarietySample>& pts);

// Zero set of phi_t on the (gamma, alpha) slice through (gamma0, theta, pi/2,
// beta): connected components and the boundary faces each one reaches.
struct SliceComponent {
  std::set<std::string> faces;  // among "H+", "H-", "A+", "A-"
};
struct SliceResult {
  std::vector<SliceComponent> components;
};
SliceResult slice_components(double t, double theta, double beta, double gamma0,
                             double half_width = 0.3, int n = 201);

struct HessianResult {
  std::array<std::array<double, 4>, 4> h;
  std::array<double, 4> eigenvalues;
  bool nonsingular = false;
  int signature = 0;
};
HessianResult corner_hessian(double t, double step = 1e-5, double singular_tol = 1e-8);

}  // namespace pillow::oracle
