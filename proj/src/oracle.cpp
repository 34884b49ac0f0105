#include "pillow/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <ostream>
#include <queue>

#include "pillow/errors.hpp"

namespace pillow::oracle {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_2pi(double a) {
  double r = std::fmod(a, 2 * kPi);
  if (r < 0) r += 2 * kPi;
  if (r >= 2 * kPi) r = 0;
  return r;
}

void require_traceless(const Quat& q, const char* name) {
  if (std::abs(q.w) > 1e-9 || std::abs(q.norm() - 1) > 1e-9)
    throw PreconditionError(std::string(name) + " is not a traceless unit quaternion");
}

}  // namespace

double Quat::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Quat Quat::normalized() const {
  double n = norm();
  if (n == 0) throw PreconditionError("cannot normalize the zero quaternion");
  return {w / n, x / n, y / n, z / n};
}

Quat operator*(const Quat& a, const Quat& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

Quat operator+(const Quat& a, const Quat& b) { return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z}; }

Quat operator*(double s, const Quat& a) { return {s * a.w, s * a.x, s * a.y, s * a.z}; }

double dot(const Quat& a, const Quat& b) { return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z; }

Quat exp_pure(const Quat& v) {
  double n = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
  return {std::cos(n), sinc(n) * v.x, sinc(n) * v.y, sinc(n) * v.z};
}

Quat ek_i(double a) { return {0, std::cos(a), std::sin(a), 0}; }

Quat random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Quat q{nd(rng), nd(rng), nd(rng), nd(rng)};
  return q.normalized();
}

double angle(const Quat& a, const Quat& b) {
  double c = dot(a, b) / (a.norm() * b.norm());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double rel_angle(const Quat& x, const Quat& y, const Quat& z) {
  require_traceless(x, "x");
  require_traceless(y, "y");
  require_traceless(z, "z");
  double xz = dot(x, z);
  Quat e2 = z + (-xz) * x;
  if (e2.norm() < 1e-9) {
    // z = +-x: every great circle through x qualifies
    return angle(x, y);
  }
  e2 = e2.normalized();
  double cx = dot(y, x), cz = dot(y, e2);
  Quat off = y + (-cx) * x + (-cz) * e2;
  if (off.norm() > 1e-9) throw PreconditionError("rel_angle: x, y, z are not coequatorial");
  return wrap_2pi(std::atan2(cz, cx));
}

std::pair<double, double> pillowcase_coords(const Quat& a, const Quat& b, const Quat& c,
                                            const Quat& d) {
  require_traceless(a, "a");
  require_traceless(b, "b");
  require_traceless(c, "c");
  require_traceless(d, "d");
  Quat lhs = a * c.conj(), rhs = b * d.conj();
  Quat diff = lhs + (-1.0) * rhs;
  if (diff.norm() > 1e-9)
    throw PreconditionError("pillowcase relation a c^-1 = b d^-1 does not hold");
  return {angle(a, b), rel_angle(a, c, b)};
}

Quat gamma_x(double alpha, double beta) {
  return {0, std::sin(alpha) * std::cos(beta), std::sin(alpha) * std::sin(beta), std::cos(alpha)};
}

double sinc(double n) {
  if (std::abs(n) < 1e-4) return 1 - n * n / 6 + n * n * n * n / 120;
  return std::sin(n) / n;
}

double phi_t_quaternion(const C3Point& p) {
  Quat a = ek_i(0), b = ek_i(p.gamma), c = ek_i(p.theta);
  Quat x = gamma_x(p.alpha, p.beta);
  Quat hol = a * c.conj() * x;
  Quat pq = exp_pure((-p.t) * hol.im());
  Quat y = x * pq.conj() * a.conj() * pq * b;
  return y.w;
}

double phi_t_closed(const C3Point& p) {
  double sa = std::sin(p.alpha), ca = std::cos(p.alpha);
  double sth = std::sin(p.theta), cth = std::cos(p.theta);
  double sb = std::sin(p.beta), cb = std::cos(p.beta);
  double n = p.t * std::sqrt(std::max(0.0, 1 - ca * ca * sth * sth));
  double s = sinc(n) * p.t, cn = std::cos(n);
  double psi = p.beta - p.theta;
  double sps = std::sin(psi), cps = std::cos(psi);
  double f = 2 * cn * s * (sa * sa * sb * std::sin(p.theta - p.beta) - ca * ca * cth) +
             2 * s * s * sa * sa * cb * ca * sth * cps;
  double g = ca * cn * cn - 2 * cn * s * sa * sa * cb * std::sin(p.theta - p.beta) -
             s * s * ca *
                 (2 * sa * sa * cth * cps * cb + sa * sa * (sps * sps - cps * cps) +
                  ca * ca * cth * cth);
  return std::cos(p.gamma) * f + std::sin(p.gamma) * g;
}

double phi_t(const C3Point& p, double tol) {
  double q = phi_t_quaternion(p), c = phi_t_closed(p);
  if (!(std::abs(q - c) <= tol))
    throw OracleToleranceError("trace function routes disagree by " + std::to_string(q - c));
  return q;
}

C3Report c3_check(std::optional<double> t, int samples, std::uint64_t seed, double t_max) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle01(0, 2 * kPi), half(0, kPi),
      tdist(0, t_max);
  C3Report r;
  r.samples = samples;
  for (int i = 0; i < samples; ++i) {
    C3Point p;
    p.gamma = half(rng);
    p.theta = angle01(rng);
    p.alpha = half(rng);
    p.beta = angle01(rng);
    p.t = t ? *t : tdist(rng);
    double q = phi_t_quaternion(p);
    r.max_route_diff = std::max(r.max_route_diff, std::abs(q - phi_t_closed(p)));
    if (p.t == 0)
      r.max_t0_residual =
          std::max(r.max_t0_residual, std::abs(q - std::sin(p.gamma) * std::cos(p.alpha)));
  }
  return r;
}

double s_sign(double theta, double beta) { return std::sin(beta) * std::sin(theta - beta); }

double spherical_theta3(double z2, double z3, double psi) {
  double c = std::cos(z2) * std::cos(z3) + std::sin(z2) * std::sin(z3) * std::cos(psi);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

std::pair<EndpointRep, EndpointRep> endpoint_representations(double theta1, double theta2,
                                                             double gamma0) {
  if (!(theta1 > 0 && theta1 < kPi && theta2 > 0 && theta2 < kPi))
    throw PreconditionError("fibre endpoints need theta1, theta2 in (0, pi)");
  // x = e^{beta k} i sits at angle theta1 from a; c sits at angle theta2 from
  // x, on the far side of x for psi = pi and on the near side for psi = 0.
  EndpointRep r0, rpi;
  r0.point = {gamma0, theta1 - theta2, kPi / 2, theta1, 0};
  r0.psi = 0;
  rpi.point = {gamma0, theta1 + theta2, kPi / 2, theta1, 0};
  rpi.psi = kPi;
  r0.s = s_sign(r0.point.theta, r0.point.beta);
  rpi.s = s_sign(rpi.point.theta, rpi.point.beta);
  return {r0, rpi};
}

std::vector<VarietySample> sample_variety(double t, int grid_size, double tol) {
  if (grid_size < 16) throw PreconditionError("grid_size must be at least 16");
  std::vector<VarietySample> out;
  int n = grid_size;
  for (int i = 0; i <= n; ++i) {
    double g = kPi * i / n;
    for (int j = 0; j < n; ++j) {
      double th = 2 * kPi * j / n;
      for (int k = 0; k <= n; ++k) {
        double al = kPi * k / n;
        for (int l = 0; l < n; ++l) {
          double be = 2 * kPi * l / n;
          double v = std::abs(phi_t_closed({g, th, al, be, t}));
          if (v < tol) out.push_back({g, th, al, be, v});
        }
      }
    }
  }
  return out;
}

void write_csv(std::ostream& os, const std::vector<VarietySample>& pts) {
  os << "gamma,theta,alpha,beta,abs_phi\n";
  os.precision(17);
  for (const VarietySample& p : pts)
    os << p.gamma << ',' << p.theta << ',' << p.alpha << ',' << p.beta << ',' << p.abs_phi << '\n';
}

SliceResult slice_components(double t, double theta, double beta, double gamma0,
                             double half_width, int n) {
  if (n < 8) throw PreconditionError("slice grid too coarse");
  std::vector<std::vector<double>> v(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    double g = gamma0 - half_width + 2 * half_width * i / (n - 1);
    for (int j = 0; j < n; ++j) {
      double a = kPi / 2 - half_width + 2 * half_width * j / (n - 1);
      v[i][j] = phi_t_closed({g, theta, a, beta, t});
    }
  }
  int m = n - 1;
  std::vector<std::vector<int>> label(m, std::vector<int>(m, -1));
  auto crossing = [&](int i, int j) {
    double lo = std::min({v[i][j], v[i + 1][j], v[i][j + 1], v[i + 1][j + 1]});
    double hi = std::max({v[i][j], v[i + 1][j], v[i][j + 1], v[i + 1][j + 1]});
    return lo < 0 && hi > 0;
  };
  // gamma above gamma0 lies in A+ near gamma0 = 0 and in A- near gamma0 = pi
  bool upper_is_plus = std::cos(gamma0) > 0;
  SliceResult res;
  for (int i0 = 0; i0 < m; ++i0) {
    for (int j0 = 0; j0 < m; ++j0) {
      if (label[i0][j0] >= 0 || !crossing(i0, j0)) continue;
      int id = static_cast<int>(res.components.size());
      res.components.emplace_back();
      std::queue<std::pair<int, int>> q;
      q.push({i0, j0});
      label[i0][j0] = id;
      while (!q.empty()) {
        auto [i, j] = q.front();
        q.pop();
        auto& faces = res.components[id].faces;
        if (j == 0) faces.insert("H+");
        if (j == m - 1) faces.insert("H-");
        if (i == m - 1) faces.insert(upper_is_plus ? "A+" : "A-");
        if (i == 0) faces.insert(upper_is_plus ? "A-" : "A+");
        for (int di = -1; di <= 1; ++di)
          for (int dj = -1; dj <= 1; ++dj) {
            int a = i + di, b = j + dj;
            if (a < 0 || b < 0 || a >= m || b >= m || label[a][b] >= 0 || !crossing(a, b)) continue;
            label[a][b] = id;
            q.push({a, b});
          }
      }
    }
  }
  return res;
}

HessianResult corner_hessian(double t, double step, double singular_tol) {
  if (!(t > 0 && t < kPi / 4)) throw PreconditionError("corner_hessian needs 0 < t < pi/4");
  const std::array<double, 4> x0{0, 0, kPi / 2, 0};
  auto f = [&](const std::array<double, 4>& v) {
    return phi_t_closed({v[0], v[1], v[2], v[3], t});
  };
  auto fd = [&](int i, int j, double h) {
    auto at = [&](double si, double sj) {
      std::array<double, 4> v = x0;
      v[i] += si * h;
      v[j] += sj * h;
      return f(v);
    };
    return (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * h * h);
  };
  HessianResult r;
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double coarse = fd(i, j, step), fine = fd(i, j, step / 2);
      r.h[i][j] = (4 * fine - coarse) / 3;
    }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = 0.5 * (r.h[i][j] + r.h[j][i]);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m);
  double min_abs = INFINITY;
  for (int i = 0; i < 4; ++i) {
    double e = es.eigenvalues()(i);
    r.eigenvalues[i] = e;
    min_abs = std::min(min_abs, std::abs(e));
    r.signature += e > 0 ? 1 : (e < 0 ? -1 : 0);
  }
  r.nonsingular = min_abs > singular_tol;
  return r;
}

}  // namespace pillow::oracle
