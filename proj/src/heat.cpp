#include "plasmoheat/heat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "plasmoheat/parallel.hpp"
#include "plasmoheat/specfun.hpp"

namespace plasmoheat {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 7-point degree-5 triangle rule (barycentric points, weights sum to 1).
struct TriRule {
  static constexpr int kN = 7;
  double l1[kN], l2[kN], w[kN];
  TriRule() {
    const double a1 = 0.0597158717897698, b1 = 0.4701420641051151;
    const double a2 = 0.7974269853530873, b2 = 0.1012865073234563;
    const double w1 = 0.1323941527885062, w2 = 0.1259391805448271;
    l1[0] = l2[0] = 1.0 / 3.0;
    w[0] = 0.225;
    const double p1[3][2] = {{a1, b1}, {b1, a1}, {b1, b1}};
    const double p2[3][2] = {{a2, b2}, {b2, a2}, {b2, b2}};
    for (int i = 0; i < 3; ++i) {
      l1[1 + i] = p1[i][0];
      l2[1 + i] = p1[i][1];
      w[1 + i] = w1;
      l1[4 + i] = p2[i][0];
      l2[4 + i] = p2[i][1];
      w[4 + i] = w2;
    }
  }
};
const TriRule kTriRule;

// 12-point Gauss-Legendre on [-1, 1].
constexpr int kGlN = 12;
constexpr double kGlX[kGlN] = {
    -0.9815606342467192, -0.9041172563704749, -0.7699026741943047,
    -0.5873179542866175, -0.3678314989981802, -0.1252334085114689,
    0.1252334085114689,  0.3678314989981802,  0.5873179542866175,
    0.7699026741943047,  0.9041172563704749,  0.9815606342467192};
constexpr double kGlW[kGlN] = {
    0.0471753363865118, 0.1069393259953184, 0.1600783285433462,
    0.2031674267230659, 0.2334925365383548, 0.2491470458134028,
    0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
    0.1600783285433462, 0.1069393259953184, 0.0471753363865118};

double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

// int_0^rho E1(r^2/c) r dr  (exact).
double radial_E1(double rho, double c) {
  const double u = rho * rho / c;
  if (u <= 0.0) return 0.0;
  if (u > 700.0) return 0.5 * c;  // E1 underflows; tail is c/2
  return 0.5 * rho * rho * expint_E1(u) + 0.5 * c * (1.0 - std::exp(-u));
}

// int_0^rho exp(-r^2/c) dr  (exact).
double radial_gauss(double rho, double c) {
  const double s = std::sqrt(c);
  return 0.5 * std::sqrt(kPi) * s * std::erf(rho / s);
}

// Signed polar fan around x over one triangle: accumulates
// sum_edges int dphi radial(rho(phi)) [ * e(phi).nu when nu given ].
// Exact in r; 12-point Gauss in each edge angle.
template <typename Radial>
double polar_fan(Vec2 x, const Vec2 v[3], const Radial& radial,
                 const Vec2* nu_x) {
  double total = 0.0;
  for (int e = 0; e < 3; ++e) {
    const Vec2 P = v[e], Q = v[(e + 1) % 3];
    const Vec2 dP = P - x, dQ = Q - x;
    const double rP = dP.norm(), rQ = dQ.norm();
    const double scale = std::max(rP, rQ);
    if (rP < 1e-14 * scale + 1e-300 || rQ < 1e-14 * scale + 1e-300) continue;
    const Vec2 edge = Q - P;
    Vec2 m{edge.y, -edge.x};
    const double mn = m.norm();
    if (mn == 0.0) continue;
    m = (1.0 / mn) * m;
    const double h = dP.dot(m);  // distance of x to the edge line (signed)
    if (std::abs(h) < 1e-15 * scale) continue;  // collinear: zero-area sector
    const double alpha = std::atan2(dP.y, dP.x);
    const double dphi = wrap_angle(std::atan2(dQ.y, dQ.x) - alpha);
    // rho(phi) varies sharply when x sits near the edge line; split wide
    // sectors into short panels so the fixed Gauss rule stays accurate.
    const int npan = std::max(1, (int)std::ceil(std::abs(dphi) / 0.3));
    const double pw = dphi / npan;
    for (int p = 0; p < npan; ++p) {
      const double a0 = alpha + p * pw;
      for (int g = 0; g < kGlN; ++g) {
        const double phi = a0 + 0.5 * (kGlX[g] + 1.0) * pw;
        const Vec2 dir{std::cos(phi), std::sin(phi)};
        const double denom = dir.dot(m);
        if (std::abs(denom) < 1e-300) continue;
        const double rho = h / denom;
        double val = radial(std::abs(rho));
        if (nu_x != nullptr) val *= dir.dot(*nu_x);
        total += 0.5 * pw * kGlW[g] * val;
      }
    }
  }
  return total;
}

struct TriGeom {
  std::vector<double> size;  // max edge length per triangle
};

TriGeom tri_geometry(const InteriorMesh& m) {
  TriGeom g;
  g.size.resize(m.n_triangles());
  for (int q = 0; q < m.n_triangles(); ++q) {
    const Vec2 a = m.vertices[m.triangles[q][0]];
    const Vec2 b = m.vertices[m.triangles[q][1]];
    const Vec2 c = m.vertices[m.triangles[q][2]];
    g.size[q] =
        std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
  }
  return g;
}

}  // namespace

Vector geometric_time_grid(double t_end, int nt, double first_frac) {
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (nt < 3) throw std::invalid_argument("need at least 3 grid times");
  if (!(first_frac > 0.0) || !(first_frac < 1.0))
    throw std::invalid_argument("first_frac must lie in (0, 1)");
  Vector t(nt);
  t[0] = 0.0;
  const double ratio = std::pow(1.0 / first_frac, 1.0 / (nt - 2));
  t[1] = first_frac * t_end;
  for (int k = 2; k < nt; ++k) t[k] = t[k - 1] * ratio;
  t[nt - 1] = t_end;  // absorb rounding
  return t;
}

Vector newtonian_F(const HeatSource& src, double b,
                   const std::vector<Vec2>& points, double t) {
  if (!(b > 0.0) || !(t > 0.0))
    throw std::invalid_argument("newtonian_F: b and t must be positive");
  const double c = 4.0 * b * t;
  const TriGeom geom = tri_geometry(src.mesh);
  const InteriorMesh& m = src.mesh;
  Vector out(points.size());
  auto radial = [c](double rho) { return radial_E1(rho, c); };

  parallel_for(0, static_cast<int>(points.size()), [&](int p) {
    const Vec2 x = points[p];
    double sum = 0.0;
    for (int q = 0; q < m.n_triangles(); ++q) {
      const double d = (x - m.centroids[q]).norm();
      const double g = src.g[q];
      if (g == 0.0) continue;
      if (d > 3.0 * geom.size[q]) {
        if (d * d / c > 750.0) continue;  // kernel underflow
        const Vec2 a = m.vertices[m.triangles[q][0]];
        const Vec2 v1 = m.vertices[m.triangles[q][1]];
        const Vec2 v2 = m.vertices[m.triangles[q][2]];
        double acc = 0.0;
        for (int j = 0; j < TriRule::kN; ++j) {
          const double l1 = kTriRule.l1[j], l2 = kTriRule.l2[j];
          const Vec2 y = (1.0 - l1 - l2) * a + l1 * v1 + l2 * v2;
          const double u = (y - x).squared_norm() / c;
          acc += kTriRule.w[j] * expint_E1(u);
        }
        sum += g * m.areas[q] * acc;
      } else {
        const Vec2 v[3] = {m.vertices[m.triangles[q][0]],
                           m.vertices[m.triangles[q][1]],
                           m.vertices[m.triangles[q][2]]};
        sum += g * polar_fan(x, v, radial, nullptr);
      }
    }
    out[p] = sum / (4.0 * kPi * b);
  });
  return out;
}

Vector newtonian_dF(const HeatSource& src, double b, const BoundaryMesh& bmesh,
                    double t) {
  if (!(b > 0.0) || !(t > 0.0))
    throw std::invalid_argument("newtonian_dF: b and t must be positive");
  const double c = 4.0 * b * t;
  const TriGeom geom = tri_geometry(src.mesh);
  const InteriorMesh& m = src.mesh;
  Vector out(bmesh.n());
  auto radial = [c](double rho) { return radial_gauss(rho, c); };

  parallel_for(0, bmesh.n(), [&](int p) {
    const Vec2 x = bmesh.x[p];
    const Vec2 nu = bmesh.nu[p];
    double sum = 0.0;
    for (int q = 0; q < m.n_triangles(); ++q) {
      const double d = (x - m.centroids[q]).norm();
      const double g = src.g[q];
      if (g == 0.0) continue;
      if (d > 3.0 * geom.size[q]) {
        if (d * d / c > 750.0) continue;
        const Vec2 a = m.vertices[m.triangles[q][0]];
        const Vec2 v1 = m.vertices[m.triangles[q][1]];
        const Vec2 v2 = m.vertices[m.triangles[q][2]];
        double acc = 0.0;
        for (int j = 0; j < TriRule::kN; ++j) {
          const double l1 = kTriRule.l1[j], l2 = kTriRule.l2[j];
          const Vec2 y = (1.0 - l1 - l2) * a + l1 * v1 + l2 * v2;
          const Vec2 r = y - x;
          const double r2 = r.squared_norm();
          acc += kTriRule.w[j] * std::exp(-r2 / c) * r.dot(nu) / r2;
        }
        sum += g * m.areas[q] * acc;
      } else {
        const Vec2 v[3] = {m.vertices[m.triangles[q][0]],
                           m.vertices[m.triangles[q][1]],
                           m.vertices[m.triangles[q][2]]};
        sum += g * polar_fan(x, v, radial, &nu);
      }
    }
    out[p] = sum / (2.0 * kPi * b);
  });
  return out;
}

namespace {

// E1(u) + gamma + ln u, the entire part of E1; stable for all u >= 0.
double e1_entire(double u) {
  if (u <= 0.0) return 0.0;
  if (u < 0.5) {
    double term = u, sum = u;  // sum_{k>=1} (-1)^{k+1} u^k / (k k!)
    for (int k = 2; k < 30; ++k) {
      term *= -u / k;
      const double add = term / k;
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return expint_E1(u) + kEulerGamma + std::log(u);
}

}  // namespace

Matrix heat_single_layer(const BoundaryMesh& mesh, double b, const Vector& t,
                         const Matrix& Q) {
  const int n = mesh.n();
  const int nt = static_cast<int>(t.size());
  if (!(b > 0.0)) throw std::invalid_argument("heat_single_layer: b > 0");
  if (nt < 2 || t[0] != 0.0)
    throw std::invalid_argument("heat_single_layer: grid must start at 0");
  for (int k = 1; k < nt; ++k) {
    if (!(t[k] > t[k - 1]))
      throw std::invalid_argument("heat_single_layer: grid must increase");
  }
  if (Q.rows() != n || Q.cols() != nt - 1)
    throw std::invalid_argument("heat_single_layer: Q must be n x (nt-1)");

  // Pairwise squared distances and per-component spectral log weights.
  Matrix R2(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) R2(i, j) = (mesh.x[i] - mesh.x[j]).squared_norm();
  }
  std::vector<Matrix> Rlog;
  for (const auto& [cb, ce] : mesh.comp_range)
    Rlog.push_back(kress_log_weights(ce - cb));

  Matrix V = Matrix::Zero(n, nt);
  const double pref = 1.0 / (4.0 * kPi * b);

  for (int k = 1; k < nt; ++k) {
    parallel_for(0, n, [&](int i) {
      const int ci = mesh.comp[i];
      const auto [cb, ce] = mesh.comp_range[ci];
      double acc = 0.0;
      // Past (regular) intervals: exact E1 difference in stable form.
      for (int m = 0; m + 1 < k; ++m) {
        const double tau_a = t[k] - t[m];
        const double tau_b = t[k] - t[m + 1];
        const double log_ratio = std::log(tau_a / tau_b);
        const double ca = 4.0 * b * tau_a, cbv = 4.0 * b * tau_b;
        double dot = 0.0;
        for (int j = 0; j < n; ++j) {
          const double r2 = R2(i, j);
          const double phi =
              log_ratio + e1_entire(r2 / ca) - e1_entire(r2 / cbv);
          dot += phi * mesh.w[j] * Q(j, m);
        }
        acc += pref * dot;
      }
      // Final interval [t_{k-1}, t_k]: log-singular E1 kernel.
      {
        const double tau_a = t[k] - t[k - 1];
        const double ca = 4.0 * b * tau_a;
        const double c0 = -kEulerGamma + std::log(ca);
        double dot = 0.0;
        for (int j = 0; j < n; ++j) {
          double entry;
          if (mesh.comp[j] == ci) {
            const Matrix& R = Rlog[ci];
            const int nb = ce - cb;
            const double dth = 2.0 * kPi * (i - j) / nb;
            double log_reg;  // ln(r^2 / (4 sin^2(dth/2)))
            if (i == j) {
              log_reg = 2.0 * std::log(mesh.speed[i]);
            } else {
              const double s2 = 4.0 * std::pow(std::sin(0.5 * dth), 2);
              log_reg = std::log(R2(i, j) / s2);
            }
            entry = (c0 + e1_entire(R2(i, j) / ca) - log_reg) * mesh.w[j] -
                    R(i - cb, j - cb) * mesh.speed[j];
          } else {
            entry = expint_E1(R2(i, j) / ca) * mesh.w[j];
          }
          dot += entry * Q(j, k - 1);
        }
        acc += pref * dot;
      }
      V(i, k) = acc;
    });
  }
  return V;
}

TemperatureTrace temperature_boundary(const SpectralDecomposition& d,
                                      const HeatSource& src,
                                      const ThermalParams& tp, const Vector& t,
                                      HeatVariant variant, double b) {
  const int n = d.n();
  const int nt = static_cast<int>(t.size());
  if (tp.gamma_c == tp.gamma_m)
    throw std::invalid_argument(
        "temperature_boundary: no conductivity contrast (lambda_gamma "
        "undefined)");
  const double lg = tp.lambda_gamma();

  TemperatureTrace tr;
  tr.t = t;
  tr.variant = variant;
  tr.zeroth = Matrix::Zero(n, nt);
  for (int k = 1; k < nt; ++k)
    tr.zeroth.col(k) = newtonian_F(src, b, d.mesh.x, t[k]);

  // Interval-midpoint densities from the contrast resolvent of dF/dnu.
  Matrix Q(n, nt - 1);
  double dist = std::numeric_limits<double>::infinity();
  for (int m = 0; m + 1 < nt; ++m) {
    const double tm = 0.5 * (t[m] + t[m + 1]);
    const Vector load = newtonian_dF(src, b, d.mesh, tm);
    Vector coef = d.Gphi.transpose() * load;
    if (variant == HeatVariant::kResolventProjected) {
      for (int j : d.half_space) coef[j] = 0.0;
    }
    const double cmax = coef.cwiseAbs().maxCoeff();
    for (int j = 0; j < n; ++j) {
      const double gap = lg - d.lambda[j];
      if (std::abs(coef[j]) > 1e-12 * cmax)
        dist = std::min(dist, std::abs(gap));
      if (gap == 0.0 && coef[j] != 0.0)
        throw std::invalid_argument(
            "temperature_boundary: lambda_gamma hits the spectrum");
      coef[j] = gap == 0.0 ? 0.0 : coef[j] / gap;
    }
    Q.col(m) = d.phi * coef;
  }
  tr.dist_to_spectrum = dist;
  tr.near_singular = dist < 1e-8;

  const Matrix V = heat_single_layer(d.mesh, b, t, Q);
  tr.first = (variant == HeatVariant::kResolvent) ? Matrix(-V) : V;
  tr.tau = tr.zeroth + tr.first;
  return tr;
}

Matrix total_boundary_heat(const BoundaryMesh& mesh,
                           const TemperatureTrace& tr) {
  const int nt = static_cast<int>(tr.t.size());
  Matrix out(3, nt);
  for (int k = 0; k < nt; ++k) {
    out(0, k) = mesh.w.dot(tr.tau.col(k));
    out(1, k) = mesh.w.dot(tr.zeroth.col(k));
    out(2, k) = mesh.w.dot(tr.first.col(k));
  }
  return out;
}

}  // namespace plasmoheat
