#include "plasmoheat/plasmonic.hpp"

#include <cmath>
#include <stdexcept>

namespace plasmoheat {

namespace {

Vector nu_component(const BoundaryMesh& mesh, int axis) {
  Vector v(mesh.n());
  for (int i = 0; i < mesh.n(); ++i) {
    v[i] = axis == 0 ? mesh.nu[i].x : mesh.nu[i].y;
  }
  return v;
}

}  // namespace

CouplingSpectrum coupling_spectrum(const SpectralDecomposition& d) {
  CouplingSpectrum cs;
  cs.lambda = d.lambda;
  // (nu_a, phi_j)_{H*} = phi_j^T G nu_a for the orthonormalized columns.
  cs.cx = d.Gphi.transpose() * nu_component(d.mesh, 0);
  cs.cy = d.Gphi.transpose() * nu_component(d.mesh, 1);
  return cs;
}

int strongest_coupled_mode(const CouplingSpectrum& cs, Vec2 direction) {
  int best = -1;
  double best_c = -1.0;
  for (int j = 0; j < cs.lambda.size(); ++j) {
    if (std::abs(cs.lambda[j] - 0.5) <= 1e-6) continue;  // never couples
    const double c = cs.coupling_along(j, direction);
    if (c > best_c) {
      best_c = c;
      best = j;
    }
  }
  if (best < 0) throw std::invalid_argument("no coupled mode found");
  return best;
}

Complex resonant_lambda(const SpectralDecomposition& d, int j, double eta) {
  return Complex(d.lambda[j], eta);
}

FieldSolution inner_field_asymptotic(const SpectralDecomposition& d,
                                     const std::vector<Vec2>& points,
                                     Vec2 z, double delta, Complex lambda_eps,
                                     const IncidentWave& inc) {
  const int np = static_cast<int>(points.size());
  FieldSolution fs;
  fs.points_phys.resize(points.size());
  fs.u.resize(np);
  fs.zeroth.resize(np);
  fs.first.resize(np);

  const CVector rx = resolvent_apply(d, lambda_eps, nu_component(d.mesh, 0));
  const CVector ry = resolvent_apply(d, lambda_eps, nu_component(d.mesh, 1));
  fs.sx = eval_S_points(d.mesh, rx, points);
  fs.sy = eval_S_points(d.mesh, ry, points);

  const Complex ui_z = inc.value(z);
  const auto [gx, gy] = inc.gradient(z);
  for (int p = 0; p < np; ++p) {
    const Vec2 x_phys = z + delta * points[p];
    fs.points_phys[p] = x_phys;
    fs.zeroth[p] = ui_z + (x_phys - z).x * gx + (x_phys - z).y * gy;
    fs.first[p] = delta * (fs.sx[p] * gx + fs.sy[p] * gy);
    fs.u[p] = fs.zeroth[p] + fs.first[p];
  }
  return fs;
}

namespace {

// |u|^2 on precomputed S[resolvent(nu.d)] values; full-resolvent form.
Vector u_squared_from_layer(const CVector& s_vals, double k_m) {
  Vector out(s_vals.size());
  for (int i = 0; i < s_vals.size(); ++i) {
    const Complex t = Complex(0.0, k_m) * s_vals[i];
    out[i] = std::norm(1.0 + t);
  }
  return out;
}

Vector nu_dot_d(const BoundaryMesh& mesh, Vec2 dir) {
  Vector v(mesh.n());
  for (int i = 0; i < mesh.n(); ++i) v[i] = mesh.nu[i].dot(dir);
  return v;
}

}  // namespace

Vector u_squared_boundary(const SpectralDecomposition& d, Complex lambda_eps,
                          double k_m, Vec2 direction, int mode) {
  const Vector load = nu_dot_d(d.mesh, direction);
  if (mode < 0) {
    const CVector q = resolvent_apply(d, lambda_eps, load);
    const CVector s_vals = d.S * q;
    return u_squared_from_layer(s_vals, k_m);
  }
  // Single-mode approximation: amplitude k_m (nu.d, phi_j) S[phi_j] / |lambda - lambda_j|.
  const double cj = d.Gphi.col(mode).dot(load);
  const Vector s_phi = d.S * d.phi.col(mode);
  const double gap = std::abs(lambda_eps - Complex(d.lambda[mode], 0.0));
  if (gap == 0.0) throw std::invalid_argument("lambda_eps on the resonance");
  Vector out(d.n());
  for (int i = 0; i < d.n(); ++i) {
    const double a = k_m * cj * s_phi[i] / gap;
    out[i] = (1.0 + a) * (1.0 + a);
  }
  return out;
}

Vector u_squared_points(const SpectralDecomposition& d, Complex lambda_eps,
                        double k_m, Vec2 direction,
                        const std::vector<Vec2>& points, int mode) {
  const Vector load = nu_dot_d(d.mesh, direction);
  if (mode < 0) {
    const CVector q = resolvent_apply(d, lambda_eps, load);
    return u_squared_from_layer(eval_S_points(d.mesh, q, points), k_m);
  }
  const double cj = d.Gphi.col(mode).dot(load);
  const Vector s_phi =
      eval_S_points(d.mesh, Vector(d.phi.col(mode)), points);
  const double gap = std::abs(lambda_eps - Complex(d.lambda[mode], 0.0));
  if (gap == 0.0) throw std::invalid_argument("lambda_eps on the resonance");
  Vector out(s_phi.size());
  for (int i = 0; i < s_phi.size(); ++i) {
    const double a = k_m * cj * s_phi[i] / gap;
    out[i] = (1.0 + a) * (1.0 + a);
  }
  return out;
}

Complex drude_epsilon(double omega, const DrudeParams& p) {
  return p.eps_inf -
         p.omega_p * p.omega_p / (omega * omega + Complex(0.0, p.gamma * omega));
}

}  // namespace plasmoheat
