#pragma once

#include <vector>

#include "plasmoheat/geometry.hpp"
#include "plasmoheat/np_core.hpp"

namespace plasmoheat {

// Two-phase conduction constants.  Defaults: gold particle in water.
struct ThermalParams {
  double gamma_c = 318.0;   // particle conductivity (W/m/K)
  double gamma_m = 0.598;   // background conductivity
  double rho_c_c = 2.49e6;  // volumetric heat capacity rho*c (J/m^3/K)
  double rho_c_m = 4.18e6;

  double b_c() const { return rho_c_c / gamma_c; }  // inverse diffusivity
  double b_m() const { return rho_c_m / gamma_m; }
  double lambda_gamma() const {
    return (gamma_c + gamma_m) / (2.0 * (gamma_c - gamma_m));
  }
};

// Deposited power density sampled at interior-mesh centroids.
struct HeatSource {
  InteriorMesh mesh;
  Vector g;  // value at centroid q (>= 0)

  double total_power() const { return mesh.areas.dot(g); }
};

// 0 = t_0 < t_1 < ... < t_{nt-1} = t_end with t_1 = first_frac * t_end and a
// constant ratio afterwards.
Vector geometric_time_grid(double t_end, int nt, double first_frac = 1e-3);

// Time-integrated free kernel against the source:
//   F(x, t) = (1/4 pi b) sum_q E1(|x - x_q|^2 / (4 b t)) g_q A_q,
// the potential of the Gaussian kernel exp(-r^2/4bt)/(4 pi b t) integrated
// over (0, t).  Triangles near x use exact-in-r polar integration (the
// integrand is log-singular); far triangles a degree-5 rule.
Vector newtonian_F(const HeatSource& src, double b,
                   const std::vector<Vec2>& points, double t);

// Normal derivative of the same potential at the boundary nodes:
//   dF/dnu(x, t) = (1/2 pi b) int exp(-r^2/4bt) <y - x, nu(x)>/r^2 g(y) dy,
// evaluated with the matching near/far split (it is the exact gradient of
// the discrete newtonian_F).
Vector newtonian_dF(const HeatSource& src, double b, const BoundaryMesh& bmesh,
                    double t);

// Single-layer heat potential on the boundary.  Q(:, m) holds the density on
// the interval [t_m, t_{m+1}] (piecewise constant in time); the returned
// matrix holds V(x_i, t_k) for every node/grid time (column 0 = t = 0 = 0).
// The time integral over a past interval is an exact E1 difference; the
// final (singular) interval uses the spectral log rule.
Matrix heat_single_layer(const BoundaryMesh& mesh, double b, const Vector& t,
                         const Matrix& Q);

enum class HeatVariant {
  kResolvent,           // tau = F - V (lambda_gamma I - K*)^{-1}[dF/dnu]
  kResolventProjected,  // tau = F + V (lambda_gamma I - K*)^{-1} P[dF/dnu],
                        // P removing the 1/2-eigenspace component
};

struct TemperatureTrace {
  Vector t;       // grid times (t[0] = 0)
  Matrix zeroth;  // n x nt: F at the boundary nodes
  Matrix first;   // n x nt: signed single-layer correction
  Matrix tau;     // zeroth + first
  HeatVariant variant = HeatVariant::kResolvent;
  // Distance of lambda_gamma to the eigenvalues the load actually couples to
  // (over all time nodes); near_singular flags distances below 1e-8.
  double dist_to_spectrum = 0.0;
  bool near_singular = false;
};

// Boundary temperature elevation: zeroth order the free Newtonian potential
// of the source, first order a single-layer correction whose density is the
// conductivity-contrast resolvent of dF/dnu at each interval midpoint.
// b is the kernel diffusion parameter (1 in nondimensional units).
TemperatureTrace temperature_boundary(
    const SpectralDecomposition& d, const HeatSource& src,
    const ThermalParams& tp, const Vector& t,
    HeatVariant variant = HeatVariant::kResolvent, double b = 1.0);

// Rows: boundary integral of tau, zeroth, first at each grid time.
Matrix total_boundary_heat(const BoundaryMesh& mesh,
                           const TemperatureTrace& tr);

}  // namespace plasmoheat
