#pragma once

#include <functional>

#include "plasmoheat/types.hpp"

namespace plasmoheat {

// Cell-centred finite-difference model of
//   rho_c(x) dtau/dt = div(gamma(x) grad tau) + g(x)   on [-L, L]^2,
// with tau = 0 on the outer box and at t = 0.  Face conductivities are
// harmonic means, so the interface flux condition holds to first order.
struct FdSpec {
  double L = 1.0;
  int nx = 200;          // cells per direction
  double dt = 1e-3;
  bool implicit = true;  // backward Euler; the explicit scheme checks CFL
};

struct FdField {
  double L = 1.0;
  int nx = 0;
  double t = 0.0;
  Vector tau;  // cell-centre values, index ix + nx * iy

  // Bilinear interpolation between cell centres (0 outside the box).
  double value(double x, double y) const;
};

// `inside` selects particle cells (gamma_c, rho_c_c); `source` is the full
// deposited power density (caller zeroes it outside the particle).
FdField fd_heat_solve(const FdSpec& spec,
                      const std::function<bool(double, double)>& inside,
                      double gamma_c, double gamma_m, double rho_c_c,
                      double rho_c_m,
                      const std::function<double(double, double)>& source,
                      double t_end);

}  // namespace plasmoheat
