#pragma once

#include <vector>

#include "plasmoheat/helmholtz.hpp"
#include "plasmoheat/np_core.hpp"

namespace plasmoheat {

// H* coupling of each eigenmode to the dipole loads nu_x, nu_y.
struct CouplingSpectrum {
  Vector lambda;
  Vector cx, cy;  // ( (nu_x, phi_j)_{H*}, (nu_y, phi_j)_{H*} )

  // |c_j . d| for a given direction.
  double coupling_along(int j, Vec2 d) const {
    return std::abs(cx[j] * d.x + cy[j] * d.y);
  }
};

CouplingSpectrum coupling_spectrum(const SpectralDecomposition& d);

// Index of the mode with the largest |coupling . d| among modes with
// lambda within (-1/2, 1/2) (the 1/2-eigenspace never couples).
int strongest_coupled_mode(const CouplingSpectrum& cs, Vec2 direction);

// lambda_j shifted off the real axis: lambda_j + i eta (eta = 0.001 default,
// following the resonance prescription).
Complex resonant_lambda(const SpectralDecomposition& d, int j,
                        double eta = 1e-3);

// Leading-order interior field of a small particle D = z + delta B:
//   u(x) = u^i(z) + [ (x - z) + S_B (lambda_eps I - K_B*)^{-1}[nu](x_tilde) delta ] . grad u^i(z)
// computed on the unit-frame mesh B.  `points` are unit-frame locations;
// physical positions are z + delta * point.
struct FieldSolution {
  std::vector<Vec2> points_phys;
  CVector u;        // zeroth + first
  CVector zeroth;   // u^i(z) + (x - z) . grad u^i(z)
  CVector first;    // delta * S_B[resolvent nu](x_tilde) . grad u^i(z)
  CVector sx, sy;   // resolvent layer-potential vector components (unit frame)
};

FieldSolution inner_field_asymptotic(const SpectralDecomposition& d,
                                     const std::vector<Vec2>& points,
                                     Vec2 z, double delta, Complex lambda_eps,
                                     const IncidentWave& inc);

// Resonant |u|^2 profile (plane-wave normalization |u^i| = 1):
//   |u|^2 = 1 + 2 k_m Re(i S[q] ) + k_m^2 |S[q]|^2,  q = (lambda I - K*)^{-1}[nu . d].
// mode < 0 uses the full resolvent; mode = j keeps the single j-th term with
// the modulus form  (1 + k_m (nu.d, phi_j) S[phi_j]/|lambda - lambda_j|)^2.
Vector u_squared_boundary(const SpectralDecomposition& d, Complex lambda_eps,
                          double k_m, Vec2 direction, int mode = -1);
Vector u_squared_points(const SpectralDecomposition& d, Complex lambda_eps,
                        double k_m, Vec2 direction,
                        const std::vector<Vec2>& points, int mode = -1);

struct DrudeParams {
  double eps_inf = 9.84;
  double omega_p = 1.36e16;  // rad/s
  double gamma = 1.0e14;     // 1/s
};

// eps(omega) = eps_inf - omega_p^2 / (omega^2 + i gamma omega).
Complex drude_epsilon(double omega, const DrudeParams& p);

}  // namespace plasmoheat
