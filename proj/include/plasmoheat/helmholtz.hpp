#pragma once

#include <vector>

#include "plasmoheat/geometry.hpp"
#include "plasmoheat/np_core.hpp"
#include "plasmoheat/types.hpp"

namespace plasmoheat {

// Electromagnetic material/frequency bundle (TM polarization, fields scalar).
struct WaveParams {
  Complex eps_c{1.0, 0.0};  // particle permittivity (may be negative/complex)
  double eps_m = 1.0;       // background permittivity (> 0)
  double mu_c = 1.0;
  double mu_m = 1.0;
  double omega = 1.0;

  double k_m() const { return omega * std::sqrt(eps_m * mu_m); }
  Complex k_c() const { return omega * std::sqrt(Complex(eps_c * mu_c)); }
  Complex lambda_eps() const {
    return (eps_c + eps_m) / (2.0 * (eps_c - eps_m));
  }

  // Inverse of lambda_eps: eps_c = eps_m (2 lambda + 1)/(2 lambda - 1), with
  // omega chosen so that k_m equals the given value.
  static WaveParams from_lambda(Complex lambda_eps, double eps_m, double k_m);
};

struct IncidentWave {
  Vec2 d{1.0, 0.0};  // unit propagation direction
  double k = 1.0;    // background wavenumber (real)

  Complex value(Vec2 x) const {
    return std::exp(Complex(0.0, k * d.dot(x)));
  }
  std::pair<Complex, Complex> gradient(Vec2 x) const {
    const Complex v = Complex(0.0, k) * value(x);
    return {v * d.x, v * d.y};
  }
  Complex normal_derivative(Vec2 x, Vec2 nu) const {
    return Complex(0.0, k * d.dot(nu)) * value(x);
  }
};

// Helmholtz single layer S^k[phi](x) = int -(i/4) H0^(1)(k|x-y|) phi dsigma.
// Complex k allowed (principal branch); spectral log-split quadrature on
// same-component blocks.  Requires k != 0.
CMatrix assemble_Sk(const BoundaryMesh& mesh, Complex k);

// Adjoint double layer for wavenumber k; diagonal limit kappa/(4pi), equal to
// the Laplace case.
CMatrix assemble_Kstar_k(const BoundaryMesh& mesh, Complex k);

// Coefficients of the small-k kernel expansion
//   -(i/4) H0^(1)(k r) = (1/2pi) ln r + tau_k
//                        + sum_j (b_j ln(k r) + c_j)(k r)^{2j}.
struct SeriesCoefficients {
  Complex tau_k;
  std::vector<double> b;   // b[j-1] = b_j
  std::vector<Complex> c;  // c[j-1] = c_j
};
SeriesCoefficients series_coefficients(Complex k, int J);

// Truncated expansion of S^k as a matrix:
//   S + tau_k 1 w^T + sum_{j<=J} k^{2j} ln k S1_j + sum_{j<=J} k^{2j} S2_j,
// where S + tau_k 1 w^T = Stilde + Upsilon_k exactly.  J = 0 gives the
// leading operator alone.
CMatrix series_Sk(const BoundaryMesh& mesh, const Matrix& S, Complex k, int J);

// Rank-one piece Upsilon_k[phi] = (phi, phi0)_{H*} (S[phi0] + 1 + tau_k),
// using (phi, phi0)_{H*} = integral of phi.
CVector upsilon_apply(const SpectralDecomposition& d, Complex k,
                      const CVector& phi);

// Asymptotic inverse of S^k:
//   order 1: P_{H0*} Stilde^{-1} + U_k,  U_k = -phi0 w^T Stilde^{-1}/(S[phi0]+tau_k)
//   order 2: adds -k^2 ln k  P Stilde^{-1} S1_1 P Stilde^{-1}.
// Composition residual ||S^k X - I|| = O(k^2 ln k) at order 1.
CMatrix inv_Sk_asymptotic(const SpectralDecomposition& d, Complex k,
                          int order = 1);

struct TransmissionSolution {
  CVector psi;  // exterior density (S^{k_m} representation)
  CVector phi;  // interior density (S^{k_c} representation)
  double residual = 0.0;  // relative linear-system residual
};

// Single-particle transmission problem: continuity of u and of the
// eps-weighted flux eps du/dnu across the boundary, radiating exterior
// scatter.  The weighted flux matching is what places the quasi-static
// resonances at lambda_eps in the spectrum of K*.
TransmissionSolution solve_transmission(const BoundaryMesh& mesh,
                                        const WaveParams& wp,
                                        const IncidentWave& inc);

// Total field at points: u^i + S^{k_m}[psi] outside, S^{k_c}[phi] inside.
// Plain quadrature; accuracy degrades within ~2 node spacings of the
// boundary.
CVector eval_field(const BoundaryMesh& mesh, const TransmissionSolution& sol,
                   const WaveParams& wp, const IncidentWave& inc,
                   const std::vector<Vec2>& points,
                   const std::vector<bool>& inside);

// S^k[density] at arbitrary points (plain quadrature).
CVector eval_Sk_points(const BoundaryMesh& mesh, Complex k,
                       const CVector& density,
                       const std::vector<Vec2>& points);

}  // namespace plasmoheat
