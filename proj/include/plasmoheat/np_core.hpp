#pragma once

#include <optional>
#include <vector>

#include "plasmoheat/geometry.hpp"
#include "plasmoheat/types.hpp"

namespace plasmoheat {

// Densities and operators are stored nodally: a density is its vector of node
// values, an operator is the dense Nystrom matrix acting on node values (the
// quadrature weights are baked into the matrix columns).

// Spectral (Martensen–Kussmaul) weights for the periodic log kernel: for an
// even-size block of equispaced angles, R(i,j) approximates
//   integral_0^{2pi} ln(4 sin^2((t_i - s)/2)) f(s) ds ~ sum_j R(i,j) f(s_j)
// exactly for trigonometric polynomials up to the grid's Nyquist order.
Matrix kress_log_weights(int n_block);

// Single-layer operator S[phi](x) = (1/2pi) int ln|x-y| phi(y) dsigma(y),
// spectral product quadrature on same-component blocks, plain trapezoid
// across components.
Matrix assemble_S(const BoundaryMesh& mesh);

// Adjoint double layer (Neumann–Poincare) K*[phi](x) =
// (1/2pi) int <x-y, nu(x)>/|x-y|^2 phi dsigma; diagonal kappa(x)/(4pi).
Matrix assemble_Kstar(const BoundaryMesh& mesh);

// Double layer K[phi](x) = (1/2pi) int <y-x, nu(y)>/|y-x|^2 phi dsigma,
// assembled independently of K* (their discrete adjoint consistency
// W K = K*^T W is a checkable property, not an identification).
Matrix assemble_K(const BoundaryMesh& mesh);

struct EquilibriumDensity {
  Vector phi0;   // S[phi0] = const on the boundary, integral 1
  double alpha;  // the bordered-system constant; S[phi0] = -alpha
};

// Solves the bordered system [S, 1; w^T, 0][phi; alpha] = [0; 1].
EquilibriumDensity compute_phi0(const BoundaryMesh& mesh, const Matrix& S);

// Substitute single layer: Stilde[phi] = S[phi] - (int phi)(S[phi0] + 1).
// Maps phi0 to -1, agrees with S on zero-mean densities, invertible and
// negative definite in the boundary pairing.
Matrix build_Stilde(const Matrix& S, const Vector& phi0, const Vector& w);

// H* inner product (u, v) = -sum_i w_i u_i conj(Stilde v)_i; linear in u,
// conjugate-linear in v, positive on nonzero densities.
Complex hstar_inner(const Matrix& Stilde, const Vector& w, const CVector& u,
                    const CVector& v);
double hstar_inner(const Matrix& Stilde, const Vector& w, const Vector& u,
                   const Vector& v);
double hstar_norm(const Matrix& Stilde, const Vector& w, const CVector& u);

struct SpectralDecomposition {
  BoundaryMesh mesh;
  Matrix S, Kstar, Stilde;
  Vector phi0;    // equilibrium density, integral 1
  double s_phi0;  // constant boundary value of S[phi0]
  Vector w;       // quadrature weights
  Matrix G;       // symmetrized H* Gram matrix, -(W Stilde)_sym
  Vector lambda;  // eigenvalues, |lambda| descending, + before - on ties
  Matrix phi;     // columns: H*-orthonormal eigenvectors of K*
  Matrix Gphi;    // G * phi (cached for inner products against eigenvectors)
  std::vector<int> half_space;  // indices with |lambda_j - 1/2| <= 1e-6
  double gram_residual = 0.0;      // max |phi^T G phi - I|
  double calderon_residual = 0.0;  // ||Stilde K* - K Stilde|| / (||.|| ||.||)

  int n() const { return static_cast<int>(lambda.size()); }
  // (v, phi_j)_{H*} for all j at once.
  CVector eigen_coefficients(const CVector& v) const;
};

// Assembles everything and solves the generalized symmetric eigenproblem
// (G K*)_sym x = lambda G x.  Throws ConditioningError if the Gram matrix is
// not positive definite (degenerate mesh or touching components).
SpectralDecomposition eigendecompose(const BoundaryMesh& mesh);

struct ResolventInfo {
  double dist_to_spectrum = 0.0;
  bool near_singular = false;
};

// (lambda I - K*)^{-1} rhs via the spectral expansion.  Throws
// std::invalid_argument when lambda coincides exactly with an eigenvalue the
// rhs couples to; sets info->near_singular when within 1e-12 of one.
CVector resolvent_apply(const SpectralDecomposition& d, Complex lambda,
                        const CVector& rhs, ResolventInfo* info = nullptr);

// Removes the phi0 component: phi - (phi, phi0)_{H*} phi0.  Exactly
// idempotent (uses (phi, phi0)_{H*} = integral of phi).
CVector project_H0(const SpectralDecomposition& d, const CVector& v);

// Removes every eigencomponent with lambda within tol of 1/2 (the full
// 1/2-eigenspace; one mode per connected component).
CVector project_out_halfspace(const SpectralDecomposition& d, const CVector& v);

// Normal derivative of a function from its boundary trace:
// -(1/2 I - K*) Stilde^{-1}[g], exact for g harmonic inside D.  The optional
// source term supplies f = Delta g on an interior mesh, adding the Riesz
// representer of T_f[phi] = -int_D f Stilde[phi] dx.
CVector dnu_from_interior(const SpectralDecomposition& d, const CVector& g,
                          const InteriorMesh* source_mesh = nullptr,
                          const CVector* source_values = nullptr);

// S[density] evaluated at interior/exterior points by plain quadrature
// (accurate for points at least one node spacing away from the boundary).
CVector eval_S_points(const BoundaryMesh& mesh, const CVector& density,
                      const std::vector<Vec2>& points);
Vector eval_S_points(const BoundaryMesh& mesh, const Vector& density,
                     const std::vector<Vec2>& points);

}  // namespace plasmoheat
