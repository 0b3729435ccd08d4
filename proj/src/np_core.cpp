#include "plasmoheat/np_core.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace plasmoheat {
namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

Matrix kress_log_weights(int n_block) {
  if (n_block < 2 || n_block % 2 != 0)
    throw std::invalid_argument("kress_log_weights: block size must be even");
  const int N = n_block, half = N / 2;
  // R depends only on (i - j) mod N.
  Vector r(N);
  for (int d = 0; d < N; ++d) {
    const double dt = kTwoPi * d / N;
    double sum = 0.0;
    for (int m = 1; m < half; ++m) sum += std::cos(m * dt) / m;
    r[d] = -(kTwoPi / N) * (2.0 * sum + std::cos(half * dt) / half);
  }
  Matrix R(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) R(i, j) = r[(i - j + N) % N];
  return R;
}

Matrix assemble_S(const BoundaryMesh& mesh) {
  const int n = mesh.n();
  Matrix S(n, n);
  for (int cc = 0; cc < mesh.n_components(); ++cc) {
    const auto [cb, ce] = mesh.comp_range[cc];
    const int N = ce - cb;
    const Matrix R = kress_log_weights(N);
    for (int i = cb; i < ce; ++i) {
      for (int j = cb; j < ce; ++j) {
        const double sp = mesh.speed[j];
        if (i == j) {
          S(i, j) = (R(i - cb, j - cb) + (kTwoPi / N) *
                                             std::log(sp * sp)) *
                    sp / (4.0 * kPi);
          continue;
        }
        const double r2 = (mesh.x[i] - mesh.x[j]).squared_norm();
        const double s = std::sin(0.5 * (mesh.theta[i] - mesh.theta[j]));
        const double smooth = std::log(r2 / (4.0 * s * s));
        S(i, j) =
            (R(i - cb, j - cb) + (kTwoPi / N) * smooth) * sp / (4.0 * kPi);
      }
    }
    // Cross-component blocks: smooth kernel, plain trapezoid.
    for (int i = 0; i < n; ++i) {
      if (mesh.comp[i] == cc) continue;
      for (int j = cb; j < ce; ++j) {
        const double r = (mesh.x[i] - mesh.x[j]).norm();
        S(i, j) = std::log(r) / kTwoPi * mesh.w[j];
      }
    }
  }
  return S;
}

Matrix assemble_Kstar(const BoundaryMesh& mesh) {
  const int n = mesh.n();
  Matrix K(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        K(i, i) = mesh.curvature[i] / (4.0 * kPi) * mesh.w[i];
        continue;
      }
      const Vec2 d = mesh.x[i] - mesh.x[j];
      K(i, j) = d.dot(mesh.nu[i]) / (kTwoPi * d.squared_norm()) * mesh.w[j];
    }
  }
  return K;
}

Matrix assemble_K(const BoundaryMesh& mesh) {
  const int n = mesh.n();
  Matrix K(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        K(i, i) = mesh.curvature[i] / (4.0 * kPi) * mesh.w[i];
        continue;
      }
      const Vec2 d = mesh.x[j] - mesh.x[i];
      K(i, j) = d.dot(mesh.nu[j]) / (kTwoPi * d.squared_norm()) * mesh.w[j];
    }
  }
  return K;
}

EquilibriumDensity compute_phi0(const BoundaryMesh& mesh, const Matrix& S) {
  const int n = mesh.n();
  Matrix A(n + 1, n + 1);
  A.topLeftCorner(n, n) = S;
  A.topRightCorner(n, 1).setOnes();
  A.bottomLeftCorner(1, n) = mesh.w.transpose();
  A(n, n) = 0.0;
  Vector rhs = Vector::Zero(n + 1);
  rhs[n] = 1.0;
  Eigen::PartialPivLU<Matrix> lu(A);
  const Vector sol = lu.solve(rhs);
  if (!sol.allFinite())
    throw ConditioningError("compute_phi0: bordered system is singular");
  EquilibriumDensity eq;
  eq.phi0 = sol.head(n);
  eq.alpha = sol[n];
  return eq;
}

Matrix build_Stilde(const Matrix& S, const Vector& phi0, const Vector& w) {
  // Stilde = S - (S phi0 + 1) w^T  (rank-one correction; w^T phi = int phi).
  const Vector u = S * phi0 + Vector::Ones(S.rows());
  return S - u * w.transpose();
}

Complex hstar_inner(const Matrix& Stilde, const Vector& w, const CVector& u,
                    const CVector& v) {
  const CVector sv = Stilde * v;
  return -(u.array() * w.array() * sv.conjugate().array()).sum();
}

double hstar_inner(const Matrix& Stilde, const Vector& w, const Vector& u,
                   const Vector& v) {
  const Vector sv = Stilde * v;
  return -(u.array() * w.array() * sv.array()).sum();
}

double hstar_norm(const Matrix& Stilde, const Vector& w, const CVector& u) {
  const double q = hstar_inner(Stilde, w, u, u).real();
  return std::sqrt(std::max(0.0, q));
}

CVector SpectralDecomposition::eigen_coefficients(const CVector& v) const {
  return Gphi.transpose() * v;
}

SpectralDecomposition eigendecompose(const BoundaryMesh& mesh) {
  SpectralDecomposition d;
  d.mesh = mesh;
  d.w = mesh.w;
  d.S = assemble_S(mesh);
  const EquilibriumDensity eq = compute_phi0(mesh, d.S);
  d.phi0 = eq.phi0;
  d.s_phi0 = -eq.alpha;
  d.Stilde = build_Stilde(d.S, d.phi0, d.w);
  d.Kstar = assemble_Kstar(mesh);

  const int n = mesh.n();
  const Matrix WS = mesh.w.asDiagonal() * d.Stilde;
  d.G = -0.5 * (WS + WS.transpose());
  Eigen::LLT<Matrix> llt(d.G);
  if (llt.info() != Eigen::Success)
    throw ConditioningError(
        "eigendecompose: H* Gram matrix is not positive definite (mesh too "
        "coarse or components nearly touching)");

  const Matrix GK = d.G * d.Kstar;
  const Matrix A = 0.5 * (GK + GK.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(A, d.G,
                                                      Eigen::ComputeEigenvectors |
                                                          Eigen::Ax_lBx);
  if (es.info() != Eigen::Success)
    throw ConditioningError("eigendecompose: generalized eigensolve failed");

  // Order: descending |lambda|, positive sign first among near-ties.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const Vector lam = es.eigenvalues();
  std::sort(order.begin(), order.end(), [&](int p, int q) {
    const double ap = std::abs(lam[p]), aq = std::abs(lam[q]);
    if (std::abs(ap - aq) > 1e-13) return ap > aq;
    return lam[p] > lam[q];
  });
  d.lambda.resize(n);
  d.phi.resize(n, n);
  for (int j = 0; j < n; ++j) {
    d.lambda[j] = lam[order[j]];
    Vector col = es.eigenvectors().col(order[j]);
    // Deterministic sign: make the largest-magnitude entry positive.
    int imax = 0;
    col.cwiseAbs().maxCoeff(&imax);
    if (col[imax] < 0.0) col = -col;
    d.phi.col(j) = col;
  }
  d.Gphi = d.G * d.phi;

  for (int j = 0; j < n; ++j)
    if (std::abs(d.lambda[j] - 0.5) <= 1e-6) d.half_space.push_back(j);

  d.gram_residual =
      (d.phi.transpose() * d.Gphi - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  const Matrix K = assemble_K(mesh);
  d.calderon_residual = (d.Stilde * d.Kstar - K * d.Stilde).norm() /
                        (d.Stilde.norm() * d.Kstar.norm());
  return d;
}

CVector resolvent_apply(const SpectralDecomposition& d, Complex lambda,
                        const CVector& rhs, ResolventInfo* info) {
  const CVector c = d.eigen_coefficients(rhs);
  const double cnorm = c.norm();
  double dist = std::numeric_limits<double>::infinity();
  bool near = false;
  for (int j = 0; j < d.n(); ++j) {
    const double dj = std::abs(lambda - Complex(d.lambda[j], 0.0));
    dist = std::min(dist, dj);
    if (std::abs(c[j]) > 1e-12 * cnorm) {
      if (dj == 0.0)
        throw std::invalid_argument(
            "resolvent_apply: lambda coincides with a coupled eigenvalue");
      if (dj < 1e-12 * std::max(1.0, std::abs(lambda))) near = true;
    }
  }
  if (info) {
    info->dist_to_spectrum = dist;
    info->near_singular = near;
  }
  CVector scaled(d.n());
  for (int j = 0; j < d.n(); ++j)
    scaled[j] = c[j] / (lambda - Complex(d.lambda[j], 0.0));
  return d.phi * scaled;
}

CVector project_H0(const SpectralDecomposition& d, const CVector& v) {
  const Complex mean = (v.array() * d.w.array().cast<Complex>()).sum();
  return v - mean * d.phi0.cast<Complex>();
}

CVector project_out_halfspace(const SpectralDecomposition& d,
                              const CVector& v) {
  CVector out = v;
  for (int j : d.half_space) {
    const Complex c = (d.Gphi.col(j).cast<Complex>().array() * v.array()).sum();
    out -= c * d.phi.col(j).cast<Complex>();
  }
  return out;
}

CVector dnu_from_interior(const SpectralDecomposition& d, const CVector& g,
                          const InteriorMesh* source_mesh,
                          const CVector* source_values) {
  Eigen::PartialPivLU<Matrix> lu(d.Stilde);
  const CVector sg = lu.solve(g);
  const int n = d.n();
  CVector out = -(0.5 * sg - d.Kstar.cast<Complex>() * sg);
  if (source_mesh != nullptr && source_values != nullptr) {
    // Riesz representer of T_f[phi] = -int_D f Stilde[phi] dx in H*.
    const int nq = source_mesh->n_triangles();
    const CVector fa =
        source_values->array() * source_mesh->areas.array().cast<Complex>();
    // Interior evaluation matrix of S, vectors M^T fa and (M phi0 + 1)^T fa.
    CVector Mt_fa = CVector::Zero(n);
    Complex c_phi0 = 0.0;
    for (int q = 0; q < nq; ++q) {
      double s_phi0_q = 0.0;
      for (int j = 0; j < n; ++j) {
        const double kern =
            std::log((source_mesh->centroids[q] - d.mesh.x[j]).norm()) /
            kTwoPi * d.w[j];
        Mt_fa[j] += kern * fa[q];
        s_phi0_q += kern * d.phi0[j];
      }
      c_phi0 += (s_phi0_q + 1.0) * fa[q];
    }
    const CVector r = -(Mt_fa - d.w.cast<Complex>() * c_phi0);
    Eigen::LLT<Matrix> llt(d.G);
    const CVector tf = llt.solve(r.real()).cast<Complex>() +
                       Complex(0.0, 1.0) * llt.solve(r.imag()).cast<Complex>();
    out += tf;
  }
  return out;
}

CVector eval_S_points(const BoundaryMesh& mesh, const CVector& density,
                      const std::vector<Vec2>& points) {
  CVector out(points.size());
  for (size_t p = 0; p < points.size(); ++p) {
    Complex acc = 0.0;
    for (int j = 0; j < mesh.n(); ++j)
      acc += std::log((points[p] - mesh.x[j]).norm()) / kTwoPi * mesh.w[j] *
             density[j];
    out[p] = acc;
  }
  return out;
}

Vector eval_S_points(const BoundaryMesh& mesh, const Vector& density,
                     const std::vector<Vec2>& points) {
  Vector out(points.size());
  for (size_t p = 0; p < points.size(); ++p) {
    double acc = 0.0;
    for (int j = 0; j < mesh.n(); ++j)
      acc += std::log((points[p] - mesh.x[j]).norm()) / kTwoPi * mesh.w[j] *
             density[j];
    out[p] = acc;
  }
  return out;
}

}  // namespace plasmoheat
