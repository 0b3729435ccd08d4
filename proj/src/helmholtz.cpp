#include "plasmoheat/helmholtz.hpp"

#include <cmath>

#include "plasmoheat/specfun.hpp"

namespace plasmoheat {
namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;
const Complex kI(0.0, 1.0);

void require_nonzero(Complex k, const char* who) {
  if (k == Complex(0.0, 0.0))
    throw std::invalid_argument(std::string(who) + ": k must be nonzero");
}
}  // namespace

WaveParams WaveParams::from_lambda(Complex lambda_eps, double eps_m,
                                   double k_m) {
  WaveParams wp;
  wp.eps_m = eps_m;
  wp.eps_c = eps_m * (2.0 * lambda_eps + 1.0) / (2.0 * lambda_eps - 1.0);
  wp.mu_c = wp.mu_m = 1.0;
  wp.omega = k_m / std::sqrt(eps_m);
  return wp;
}

CMatrix assemble_Sk(const BoundaryMesh& mesh, Complex k) {
  require_nonzero(k, "assemble_Sk");
  const int n = mesh.n();
  const SeriesCoefficients sc = series_coefficients(k, 0);
  CMatrix S(n, n);
  for (int cc = 0; cc < mesh.n_components(); ++cc) {
    const auto [cb, ce] = mesh.comp_range[cc];
    const int N = ce - cb;
    const Matrix R = kress_log_weights(N);
    for (int i = cb; i < ce; ++i) {
      for (int j = cb; j < ce; ++j) {
        const double sp = mesh.speed[j];
        if (i == j) {
          // Smooth-part diagonal: tau_k + ln|x'(t)|/(2pi); the log-split
          // coefficient for the kernel -(i/4)H0, whose singular part is
          // +(1/2pi)ln r, is M1(t,t) = +J0(0)/(4pi) = +1/(4pi).
          const Complex h2 = sc.tau_k + std::log(sp) / kTwoPi;
          S(i, i) = (R(i - cb, i - cb) / (4.0 * kPi) + (kTwoPi / N) * h2) * sp;
          continue;
        }
        const double r = (mesh.x[i] - mesh.x[j]).norm();
        const double s4 =
            4.0 * std::pow(std::sin(0.5 * (mesh.theta[i] - mesh.theta[j])), 2);
        const Complex m1 = bessel_J0(k * r) / (4.0 * kPi);
        const Complex full = -0.25 * kI * hankel1_0(k * r);
        const Complex h2 = full - m1 * std::log(s4);
        S(i, j) = (m1 * R(i - cb, j - cb) + (kTwoPi / N) * h2) * sp;
      }
    }
    for (int i = 0; i < n; ++i) {
      if (mesh.comp[i] == cc) continue;
      for (int j = cb; j < ce; ++j) {
        const double r = (mesh.x[i] - mesh.x[j]).norm();
        S(i, j) = -0.25 * kI * hankel1_0(k * r) * mesh.w[j];
      }
    }
  }
  return S;
}

CMatrix assemble_Kstar_k(const BoundaryMesh& mesh, Complex k) {
  require_nonzero(k, "assemble_Kstar_k");
  const int n = mesh.n();
  CMatrix K(n, n);
  for (int cc = 0; cc < mesh.n_components(); ++cc) {
    const auto [cb, ce] = mesh.comp_range[cc];
    const int N = ce - cb;
    const Matrix R = kress_log_weights(N);
    for (int i = cb; i < ce; ++i) {
      for (int j = cb; j < ce; ++j) {
        const double sp = mesh.speed[j];
        if (i == j) {
          K(i, i) = Complex(mesh.curvature[i] / (4.0 * kPi) * (kTwoPi / N) * sp,
                            0.0);
          continue;
        }
        const Vec2 dx = mesh.x[i] - mesh.x[j];
        const double r = dx.norm();
        const double h = dx.dot(mesh.nu[i]) / r;
        const double s4 =
            4.0 * std::pow(std::sin(0.5 * (mesh.theta[i] - mesh.theta[j])), 2);
        const Complex k1 = -k * bessel_J1(k * r) * h / (4.0 * kPi);
        const Complex full = 0.25 * kI * k * hankel1_1(k * r) * h;
        const Complex k2 = full - k1 * std::log(s4);
        K(i, j) = (k1 * R(i - cb, j - cb) + (kTwoPi / N) * k2) * sp;
      }
    }
    for (int i = 0; i < n; ++i) {
      if (mesh.comp[i] == cc) continue;
      for (int j = cb; j < ce; ++j) {
        const Vec2 dx = mesh.x[i] - mesh.x[j];
        const double r = dx.norm();
        K(i, j) =
            0.25 * kI * k * hankel1_1(k * r) * (dx.dot(mesh.nu[i]) / r) *
            mesh.w[j];
      }
    }
  }
  return K;
}

SeriesCoefficients series_coefficients(Complex k, int J) {
  SeriesCoefficients sc;
  sc.tau_k = (std::log(k) + kEulerGamma - std::log(2.0)) / kTwoPi - 0.25 * kI;
  double Hj = 0.0, fact = 1.0;
  for (int j = 1; j <= J; ++j) {
    Hj += 1.0 / j;
    fact *= j;
    const double bj =
        ((j % 2 == 0) ? 1.0 : -1.0) / (kTwoPi * std::pow(4.0, j) * fact * fact);
    sc.b.push_back(bj);
    // Note: +b_j, not the often-misprinted -b_j; see the series round-trip
    // test against direct Hankel evaluation.
    sc.c.push_back(bj * Complex(kEulerGamma - std::log(2.0) - Hj, -0.5 * kPi));
  }
  return sc;
}

CMatrix series_Sk(const BoundaryMesh& mesh, const Matrix& S, Complex k, int J) {
  require_nonzero(k, "series_Sk");
  const int n = mesh.n();
  const SeriesCoefficients sc = series_coefficients(k, J);
  CMatrix out = S.cast<Complex>() +
                sc.tau_k * (CVector::Ones(n) * mesh.w.transpose().cast<Complex>());
  const Complex logk = std::log(k);
  Complex k2j(1.0, 0.0);
  for (int j = 1; j <= J; ++j) {
    k2j *= k * k;
    // S1_j has kernel b_j r^{2j}; S2_j has kernel r^{2j}(b_j ln r + c_j).
    // Both vanish at the diagonal (j >= 1); the ln r part goes through the
    // same log-split as the Laplace kernel.
    for (int cc = 0; cc < mesh.n_components(); ++cc) {
      const auto [cb, ce] = mesh.comp_range[cc];
      const int N = ce - cb;
      const Matrix R = kress_log_weights(N);
      for (int i = 0; i < n; ++i) {
        for (int jj = (mesh.comp[i] == cc ? cb : cb); jj < ce; ++jj) {
          if (i == jj) continue;
          const double r2 = (mesh.x[i] - mesh.x[jj]).squared_norm();
          const double r2j = std::pow(r2, j);
          const double s1 = sc.b[j - 1] * r2j;
          if (mesh.comp[i] == cc) {
            const double s4 = 4.0 * std::pow(
                std::sin(0.5 * (mesh.theta[i] - mesh.theta[jj])), 2);
            // ln r = (1/2)[ln(4 sin^2) + ln(r^2/(4 sin^2))]
            const double smooth_log = 0.5 * std::log(r2 / s4);
            const Complex s2_smooth =
                r2j * (sc.b[j - 1] * smooth_log + sc.c[j - 1]);
            const double s2_logcoef = 0.5 * sc.b[j - 1] * r2j;
            const double sp = mesh.speed[jj];
            out(i, jj) += k2j * logk * s1 * (kTwoPi / N) * sp;
            out(i, jj) += k2j * (s2_logcoef * R(i - cb, jj - cb) +
                                 (kTwoPi / N) * s2_smooth) *
                          sp;
          } else {
            const Complex s2 =
                r2j * (sc.b[j - 1] * 0.5 * std::log(r2) + sc.c[j - 1]);
            out(i, jj) += k2j * (logk * s1 + s2) * mesh.w[jj];
          }
        }
      }
    }
  }
  return out;
}

CVector upsilon_apply(const SpectralDecomposition& d, Complex k,
                      const CVector& phi) {
  require_nonzero(k, "upsilon_apply");
  const SeriesCoefficients sc = series_coefficients(k, 0);
  const Complex mean = (phi.array() * d.w.array().cast<Complex>()).sum();
  return mean * (d.s_phi0 + 1.0 + sc.tau_k) * CVector::Ones(d.n());
}

CMatrix inv_Sk_asymptotic(const SpectralDecomposition& d, Complex k,
                          int order) {
  require_nonzero(k, "inv_Sk_asymptotic");
  const int n = d.n();
  const SeriesCoefficients sc = series_coefficients(k, std::max(1, order - 1));
  const Matrix Sinv = d.Stilde.partialPivLu().inverse();
  const Matrix P =
      Matrix::Identity(n, n) - d.phi0 * d.w.transpose();  // removes phi0 part
  const Matrix PS = P * Sinv;
  CMatrix out = PS.cast<Complex>();
  // U_k = -phi0 (w^T Stilde^{-1} .) / (S[phi0] + tau_k)
  out -= (d.phi0 * (d.w.transpose() * Sinv)).cast<Complex>() /
         (Complex(d.s_phi0, 0.0) + sc.tau_k);
  if (order >= 2) {
    Matrix S1(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        S1(i, j) = sc.b[0] * (i == j ? 0.0
                                     : (d.mesh.x[i] - d.mesh.x[j]).squared_norm()) *
                   d.w[j];
    out -= (k * k * std::log(k)) * (PS * S1 * PS).cast<Complex>();
  }
  return out;
}

TransmissionSolution solve_transmission(const BoundaryMesh& mesh,
                                        const WaveParams& wp,
                                        const IncidentWave& inc) {
  const int n = mesh.n();
  const Complex km(wp.k_m(), 0.0), kc = wp.k_c();
  const CMatrix Sm = assemble_Sk(mesh, km), Sc = assemble_Sk(mesh, kc);
  const CMatrix Km = assemble_Kstar_k(mesh, km), Kc = assemble_Kstar_k(mesh, kc);
  const CMatrix I = CMatrix::Identity(n, n);

  CMatrix A(2 * n, 2 * n);
  A.topLeftCorner(n, n) = Sm;
  A.topRightCorner(n, n) = -Sc;
  A.bottomLeftCorner(n, n) = wp.eps_m * (0.5 * I + Km);
  A.bottomRightCorner(n, n) = wp.eps_c * (0.5 * I - Kc);

  CVector rhs(2 * n);
  for (int i = 0; i < n; ++i) {
    rhs[i] = -inc.value(mesh.x[i]);
    rhs[n + i] = -wp.eps_m * inc.normal_derivative(mesh.x[i], mesh.nu[i]);
  }
  Eigen::PartialPivLU<CMatrix> lu(A);
  const CVector sol = lu.solve(rhs);
  TransmissionSolution ts;
  ts.psi = sol.head(n);
  ts.phi = sol.tail(n);
  ts.residual = (A * sol - rhs).norm() / rhs.norm();
  if (!sol.allFinite() || ts.residual > 1e-8)
    throw ConditioningError("solve_transmission: linear system ill-conditioned");
  return ts;
}

CVector eval_Sk_points(const BoundaryMesh& mesh, Complex k,
                       const CVector& density,
                       const std::vector<Vec2>& points) {
  require_nonzero(k, "eval_Sk_points");
  CVector out(points.size());
  for (size_t p = 0; p < points.size(); ++p) {
    Complex acc = 0.0;
    for (int j = 0; j < mesh.n(); ++j) {
      const double r = (points[p] - mesh.x[j]).norm();
      acc += -0.25 * kI * hankel1_0(k * r) * mesh.w[j] * density[j];
    }
    out[p] = acc;
  }
  return out;
}

CVector eval_field(const BoundaryMesh& mesh, const TransmissionSolution& sol,
                   const WaveParams& wp, const IncidentWave& inc,
                   const std::vector<Vec2>& points,
                   const std::vector<bool>& inside) {
  if (points.size() != inside.size())
    throw std::invalid_argument("eval_field: points/inside size mismatch");
  std::vector<Vec2> pin, pout;
  std::vector<size_t> iin, iout;
  for (size_t p = 0; p < points.size(); ++p) {
    if (inside[p]) {
      pin.push_back(points[p]);
      iin.push_back(p);
    } else {
      pout.push_back(points[p]);
      iout.push_back(p);
    }
  }
  CVector out(points.size());
  if (!pin.empty()) {
    const CVector ui = eval_Sk_points(mesh, wp.k_c(), sol.phi, pin);
    for (size_t q = 0; q < iin.size(); ++q) out[iin[q]] = ui[q];
  }
  if (!pout.empty()) {
    const CVector us = eval_Sk_points(mesh, Complex(wp.k_m(), 0.0), sol.psi,
                                      pout);
    for (size_t q = 0; q < iout.size(); ++q)
      out[iout[q]] = us[q] + inc.value(pout[q]);
  }
  return out;
}

}  // namespace plasmoheat
