#include "plasmoheat/fd_oracle.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace plasmoheat {

namespace {

double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

}  // namespace

double FdField::value(double x, double y) const {
  const double h = 2.0 * L / nx;
  // Continuous index of the surrounding cell-centre square.
  const double fx = (x + L) / h - 0.5;
  const double fy = (y + L) / h - 0.5;
  const int ix = static_cast<int>(std::floor(fx));
  const int iy = static_cast<int>(std::floor(fy));
  const double ax = fx - ix, ay = fy - iy;
  auto at = [&](int i, int j) -> double {
    if (i < 0 || j < 0 || i >= nx || j >= nx) return 0.0;  // Dirichlet box
    return tau[i + nx * j];
  };
  return (1.0 - ax) * (1.0 - ay) * at(ix, iy) + ax * (1.0 - ay) * at(ix + 1, iy) +
         (1.0 - ax) * ay * at(ix, iy + 1) + ax * ay * at(ix + 1, iy + 1);
}

FdField fd_heat_solve(const FdSpec& spec,
                      const std::function<bool(double, double)>& inside,
                      double gamma_c, double gamma_m, double rho_c_c,
                      double rho_c_m,
                      const std::function<double(double, double)>& source,
                      double t_end) {
  const int nx = spec.nx;
  if (nx < 3) throw std::invalid_argument("fd_heat_solve: nx too small");
  if (!(spec.dt > 0.0) || !(t_end > 0.0))
    throw std::invalid_argument("fd_heat_solve: dt and t_end must be positive");
  const double L = spec.L;
  const double h = 2.0 * L / nx;
  const int nc = nx * nx;

  Vector gamma(nc), rho_c(nc), g(nc);
  for (int j = 0; j < nx; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double x = -L + (i + 0.5) * h;
      const double y = -L + (j + 0.5) * h;
      const bool in = inside(x, y);
      gamma[i + nx * j] = in ? gamma_c : gamma_m;
      rho_c[i + nx * j] = in ? rho_c_c : rho_c_m;
      g[i + nx * j] = source(x, y);
    }
  }

  // Face conductivities (E and N faces per cell; box edge keeps own gamma,
  // ghost value 0).
  auto face = [&](int idx, int nb_idx, bool has_nb) {
    return has_nb ? harmonic(gamma[idx], gamma[nb_idx]) : gamma[idx];
  };

  const int nsteps = std::max(1, static_cast<int>(std::lround(t_end / spec.dt)));
  const double dt = t_end / nsteps;

  Vector tau = Vector::Zero(nc);

  if (!spec.implicit) {
    // CFL bound for the explicit scheme.
    double dt_max = std::numeric_limits<double>::infinity();
    for (int j = 0; j < nx; ++j) {
      for (int i = 0; i < nx; ++i) {
        const int idx = i + nx * j;
        double s = face(idx, idx + 1, i + 1 < nx) + face(idx, idx - 1, i > 0) +
                   face(idx, idx + nx, j + 1 < nx) + face(idx, idx - nx, j > 0);
        dt_max = std::min(dt_max, rho_c[idx] * h * h / (2.0 * s));
      }
    }
    if (dt > dt_max) {
      std::ostringstream os;
      os << "fd_heat_solve: explicit step " << dt
         << " exceeds the stability bound " << dt_max;
      throw CflError(os.str());
    }
    Vector next(nc);
    for (int step = 0; step < nsteps; ++step) {
      for (int j = 0; j < nx; ++j) {
        for (int i = 0; i < nx; ++i) {
          const int idx = i + nx * j;
          auto nb = [&](int nbi, bool has) { return has ? tau[nbi] : 0.0; };
          const double flux =
              face(idx, idx + 1, i + 1 < nx) * (nb(idx + 1, i + 1 < nx) - tau[idx]) +
              face(idx, idx - 1, i > 0) * (nb(idx - 1, i > 0) - tau[idx]) +
              face(idx, idx + nx, j + 1 < nx) * (nb(idx + nx, j + 1 < nx) - tau[idx]) +
              face(idx, idx - nx, j > 0) * (nb(idx - nx, j > 0) - tau[idx]);
          next[idx] = tau[idx] + dt * (flux / (h * h) + g[idx]) / rho_c[idx];
        }
      }
      tau.swap(next);
    }
  } else {
    // Backward Euler: (rho_c/dt + A) tau_new = rho_c/dt tau_old + g, A SPD.
    using Trip = Eigen::Triplet<double>;
    std::vector<Trip> trips;
    trips.reserve(5 * static_cast<size_t>(nc));
    const double ih2 = 1.0 / (h * h);
    for (int j = 0; j < nx; ++j) {
      for (int i = 0; i < nx; ++i) {
        const int idx = i + nx * j;
        double diag = rho_c[idx] / dt;
        auto couple = [&](int nbi, bool has) {
          const double f = face(idx, nbi, has) * ih2;
          diag += f;
          if (has) trips.emplace_back(idx, nbi, -f);
        };
        couple(idx + 1, i + 1 < nx);
        couple(idx - 1, i > 0);
        couple(idx + nx, j + 1 < nx);
        couple(idx - nx, j > 0);
        trips.emplace_back(idx, idx, diag);
      }
    }
    Eigen::SparseMatrix<double> A(nc, nc);
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    solver.compute(A);
    if (solver.info() != Eigen::Success)
      throw ConditioningError("fd_heat_solve: factorization failed");
    for (int step = 0; step < nsteps; ++step) {
      Vector rhs = (rho_c.array() / dt * tau.array() + g.array()).matrix();
      tau = solver.solve(rhs);
    }
  }

  FdField out;
  out.L = L;
  out.nx = nx;
  out.t = t_end;
  out.tau = std::move(tau);
  return out;
}

}  // namespace plasmoheat
