#include <doctest.h>

#include <cmath>
#include <vector>

#include "plasmoheat/fd_oracle.hpp"
#include "plasmoheat/geometry.hpp"
#include "plasmoheat/heat.hpp"
#include "plasmoheat/np_core.hpp"
#include "plasmoheat/specfun.hpp"
#include "plasmoheat/types.hpp"

using namespace plasmoheat;

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;

HeatSource unit_source(const ParamCurve& curve, double h) {
  HeatSource src;
  src.mesh = mesh_interior(curve, h);
  src.g = Vector::Ones(src.mesh.n_triangles());
  return src;
}

// E1(u) + gamma + ln u, entire; 0 at u = 0.
double e1_entire(double u) {
  if (u == 0.0) return 0.0;
  if (u < 0.5) {
    double sum = 0.0, term = 1.0;
    for (int n = 1; n <= 30; ++n) {
      term *= -u / n;
      sum -= term / n;
    }
    return sum;
  }
  return expint_E1(u) + kEulerGamma + std::log(u);
}
}  // namespace

TEST_CASE("geometric time grid") {
  const Vector t = geometric_time_grid(10.0, 48, 1e-3);
  REQUIRE(t.size() == 48);
  CHECK(t[0] == 0.0);
  CHECK(t[1] == doctest::Approx(1e-2).epsilon(1e-12));
  CHECK(t[47] == doctest::Approx(10.0).epsilon(1e-12));
  const double ratio = t[2] / t[1];
  for (int k = 2; k + 1 < 48; ++k)
    CHECK(t[k + 1] / t[k] == doctest::Approx(ratio).epsilon(1e-10));
}

TEST_CASE("volume potential: kernel parameter scaling identity") {
  // F(x, t; b) = (1/b) F_1(x, b t): doubling b while halving t only rescales.
  const HeatSource src = unit_source(build_ellipse(0.8, 0.6, {0.2, 0.1}), 0.1);
  const std::vector<Vec2> pts = {{0.0, 0.0}, {1.5, 0.4}, {0.6, 0.0}};
  const Vector f2 = newtonian_F(src, 2.0, pts, 3.0);
  const Vector f1 = newtonian_F(src, 1.0, pts, 6.0);
  for (int p = 0; p < 3; ++p)
    CHECK(f2[p] == doctest::Approx(0.5 * f1[p]).epsilon(1e-13));
}

TEST_CASE("volume potential at a disk center: closed form and h-refinement") {
  // Unit disk, g = 1, b = 1:
  //   F(0, t) = (1/2) int_0^1 E1(r^2/4t) r dr
  //           = (1/4) E1(1/4t) + t (1 - exp(-1/4t)).
  for (double t : {0.1, 1.0, 10.0}) {
    const double exact =
        0.25 * expint_E1(1.0 / (4.0 * t)) +
        t * (1.0 - std::exp(-1.0 / (4.0 * t)));
    double prev = -1.0;
    for (double h : {0.16, 0.08}) {
      const HeatSource src = unit_source(build_ellipse(1.0, 1.0), h);
      const double got = newtonian_F(src, 1.0, {{0.0, 0.0}}, t)[0];
      const double err = std::abs(got - exact) / exact;
      if (prev > 0.0) CHECK(err < 0.5 * prev);  // ~O(h^2) boundary deficit
      prev = err;
    }
    CHECK(prev < 2e-3);
  }
}

TEST_CASE("boundary flux of the volume potential matches finite differences") {
  // Source strictly inside: F is then smooth across the particle boundary
  // and a 5-point normal stencil converges at fourth order.
  const ParamCurve outer = build_ellipse(1.3, 0.9);
  const BoundaryMesh bm = discretize({outer}, 64);
  const HeatSource src = unit_source(build_ellipse(0.5, 0.5), 0.1);
  const double eps = 2e-3;
  for (double t : {0.3, 1.5}) {
    const Vector dn = newtonian_dF(src, 1.0, bm, t);
    std::vector<Vec2> pts;
    for (int i = 0; i < bm.n(); i += 4)
      for (int s : {1, -1, 2, -2})
        pts.push_back(bm.x[i] + (s * eps) * bm.nu[i]);
    const Vector f = newtonian_F(src, 1.0, pts, t);
    int q = 0;
    for (int i = 0; i < bm.n(); i += 4, ++q) {
      const double d1 = f[4 * q] - f[4 * q + 1];
      const double d2 = f[4 * q + 2] - f[4 * q + 3];
      const double fd = (8.0 * d1 - d2) / (12.0 * eps);
      CHECK(std::abs(fd - dn[i]) < 1e-5 * std::abs(dn[i]));
    }
  }
}

TEST_CASE("single-layer heat potential: exact circle oracle") {
  // For a density that is 1 on the whole boundary and all of (0, t),
  //   V(x, t) = (1/4 pi b) oint E1(|x-y|^2 / 4bt) dsigma(y),
  // and on the unit circle |x - y|^2 = 4 sin^2(phi/2), so with u = sin^2/bt:
  //   V = (1/4 pi b) [ int_0^2pi (E1 + gamma + ln u) dphi - 2 pi gamma
  //                    + 2 pi ln(4 b t) ]
  // using int ln(4 sin^2(phi/2)) dphi = 0.  Trapezoid on the entire part is
  // spectrally exact, giving an oracle for the full E1/log-split machinery.
  // The angular width of the kernel at the earliest time, sqrt(b t_1), must
  // be resolved by the node spacing for the spectral rule to have converged.
  const double b = 0.7;
  const BoundaryMesh m = discretize({build_ellipse(1.0, 1.0)}, 96);
  const Vector t = geometric_time_grid(5.0, 16, 0.02);
  const Matrix Q = Matrix::Ones(m.n(), t.size() - 1);
  const Matrix V = heat_single_layer(m, b, t, Q);
  REQUIRE(V.rows() == m.n());
  REQUIRE(V.cols() == t.size());
  CHECK(V.col(0).cwiseAbs().maxCoeff() == 0.0);

  const int M = 8192;
  for (int k = 1; k < t.size(); ++k) {
    double entire = 0.0;
    for (int j = 0; j < M; ++j) {
      const double phi = kTwoPi * j / M;
      const double s = std::sin(0.5 * phi);
      entire += e1_entire(s * s / (b * t[k]));
    }
    entire *= kTwoPi / M;
    const double oracle =
        (entire - kTwoPi * kEulerGamma + kTwoPi * std::log(4.0 * b * t[k])) /
        (4.0 * kPi * b);
    for (int i = 0; i < m.n(); ++i)
      CHECK(V(i, k) == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("single-layer heat potential grows logarithmically, slope L/4pi b") {
  const BoundaryMesh m = discretize({build_ellipse(1.0, 1.0)}, 64);
  const Vector t = geometric_time_grid(500.0, 24, 1e-4);
  const Matrix Q = Matrix::Ones(m.n(), t.size() - 1);
  const Matrix V = heat_single_layer(m, 1.0, t, Q);
  // Regress V(x_0, t) on ln t over the last five (late) grid times.
  const int k0 = t.size() - 5;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = k0; k < t.size(); ++k) {
    const double lx = std::log(t[k]);
    sx += lx;
    sy += V(0, k);
    sxx += lx * lx;
    sxy += lx * V(0, k);
  }
  const int nn = t.size() - k0;
  const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  CHECK(slope == doctest::Approx(kTwoPi / (4.0 * kPi)).epsilon(0.02));
}

TEST_CASE("single-layer heat potential is causal") {
  const BoundaryMesh m = discretize({build_ellipse(1.2, 0.8)}, 32);
  const Vector t = geometric_time_grid(2.0, 8);
  Matrix Q = Matrix::Zero(m.n(), t.size() - 1);
  for (int c = 3; c < Q.cols(); ++c) Q.col(c).setOnes();
  const Matrix V = heat_single_layer(m, 1.0, t, Q);
  for (int k = 0; k <= 3; ++k) CHECK(V.col(k).cwiseAbs().maxCoeff() == 0.0);
  for (int k = 4; k < t.size(); ++k) CHECK(V.col(k).minCoeff() > 0.0);
}

TEST_CASE("boundary temperature: structure, symmetry, variant split") {
  const ParamCurve disk = build_ellipse(1.0, 1.0);
  const BoundaryMesh m = discretize({disk}, 96);
  const SpectralDecomposition d = eigendecompose(m);
  const HeatSource src = unit_source(build_ellipse(0.4, 0.4), 0.08);
  const ThermalParams tp;  // gold in water
  const Vector t = geometric_time_grid(2.0, 10);

  const TemperatureTrace a =
      temperature_boundary(d, src, tp, t, HeatVariant::kResolvent);
  const TemperatureTrace p =
      temperature_boundary(d, src, tp, t, HeatVariant::kResolventProjected);

  // t = 0 column vanishes; split is exact.
  CHECK(a.tau.col(0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(p.tau.col(0).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.tau - a.zeroth - a.first).cwiseAbs().maxCoeff() < 1e-12);

  // Concentric source on a disk: the flux load is the pure equilibrium
  // (half-space) mode, so the projected variant has no correction at all,
  // while the physical variant's correction is O(load / (lambda_g - 1/2)).
  CHECK(p.first.cwiseAbs().maxCoeff() <
        1e-9 * a.first.cwiseAbs().maxCoeff());
  CHECK(a.first.cwiseAbs().maxCoeff() > 0.0);

  // Radial symmetry: every column of tau is constant across nodes.  At the
  // earliest times the heat has not reached the boundary and tau underflows
  // to meaningless sub-epsilon values, so compare against the trace scale.
  const double scale = a.tau.cwiseAbs().maxCoeff();
  for (int k = 1; k < t.size(); ++k) {
    const double lo = a.tau.col(k).minCoeff(), hi = a.tau.col(k).maxCoeff();
    CHECK(hi - lo < 1e-7 * std::max(std::abs(hi), 1e-8 * scale));
  }

  // Reported spectral distance: the load couples only to lambda = 1/2.
  CHECK(a.dist_to_spectrum ==
        doctest::Approx(tp.lambda_gamma() - 0.5).epsilon(1e-6));
  CHECK(!a.near_singular);

  // Boundary totals: first row = zeroth + first.
  const Matrix tot = total_boundary_heat(m, a);
  REQUIRE(tot.rows() == 3);
  REQUIRE(tot.cols() == t.size());
  CHECK((tot.row(0) - tot.row(1) - tot.row(2)).cwiseAbs().maxCoeff() <
        1e-10 * tot.row(0).cwiseAbs().maxCoeff());
  // Temperature rises over time.
  for (int k = 1; k < t.size(); ++k) CHECK(tot(0, k) > tot(0, k - 1));
}

TEST_CASE("finite-difference oracle: CFL guard and scheme agreement") {
  FdSpec spec;
  spec.L = 2.0;
  spec.nx = 60;
  spec.implicit = false;
  spec.dt = 0.1;  // far above the diffusive limit h^2/4
  auto inside = [](double x, double y) { return x * x + y * y < 0.09; };
  auto source = [&](double x, double y) {
    return inside(x, y) ? 1.0 : 0.0;
  };
  CHECK_THROWS_AS(
      fd_heat_solve(spec, inside, 1.0, 1.0, 1.0, 1.0, source, 0.2), CflError);

  spec.dt = 1e-4;
  const FdField ex =
      fd_heat_solve(spec, inside, 1.0, 1.0, 1.0, 1.0, source, 0.2);
  spec.implicit = true;
  spec.dt = 2e-3;
  const FdField im =
      fd_heat_solve(spec, inside, 1.0, 1.0, 1.0, 1.0, source, 0.2);
  CHECK(ex.value(0.0, 0.0) > 0.0);
  CHECK(im.value(0.0, 0.0) ==
        doctest::Approx(ex.value(0.0, 0.0)).epsilon(0.02));
  // Interpolation agrees between neighbours (continuity sanity).
  CHECK(im.value(0.05, -0.02) ==
        doctest::Approx(im.value(0.05, -0.02 + 1e-6)).epsilon(1e-3));
}

TEST_CASE("heat source total power") {
  const HeatSource src = unit_source(build_ellipse(1.0, 1.0), 0.1);
  CHECK(src.total_power() ==
        doctest::Approx(src.mesh.total_area()).epsilon(1e-13));
}
