#include <doctest.h>

#include <cmath>
#include <vector>

#include "plasmoheat/geometry.hpp"
#include "plasmoheat/np_core.hpp"
#include "plasmoheat/plasmonic.hpp"
#include "plasmoheat/types.hpp"

using namespace plasmoheat;

namespace {
const Complex kImag(0.0, 1.0);
}

TEST_CASE("ellipse dipole couplings follow the parity of the eigenmodes") {
  const BoundaryMesh m = discretize({build_ellipse(3.0, 2.0)}, 128);
  const SpectralDecomposition d = eigendecompose(m);
  const CouplingSpectrum cs = coupling_spectrum(d);
  REQUIRE(cs.lambda.size() == d.n());

  // nu_x couples only to the even mode at +q/2, nu_y only to the odd mode at
  // -q/2 (q = 0.2); the half-space mode couples to neither.
  CHECK(std::abs(cs.cx[0]) < 1e-10);
  CHECK(std::abs(cs.cy[0]) < 1e-10);
  CHECK(std::abs(cs.cx[1]) > 0.5);
  CHECK(std::abs(cs.cy[1]) < 1e-10);
  CHECK(std::abs(cs.cy[2]) > 0.5);
  CHECK(std::abs(cs.cx[2]) < 1e-10);

  CHECK(strongest_coupled_mode(cs, {1.0, 0.0}) == 1);
  CHECK(strongest_coupled_mode(cs, {0.0, 1.0}) == 2);
  CHECK(cs.coupling_along(1, {0.6, 0.8}) ==
        doctest::Approx(std::abs(0.6 * cs.cx[1] + 0.8 * cs.cy[1]))
            .epsilon(1e-13));

  CHECK(resonant_lambda(d, 1) == Complex(d.lambda[1], 1e-3));
  CHECK(resonant_lambda(d, 2, 1e-2) == Complex(d.lambda[2], 1e-2));
}

TEST_CASE("inner field on a disk matches the Clausius-Mossotti closed form") {
  // On the unit disk every non-half-space eigenvalue vanishes, so the
  // resolvent of nu is nu/lambda and S[nu_x] = -x/2 inside:
  //   u(x) = u^i(z) + delta (x . grad u^i(z)) (1 - 1/(2 lambda)).
  const BoundaryMesh m = discretize({build_ellipse(1.0, 1.0)}, 96);
  const SpectralDecomposition d = eigendecompose(m);
  IncidentWave inc;
  inc.d = Vec2{0.8, 0.6};
  inc.k = 2.0;
  const Vec2 z{0.4, -0.3};
  const double delta = 0.07;
  const std::vector<Vec2> pts = {{0.0, 0.0}, {0.3, 0.2}, {-0.5, 0.1},
                                 {0.6, -0.35}};
  for (Complex lam : {Complex(0.8, 0.0), Complex(0.3, -0.2)}) {
    const FieldSolution fs =
        inner_field_asymptotic(d, pts, z, delta, lam, inc);
    REQUIRE(fs.u.size() == static_cast<int>(pts.size()));
    const Complex ui = inc.value(z);
    const auto [gx, gy] = inc.gradient(z);
    const Complex factor = 1.0 - 1.0 / (2.0 * lam);
    for (size_t p = 0; p < pts.size(); ++p) {
      const Complex expect =
          ui + delta * (pts[p].x * gx + pts[p].y * gy) * factor;
      CHECK(std::abs(fs.u[p] - expect) < 1e-9);
      // Physical location of the unit-frame point.
      CHECK((fs.points_phys[p] - (z + delta * pts[p])).norm() < 1e-14);
    }
  }
}

TEST_CASE("inner field splits exactly into zeroth plus first order") {
  const BoundaryMesh m = discretize({build_ellipse(1.5, 1.0)}, 96);
  const SpectralDecomposition d = eigendecompose(m);
  IncidentWave inc;
  inc.d = Vec2{1.0, 0.0};
  inc.k = 1.0;
  const std::vector<Vec2> pts = {{0.0, 0.0}, {0.4, 0.3}, {-0.8, 0.2}};
  const FieldSolution fs = inner_field_asymptotic(
      d, pts, {0.1, 0.2}, 0.05, Complex(0.15, 1e-3), inc);
  CHECK((fs.u - fs.zeroth - fs.first).norm() < 1e-13 * fs.u.norm());
}

TEST_CASE("inner field is equivariant under rotation of the whole setup") {
  const double rot = 0.7;
  const double cs = std::cos(rot), sn = std::sin(rot);
  auto rotate = [&](Vec2 v) {
    return Vec2{cs * v.x - sn * v.y, sn * v.x + cs * v.y};
  };

  const SpectralDecomposition d0 =
      eigendecompose(discretize({build_ellipse(1.5, 1.0)}, 96));
  const SpectralDecomposition d1 =
      eigendecompose(discretize({build_ellipse(1.5, 1.0, {0, 0}, rot)}, 96));

  IncidentWave inc0, inc1;
  inc0.d = Vec2{1.0, 0.0};
  inc1.d = rotate(inc0.d);
  inc0.k = inc1.k = 1.3;
  const Vec2 z{0.5, -0.2};
  const std::vector<Vec2> pts0 = {{0.2, 0.1}, {-0.6, 0.3}, {0.9, 0.0}};
  std::vector<Vec2> pts1;
  for (const Vec2& p : pts0) pts1.push_back(rotate(p));

  const Complex lam(0.12, 1e-3);
  const FieldSolution f0 =
      inner_field_asymptotic(d0, pts0, z, 0.06, lam, inc0);
  const FieldSolution f1 =
      inner_field_asymptotic(d1, pts1, rotate(z), 0.06, lam, inc1);
  for (int p = 0; p < 3; ++p) CHECK(std::abs(f0.u[p] - f1.u[p]) < 1e-9);
}

TEST_CASE("resonant first order dwarfs its far-detuned value") {
  const BoundaryMesh m = discretize({build_ellipse(1.5, 1.0)}, 96);
  const SpectralDecomposition d = eigendecompose(m);
  const CouplingSpectrum cs = coupling_spectrum(d);
  IncidentWave inc;
  inc.d = Vec2{1.0, 0.0};
  inc.k = 1.0;
  const int j = strongest_coupled_mode(cs, inc.d);
  const std::vector<Vec2> pts = {{0.3, 0.2}, {-0.4, 0.4}, {0.7, -0.1}};
  const FieldSolution on = inner_field_asymptotic(
      d, pts, {0, 0}, 0.05, resonant_lambda(d, j), inc);
  const FieldSolution off = inner_field_asymptotic(
      d, pts, {0, 0}, 0.05, Complex(10.0, 0.0), inc);
  CHECK(on.first.norm() > 100.0 * off.first.norm());
}

TEST_CASE("boundary intensity: symmetry, resonance, detuned limit") {
  const int n = 128;
  const BoundaryMesh m = discretize({build_ellipse(3.0, 2.0)}, n);
  const SpectralDecomposition d = eigendecompose(m);
  const CouplingSpectrum cs = coupling_spectrum(d);
  const Vec2 dir{1.0, 0.0};
  const int j = strongest_coupled_mode(cs, dir);

  const Vector u2 = u_squared_boundary(d, resonant_lambda(d, j), 1.0, dir);
  REQUIRE(u2.size() == n);
  // Incident along x on a mirror-symmetric shape: profile even in y.
  for (int i = 1; i < n / 2; ++i)
    CHECK(u2[i] == doctest::Approx(u2[n - i]).epsilon(1e-8));
  CHECK(u2.maxCoeff() > 10.0);

  // Far detuning: resolvent dies, |u|^2 -> 1.
  const Vector flat = u_squared_boundary(d, Complex(1e6, 0.0), 1.0, dir);
  CHECK((flat.array() - 1.0).abs().maxCoeff() < 1e-4);

  // Single-mode form reproduces the documented modulus expression.
  const Complex lam = resonant_lambda(d, j);
  const Vector single = u_squared_boundary(d, lam, 1.0, dir, j);
  Vector load(n);
  for (int i = 0; i < n; ++i) load[i] = m.nu[i].dot(dir);
  const double cj =
      hstar_inner(d.Stilde, d.w, load, Vector(d.phi.col(j)));
  const Vector sphi = d.S * d.phi.col(j);
  const double gap = std::abs(lam - Complex(d.lambda[j], 0.0));
  for (int i = 0; i < n; ++i) {
    const double expect = std::pow(1.0 + cj * sphi[i] / gap, 2.0);
    CHECK(single[i] == doctest::Approx(expect).epsilon(1e-8));
  }

  // Off-boundary variant agrees with the same formula at exterior points.
  const Vector upts = u_squared_points(d, lam, 1.0, dir, {{4.0, 0.0}});
  CHECK(upts[0] > 0.0);
}

TEST_CASE("drude permittivity") {
  DrudeParams p;
  p.eps_inf = 9.84;
  p.omega_p = 1.36e16;
  p.gamma = 1.0e14;
  const double w = 4.0e15;
  const Complex eps = drude_epsilon(w, p);
  const Complex expect =
      9.84 - 1.36e16 * 1.36e16 / (w * w + kImag * 1.0e14 * w);
  CHECK(std::abs(eps - expect) < 1e-10 * std::abs(expect));
  // Real part strongly negative in the optical range; loss term positive.
  CHECK(eps.real() < -1.0);
  CHECK(eps.imag() > 0.0);
}
