// Acceptance gate: one check per shipped guarantee.  Each criterion prints a
// single PASS/FAIL line with the measured value and its tolerance; the
// process exits 0 only when every line passes.  Everything is cross-checked
// against an independent oracle: closed forms, finite differences, a
// finite-difference heat solver, or the CLI binary itself.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "plasmoheat/commands.hpp"
#include "plasmoheat/fd_oracle.hpp"
#include "plasmoheat/geometry.hpp"
#include "plasmoheat/heat.hpp"
#include "plasmoheat/helmholtz.hpp"
#include "plasmoheat/np_core.hpp"
#include "plasmoheat/plasmonic.hpp"

namespace fs = std::filesystem;
using namespace plasmoheat;

namespace {

int g_failures = 0;

void record(const std::string& name, bool pass, const std::string& detail) {
  if (!pass) ++g_failures;
  std::printf("%s  %-28s %s\n", pass ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  std::fflush(stdout);
}

template <class Fn>
void criterion(const std::string& name, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    fn();
  } catch (const std::exception& e) {
    record(name, false, std::string("exception: ") + e.what());
  }
  const double dt =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::printf("      (%.1f s)\n", dt);
  std::fflush(stdout);
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

// --- 1. thermal contrast parameter for gold in water ------------------------

void thermal_contrast() {
  ThermalParams tp;
  tp.gamma_c = 318.0;
  tp.gamma_m = 0.6;
  const double lg = tp.lambda_gamma();
  const double err = std::abs(lg - 0.5019);
  record("thermal_contrast", err <= 1e-4,
         "lambda_gamma(318, 0.6) = " + sci(lg) + ", |. - 0.5019| = " +
             sci(err) + " (tol 1e-4)");
}

// --- 2./3. NP spectrum of the 3:2 ellipse + Calderon identity ---------------

void ellipse_spectrum_and_calderon() {
  const BoundaryMesh mesh = discretize({build_ellipse(1.5, 1.0)}, 256);
  const SpectralDecomposition d = eigendecompose(mesh);

  // Analytic spectrum +-(1/2) q^n with q = (a-b)/(a+b) = 0.2; compare the
  // nearest computed eigenvalue to each analytic one, n = 1..5, both signs.
  double worst = 0.0;
  for (int n = 1; n <= 5; ++n) {
    const double target = 0.5 * std::pow(0.2, n);
    for (const double sign : {1.0, -1.0}) {
      double best = 1e300;
      for (int j = 0; j < d.n(); ++j)
        best = std::min(best, std::abs(d.lambda[j] - sign * target));
      worst = std::max(worst, best);
    }
  }
  record("ellipse_np_spectrum", worst <= 1e-3,
         "max |lambda - (+-1/2)(0.2)^n|, n=1..5: " + sci(worst) +
             " (tol 1e-3, 256 nodes)");

  record("calderon_identity", d.calderon_residual <= 1e-8,
         "relative ||Stilde K* - K Stilde|| = " + sci(d.calderon_residual) +
             " (tol 1e-8, 256 nodes)");
}

// --- 4. small-k operator expansion rates ------------------------------------

void small_k_rates() {
  const BoundaryMesh mesh = discretize({build_ellipse(1.5, 1.0)}, 128);
  const SpectralDecomposition d = eigendecompose(mesh);
  const int n = mesh.n();

  std::vector<double> xs, r_series, r_inv;
  for (const double k : {1e-2, 1e-3, 1e-4}) {
    const CMatrix Sk = assemble_Sk(mesh, Complex(k, 0.0));
    const CMatrix lead = series_Sk(mesh, d.S, Complex(k, 0.0), 0);
    r_series.push_back((Sk - lead).cwiseAbs().maxCoeff());

    const CMatrix X = inv_Sk_asymptotic(d, Complex(k, 0.0), 1);
    const CMatrix R = Sk * X - CMatrix::Identity(n, n);
    r_inv.push_back(R.cwiseAbs().maxCoeff());

    xs.push_back(k * k * std::abs(std::log(k)));
  }
  const double s1 = log_log_slope(xs, r_series);
  const double s2 = log_log_slope(xs, r_inv);
  const bool ok = std::abs(s1 - 1.0) <= 0.1 && std::abs(s2 - 1.0) <= 0.1;
  record("small_k_series_rates", ok,
         "||S^k - (Stilde+Upsilon_k)|| ~ (k^2 log k)^" + sci(s1) +
             ", inverse residual rate " + sci(s2) +
             " (each within 10% of 1, k in {1e-2,1e-3,1e-4})");
}

// --- 5. inner-field asymptotics vs transmission BIE -------------------------

void inner_field_convergence() {
  const ParamCurve B = build_ellipse(1.5, 1.0);
  const double diam = B.diameter();
  const BoundaryMesh meshB = discretize({B}, 192);
  const SpectralDecomposition dB = eigendecompose(meshB);

  const Vec2 dir{1.0, 0.0};
  const CouplingSpectrum cs = coupling_spectrum(dB);
  const int j = strongest_coupled_mode(cs, dir);
  const Complex lam_eps(dB.lambda[j], 0.05);  // dist to spectrum = 0.05
  const double k_m = 0.5;
  const Vec2 z{0.0, 0.0};
  const IncidentWave inc{dir, k_m};

  // Interior sample: centroids with elliptic radius <= 0.85 (the BIE field
  // evaluation uses plain quadrature, inaccurate within ~2 node spacings of
  // the boundary; the cutoff is fixed in the unit frame so the measure is
  // identical across delta).
  const InteriorMesh im = mesh_interior(B, 0.12);
  std::vector<Vec2> pts;
  std::vector<double> wts;
  for (int q = 0; q < im.n_triangles(); ++q) {
    const Vec2 c = im.centroids[q];
    if (std::hypot(c.x / 1.5, c.y) <= 0.85) {
      pts.push_back(c);
      wts.push_back(im.areas[q]);
    }
  }

  std::vector<double> deltas, errs;
  for (const double frac : {0.04, 0.02, 0.01}) {
    const double delta = frac * diam;
    const BoundaryMesh meshD = discretize({B.scaled(delta, z)}, 192);
    const WaveParams wp = WaveParams::from_lambda(lam_eps, 1.0, k_m);
    const TransmissionSolution sol = solve_transmission(meshD, wp, inc);

    std::vector<Vec2> phys(pts.size());
    for (size_t q = 0; q < pts.size(); ++q) phys[q] = z + delta * pts[q];
    const CVector u_bie = eval_field(meshD, sol, wp, inc, phys,
                                     std::vector<bool>(pts.size(), true));
    const FieldSolution fsol =
        inner_field_asymptotic(dB, pts, z, delta, lam_eps, inc);

    // L2(D) carries the physical measure (area element delta^2 w): the
    // remainder under test is the expansion's own norm, where the retained
    // terms weigh delta and delta^2 and the remainder delta^3.  A pointwise
    // normalisation would divide the delta from |D|^(1/2) back out and cap
    // the observable order at 2 (the formula keeps u^i only to linear
    // order), so it cannot verify the delta^3 statement.
    double num = 0.0;
    for (size_t q = 0; q < pts.size(); ++q)
      num += wts[q] * std::norm(u_bie[q] - fsol.u[q]);
    deltas.push_back(delta);
    errs.push_back(delta * std::sqrt(num));
  }
  const double order = log_log_slope(deltas, errs);
  std::ostringstream os;
  os << "L2(D) err " << sci(errs[0]) << " -> " << sci(errs[2])
     << " over delta/diam {0.04,0.02,0.01}, fitted order " << sci(order)
     << " (need >= 2.5, dist = 0.05, |u^i| = 1)";
  record("inner_field_convergence", order >= 2.5, os.str());
}

// --- 6. resonant enhancement of the first-order field term ------------------

void resonant_enhancement() {
  const ParamCurve B = build_ellipse(1.5, 1.0);
  const BoundaryMesh meshB = discretize({B}, 128);
  const SpectralDecomposition dB = eigendecompose(meshB);
  const Vec2 dir{1.0, 0.0};
  const int j = strongest_coupled_mode(coupling_spectrum(dB), dir);
  const IncidentWave inc{dir, 1.0};

  const InteriorMesh im = mesh_interior(B, 0.15);
  std::vector<Vec2> pts = im.centroids;

  const FieldSolution on = inner_field_asymptotic(
      dB, pts, {0.0, 0.0}, 0.05, resonant_lambda(dB, j), inc);
  const FieldSolution off = inner_field_asymptotic(
      dB, pts, {0.0, 0.0}, 0.05, Complex(10.0, 0.0), inc);
  const double ratio = on.first.norm() / off.first.norm();
  record("resonant_enhancement", ratio >= 100.0,
         "first-order term at lambda_j + 0.001i vs |lambda| = 10: ratio = " +
             sci(ratio) + " (need >= 100)");
}

// --- 7. boundary flux closed form vs finite differences ---------------------

void flux_vs_finite_differences() {
  const BoundaryMesh mesh = discretize({build_ellipse(1.3, 0.9)}, 64);
  HeatSource src;
  src.mesh = mesh_interior(build_ellipse(0.55, 0.55), 0.08);
  src.g = Vector::Ones(src.mesh.n_triangles());
  const double b = 1.0;
  const double eps = 2e-3;

  double worst = 0.0;
  for (const double t : {0.25, 0.5, 1.0, 2.0}) {
    const Vector dF = newtonian_dF(src, b, mesh, t);
    const double scale = dF.cwiseAbs().maxCoeff();

    std::vector<Vec2> stencil;  // x + s*eps*nu for s in {1,-1,2,-2}, 32 nodes
    for (int i = 0; i < mesh.n(); i += 2)
      for (const double s : {1.0, -1.0, 2.0, -2.0})
        stencil.push_back(mesh.x[i] + (s * eps) * mesh.nu[i]);
    const Vector F = newtonian_F(src, b, stencil, t);

    int q = 0;
    for (int i = 0; i < mesh.n(); i += 2, q += 4) {
      const double fd =
          (8.0 * (F[q] - F[q + 1]) - (F[q + 2] - F[q + 3])) / (12.0 * eps);
      worst = std::max(worst, std::abs(fd - dF[i]) / scale);
    }
  }
  record("flux_formula_vs_fd", worst <= 1e-4,
         "max rel |dF/dnu - 5pt FD| over 32 nodes x 4 times = " + sci(worst) +
             " (tol 1e-4)");
}

// --- 8. long-time behaviour of the boundary heat totals ---------------------

void heat_totals_long_time() {
  // Elliptic particle: dF/dnu then has angular structure beyond the constant
  // mode, so the projected correction carries a genuine (convergent) signal
  // while the zeroth-order total keeps its logarithmic growth.
  const BoundaryMesh mesh = discretize({build_ellipse(0.18, 0.12)}, 96);
  const SpectralDecomposition d = eigendecompose(mesh);
  HeatSource src;
  src.mesh = mesh_interior(build_ellipse(0.06, 0.06), 0.012);
  src.g = Vector::Ones(src.mesh.n_triangles());
  ThermalParams tp;  // gold/water conductivities; kernel b = 1 (nondim)
  tp.gamma_c = 318.0;
  tp.gamma_m = 0.6;

  const Vector t = geometric_time_grid(10.0, 28, 0.01);  // t_1 = 0.1
  const TemperatureTrace tr = temperature_boundary(
      d, src, tp, t, HeatVariant::kResolventProjected, 1.0);
  const Matrix totals = total_boundary_heat(mesh, tr);  // rows: tau, 0th, 1st

  std::vector<double> lt, zeroth;
  for (int m = 1; m < t.size(); ++m) {
    lt.push_back(std::log(t[m]));
    zeroth.push_back(totals(1, m));
  }
  const LineFit lf = fit_line(lt, zeroth);

  // First-order total: increments between consecutive grid times (equal
  // log-spacing) must die out over t in [1, 10].
  double inc_max = 0.0, inc_last = 0.0;
  for (int m = 1; m + 1 < t.size(); ++m) {
    if (t[m] < 1.0) continue;
    inc_last = std::abs(totals(2, m + 1) - totals(2, m));
    inc_max = std::max(inc_max, inc_last);
  }
  const bool ok = lf.r2 >= 0.99 && inc_last <= 0.25 * inc_max;
  std::ostringstream os;
  os << "zeroth total vs log t: R^2 = " << sci(lf.r2)
     << " (need >= 0.99, t in [0.1,10]); first-order increments "
     << sci(inc_max) << " -> " << sci(inc_last) << " (need last <= 0.25 max)";
  record("heat_totals_long_time", ok, os.str());
}

// --- 9. finite-difference oracle adjudicates the correction variant ---------

void fd_variant_match() {
  const double R = 0.15, Rsrc = 0.09;
  const BoundaryMesh mesh = discretize({build_ellipse(R, R)}, 96);
  const SpectralDecomposition d = eigendecompose(mesh);
  HeatSource src;
  src.mesh = mesh_interior(build_ellipse(Rsrc, Rsrc), 0.018);
  src.g = Vector::Ones(src.mesh.n_triangles());
  // Gold-in-water constants, nondimensionalised so the background (water)
  // diffusivity is 1 -- that is the kernel b.  Heat capacities keep the
  // physical gold/water ratio 2.49/4.18.
  ThermalParams tp;
  tp.gamma_c = 318.0;
  tp.gamma_m = 0.6;
  tp.rho_c_m = 0.6;                  // b_m = 1
  tp.rho_c_c = 0.6 * (2.49 / 4.18);  // ~0.357: the particle stores less heat

  const Vector t = geometric_time_grid(1.0, 20, 0.01);
  const TemperatureTrace phys =
      temperature_boundary(d, src, tp, t, HeatVariant::kResolvent, 1.0);
  const TemperatureTrace proj = temperature_boundary(
      d, src, tp, t, HeatVariant::kResolventProjected, 1.0);

  // Oracle: two-phase conduction with the same constants.  The boundary
  // formulation works with the reduced source g/gamma_c, so the deposited
  // power handed to the grid solver is gamma_c * g.  The box wall sits well
  // beyond the diffusion length sqrt(4 t_end) = 2 (influence < 1% at t = 1).
  FdSpec spec;
  spec.L = 3.2;
  spec.nx = 640;
  spec.dt = 1.0 / 256.0;
  spec.implicit = true;
  const FdField fd = fd_heat_solve(
      spec, [&](double x, double y) { return x * x + y * y < R * R; },
      tp.gamma_c, tp.gamma_m, tp.rho_c_c, tp.rho_c_m,
      [&](double x, double y) {
        return x * x + y * y < Rsrc * Rsrc ? tp.gamma_c : 0.0;
      },
      1.0);

  // tau is constant on the circle to leading order; compare boundary means
  // so the grid's interface staircase averages out.
  double fd_mean = 0.0, phys_mean = 0.0, proj_mean = 0.0;
  const int last = static_cast<int>(t.size()) - 1;
  for (int i = 0; i < mesh.n(); ++i) {
    fd_mean += fd.value(mesh.x[i].x, mesh.x[i].y);
    phys_mean += phys.tau(i, last);
    proj_mean += proj.tau(i, last);
  }
  fd_mean /= mesh.n();
  phys_mean /= mesh.n();
  proj_mean /= mesh.n();
  const double err_phys = std::abs(phys_mean - fd_mean) / std::abs(fd_mean);
  const double err_proj = std::abs(proj_mean - fd_mean) / std::abs(fd_mean);
  const bool resolvent_matches = err_phys < err_proj;
  const double best = std::min(err_phys, err_proj);
  std::ostringstream os;
  os << "boundary-mean rel err at t=1: resolvent " << sci(err_phys)
     << ", projected " << sci(err_proj) << "; matching variant: "
     << (resolvent_matches ? "resolvent" : "projected") << " (tol 5%)";
  record("fd_variant_match", best <= 0.05, os.str());
}

// --- 10. close-to-touching disks: eigenvalue gap exponent -------------------

void gap_exponent() {
  std::vector<double> zetas = {0.05, 0.025, 0.0125};
  std::vector<double> gaps;
  for (const double zeta : zetas) {
    const double c = 1.0 + zeta / 2.0;
    const BoundaryMesh mesh = discretize(
        {build_ellipse(1.0, 1.0, {-c, 0.0}), build_ellipse(1.0, 1.0, {c, 0.0})},
        768);
    const SpectralDecomposition d = eigendecompose(mesh);
    double top = -1.0;
    for (int j = 0; j < d.n(); ++j) {
      if (std::abs(d.lambda[j] - 0.5) <= 1e-6) continue;  // half-space modes
      top = std::max(top, d.lambda[j]);
    }
    gaps.push_back(0.5 - top);
  }
  const double expo = log_log_slope(zetas, gaps);
  const bool ok = expo >= 0.4 && expo <= 0.6;
  record("two_disk_gap_exponent", ok,
         "1/2 - lambda_top ~ zeta^" + sci(expo) +
             " over zeta in {0.05,0.025,0.0125} (need within [0.4, 0.6])");
}

// --- 11. CLI validate suite + byte-identical re-runs ------------------------

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string("\"") + PLASMOHEAT_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void cli_validate_determinism() {
  const fs::path cfgdir = PLASMOHEAT_CONFIG_DIR;
  const fs::path root = fs::temp_directory_path() / "plasmoheat_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);

  std::vector<std::string> failed;
  for (const auto& entry : fs::directory_iterator(cfgdir)) {
    if (entry.path().extension() != ".json") continue;
    const std::string name = entry.path().stem().string();
    const int rc = run_cli("validate --config " + entry.path().string() +
                           " --out " + (root / ("val_" + name)).string());
    if (rc != 0) failed.push_back(name + " (exit " + std::to_string(rc) + ")");
  }

  bool identical = true;
  for (const std::string name : {"single_particle", "two_particles"}) {
    const fs::path a = root / (name + "_a"), b = root / (name + "_b");
    const std::string cfg = (cfgdir / (name + ".json")).string();
    if (run_cli("spectrum --config " + cfg + " --out " + a.string()) != 0 ||
        run_cli("spectrum --config " + cfg + " --out " + b.string()) != 0) {
      identical = false;
      continue;
    }
    identical = identical && slurp_file(a / "spectrum.csv") ==
                                 slurp_file(b / "spectrum.csv") &&
                !slurp_file(a / "spectrum.csv").empty();
  }

  std::ostringstream os;
  if (failed.empty())
    os << "validate green on all shipped configs";
  else {
    os << "validate failed for:";
    for (const auto& f : failed) os << " " << f;
  }
  os << "; spectrum.csv re-run " << (identical ? "byte-identical" : "DIFFERS");
  record("cli_validate_determinism", failed.empty() && identical, os.str());
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion("thermal_contrast", thermal_contrast);
  criterion("ellipse_np_spectrum", ellipse_spectrum_and_calderon);
  criterion("small_k_series_rates", small_k_rates);
  criterion("inner_field_convergence", inner_field_convergence);
  criterion("resonant_enhancement", resonant_enhancement);
  criterion("flux_formula_vs_fd", flux_vs_finite_differences);
  criterion("heat_totals_long_time", heat_totals_long_time);
  criterion("fd_variant_match", fd_variant_match);
  criterion("two_disk_gap_exponent", gap_exponent);
  criterion("cli_validate_determinism", cli_validate_determinism);

  const double dt =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::printf("%s: %d failure(s), %.1f s total\n",
              g_failures == 0 ? "acceptance: all criteria passed"
                              : "acceptance: FAILED",
              g_failures, dt);
  return g_failures == 0 ? 0 : 1;
}
