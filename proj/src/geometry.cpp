#include "plasmoheat/geometry.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace plasmoheat {
namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

Vec2 ParamCurve::position(double theta) const {
  const double px = a * std::cos(theta), py = b * std::sin(theta);
  const double c = std::cos(rotation), s = std::sin(rotation);
  return {center.x + c * px - s * py, center.y + s * px + c * py};
}

Vec2 ParamCurve::derivative(double theta) const {
  const double px = -a * std::sin(theta), py = b * std::cos(theta);
  const double c = std::cos(rotation), s = std::sin(rotation);
  return {c * px - s * py, s * px + c * py};
}

Vec2 ParamCurve::second_derivative(double theta) const {
  const double px = -a * std::cos(theta), py = -b * std::sin(theta);
  const double c = std::cos(rotation), s = std::sin(rotation);
  return {c * px - s * py, s * px + c * py};
}

ParamCurve ParamCurve::scaled(double delta, Vec2 z) const {
  if (!(delta > 0.0))
    throw InvalidGeometryError("ParamCurve::scaled: scale must be positive");
  ParamCurve out = *this;
  out.a = delta * a;
  out.b = delta * b;
  out.center = z + delta * center;
  return out;
}

double ParamCurve::perimeter(int n) const {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += derivative(kTwoPi * i / n).norm();
  return sum * kTwoPi / n;
}

bool ParamCurve::contains(Vec2 p) const {
  const Vec2 q = p - center;
  const double c = std::cos(rotation), s = std::sin(rotation);
  const double u = (c * q.x + s * q.y) / a;
  const double v = (-s * q.x + c * q.y) / b;
  return u * u + v * v < 1.0;
}

ParamCurve build_ellipse(double a, double b, Vec2 center, double rotation) {
  if (!(a > 0.0) || !(b > 0.0))
    throw InvalidGeometryError("build_ellipse: semi-axes must be positive");
  ParamCurve c;
  c.a = a;
  c.b = b;
  c.center = center;
  c.rotation = rotation;
  return c;
}

double BoundaryMesh::perimeter(int component) const {
  const auto [b, e] = comp_range.at(component);
  double sum = 0.0;
  for (int i = b; i < e; ++i) sum += w[i];
  return sum;
}

double BoundaryMesh::diameter() const {
  double d2 = 0.0;
  for (int i = 0; i < n(); ++i)
    for (int j = i + 1; j < n(); ++j)
      d2 = std::max(d2, (x[i] - x[j]).squared_norm());
  return std::sqrt(d2);
}

double BoundaryMesh::min_component_gap() const {
  double g2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n(); ++i)
    for (int j = i + 1; j < n(); ++j)
      if (comp[i] != comp[j])
        g2 = std::min(g2, (x[i] - x[j]).squared_norm());
  return std::sqrt(g2);
}

BoundaryMesh discretize(const std::vector<ParamCurve>& curves, int n_per_curve,
                        double overlap_tol) {
  if (curves.empty())
    throw InvalidGeometryError("discretize: no curves given");
  if (n_per_curve < 8 || n_per_curve % 2 != 0)
    throw InvalidGeometryError(
        "discretize: n_per_curve must be even and at least 8");

  BoundaryMesh m;
  const int total = n_per_curve * static_cast<int>(curves.size());
  m.x.reserve(total);
  m.nu.reserve(total);
  m.comp.reserve(total);
  m.speed.resize(total);
  m.curvature.resize(total);
  m.w.resize(total);
  m.theta.resize(total);
  m.curves = curves;

  int at = 0;
  for (int c = 0; c < static_cast<int>(curves.size()); ++c) {
    const ParamCurve& curve = curves[c];
    m.comp_range.emplace_back(at, at + n_per_curve);
    for (int i = 0; i < n_per_curve; ++i, ++at) {
      const double t = kTwoPi * i / n_per_curve;
      const Vec2 p = curve.position(t);
      const Vec2 d = curve.derivative(t);
      const Vec2 dd = curve.second_derivative(t);
      const double sp = d.norm();
      if (!(sp > 0.0))
        throw InvalidGeometryError("discretize: degenerate parametrization");
      m.x.push_back(p);
      m.nu.push_back({d.y / sp, -d.x / sp});
      m.speed[at] = sp;
      m.curvature[at] = (d.x * dd.y - d.y * dd.x) / (sp * sp * sp);
      m.w[at] = sp * kTwoPi / n_per_curve;
      m.theta[at] = t;
      m.comp.push_back(c);
    }
  }

  if (curves.size() > 1 && m.min_component_gap() < overlap_tol)
    throw InvalidGeometryError(
        "discretize: curve components overlap or touch (node distance below "
        "tolerance)");
  return m;
}

void InteriorMesh::append(const InteriorMesh& other, int component_id) {
  const int base = static_cast<int>(vertices.size());
  vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
  const int t0 = n_triangles();
  for (const auto& t : other.triangles)
    triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
  centroids.insert(centroids.end(), other.centroids.begin(),
                   other.centroids.end());
  Vector na(areas.size() + other.areas.size());
  na << areas, other.areas;
  areas = std::move(na);
  comp.resize(triangles.size());
  for (int t = t0; t < n_triangles(); ++t) comp[t] = component_id;
}

InteriorMesh mesh_interior(const ParamCurve& curve, double h) {
  if (!(h > 0.0)) throw MeshingError("mesh_interior: h must be positive");
  const double perim = curve.perimeter(512);
  const int n_s = std::max(12, static_cast<int>(std::lround(perim / h)));
  const double r_extent = std::min(curve.a, curve.b);
  const int n_r = std::max(2, static_cast<int>(std::lround(r_extent / h)));
  if (n_s > 4096 || n_r > 2048)
    throw MeshingError("mesh_interior: h too small for this curve");

  InteriorMesh mesh;
  // Vertex layout: center, then rings k = 1..n_r of n_s vertices each.
  mesh.vertices.push_back(curve.center);
  for (int k = 1; k <= n_r; ++k) {
    const double r = static_cast<double>(k) / n_r;
    for (int j = 0; j < n_s; ++j) {
      const Vec2 p = curve.position(kTwoPi * j / n_s);
      mesh.vertices.push_back(curve.center + r * (p - curve.center));
    }
  }
  auto ring_vertex = [&](int k, int j) {
    return 1 + (k - 1) * n_s + (j % n_s);
  };

  std::vector<double> areas;
  auto add_triangle = [&](int i0, int i1, int i2) {
    const Vec2 a = mesh.vertices[i0], b = mesh.vertices[i1],
               c = mesh.vertices[i2];
    const double twice = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    if (!(twice > 0.0))
      throw MeshingError("mesh_interior: degenerate or flipped triangle");
    mesh.triangles.push_back({i0, i1, i2});
    mesh.centroids.push_back((a + b + c) / 3.0);
    mesh.comp.push_back(0);
    areas.push_back(0.5 * twice);
  };

  // Innermost fan around the center.
  for (int j = 0; j < n_s; ++j)
    add_triangle(0, ring_vertex(1, j), ring_vertex(1, j + 1));
  // Quad strips between consecutive rings, split along one diagonal.
  for (int k = 1; k < n_r; ++k) {
    for (int j = 0; j < n_s; ++j) {
      const int v00 = ring_vertex(k, j), v01 = ring_vertex(k, j + 1);
      const int v10 = ring_vertex(k + 1, j), v11 = ring_vertex(k + 1, j + 1);
      add_triangle(v00, v10, v11);
      add_triangle(v00, v11, v01);
    }
  }
  mesh.areas = Eigen::Map<const Vector>(areas.data(), areas.size());
  return mesh;
}

}  // namespace plasmoheat
