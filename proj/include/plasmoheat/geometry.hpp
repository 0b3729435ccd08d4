#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "plasmoheat/types.hpp"

namespace plasmoheat {

// Smooth closed curve, parametrized counterclockwise on [0, 2pi).  The only
// analytic family the tool constructs is the (rotated, translated) ellipse;
// a = b gives a circle.
struct ParamCurve {
  double a = 1.0;        // semi-axis along the rotated x direction
  double b = 1.0;        // semi-axis along the rotated y direction
  Vec2 center{0.0, 0.0};
  double rotation = 0.0;  // radians

  Vec2 position(double theta) const;
  Vec2 derivative(double theta) const;
  Vec2 second_derivative(double theta) const;

  // Curve mapped as x -> z + delta * x (used to place a unit-scale particle
  // at physical position/size).
  ParamCurve scaled(double delta, Vec2 z = {0.0, 0.0}) const;

  double diameter() const { return 2.0 * std::max(a, b); }
  // Trapezoid rule on |p'|; spectrally accurate for this analytic family.
  double perimeter(int n = 2048) const;
  // True when p lies strictly inside the curve.
  bool contains(Vec2 p) const;
};

ParamCurve build_ellipse(double a, double b, Vec2 center = {0.0, 0.0},
                         double rotation = 0.0);

// Nystrom boundary mesh: equispaced-in-theta nodes per component with
// trapezoid weights w_i = |p'(theta_i)| * 2pi/n.
struct BoundaryMesh {
  std::vector<Vec2> x;    // node positions
  std::vector<Vec2> nu;   // outward unit normals
  Vector speed;           // |p'(theta_i)|
  Vector curvature;       // signed curvature (positive for convex ccw)
  Vector w;               // quadrature weights
  Vector theta;           // parameter values
  std::vector<int> comp;  // component id per node
  std::vector<std::pair<int, int>> comp_range;  // [begin, end) per component
  std::vector<ParamCurve> curves;

  int n() const { return static_cast<int>(x.size()); }
  int n_components() const { return static_cast<int>(comp_range.size()); }
  double perimeter(int component) const;
  double diameter() const;  // max pairwise node distance
  // Smallest distance between nodes of different components (inf if single).
  double min_component_gap() const;
};

// Equispaced discretization of one or more disjoint curves.  n_per_curve must
// be even (the singular quadrature uses half-order trigonometric
// interpolation).  Throws InvalidGeometryError on degenerate input or when
// two components come closer than `overlap_tol`.
BoundaryMesh discretize(const std::vector<ParamCurve>& curves, int n_per_curve,
                        double overlap_tol = 1e-12);

// Triangulation of the interior of a single curve via a mapped-polar
// (star-shaped) construction: rings shrink the boundary parametrization
// toward the center.  Boundary-conforming for every curve this tool builds.
struct InteriorMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // ccw vertex indices
  std::vector<Vec2> centroids;
  Vector areas;
  std::vector<int> comp;  // component id per triangle

  int n_triangles() const { return static_cast<int>(triangles.size()); }
  double total_area() const { return areas.sum(); }
  // Append another component's triangulation (vertex indices re-based).
  void append(const InteriorMesh& other, int component_id);
};

// Target edge length h controls both ring count and sector count.  Throws
// MeshingError when h is non-positive or too coarse to mesh the curve.
InteriorMesh mesh_interior(const ParamCurve& curve, double h);

}  // namespace plasmoheat
