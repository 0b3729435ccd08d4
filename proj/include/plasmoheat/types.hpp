#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace plasmoheat {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Geometry that cannot describe a valid closed curve or mesh.
struct InvalidGeometryError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Interior meshing failed (degenerate triangles, bad resolution request).
struct MeshingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A matrix that must be definite/invertible for the method to proceed is not.
struct ConditioningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Run configuration failed schema or semantic validation. `where` is a JSON
// pointer (semantic errors) or line:column (parse errors).
struct ConfigError : std::runtime_error {
  std::string where;
  ConfigError(const std::string& what, std::string where_ = "")
      : std::runtime_error(what), where(std::move(where_)) {}
};

// Explicit time stepping asked to run with an unstable step size.
struct CflError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace plasmoheat
