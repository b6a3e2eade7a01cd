#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gmp {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// Cell-centered scalar values, row-major with x fastest: index = i + j*nx.
using CellField = std::vector<double>;

/// Face-normal values on a MAC grid. u lives on x-faces ((nx+1)*ny, index
/// i + j*(nx+1)), v on y-faces (nx*(ny+1), index i + j*nx).
struct FaceField {
  std::vector<double> u;
  std::vector<double> v;
};

/// Scalar data as a function of (t, x).
using ScalarSampler = std::function<double(double, Vec2)>;
/// Vector data as a function of (t, x).
using VectorSampler = std::function<Vec2(double, Vec2)>;

/// Invalid configuration (bad grid sizes, bad scenario values).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violating a modelling assumption (compatibility, coercivity).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear solver failed to reach its tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

/// Explicit transport step rejected because dt breaks the monotone bound.
class StepRejected : public std::runtime_error {
 public:
  StepRejected(const std::string& what, double admissible)
      : std::runtime_error(what), admissible_dt(admissible) {}
  double admissible_dt;
};

}  // namespace gmp
