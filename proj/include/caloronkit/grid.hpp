#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "caloronkit/matrix.hpp"

namespace caloronkit {

class Grid;
using GridPtr = std::shared_ptr<Grid>;

/// User-facing factor descriptor. A Sphere3 factor expands into three axes
/// (psi, theta, phi) = (circle of period 4*pi, interval [0,pi], circle of
/// period 2*pi), the standard Euler-angle chart of SU(2) with Haar density
/// sin(theta)/8 and total volume 2*pi^2.
struct FactorSpec {
  enum class Kind { Circle, Interval, Sphere3 };
  Kind kind = Kind::Circle;
  int n = 0;                            // circle/interval samples
  double a = 0.0, b = 1.0;              // interval endpoints
  int n_psi = 0, n_theta = 0, n_phi = 0;

  static FactorSpec circle(int n) { return {Kind::Circle, n}; }
  static FactorSpec interval(int n, double a, double b) {
    FactorSpec f;
    f.kind = Kind::Interval;
    f.n = n;
    f.a = a;
    f.b = b;
    return f;
  }
  static FactorSpec sphere3(int n_psi, int n_theta, int n_phi) {
    FactorSpec f;
    f.kind = Kind::Sphere3;
    f.n_psi = n_psi;
    f.n_theta = n_theta;
    f.n_phi = n_phi;
    return f;
  }
};

enum class AxisKind { Circle, Interval };

struct Axis {
  AxisKind kind;
  int n;
  double period = 0.0;  // circle
  double a = 0.0, b = 0.0;
  std::vector<double> coords;
  std::vector<double> quad;   // coordinate quadrature weights
  std::vector<double> deriv;  // n*n row-major first-derivative matrix
};

/// Immutable discretized product manifold. Point indices are row-major with
/// the last axis fastest. The distinguished circle (loop direction), when
/// present, is always the last axis.
class Grid {
 public:
  /// Builds a grid; validates sample counts (>= 8 per axis) and that the
  /// distinguished factor, if given, is a circle and the last factor.
  static GridPtr make(std::vector<FactorSpec> factors,
                      std::optional<int> distinguished_circle = std::nullopt);

  int dim() const { return static_cast<int>(axes_.size()); }
  long npoints() const { return npoints_; }
  const Axis& axis(int i) const { return axes_[static_cast<size_t>(i)]; }
  long stride(int i) const { return strides_[static_cast<size_t>(i)]; }

  const std::vector<FactorSpec>& factors() const { return factors_; }
  std::optional<int> distinguished_factor() const { return distinguished_; }
  bool has_fiber() const { return distinguished_.has_value(); }
  int fiber_axis() const { return dim() - 1; }

  bool all_circles() const;
  bool has_sphere() const { return !density_.empty(); }

  void point_indices(long p, int* out) const;
  void point_coords(long p, double* out) const;

  /// Chart weight for integrating a top-degree coefficient (de Rham
  /// integral). Includes the sphere measure normalization factor.
  double integration_weight(long p) const;
  /// Measure weight (chart weight times density); totals the analytic
  /// volume: 2*pi per circle, b-a per interval, 2*pi^2 per Sphere3.
  double measure_weight(long p) const;
  double total_measure() const;

  /// Applies the axis derivative matrix along `ax` to an array holding
  /// `block` complex values per grid point.
  void differentiate(int ax, const cplx* in, cplx* out, int block) const;

  GridPtr without_axis(int ax) const;
  GridPtr with_axis_inserted(int pos, const FactorSpec& f) const;

  bool same_as(const Grid& other) const;

  std::string describe() const;

 private:
  Grid() = default;
  std::vector<FactorSpec> factors_;
  std::optional<int> distinguished_;
  std::vector<Axis> axes_;
  std::vector<int> axis_factor_;   // owning factor index per axis
  std::vector<long> strides_;
  std::vector<double> density_;    // per-point; empty means 1 everywhere
  double chart_norm_ = 1.0;
  long npoints_ = 0;

  void finalize();
};

/// Index of a point obtained by replacing the `ax` index of `p` with `k`.
long point_with_index(const Grid& g, long p, int ax, int k);

}  // namespace caloronkit
