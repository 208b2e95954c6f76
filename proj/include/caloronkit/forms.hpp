#pragma once

#include <span>
#include <vector>

#include "caloronkit/grid.hpp"

namespace caloronkit {

/// Increasing multi-indices of length k over axes {0..dim-1}, lexicographic.
std::vector<std::vector<int>> combinations(int dim, int k);
long comb_count(int dim, int k);
/// Position of an increasing multi-index in the lexicographic enumeration.
int comb_rank(std::span<const int> idx, int dim);

/// Degree-p differential form with rank-n complex matrix coefficients, one
/// table per increasing multi-index, each table npoints * n * n row-major.
class MatrixForm {
 public:
  MatrixForm() = default;
  static MatrixForm zero(GridPtr g, int degree, int rank);
  /// Degree-0 form with the same matrix at every point.
  static MatrixForm constant(GridPtr g, std::span<const cplx> m, int rank);

  const GridPtr& grid() const { return grid_; }
  int degree() const { return degree_; }
  int rank() const { return rank_; }
  long ncoeffs() const { return static_cast<long>(coeffs_.size()); }
  std::vector<cplx>& coeff(int ci) { return coeffs_[static_cast<size_t>(ci)]; }
  const std::vector<cplx>& coeff(int ci) const { return coeffs_[static_cast<size_t>(ci)]; }
  cplx* at(int ci, long p) {
    return coeffs_[static_cast<size_t>(ci)].data() + p * rank_ * rank_;
  }
  const cplx* at(int ci, long p) const {
    return coeffs_[static_cast<size_t>(ci)].data() + p * rank_ * rank_;
  }

  MatrixForm& operator+=(const MatrixForm& o);
  MatrixForm& operator-=(const MatrixForm& o);
  MatrixForm& operator*=(cplx s);

 private:
  GridPtr grid_;
  int degree_ = 0;
  int rank_ = 1;
  std::vector<std::vector<cplx>> coeffs_;
};

MatrixForm operator+(MatrixForm a, const MatrixForm& b);
MatrixForm operator-(MatrixForm a, const MatrixForm& b);
MatrixForm operator*(cplx s, MatrixForm a);

/// Wedge product with matrix-product coefficients. Degrees adding beyond the
/// grid dimension give the zero top-degree form.
MatrixForm wedge(const MatrixForm& a, const MatrixForm& b);

/// Graded commutator [a,b] = a^b - (-1)^{pq} b^a.
MatrixForm bracket(const MatrixForm& a, const MatrixForm& b);

/// Exterior derivative via the per-axis differentiation rules.
MatrixForm d(const MatrixForm& a);

/// Contraction with the coordinate vector field of `ax`.
MatrixForm contract(const MatrixForm& a, int ax);

/// Pullback along the slice embedding fixing `ax` at sample k; lives on the
/// grid with that axis removed.
MatrixForm slice(const MatrixForm& a, int ax, int k);

/// Fiber integration over the distinguished circle: write a = b + c^dtheta
/// with dtheta in last position and return the circle integral of c.
MatrixForm fiber_integrate(const MatrixForm& a);

/// Circle integral of a form carrying no dtheta component: integrates out
/// the theta dependence of every coefficient, landing on the base grid.
MatrixForm integrate_circle(const MatrixForm& a);

/// Integral of a top-degree form; orientation is the coordinate order.
std::vector<cplx> integrate(const MatrixForm& a);

/// Assembles a form on `big` from per-sample slices along axis `ax`
/// (slices live on big->without_axis(ax)). Components along `ax` are zero.
MatrixForm stack_along_axis(GridPtr big, int ax,
                            std::span<const MatrixForm* const> slices);

/// Normalised symmetrised trace: 1/((k!)^2 (2 pi i)^k) sum over permutations
/// of tr(w_{s1} ^ ... ^ w_{sk}), with Koszul signs for odd-degree arguments.
MatrixForm sym_trace(std::span<const MatrixForm* const> args);
MatrixForm sym_trace(std::initializer_list<const MatrixForm*> args);

/// Blockwise direct sum of coefficients; rank adds.
MatrixForm block_diag(const MatrixForm& a, const MatrixForm& b);

double sup_norm(const MatrixForm& a);
double max_diff(const MatrixForm& a, const MatrixForm& b);
/// Largest entry of a + a^dagger over all points and coefficients.
double anti_hermitian_defect(const MatrixForm& a);

struct Period {
  std::vector<int> cycle;  // circle axes of the subtorus
  cplx value;
};

/// Periods of a scalar closed form over coordinate subtori through the base
/// point. Requires an all-circle grid.
std::vector<Period> periods(const MatrixForm& a);

struct ExactnessResult {
  enum class Status { Exact, NotExact, NotClosed } status = Status::NotClosed;
  double closedness = 0.0;
  double worst_period = 0.0;
  std::vector<int> worst_cycle;
  double scale = 1.0;
  bool exact() const { return status == Status::Exact; }
};

/// Decision procedure for "zero modulo exact" on torus grids: closedness
/// plus vanishing periods, both scaled by max(1, sup norm).
ExactnessResult is_exact(const MatrixForm& a, double tol);

}  // namespace caloronkit
