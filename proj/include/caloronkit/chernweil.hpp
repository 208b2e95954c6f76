#pragma once

#include <map>

#include "caloronkit/geometry.hpp"

namespace caloronkit {

enum class Parity { Even, Odd };

/// Inhomogeneous scalar form stored degree by degree; all degrees of the
/// given parity up to the grid dimension are materialized.
struct GradedForm {
  Parity parity = Parity::Even;
  GridPtr grid;
  std::map<int, MatrixForm> terms;

  static GradedForm zero(GridPtr g, Parity p);
  MatrixForm& term(int deg);
  const MatrixForm& term(int deg) const;
  bool has(int deg) const { return terms.count(deg) > 0; }

  GradedForm& operator+=(const GradedForm& o);
  GradedForm& operator-=(const GradedForm& o);
  GradedForm& operator*=(cplx s);
};

GradedForm operator-(GradedForm a, const GradedForm& b);

/// d applied per degree; flips parity.
GradedForm graded_d(const GradedForm& a);
double graded_sup(const GradedForm& a);
/// Largest per-degree sup-norm difference.
double graded_max_diff(const GradedForm& a, const GradedForm& b);

/// Pointwise matrix trace down to a rank-1 form.
MatrixForm trace_form(const MatrixForm& a);

/// Gauss-Legendre nodes and weights on [0,1]; exact on degree 2n-1.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Chern character of a connection 1-form: sum over j of
/// 1/j! (1/(2 pi i))^j tr(F^j); degree-0 term equals the rank.
GradedForm chern_character(const MatrixForm& conn, int cutoff);

/// Odd Chern character of a group map: sum over j of
/// -j!/(2j+1)! (-1/(2 pi i))^{j+1} tr((g^{-1}dg)^{2j+1}).
GradedForm odd_chern_character(const GroupMap& g, int cutoff);

/// Path of connection 1-forms over t in [0,1].
struct FormPath {
  bool straight = true;
  MatrixForm a0, a1;
  std::vector<MatrixForm> samples;

  const GridPtr& grid() const { return straight ? a0.grid() : samples.front().grid(); }
  int rank() const { return straight ? a0.rank() : samples.front().rank(); }
  MatrixForm at(double t) const;

  static FormPath line(MatrixForm a0, MatrixForm a1);
  static FormPath sampled(std::vector<MatrixForm> samples);
};

FormPath caloron_path(const PairPath& path);

/// Chern-Simons transgression along a path. Straight lines integrate in t by
/// Gauss-Legendre with cutoff+1 nodes (exact, the integrand is polynomial);
/// sampled paths use the composite trapezoid rule over their samples.
GradedForm chern_simons(const FormPath& path, int cutoff);

/// Slice formulation: materializes the path as a single connection on
/// grid x [0,1] and integrates the contraction of its Chern character.
GradedForm chern_simons_via_slices(const FormPath& path, int cutoff);

}  // namespace caloronkit
