#pragma once

#include "caloronkit/chernweil.hpp"

namespace caloronkit {

/// c_{i,j} = (-1/2)^i j!(j-1)! / ((j+i)!(j-1-i)!), 0 <= i <= j-1.
double string_coefficient(int i, int j);

enum class StringFormAlg { Direct, ViaCaloron };

/// Odd form on M representing the odd Chern character of a pair: either the
/// explicit formula sum_j j * Int_S1 trbar_j(DPhi, F^{j-1}) or the fiber
/// integral of the Chern character of the caloron transform.
GradedForm string_form(const ConnectionPair& p, int cutoff,
                       StringFormAlg alg = StringFormAlg::Direct);

enum class StringPotentialAlg { Slice, Explicit, CsFiber };

/// Even transgression form on M of a path of pairs; dS = s(end) - s(start).
/// Three cross-validating routes; straight lines integrate exactly in t.
GradedForm string_potential(const PairPath& path, int cutoff,
                            StringPotentialAlg alg = StringPotentialAlg::Explicit);

struct DegreeExactness {
  int degree = 0;
  bool supported = true;
  ExactnessResult result;
};

/// Straight-line string potential between two pairs plus the per-degree
/// exactness verdict (verdicts require a torus base; the form is always
/// returned).
struct StringDatumDefect {
  GradedForm defect;
  std::vector<DegreeExactness> verdicts;
  bool base_is_torus = true;
};
StringDatumDefect string_datum_defect(const ConnectionPair& p0, const ConnectionPair& p1,
                                      int cutoff, double exact_tol);

/// Closed-form straight-line transgression from the trivial pair, organized
/// by the c_{i,j} coefficient table; d(total) equals the string form.
GradedForm total_string_potential(const ConnectionPair& p, int cutoff);

/// Transgressed even generator pulled back by a based map on M x S1:
/// sum_j -j!/(2j)! (-1/2 pi i)^{j+1} Int_S1 tr(Phi (g^{-1}d_M g)^{2j}).
GradedForm tau_hat_pullback(const GroupMap& based_map, int cutoff);

/// Odd universal representative pulled back by g:
/// sum_j -(j-1)!/(2j-1)! (-1/2 pi i)^j tr((g^{-1}dg)^{2j-1});
/// coincides with the odd Chern character termwise.
GradedForm universal_string_pullback(const GroupMap& g, int cutoff);

/// Default circle profile rho = c (1 - cos theta) with c solved so that the
/// grid quadrature of rho^k equals (2 pi)^{k+1}; rho(0) = 0.
std::vector<double> witness_profile(const Grid& grid, int k);

/// Rank-1 pair whose straight-line string potential from the trivial pair
/// realizes a prescribed even form: Phi = i f, and for k >= 1 additionally
/// A = i rho(theta) (x1 dx2 + ... + x_{2k-1} dx_{2k}) on an interval chart.
ConnectionPair surjectivity_witness(GridPtr grid, const MatrixForm& f_on_base, int k,
                                    std::span<const double> rho = {});

/// Degree-2 curving identity for unitary pairs with the pairing
/// <.,.> = -8 pi^2 trbar_2: returns B and the sup-norm defect of
/// S_2 - (1/2 pi i) B - d((1/4 pi^2) Int_S1 <A, Phi>).
struct GerbeCurving {
  MatrixForm B;
  double defect = 0.0;
};
GerbeCurving gerbe_curving_check(const ConnectionPair& p);

}  // namespace caloronkit
