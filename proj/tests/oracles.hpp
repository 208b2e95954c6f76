#pragma once

// Independent oracles used by the test suites. These deliberately avoid the
// library's own code paths for the quantity they check.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "caloronkit/forms.hpp"
#include "caloronkit/matrix.hpp"

namespace oracles {

using caloronkit::cplx;
using caloronkit::MatrixForm;

// Brute-force wedge of scalar forms: antisymmetrization over all index
// permutations with explicit signs, coefficient by coefficient.
inline MatrixForm brute_force_wedge(const MatrixForm& a, const MatrixForm& b) {
  using namespace caloronkit;
  const int dim = a.grid()->dim();
  const int p = a.degree(), q = b.degree();
  MatrixForm out = MatrixForm::zero(a.grid(), p + q, 1);
  auto Ks = combinations(dim, p + q);
  const long np = a.grid()->npoints();
  auto coeff_signed = [&](std::vector<int> idx) -> std::pair<int, int> {
    // returns (sign, coefficient index) for the given axis tuple
    int sign = 1;
    for (size_t i = 0; i + 1 < idx.size(); ++i)
      for (size_t j = 0; j + 1 < idx.size() - i; ++j)
        if (idx[j] > idx[j + 1]) {
          std::swap(idx[j], idx[j + 1]);
          sign = -sign;
        }
    return {sign, comb_rank(idx, dim)};
  };
  for (size_t ko = 0; ko < Ks.size(); ++ko) {
    std::vector<int> perm = Ks[ko];
    std::sort(perm.begin(), perm.end());
    double fact = 1.0;
    for (int i = 2; i <= p; ++i) fact *= i;
    for (int i = 2; i <= q; ++i) fact *= i;
    do {
      // sign of perm relative to the increasing order
      std::vector<int> tmp = perm;
      int sgn = 1;
      for (size_t i = 0; i + 1 < tmp.size(); ++i)
        for (size_t j = 0; j + 1 < tmp.size() - i; ++j)
          if (tmp[j] > tmp[j + 1]) {
            std::swap(tmp[j], tmp[j + 1]);
            sgn = -sgn;
          }
      std::vector<int> I(perm.begin(), perm.begin() + p);
      std::vector<int> J(perm.begin() + p, perm.end());
      auto [sa, ca] = coeff_signed(I);
      auto [sb, cb] = coeff_signed(J);
      double w = sgn * sa * sb / fact;
      for (long pt = 0; pt < np; ++pt)
        out.coeff(static_cast<int>(ko))[static_cast<size_t>(pt)] +=
            w * a.coeff(ca)[static_cast<size_t>(pt)] * b.coeff(cb)[static_cast<size_t>(pt)];
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

// Winding number of a rank-1 loop by phase unwrapping.
inline double winding_number(const std::vector<cplx>& loop) {
  double total = 0.0;
  const size_t n = loop.size();
  for (size_t j = 0; j < n; ++j) {
    cplx r = loop[(j + 1) % n] / loop[j];
    total += std::arg(r);
  }
  return total / (2.0 * std::numbers::pi);
}

// Path-ordered product of midpoint exponentials for dg/dtheta = g Phi,
// g(0) = 1; `phi_mid` holds Phi at the midpoints of `steps` uniform steps.
inline std::vector<cplx> path_ordered_product(const std::vector<cplx>& phi_mid, int rank,
                                              int steps) {
  using namespace caloronkit;
  const int n = rank;
  const double h = 2.0 * std::numbers::pi / steps;
  std::vector<cplx> g(static_cast<size_t>(n) * n), e(g), sx(g), t(g);
  mat::identity(n, g.data());
  for (int k = 0; k < steps; ++k) {
    for (int i = 0; i < n * n; ++i)
      sx[static_cast<size_t>(i)] = h * phi_mid[static_cast<size_t>(k * n * n + i)];
    mat::exponential(n, sx.data(), e.data());
    mat::mul(n, g.data(), e.data(), t.data());
    g = t;
  }
  return g;
}

}  // namespace oracles
