#include "caloronkit/forms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "caloronkit/parallel.hpp"

namespace caloronkit {

namespace {
constexpr double kPi = std::numbers::pi;

void check_same(const MatrixForm& a, const MatrixForm& b) {
  if (!a.grid()->same_as(*b.grid())) throw std::invalid_argument("forms: grid mismatch");
  if (a.rank() != b.rank()) throw std::invalid_argument("forms: rank mismatch");
}

// Merge sign for disjoint increasing I, J: parity of inversions between them.
int merge_sign(std::span<const int> I, std::span<const int> J) {
  int inv = 0;
  for (int i : I)
    for (int j : J)
      if (i > j) ++inv;
  return (inv % 2 == 0) ? 1 : -1;
}

}  // namespace

std::vector<std::vector<int>> combinations(int dim, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > dim) return out;
  std::vector<int> idx(static_cast<size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    out.push_back(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<size_t>(i)] == dim - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
  }
  return out;
}

long comb_count(int dim, int k) {
  if (k < 0 || k > dim) return 0;
  long c = 1;
  for (int i = 0; i < k; ++i) c = c * (dim - i) / (i + 1);
  return c;
}

int comb_rank(std::span<const int> idx, int dim) {
  int k = static_cast<int>(idx.size());
  long r = 0;
  int prev = -1;
  for (int i = 0; i < k; ++i) {
    for (int v = prev + 1; v < idx[static_cast<size_t>(i)]; ++v)
      r += comb_count(dim - v - 1, k - i - 1);
    prev = idx[static_cast<size_t>(i)];
  }
  return static_cast<int>(r);
}

MatrixForm MatrixForm::zero(GridPtr g, int degree, int rank) {
  if (!g) throw std::invalid_argument("form: null grid");
  if (degree < 0 || degree > g->dim()) throw std::invalid_argument("form: bad degree");
  if (rank < 1) throw std::invalid_argument("form: bad rank");
  MatrixForm f;
  f.grid_ = std::move(g);
  f.degree_ = degree;
  f.rank_ = rank;
  long nc = comb_count(f.grid_->dim(), degree);
  f.coeffs_.assign(static_cast<size_t>(nc),
                   std::vector<cplx>(static_cast<size_t>(f.grid_->npoints()) * rank * rank,
                                     cplx(0.0, 0.0)));
  return f;
}

MatrixForm MatrixForm::constant(GridPtr g, std::span<const cplx> m, int rank) {
  MatrixForm f = zero(std::move(g), 0, rank);
  long np = f.grid_->npoints();
  for (long p = 0; p < np; ++p)
    std::copy(m.begin(), m.end(), f.at(0, p));
  return f;
}

MatrixForm& MatrixForm::operator+=(const MatrixForm& o) {
  check_same(*this, o);
  if (degree_ != o.degree_) throw std::invalid_argument("forms: degree mismatch in sum");
  for (size_t ci = 0; ci < coeffs_.size(); ++ci)
    for (size_t i = 0; i < coeffs_[ci].size(); ++i) coeffs_[ci][i] += o.coeffs_[ci][i];
  return *this;
}

MatrixForm& MatrixForm::operator-=(const MatrixForm& o) {
  check_same(*this, o);
  if (degree_ != o.degree_) throw std::invalid_argument("forms: degree mismatch in sum");
  for (size_t ci = 0; ci < coeffs_.size(); ++ci)
    for (size_t i = 0; i < coeffs_[ci].size(); ++i) coeffs_[ci][i] -= o.coeffs_[ci][i];
  return *this;
}

MatrixForm& MatrixForm::operator*=(cplx s) {
  for (auto& c : coeffs_)
    for (auto& v : c) v *= s;
  return *this;
}

MatrixForm operator+(MatrixForm a, const MatrixForm& b) { return a += b; }
MatrixForm operator-(MatrixForm a, const MatrixForm& b) { return a -= b; }
MatrixForm operator*(cplx s, MatrixForm a) { return a *= s; }

MatrixForm wedge(const MatrixForm& a, const MatrixForm& b) {
  check_same(a, b);
  const int dim = a.grid()->dim();
  const int p = a.degree(), q = b.degree();
  if (p + q > dim) return MatrixForm::zero(a.grid(), dim, a.rank());
  MatrixForm out = MatrixForm::zero(a.grid(), p + q, a.rank());
  const auto Ks = combinations(dim, p + q);
  const int n = a.rank();
  const long np = a.grid()->npoints();
  for (size_t ko = 0; ko < Ks.size(); ++ko) {
    const auto& K = Ks[ko];
    // All ways of splitting K into an increasing p-part and q-part.
    struct Term {
      int ca, cb, sign;
    };
    std::vector<Term> terms;
    for (const auto& sel : combinations(p + q, p)) {
      std::vector<int> I, J;
      size_t si = 0;
      for (int pos = 0; pos < p + q; ++pos) {
        if (si < sel.size() && sel[si] == pos) {
          I.push_back(K[static_cast<size_t>(pos)]);
          ++si;
        } else {
          J.push_back(K[static_cast<size_t>(pos)]);
        }
      }
      terms.push_back({comb_rank(I, dim), comb_rank(J, dim), merge_sign(I, J)});
    }
    cplx* dst0 = out.coeff(static_cast<int>(ko)).data();
    parallel_for(np, [&](long pb, long pe) {
      for (long pt = pb; pt < pe; ++pt) {
        cplx* dst = dst0 + pt * n * n;
        for (const auto& t : terms)
          mat::mul_acc(n, cplx(static_cast<double>(t.sign), 0.0), a.at(t.ca, pt),
                       b.at(t.cb, pt), dst);
      }
    });
  }
  return out;
}

MatrixForm bracket(const MatrixForm& a, const MatrixForm& b) {
  MatrixForm ab = wedge(a, b);
  MatrixForm ba = wedge(b, a);
  double sgn = (a.degree() * b.degree()) % 2 == 0 ? 1.0 : -1.0;
  ba *= cplx(sgn, 0.0);
  ab -= ba;
  return ab;
}

MatrixForm d(const MatrixForm& a) {
  const int dim = a.grid()->dim();
  const int p = a.degree();
  if (p >= dim) return MatrixForm::zero(a.grid(), dim, a.rank());
  MatrixForm out = MatrixForm::zero(a.grid(), p + 1, a.rank());
  const auto Is = combinations(dim, p);
  const int n = a.rank();
  const long np = a.grid()->npoints();
  std::vector<cplx> tmp(static_cast<size_t>(np) * n * n);
  for (size_t ii = 0; ii < Is.size(); ++ii) {
    const auto& I = Is[ii];
    for (int j = 0; j < dim; ++j) {
      if (std::find(I.begin(), I.end(), j) != I.end()) continue;
      std::vector<int> K = I;
      K.insert(std::upper_bound(K.begin(), K.end(), j), j);
      int pos = static_cast<int>(std::lower_bound(K.begin(), K.end(), j) - K.begin());
      double sgn = (pos % 2 == 0) ? 1.0 : -1.0;
      a.grid()->differentiate(j, a.coeff(static_cast<int>(ii)).data(), tmp.data(), n * n);
      cplx* dst = out.coeff(comb_rank(K, dim)).data();
      const cplx* src = tmp.data();
      parallel_for(np * n * n, [&](long b, long e) {
        for (long i = b; i < e; ++i) dst[i] += sgn * src[i];
      });
    }
  }
  return out;
}

MatrixForm contract(const MatrixForm& a, int ax) {
  if (a.degree() < 1) throw std::invalid_argument("contract: degree-0 input");
  const int dim = a.grid()->dim();
  MatrixForm out = MatrixForm::zero(a.grid(), a.degree() - 1, a.rank());
  const auto Is = combinations(dim, a.degree());
  for (size_t ii = 0; ii < Is.size(); ++ii) {
    const auto& I = Is[ii];
    auto it = std::find(I.begin(), I.end(), ax);
    if (it == I.end()) continue;
    int pos = static_cast<int>(it - I.begin());
    double sgn = (pos % 2 == 0) ? 1.0 : -1.0;
    std::vector<int> J;
    for (int v : I)
      if (v != ax) J.push_back(v);
    auto& dst = out.coeff(comb_rank(J, dim));
    const auto& src = a.coeff(static_cast<int>(ii));
    for (size_t i = 0; i < dst.size(); ++i) dst[i] += sgn * src[i];
  }
  return out;
}

MatrixForm slice(const MatrixForm& a, int ax, int k) {
  const Grid& g = *a.grid();
  if (ax < 0 || ax >= g.dim()) throw std::invalid_argument("slice: axis out of range");
  if (k < 0 || k >= g.axis(ax).n) throw std::invalid_argument("slice: sample out of range");
  GridPtr sub = g.without_axis(ax);
  MatrixForm out =
      MatrixForm::zero(sub, a.degree() > sub->dim() ? sub->dim() : a.degree(), a.rank());
  if (a.degree() > sub->dim()) return out;  // every index hits ax
  const int dim = g.dim();
  const auto Is = combinations(dim, a.degree());
  const int n = a.rank();
  const long nsub = sub->npoints();
  // Map sub-grid point -> parent point with axis ax fixed at k.
  const long sa = g.stride(ax);
  const int na = g.axis(ax).n;
  auto parent_point = [&](long q) {
    long outer = q / sa, inner = q % sa;
    return (outer * na + k) * sa + inner;
  };
  for (size_t ii = 0; ii < Is.size(); ++ii) {
    const auto& I = Is[ii];
    if (std::find(I.begin(), I.end(), ax) != I.end()) continue;
    std::vector<int> J;
    for (int v : I) J.push_back(v < ax ? v : v - 1);
    auto& dst = out.coeff(comb_rank(J, sub->dim()));
    const auto& src = a.coeff(static_cast<int>(ii));
    parallel_for(nsub, [&](long qb, long qe) {
      for (long q = qb; q < qe; ++q) {
        long pp = parent_point(q);
        std::copy(src.data() + pp * n * n, src.data() + (pp + 1) * n * n,
                  dst.data() + q * n * n);
      }
    });
  }
  return out;
}

MatrixForm fiber_integrate(const MatrixForm& a) {
  const Grid& g = *a.grid();
  if (!g.has_fiber()) throw std::invalid_argument("fiber_integrate: no distinguished circle");
  const int ax = g.fiber_axis();
  GridPtr sub = g.without_axis(ax);
  if (a.degree() == 0) return MatrixForm::zero(sub, 0, a.rank());
  MatrixForm out = MatrixForm::zero(sub, a.degree() - 1, a.rank());
  const int dim = g.dim();
  const auto Is = combinations(dim, a.degree());
  const int n = a.rank();
  const long nsub = sub->npoints();
  const int ntheta = g.axis(ax).n;
  const double w = g.axis(ax).quad[0];  // uniform circle weights
  for (size_t ii = 0; ii < Is.size(); ++ii) {
    const auto& I = Is[ii];
    if (I.back() != ax) continue;  // keep only dtheta components
    std::vector<int> J(I.begin(), I.end() - 1);
    auto& dst = out.coeff(comb_rank(J, sub->dim()));
    const auto& src = a.coeff(static_cast<int>(ii));
    // theta is the fastest axis: parent point = q * ntheta + t.
    parallel_for(nsub, [&](long qb, long qe) {
      for (long q = qb; q < qe; ++q) {
        cplx* dm = dst.data() + q * n * n;
        for (int t = 0; t < ntheta; ++t) {
          const cplx* sm = src.data() + (q * ntheta + t) * n * n;
          for (int e = 0; e < n * n; ++e) dm[e] += w * sm[e];
        }
      }
    });
  }
  return out;
}

MatrixForm integrate_circle(const MatrixForm& a) {
  const Grid& g = *a.grid();
  if (!g.has_fiber()) throw std::invalid_argument("integrate_circle: no distinguished circle");
  const int ax = g.fiber_axis();
  GridPtr sub = g.without_axis(ax);
  if (a.degree() > sub->dim())
    throw std::invalid_argument("integrate_circle: degree exceeds base dimension");
  MatrixForm out = MatrixForm::zero(sub, a.degree(), a.rank());
  const int dim = g.dim();
  const auto Is = combinations(dim, a.degree());
  const int n = a.rank();
  const long nsub = sub->npoints();
  const int ntheta = g.axis(ax).n;
  const double w = g.axis(ax).quad[0];
  for (size_t ii = 0; ii < Is.size(); ++ii) {
    const auto& I = Is[ii];
    if (!I.empty() && I.back() == ax)
      continue;  // dtheta components do not contribute to a fiberwise function integral
    auto& dst = out.coeff(comb_rank(I, sub->dim()));
    const auto& src = a.coeff(static_cast<int>(ii));
    parallel_for(nsub, [&](long qb, long qe) {
      for (long q = qb; q < qe; ++q) {
        cplx* dm = dst.data() + q * n * n;
        for (int t = 0; t < ntheta; ++t) {
          const cplx* sm = src.data() + (q * ntheta + t) * n * n;
          for (int e = 0; e < n * n; ++e) dm[e] += w * sm[e];
        }
      }
    });
  }
  return out;
}

MatrixForm stack_along_axis(GridPtr big, int ax,
                            std::span<const MatrixForm* const> slices) {
  const Grid& g = *big;
  if (ax < 0 || ax >= g.dim()) throw std::invalid_argument("stack: axis out of range");
  if (static_cast<int>(slices.size()) != g.axis(ax).n)
    throw std::invalid_argument("stack: sample count does not match axis");
  GridPtr sub = g.without_axis(ax);
  const MatrixForm& first = *slices[0];
  if (!first.grid()->same_as(*sub)) throw std::invalid_argument("stack: slice grid mismatch");
  const int deg = first.degree();
  const int n = first.rank();
  MatrixForm out = MatrixForm::zero(big, deg, n);
  const int dim = g.dim();
  const auto Js = combinations(sub->dim(), deg);
  const long nsub = sub->npoints();
  const long sa = g.stride(ax);
  const int na = g.axis(ax).n;
  for (size_t jj = 0; jj < Js.size(); ++jj) {
    std::vector<int> I;
    for (int v : Js[jj]) I.push_back(v < ax ? v : v + 1);
    auto& dst = out.coeff(comb_rank(I, dim));
    for (int k = 0; k < na; ++k) {
      const auto& src = slices[static_cast<size_t>(k)]->coeff(static_cast<int>(jj));
      parallel_for(nsub, [&](long qb, long qe) {
        for (long q = qb; q < qe; ++q) {
          long pp = (q / sa * na + k) * sa + q % sa;
          std::copy(src.data() + q * n * n, src.data() + (q + 1) * n * n,
                    dst.data() + pp * n * n);
        }
      });
    }
  }
  return out;
}

std::vector<cplx> integrate(const MatrixForm& a) {
  const Grid& g = *a.grid();
  if (a.degree() != g.dim()) throw std::invalid_argument("integrate: form is not top-degree");
  const int n = a.rank();
  std::vector<cplx> acc(static_cast<size_t>(n) * n, cplx(0.0, 0.0));
  const auto& src = a.coeff(0);
  for (long p = 0; p < g.npoints(); ++p) {
    double w = g.integration_weight(p);
    const cplx* m = src.data() + p * n * n;
    for (int e = 0; e < n * n; ++e) acc[static_cast<size_t>(e)] += w * m[e];
  }
  return acc;
}

MatrixForm sym_trace(std::span<const MatrixForm* const> args) {
  const int k = static_cast<int>(args.size());
  if (k == 0) throw std::invalid_argument("sym_trace: needs at least one argument");
  const GridPtr& g = args[0]->grid();
  const int n = args[0]->rank();
  int total = 0;
  for (const MatrixForm* a : args) {
    if (!a->grid()->same_as(*g) || a->rank() != n)
      throw std::invalid_argument("sym_trace: mismatched arguments");
    total += a->degree();
  }
  if (total > g->dim()) throw std::invalid_argument("sym_trace: total degree exceeds dimension");

  MatrixForm acc = MatrixForm::zero(g, total, n);
  std::vector<int> perm(static_cast<size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    // Koszul sign: inversions between odd-degree arguments.
    int flips = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (perm[static_cast<size_t>(i)] > perm[static_cast<size_t>(j)] &&
            args[static_cast<size_t>(perm[static_cast<size_t>(i)])]->degree() % 2 == 1 &&
            args[static_cast<size_t>(perm[static_cast<size_t>(j)])]->degree() % 2 == 1)
          ++flips;
    MatrixForm chain = *args[static_cast<size_t>(perm[0])];
    for (int i = 1; i < k; ++i) chain = wedge(chain, *args[static_cast<size_t>(perm[static_cast<size_t>(i)])]);
    cplx sgn = (flips % 2 == 0) ? cplx(1.0, 0.0) : cplx(-1.0, 0.0);
    chain *= sgn;
    acc += chain;
  } while (std::next_permutation(perm.begin(), perm.end()));

  // Pointwise trace down to a scalar form and apply the normalisation.
  double kfact = 1.0;
  for (int i = 2; i <= k; ++i) kfact *= i;
  cplx norm = cplx(1.0, 0.0) / (kfact * kfact);
  cplx twopii(0.0, 2.0 * kPi);
  for (int i = 0; i < k; ++i) norm /= twopii;

  MatrixForm out = MatrixForm::zero(g, total, 1);
  const long np = g->npoints();
  for (int ci = 0; ci < out.ncoeffs(); ++ci) {
    const auto& src = acc.coeff(ci);
    auto& dst = out.coeff(ci);
    parallel_for(np, [&](long pb, long pe) {
      for (long p = pb; p < pe; ++p)
        dst[static_cast<size_t>(p)] = norm * mat::trace(n, src.data() + p * n * n);
    });
  }
  return out;
}

MatrixForm sym_trace(std::initializer_list<const MatrixForm*> args) {
  std::vector<const MatrixForm*> v(args);
  return sym_trace(std::span<const MatrixForm* const>(v));
}

MatrixForm block_diag(const MatrixForm& a, const MatrixForm& b) {
  if (!a.grid()->same_as(*b.grid())) throw std::invalid_argument("block_diag: grid mismatch");
  if (a.degree() != b.degree()) throw std::invalid_argument("block_diag: degree mismatch");
  const int na = a.rank(), nb = b.rank(), n = na + nb;
  MatrixForm out = MatrixForm::zero(a.grid(), a.degree(), n);
  const long np = a.grid()->npoints();
  for (int ci = 0; ci < a.ncoeffs(); ++ci) {
    for (long p = 0; p < np; ++p) {
      const cplx* sa = a.at(ci, p);
      const cplx* sb = b.at(ci, p);
      cplx* dm = out.at(ci, p);
      for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) dm[i * n + j] = sa[i * na + j];
      for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j) dm[(na + i) * n + na + j] = sb[i * nb + j];
    }
  }
  return out;
}

double sup_norm(const MatrixForm& a) {
  double m = 0.0;
  for (int ci = 0; ci < a.ncoeffs(); ++ci)
    for (const cplx& v : a.coeff(ci)) m = std::max(m, std::abs(v));
  return m;
}

double max_diff(const MatrixForm& a, const MatrixForm& b) {
  check_same(a, b);
  if (a.degree() != b.degree()) throw std::invalid_argument("max_diff: degree mismatch");
  double m = 0.0;
  for (int ci = 0; ci < a.ncoeffs(); ++ci) {
    const auto& ca = a.coeff(ci);
    const auto& cb = b.coeff(ci);
    for (size_t i = 0; i < ca.size(); ++i) m = std::max(m, std::abs(ca[i] - cb[i]));
  }
  return m;
}

double anti_hermitian_defect(const MatrixForm& a) {
  const int n = a.rank();
  double m = 0.0;
  for (int ci = 0; ci < a.ncoeffs(); ++ci) {
    const auto& c = a.coeff(ci);
    const long np = a.grid()->npoints();
    for (long p = 0; p < np; ++p) {
      const cplx* blk = c.data() + p * n * n;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          m = std::max(m, std::abs(blk[i * n + j] + std::conj(blk[j * n + i])));
    }
  }
  return m;
}

std::vector<Period> periods(const MatrixForm& a) {
  const Grid& g = *a.grid();
  if (!g.all_circles()) throw std::domain_error("periods: grid is not a torus");
  if (a.rank() != 1) throw std::invalid_argument("periods: scalar forms only");
  std::vector<Period> out;
  const int dim = g.dim();
  const auto Is = combinations(dim, a.degree());
  for (size_t ii = 0; ii < Is.size(); ++ii) {
    const auto& I = Is[ii];
    // Iterate the subtorus spanned by I through the base point (index 0).
    cplx val(0.0, 0.0);
    const int p = static_cast<int>(I.size());
    std::vector<int> idx(static_cast<size_t>(p), 0);
    const auto& ctab = a.coeff(static_cast<int>(ii));
    while (true) {
      long pt = 0;
      double w = 1.0;
      for (int i = 0; i < p; ++i) {
        pt += static_cast<long>(idx[static_cast<size_t>(i)]) * g.stride(I[static_cast<size_t>(i)]);
        w *= g.axis(I[static_cast<size_t>(i)]).quad[static_cast<size_t>(idx[static_cast<size_t>(i)])];
      }
      val += w * ctab[static_cast<size_t>(pt)];
      int i = p - 1;
      while (i >= 0 && ++idx[static_cast<size_t>(i)] == g.axis(I[static_cast<size_t>(i)]).n) {
        idx[static_cast<size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
    }
    out.push_back({I, val});
  }
  return out;
}

ExactnessResult is_exact(const MatrixForm& a, double tol) {
  const Grid& g = *a.grid();
  if (!g.all_circles()) throw std::domain_error("is_exact: exactness test is only supported on torus grids");
  ExactnessResult r;
  r.scale = std::max(1.0, sup_norm(a));
  r.closedness = (a.degree() < g.dim()) ? sup_norm(d(a)) : 0.0;
  if (r.closedness > tol * r.scale) {
    r.status = ExactnessResult::Status::NotClosed;
    return r;
  }
  r.worst_period = 0.0;
  for (const auto& per : periods(a)) {
    if (std::abs(per.value) > r.worst_period) {
      r.worst_period = std::abs(per.value);
      r.worst_cycle = per.cycle;
    }
  }
  r.status = (r.worst_period <= tol * r.scale) ? ExactnessResult::Status::Exact
                                               : ExactnessResult::Status::NotExact;
  return r;
}

}  // namespace caloronkit
