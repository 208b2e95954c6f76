#include "caloronkit/lie.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "caloronkit/parallel.hpp"

namespace caloronkit {

namespace {
constexpr double kPi = std::numbers::pi;

double uniform(std::mt19937_64& rng) {
  return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
}
}  // namespace

GroupMap GroupMap::identity(GridPtr g, int rank) {
  std::vector<cplx> vals(static_cast<size_t>(g->npoints()) * rank * rank, cplx(0.0, 0.0));
  for (long p = 0; p < g->npoints(); ++p)
    for (int i = 0; i < rank; ++i) vals[static_cast<size_t>(p * rank * rank + i * rank + i)] = 1.0;
  return from_values(std::move(g), rank, std::move(vals), true, true);
}

GroupMap GroupMap::from_values(GridPtr g, int rank, std::vector<cplx> values,
                               bool unitary, bool based) {
  if (!g) throw std::invalid_argument("group map: null grid");
  if (values.size() != static_cast<size_t>(g->npoints()) * rank * rank)
    throw std::invalid_argument("group map: value array has wrong size");
  GroupMap m;
  m.grid_ = std::move(g);
  m.rank_ = rank;
  m.values_ = std::move(values);
  m.unitary_ = unitary;
  m.based_ = based;
  if (unitary && m.unitarity_defect() > 1e-10)
    throw std::invalid_argument("group map: unitary flag set but values leave U(n)");
  if (based && m.basedness_defect() > 1e-12)
    throw std::invalid_argument("group map: based flag set but theta=0 slice is not the identity");
  return m;
}

double GroupMap::unitarity_defect() const {
  double m = 0.0;
  for (long p = 0; p < grid_->npoints(); ++p)
    m = std::max(m, mat::unitary_defect(rank_, at(p)));
  return m;
}

double GroupMap::basedness_defect() const {
  if (!grid_->has_fiber()) return 0.0;
  const int ax = grid_->fiber_axis();
  const int ntheta = grid_->axis(ax).n;
  const int n = rank_;
  double m = 0.0;
  for (long q = 0; q < grid_->npoints() / ntheta; ++q) {
    const cplx* blk = at(q * ntheta);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        cplx v = blk[i * n + j];
        if (i == j) v -= 1.0;
        m = std::max(m, std::abs(v));
      }
  }
  return m;
}

MatrixForm maurer_cartan(const GroupMap& g) {
  const Grid& gr = *g.grid();
  const int n = g.rank();
  const long np = gr.npoints();
  // Pointwise inverses once, then g^{-1} (d_axis g) per axis.
  std::vector<cplx> inv(static_cast<size_t>(np) * n * n);
  parallel_for(np, [&](long pb, long pe) {
    for (long p = pb; p < pe; ++p) mat::inverse(n, g.at(p), inv.data() + p * n * n);
  });
  MatrixForm out = MatrixForm::zero(g.grid(), 1, n);
  std::vector<cplx> der(static_cast<size_t>(np) * n * n);
  for (int ax = 0; ax < gr.dim(); ++ax) {
    gr.differentiate(ax, g.values().data(), der.data(), n * n);
    cplx* dst = out.coeff(ax).data();
    parallel_for(np, [&](long pb, long pe) {
      for (long p = pb; p < pe; ++p)
        mat::mul(n, inv.data() + p * n * n, der.data() + p * n * n, dst + p * n * n);
    });
  }
  return out;
}

GroupMap block_sum(const GroupMap& g, const GroupMap& h) {
  if (!g.grid()->same_as(*h.grid())) throw std::invalid_argument("block_sum: grid mismatch");
  const int ng = g.rank(), nh = h.rank(), n = ng + nh;
  const long np = g.grid()->npoints();
  std::vector<cplx> vals(static_cast<size_t>(np) * n * n, cplx(0.0, 0.0));
  for (long p = 0; p < np; ++p) {
    cplx* dst = vals.data() + p * n * n;
    const cplx* a = g.at(p);
    const cplx* b = h.at(p);
    for (int i = 0; i < ng; ++i)
      for (int j = 0; j < ng; ++j) dst[i * n + j] = a[i * ng + j];
    for (int i = 0; i < nh; ++i)
      for (int j = 0; j < nh; ++j) dst[(ng + i) * n + ng + j] = b[i * nh + j];
  }
  return GroupMap::from_values(g.grid(), n, std::move(vals), g.unitary() && h.unitary(),
                               g.based() && h.based());
}

GroupMap pointwise_inverse(const GroupMap& g) {
  const int n = g.rank();
  const long np = g.grid()->npoints();
  std::vector<cplx> vals(static_cast<size_t>(np) * n * n);
  parallel_for(np, [&](long pb, long pe) {
    for (long p = pb; p < pe; ++p) mat::inverse(n, g.at(p), vals.data() + p * n * n);
  });
  return GroupMap::from_values(g.grid(), n, std::move(vals), g.unitary(), g.based());
}

GroupMap pointwise_product(const GroupMap& g, const GroupMap& h) {
  if (!g.grid()->same_as(*h.grid())) throw std::invalid_argument("product: grid mismatch");
  if (g.rank() != h.rank()) throw std::invalid_argument("product: rank mismatch");
  const int n = g.rank();
  const long np = g.grid()->npoints();
  std::vector<cplx> vals(static_cast<size_t>(np) * n * n);
  parallel_for(np, [&](long pb, long pe) {
    for (long p = pb; p < pe; ++p) mat::mul(n, g.at(p), h.at(p), vals.data() + p * n * n);
  });
  return GroupMap::from_values(g.grid(), n, std::move(vals), g.unitary() && h.unitary(),
                               g.based() && h.based());
}

MatrixForm gauge_conjugate(const GroupMap& g, const MatrixForm& w) {
  if (!g.grid()->same_as(*w.grid())) throw std::invalid_argument("conjugate: grid mismatch");
  if (g.rank() != w.rank()) throw std::invalid_argument("conjugate: rank mismatch");
  const int n = g.rank();
  const long np = g.grid()->npoints();
  std::vector<cplx> inv(static_cast<size_t>(np) * n * n);
  parallel_for(np, [&](long pb, long pe) {
    for (long p = pb; p < pe; ++p) mat::inverse(n, g.at(p), inv.data() + p * n * n);
  });
  MatrixForm out = MatrixForm::zero(w.grid(), w.degree(), n);
  std::vector<cplx> tmp(static_cast<size_t>(n) * n);
  for (int ci = 0; ci < w.ncoeffs(); ++ci) {
    for (long p = 0; p < np; ++p) {
      mat::mul(n, g.at(p), w.at(ci, p), tmp.data());
      mat::mul(n, tmp.data(), inv.data() + p * n * n, out.at(ci, p));
    }
  }
  return out;
}

namespace {

// X and dX/dt of the block rotation interpolation at angle t.
void rotation_blocks(int n, const cplx* g, const cplx* ginv, double t, cplx* X, cplx* V) {
  const double c = std::cos(t), s = std::sin(t);
  const double c2 = c * c, s2 = s * s, cs = c * s;
  const double d_c2 = -2.0 * cs, d_s2 = 2.0 * cs, d_cs = c2 - s2;
  const int N = 2 * n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx gij = g[i * n + j], hij = ginv[i * n + j];
      cplx one = (i == j) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
      if (X) {
        X[i * N + j] = c2 * gij + s2 * one;                // c^2 g + s^2 I
        X[i * N + n + j] = cs * (gij - one);               // cs (g - I)
        X[(n + i) * N + j] = cs * (one - hij);             // cs (I - g^{-1})
        X[(n + i) * N + n + j] = s2 * one + c2 * hij;      // s^2 I + c^2 g^{-1}
      }
      if (V) {
        V[i * N + j] = d_c2 * gij + d_s2 * one;
        V[i * N + n + j] = d_cs * (gij - one);
        V[(n + i) * N + j] = d_cs * (one - hij);
        V[(n + i) * N + n + j] = d_s2 * one + d_c2 * hij;
      }
    }
}

}  // namespace

GroupMap rotation_homotopy(const GroupMap& g, double t) {
  const int n = g.rank();
  const long np = g.grid()->npoints();
  std::vector<cplx> vals(static_cast<size_t>(np) * 4 * n * n);
  std::vector<cplx> inv(static_cast<size_t>(n) * n);
  for (long p = 0; p < np; ++p) {
    mat::inverse(n, g.at(p), inv.data());
    rotation_blocks(n, g.at(p), inv.data(), t, vals.data() + p * 4 * n * n, nullptr);
  }
  return GroupMap::from_values(g.grid(), 2 * n, std::move(vals), g.unitary(), false);
}

std::vector<cplx> rotation_homotopy_velocity(const GroupMap& g, double t) {
  const int n = g.rank();
  const long np = g.grid()->npoints();
  std::vector<cplx> vals(static_cast<size_t>(np) * 4 * n * n);
  std::vector<cplx> inv(static_cast<size_t>(n) * n);
  for (long p = 0; p < np; ++p) {
    mat::inverse(n, g.at(p), inv.data());
    rotation_blocks(n, g.at(p), inv.data(), t, nullptr, vals.data() + p * 4 * n * n);
  }
  return vals;
}

GroupMap rotation_homotopy_family(const GroupMap& g, int n_t) {
  if (n_t < 8) throw std::invalid_argument("rotation homotopy: need >= 8 time samples");
  GridPtr big = g.grid()->with_axis_inserted(static_cast<int>(g.grid()->factors().size()),
                                             FactorSpec::interval(n_t, 0.0, 1.0));
  const int n = g.rank(), N = 2 * n;
  const long np = g.grid()->npoints();
  std::vector<cplx> vals(static_cast<size_t>(np) * n_t * N * N);
  std::vector<cplx> inv(static_cast<size_t>(n) * n);
  for (long p = 0; p < np; ++p) {
    mat::inverse(n, g.at(p), inv.data());
    for (int k = 0; k < n_t; ++k) {
      double t = 0.5 * kPi * k / (n_t - 1);
      rotation_blocks(n, g.at(p), inv.data(), t, vals.data() + (p * n_t + k) * N * N, nullptr);
    }
  }
  return GroupMap::from_values(big, N, std::move(vals), g.unitary(), false);
}

std::vector<cplx> holonomy(std::span<const cplx> loop, int rank, int steps,
                           bool unitary_projection) {
  const int n = rank;
  const long ns = static_cast<long>(loop.size()) / (n * n);
  if (ns < 8) throw std::invalid_argument("holonomy: need >= 8 samples");
  if (steps < 8) throw std::invalid_argument("holonomy: need >= 8 steps");

  // Trigonometric interpolation of the loop at the 2*steps evaluation points.
  // Nyquist coefficient split evenly for even sample counts.
  const int mmax = static_cast<int>(ns) / 2;
  std::vector<cplx> coef(static_cast<size_t>(2 * mmax + 1) * n * n, cplx(0.0, 0.0));
  for (int m = -mmax; m <= mmax; ++m) {
    cplx* cm = coef.data() + static_cast<size_t>(m + mmax) * n * n;
    double split = (std::abs(m) == mmax && ns % 2 == 0) ? 0.5 : 1.0;
    for (long j = 0; j < ns; ++j) {
      double th = 2.0 * kPi * j / ns;
      cplx ph = std::exp(cplx(0.0, -m * th)) * (split / static_cast<double>(ns));
      const cplx* s = loop.data() + j * n * n;
      for (int e = 0; e < n * n; ++e) cm[e] += ph * s[e];
    }
  }
  const long neval = 2L * steps + 1;
  std::vector<cplx> phi(static_cast<size_t>(neval) * n * n, cplx(0.0, 0.0));
  for (long q = 0; q < neval; ++q) {
    double th = kPi * q / steps;  // = 2 pi q / (2 steps)
    cplx* dst = phi.data() + q * n * n;
    for (int m = -mmax; m <= mmax; ++m) {
      cplx ph = std::exp(cplx(0.0, m * th));
      const cplx* cm = coef.data() + static_cast<size_t>(m + mmax) * n * n;
      for (int e = 0; e < n * n; ++e) dst[e] += ph * cm[e];
    }
  }

  const double h = 2.0 * kPi / steps;
  std::vector<cplx> g(static_cast<size_t>(n) * n), k1(g), k2(g), k3(g), k4(g), tmp(g);
  mat::identity(n, g.data());
  auto rhs = [&](const cplx* gv, long q, cplx* out) {
    mat::mul(n, gv, phi.data() + q * n * n, out);
  };
  for (int st = 0; st < steps; ++st) {
    long q0 = 2L * st, qh = q0 + 1, q1 = q0 + 2;
    rhs(g.data(), q0, k1.data());
    for (int e = 0; e < n * n; ++e) tmp[static_cast<size_t>(e)] = g[static_cast<size_t>(e)] + 0.5 * h * k1[static_cast<size_t>(e)];
    rhs(tmp.data(), qh, k2.data());
    for (int e = 0; e < n * n; ++e) tmp[static_cast<size_t>(e)] = g[static_cast<size_t>(e)] + 0.5 * h * k2[static_cast<size_t>(e)];
    rhs(tmp.data(), qh, k3.data());
    for (int e = 0; e < n * n; ++e) tmp[static_cast<size_t>(e)] = g[static_cast<size_t>(e)] + h * k3[static_cast<size_t>(e)];
    rhs(tmp.data(), q1, k4.data());
    for (int e = 0; e < n * n; ++e)
      g[static_cast<size_t>(e)] += h / 6.0 *
          (k1[static_cast<size_t>(e)] + 2.0 * k2[static_cast<size_t>(e)] +
           2.0 * k3[static_cast<size_t>(e)] + k4[static_cast<size_t>(e)]);
    if (unitary_projection) {
      mat::polar_unitary(n, g.data(), tmp.data());
      g = tmp;
    }
  }
  return g;
}

void matrix_exp(int n, const cplx* in, cplx* out) { mat::exponential(n, in, out); }

MatrixForm random_form(GridPtr g, int degree, int rank, std::uint64_t seed, int band,
                       double amplitude, bool anti_hermitian) {
  const Grid& gr = *g;
  for (int ax = 0; ax < gr.dim(); ++ax) {
    int nyq = gr.axis(ax).n / 2;
    if (band >= nyq)
      throw std::invalid_argument("random_form: band limit reaches the Nyquist mode");
  }
  MatrixForm out = MatrixForm::zero(g, degree, rank);
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);
  const int n = rank;
  const long np = gr.npoints();
  const int nmodes = 6;
  std::vector<double> x(static_cast<size_t>(gr.dim()));
  for (int ci = 0; ci < out.ncoeffs(); ++ci) {
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        struct Mode {
          std::vector<int> freq;
          std::vector<double> phase;
          cplx amp;
        };
        std::vector<Mode> modes(static_cast<size_t>(nmodes));
        for (auto& m : modes) {
          m.freq.resize(static_cast<size_t>(gr.dim()));
          m.phase.resize(static_cast<size_t>(gr.dim()));
          for (int ax = 0; ax < gr.dim(); ++ax) {
            m.freq[static_cast<size_t>(ax)] =
                static_cast<int>((uniform(rng) * 0.5 + 0.5) * (band + 1));
            if (m.freq[static_cast<size_t>(ax)] > band) m.freq[static_cast<size_t>(ax)] = band;
            m.phase[static_cast<size_t>(ax)] = uniform(rng) * kPi;
          }
          m.amp = cplx(uniform(rng), uniform(rng)) * (amplitude / nmodes);
        }
        auto& tab = out.coeff(ci);
        for (long p = 0; p < np; ++p) {
          gr.point_coords(p, x.data());
          cplx v(0.0, 0.0);
          for (const auto& m : modes) {
            double b = 1.0;
            for (int ax = 0; ax < gr.dim(); ++ax) {
              const Axis& a = gr.axis(ax);
              int f = m.freq[static_cast<size_t>(ax)];
              double u = (a.kind == AxisKind::Circle)
                             ? 2.0 * kPi * f * x[static_cast<size_t>(ax)] / a.period
                             : kPi * f * (x[static_cast<size_t>(ax)] - a.a) / (a.b - a.a);
              b *= std::cos(u + m.phase[static_cast<size_t>(ax)]);
            }
            v += m.amp * b;
          }
          tab[static_cast<size_t>(p * n * n + r * n + c)] = v;
        }
      }
  }
  if (anti_hermitian) {
    for (int ci = 0; ci < out.ncoeffs(); ++ci) {
      auto& tab = out.coeff(ci);
      for (long p = 0; p < np; ++p) {
        cplx* blk = tab.data() + p * n * n;
        for (int r = 0; r < n; ++r)
          for (int c = r; c < n; ++c) {
            cplx a = blk[r * n + c], b = blk[c * n + r];
            cplx u = 0.5 * (a - std::conj(b));
            blk[r * n + c] = u;
            blk[c * n + r] = -std::conj(u);
          }
      }
    }
  }
  return out;
}

GroupMap random_smooth_map(GridPtr g, int rank, std::uint64_t seed, int band,
                           double amplitude, bool unitary, bool based) {
  MatrixForm X = random_form(g, 0, rank, seed, band, amplitude, unitary);
  const long np = g->npoints();
  const int n = rank;
  std::vector<cplx> vals(static_cast<size_t>(np) * n * n);
  parallel_for(np, [&](long pb, long pe) {
    for (long p = pb; p < pe; ++p) mat::exponential(n, X.at(0, p), vals.data() + p * n * n);
  });
  if (based) {
    if (!g->has_fiber())
      throw std::invalid_argument("random map: based flag needs a distinguished circle");
    const int ntheta = g->axis(g->fiber_axis()).n;
    std::vector<cplx> inv0(static_cast<size_t>(n) * n), tmp(static_cast<size_t>(n) * n);
    for (long q = 0; q < np / ntheta; ++q) {
      mat::inverse(n, vals.data() + (q * ntheta) * n * n, inv0.data());
      for (int t = 0; t < ntheta; ++t) {
        cplx* blk = vals.data() + (q * ntheta + t) * n * n;
        mat::mul(n, blk, inv0.data(), tmp.data());
        std::copy(tmp.begin(), tmp.end(), blk);
      }
      // force the slice to the exact identity
      mat::identity(n, vals.data() + (q * ntheta) * n * n);
    }
  }
  return GroupMap::from_values(std::move(g), n, std::move(vals), unitary, based);
}

GroupMap random_homotopy(GridPtr base, int rank, std::uint64_t seed, int band,
                         double amplitude, int n_t) {
  if (n_t < 8) throw std::invalid_argument("random homotopy: need >= 8 time samples");
  GroupMap g0 = random_smooth_map(base, rank, seed, band, amplitude, true, false);
  MatrixForm X = random_form(base, 0, rank, seed + 101, band, amplitude, true);
  GridPtr big = base->with_axis_inserted(static_cast<int>(base->factors().size()),
                                         FactorSpec::interval(n_t, 0.0, 1.0));
  const int n = rank;
  const long nb = base->npoints();
  std::vector<cplx> vals(static_cast<size_t>(nb) * n_t * n * n);
  std::vector<cplx> sx(static_cast<size_t>(n) * n), ex(sx);
  for (long q = 0; q < nb; ++q) {
    for (int k = 0; k < n_t; ++k) {
      double s = static_cast<double>(k) / (n_t - 1);
      double tau = s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
      for (int e = 0; e < n * n; ++e) sx[static_cast<size_t>(e)] = tau * X.at(0, q)[e];
      mat::exponential(n, sx.data(), ex.data());
      mat::mul(n, g0.at(q), ex.data(), vals.data() + (q * n_t + k) * n * n);
    }
  }
  return GroupMap::from_values(big, n, std::move(vals), true, false);
}

}  // namespace caloronkit
