#include "caloronkit/stringforms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace caloronkit {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kTwoPiI(0.0, 2.0 * kPi);

cplx pow_cplx(cplx b, int e) {
  cplx r(1.0, 0.0);
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// 1/j! (1/2 pi i)^j
cplx ch_coeff(int j) {
  cplx c(1.0, 0.0);
  for (int m = 1; m <= j; ++m) c /= (static_cast<double>(m) * kTwoPiI);
  return c;
}

// -j!/(2j)! (-1/2 pi i)^{j+1}
cplx tau_coeff(int j) {
  double r = 1.0;
  for (int m = j + 1; m <= 2 * j; ++m) r /= m;
  return -r * pow_cplx(-1.0 / kTwoPiI, j + 1);
}

// -(j-1)!/(2j-1)! (-1/2 pi i)^j
cplx universal_coeff(int j) {
  double r = 1.0;
  for (int m = j; m <= 2 * j - 1; ++m) r /= m;
  return -r * pow_cplx(-1.0 / kTwoPiI, j);
}

// Componentwise theta derivative of a form (not the exterior derivative).
MatrixForm theta_derivative(const MatrixForm& a) {
  const Grid& g = *a.grid();
  MatrixForm out = MatrixForm::zero(a.grid(), a.degree(), a.rank());
  const int n = a.rank();
  for (int ci = 0; ci < a.ncoeffs(); ++ci)
    g.differentiate(g.fiber_axis(), a.coeff(ci).data(), out.coeff(ci).data(), n * n);
  return out;
}

struct PairNodes {
  std::vector<double> w;
  std::vector<ConnectionPair> p;
  std::vector<MatrixForm> Adot, Phidot;
};

PairNodes pair_nodes(const PairPath& path, int cutoff) {
  PairNodes out;
  if (path.straight) {
    std::vector<double> x;
    gauss_legendre(cutoff + 1, x, out.w);
    MatrixForm dA = path.p1.A - path.p0.A;
    MatrixForm dPhi = path.p1.Phi - path.p0.Phi;
    for (double t : x) {
      out.p.push_back(path.at(t));
      out.Adot.push_back(dA);
      out.Phidot.push_back(dPhi);
    }
  } else {
    const int T = path.nsamples();
    if (T < 2) throw std::invalid_argument("string potential: fewer than 2 samples");
    GridPtr tg = Grid::make({FactorSpec::interval(T, 0.0, 1.0)});
    const Axis& ax = tg->axis(0);
    out.w = ax.quad;
    out.p = path.samples;
    for (int k = 0; k < T; ++k) {
      MatrixForm dA = MatrixForm::zero(path.grid(), 1, path.rank());
      MatrixForm dPhi = MatrixForm::zero(path.grid(), 0, path.rank());
      for (int l = 0; l < T; ++l) {
        double c = ax.deriv[static_cast<size_t>(k) * T + l];
        if (c == 0.0) continue;
        MatrixForm sA = path.samples[static_cast<size_t>(l)].A;
        sA *= cplx(c, 0.0);
        dA += sA;
        MatrixForm sP = path.samples[static_cast<size_t>(l)].Phi;
        sP *= cplx(c, 0.0);
        dPhi += sP;
      }
      out.Adot.push_back(std::move(dA));
      out.Phidot.push_back(std::move(dPhi));
    }
  }
  return out;
}

GradedForm string_potential_explicit(const PairPath& path, int cutoff) {
  const GridPtr& g = path.grid();
  GridPtr base = g->without_axis(g->fiber_axis());
  GradedForm out = GradedForm::zero(base, Parity::Even);
  PairNodes nodes = pair_nodes(path, cutoff);
  for (size_t q = 0; q < nodes.w.size(); ++q) {
    MatrixForm F = base_curvature(nodes.p[q]);
    MatrixForm DPhi = higgs_covariant_derivative(nodes.p[q]);
    for (int j = 1; j <= cutoff; ++j) {
      int deg = 2 * j - 2;
      if (deg > base->dim()) break;
      MatrixForm acc = MatrixForm::zero(g, deg, 1);
      if (j >= 2) {
        std::vector<const MatrixForm*> args;
        args.push_back(&nodes.Adot[q]);
        for (int m = 0; m < j - 2; ++m) args.push_back(&F);
        args.push_back(&DPhi);
        MatrixForm st = sym_trace(args);
        st *= cplx(static_cast<double>(j - 1), 0.0);
        acc += st;
      }
      {
        std::vector<const MatrixForm*> args;
        for (int m = 0; m < j - 1; ++m) args.push_back(&F);
        args.push_back(&nodes.Phidot[q]);
        acc += sym_trace(args);
      }
      acc *= cplx(static_cast<double>(j) * nodes.w[q], 0.0);
      out.term(deg) += integrate_circle(acc);
    }
  }
  return out;
}

GradedForm string_potential_cs_fiber(const PairPath& path, int cutoff) {
  const GridPtr& g = path.grid();
  GridPtr base = g->without_axis(g->fiber_axis());
  GradedForm out = GradedForm::zero(base, Parity::Even);
  GradedForm cs = chern_simons(caloron_path(path), cutoff);
  for (const auto& [deg, f] : cs.terms) out.term(deg - 1) += fiber_integrate(f);
  return out;
}

GradedForm string_potential_slice(const PairPath& path, int cutoff) {
  const GridPtr& g = path.grid();
  GridPtr base = g->without_axis(g->fiber_axis());
  GradedForm out = GradedForm::zero(base, Parity::Even);

  if (path.straight) {
    // Exact slice integrand at Gauss-Legendre nodes: the Chern character of
    // the path connection on (M x S1) x [0,1] carries the time derivative in
    // its dt part, tracked here as a (value, velocity) pair.
    MatrixForm a0 = caloron_transform(path.p0).a;
    MatrixForm a1 = caloron_transform(path.p1).a;
    MatrixForm adot = a1 - a0;
    std::vector<double> x, w;
    gauss_legendre(cutoff + 1, x, w);
    for (size_t q = 0; q < x.size(); ++q) {
      MatrixForm at = a0;
      at *= cplx(1.0 - x[q], 0.0);
      MatrixForm a1t = a1;
      a1t *= cplx(x[q], 0.0);
      at += a1t;
      MatrixForm F = curvature(at);
      MatrixForm base_pow = F;   // F^j
      MatrixForm dot_pow = adot; // dt part of (F + dt^adot)^j
      for (int j = 1; j <= cutoff; ++j) {
        int deg_big = 2 * j - 1;
        if (deg_big > g->dim()) break;
        if (j > 1) {
          MatrixForm nd = wedge(dot_pow, F);
          nd += wedge(base_pow, adot);
          dot_pow = std::move(nd);
          if (2 * j <= g->dim()) base_pow = wedge(base_pow, F);
        }
        MatrixForm t = trace_form(dot_pow);
        t *= w[q] * ch_coeff(j);
        out.term(2 * j - 2) += fiber_integrate(t);
      }
    }
    return out;
  }

  // Sampled: materialize the family on M x [0,1] x S1, take the string form
  // of the product pair, contract with the time axis and integrate slices.
  const int T = path.nsamples();
  int tpos = static_cast<int>(g->factors().size()) - 1;  // before the circle
  GridPtr big = g->with_axis_inserted(tpos, FactorSpec::interval(T, 0.0, 1.0));
  const int tax = big->dim() - 2;
  std::vector<const MatrixForm*> As, Phis;
  for (const auto& s : path.samples) {
    As.push_back(&s.A);
    Phis.push_back(&s.Phi);
  }
  MatrixForm A_big = stack_along_axis(big, tax, As);
  MatrixForm Phi_big = stack_along_axis(big, tax, Phis);
  ConnectionPair p_big = ConnectionPair::make(std::move(A_big), std::move(Phi_big),
                                              path.samples.front().unitary);
  GradedForm s_big = string_form(p_big, cutoff, StringFormAlg::Direct);
  GridPtr mxt = big->without_axis(big->fiber_axis());
  const int t_in_base = mxt->dim() - 1;
  const Axis& ta = mxt->axis(t_in_base);
  for (const auto& [deg, f] : s_big.terms) {
    if (deg < 1 || deg - 1 > base->dim()) continue;
    MatrixForm c = contract(f, t_in_base);
    for (int k = 0; k < T; ++k) {
      MatrixForm s = slice(c, t_in_base, k);
      s *= cplx(ta.quad[static_cast<size_t>(k)], 0.0);
      out.term(deg - 1) += s;
    }
  }
  return out;
}

}  // namespace

double string_coefficient(int i, int j) {
  if (j < 1 || i < 0 || i > j - 1) throw std::invalid_argument("string coefficient: bad indices");
  // (-1/2)^i j!(j-1)!/((j+i)!(j-1-i)!) assembled from ratios
  double c = 1.0;
  for (int m = 0; m < i; ++m) c *= -0.5;
  for (int m = j + 1; m <= j + i; ++m) c /= m;        // j!/(j+i)!
  for (int m = j - i; m <= j - 1; ++m) c *= m;        // (j-1)!/(j-1-i)!
  return c;
}

GradedForm string_form(const ConnectionPair& p, int cutoff, StringFormAlg alg) {
  const GridPtr& g = p.grid();
  GridPtr base = g->without_axis(g->fiber_axis());
  if (alg == StringFormAlg::ViaCaloron) {
    GradedForm ch = chern_character(caloron_transform(p).a, cutoff);
    GradedForm out = GradedForm::zero(base, Parity::Odd);
    for (const auto& [deg, f] : ch.terms) {
      if (deg == 0) continue;
      out.term(deg - 1) += fiber_integrate(f);
    }
    return out;
  }
  GradedForm out = GradedForm::zero(base, Parity::Odd);
  MatrixForm F = base_curvature(p);
  MatrixForm DPhi = higgs_covariant_derivative(p);
  for (int j = 1; j <= cutoff; ++j) {
    int deg = 2 * j - 1;
    if (deg > base->dim()) break;
    std::vector<const MatrixForm*> args;
    args.push_back(&DPhi);
    for (int m = 0; m < j - 1; ++m) args.push_back(&F);
    MatrixForm st = sym_trace(args);
    st *= cplx(static_cast<double>(j), 0.0);
    out.term(deg) += integrate_circle(st);
  }
  return out;
}

GradedForm string_potential(const PairPath& path, int cutoff, StringPotentialAlg alg) {
  if (cutoff < 1) throw std::invalid_argument("string potential: cutoff must be >= 1");
  switch (alg) {
    case StringPotentialAlg::Explicit: return string_potential_explicit(path, cutoff);
    case StringPotentialAlg::CsFiber: return string_potential_cs_fiber(path, cutoff);
    case StringPotentialAlg::Slice: return string_potential_slice(path, cutoff);
  }
  throw std::logic_error("string potential: unknown algorithm");
}

StringDatumDefect string_datum_defect(const ConnectionPair& p0, const ConnectionPair& p1,
                                      int cutoff, double exact_tol) {
  StringDatumDefect out;
  out.defect = string_potential(straight_line(p0, p1), cutoff, StringPotentialAlg::Explicit);
  out.base_is_torus = out.defect.grid->all_circles();
  for (const auto& [deg, f] : out.defect.terms) {
    DegreeExactness de;
    de.degree = deg;
    if (out.base_is_torus) {
      de.result = is_exact(f, exact_tol);
    } else {
      de.supported = false;
    }
    out.verdicts.push_back(std::move(de));
  }
  return out;
}

GradedForm total_string_potential(const ConnectionPair& p, int cutoff) {
  const GridPtr& g = p.grid();
  GridPtr base = g->without_axis(g->fiber_axis());
  GradedForm out = GradedForm::zero(base, Parity::Even);
  MatrixForm F = base_curvature(p);
  MatrixForm DPhi = higgs_covariant_derivative(p);
  MatrixForm AA = bracket(p.A, p.A);
  MatrixForm APhi = bracket(p.A, p.Phi);
  for (int j = 1; j <= cutoff; ++j) {
    int deg = 2 * j - 2;
    if (deg > base->dim()) break;
    MatrixForm acc = MatrixForm::zero(g, deg, 1);
    for (int i = 0; i <= j - 1; ++i) {
      std::vector<const MatrixForm*> args;
      args.push_back(&p.Phi);
      for (int m = 0; m < i; ++m) args.push_back(&AA);
      for (int m = 0; m < j - 1 - i; ++m) args.push_back(&F);
      MatrixForm st = sym_trace(args);
      st *= cplx(string_coefficient(i, j), 0.0);
      acc += st;
    }
    for (int i = 1; i <= j - 1; ++i) {
      MatrixForm X = APhi;
      X *= cplx(static_cast<double>(i), 0.0);
      MatrixForm Y = DPhi;
      Y *= cplx(static_cast<double>(i + j), 0.0);
      X -= Y;
      std::vector<const MatrixForm*> args;
      args.push_back(&p.A);
      for (int m = 0; m < i - 1; ++m) args.push_back(&AA);
      for (int m = 0; m < j - 1 - i; ++m) args.push_back(&F);
      args.push_back(&X);
      MatrixForm st = sym_trace(args);
      st *= cplx(2.0 * string_coefficient(i, j), 0.0);
      acc += st;
    }
    out.term(deg) += integrate_circle(acc);
  }
  return out;
}

GradedForm tau_hat_pullback(const GroupMap& based_map, int cutoff) {
  if (!based_map.based()) throw std::invalid_argument("tau_hat: map must be based");
  const GridPtr& g = based_map.grid();
  GridPtr base = g->without_axis(g->fiber_axis());
  GradedForm out = GradedForm::zero(base, Parity::Even);
  MatrixForm theta = maurer_cartan(based_map);
  const int ax = g->fiber_axis();
  int theta_ci = comb_rank(std::vector<int>{ax}, g->dim());
  MatrixForm Phi = MatrixForm::zero(g, 0, based_map.rank());
  Phi.coeff(0) = theta.coeff(theta_ci);
  std::fill(theta.coeff(theta_ci).begin(), theta.coeff(theta_ci).end(), cplx(0.0, 0.0));
  MatrixForm theta2 = wedge(theta, theta);
  MatrixForm P = Phi;  // Phi ^ theta_M^{2j}
  for (int j = 0; j <= cutoff; ++j) {
    int deg = 2 * j;
    if (deg > base->dim()) break;
    if (j > 0) P = wedge(P, theta2);
    MatrixForm t = trace_form(P);
    t *= tau_coeff(j);
    out.term(deg) += integrate_circle(t);
  }
  return out;
}

GradedForm universal_string_pullback(const GroupMap& g, int cutoff) {
  const GridPtr& gr = g.grid();
  GradedForm out = GradedForm::zero(gr, Parity::Odd);
  MatrixForm theta = maurer_cartan(g);
  MatrixForm theta2 = wedge(theta, theta);
  MatrixForm P = theta;
  for (int j = 1; j <= cutoff + 1; ++j) {
    int deg = 2 * j - 1;
    if (deg > gr->dim()) break;
    if (j > 1) P = wedge(P, theta2);
    MatrixForm t = trace_form(P);
    t *= universal_coeff(j);
    out.term(deg) += t;
  }
  return out;
}

std::vector<double> witness_profile(const Grid& grid, int k) {
  if (!grid.has_fiber()) throw std::invalid_argument("witness profile: no distinguished circle");
  const Axis& ax = grid.axis(grid.fiber_axis());
  std::vector<double> rho(static_cast<size_t>(ax.n));
  auto base_profile = [&](int i) { return 1.0 - std::cos(ax.coords[static_cast<size_t>(i)]); };
  if (k == 0) {
    for (int i = 0; i < ax.n; ++i) rho[static_cast<size_t>(i)] = base_profile(i);
    return rho;
  }
  double target = std::pow(2.0 * kPi, k + 1);
  auto moment = [&](double c) {
    double s = 0.0;
    for (int i = 0; i < ax.n; ++i)
      s += ax.quad[static_cast<size_t>(i)] * std::pow(c * base_profile(i), k);
    return s - target;
  };
  double lo = 0.0, hi = 1.0;
  while (moment(hi) < 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (moment(mid) < 0.0 ? lo : hi) = mid;
  }
  double c = 0.5 * (lo + hi);
  for (int i = 0; i < ax.n; ++i) rho[static_cast<size_t>(i)] = c * base_profile(i);
  return rho;
}

ConnectionPair surjectivity_witness(GridPtr grid, const MatrixForm& f_on_base, int k,
                                    std::span<const double> rho) {
  if (!grid->has_fiber()) throw std::invalid_argument("witness: no distinguished circle");
  if (k < 0) throw std::invalid_argument("witness: k must be >= 0");
  GridPtr base = grid->without_axis(grid->fiber_axis());
  if (!f_on_base.grid()->same_as(*base) || f_on_base.rank() != 1 || f_on_base.degree() != 0)
    throw std::invalid_argument("witness: f must be a scalar field on the base");
  const int ntheta = grid->axis(grid->fiber_axis()).n;
  const long nbase = base->npoints();

  MatrixForm Phi = MatrixForm::zero(grid, 0, 1);
  for (long q = 0; q < nbase; ++q) {
    cplx v = cplx(0.0, 1.0) * f_on_base.coeff(0)[static_cast<size_t>(q)];
    for (int t = 0; t < ntheta; ++t) Phi.coeff(0)[static_cast<size_t>(q * ntheta + t)] = v;
  }
  MatrixForm A = MatrixForm::zero(grid, 1, 1);

  if (k >= 1) {
    std::vector<double> default_rho;
    if (rho.empty()) {
      default_rho = witness_profile(*grid, k);
      rho = default_rho;
    }
    if (static_cast<int>(rho.size()) != ntheta)
      throw std::invalid_argument("witness: rho sample count mismatch");
    if (std::abs(rho[0]) > 1e-12)
      throw std::invalid_argument("witness: rho(0) must vanish");
    double s = 0.0;
    const Axis& th = grid->axis(grid->fiber_axis());
    for (int i = 0; i < ntheta; ++i)
      s += th.quad[static_cast<size_t>(i)] * std::pow(rho[static_cast<size_t>(i)], k);
    if (std::abs(s - std::pow(2.0 * kPi, k + 1)) > 1e-8)
      throw std::invalid_argument("witness: rho normalization violated");
    if (2 * k > base->dim())
      throw std::invalid_argument("witness: base has fewer than 2k axes");
    for (int axis = 0; axis < 2 * k; ++axis)
      if (grid->axis(axis).kind != AxisKind::Interval)
        throw std::invalid_argument("witness: k >= 1 needs interval axes (periodic coordinates unsupported)");
    std::vector<double> x(static_cast<size_t>(grid->dim()));
    for (int m = 0; m < k; ++m) {
      int ci = comb_rank(std::vector<int>{2 * m + 1}, grid->dim());
      auto& tab = A.coeff(ci);
      for (long p = 0; p < grid->npoints(); ++p) {
        grid->point_coords(p, x.data());
        int ti = static_cast<int>(p % ntheta);
        tab[static_cast<size_t>(p)] =
            cplx(0.0, 1.0) * rho[static_cast<size_t>(ti)] * x[static_cast<size_t>(2 * m)];
      }
    }
  }
  return ConnectionPair::make(std::move(A), std::move(Phi), false);
}

GerbeCurving gerbe_curving_check(const ConnectionPair& p) {
  if (!p.unitary) throw std::invalid_argument("gerbe curving: pair must be unitary");
  const GridPtr& g = p.grid();
  GridPtr base = g->without_axis(g->fiber_axis());
  auto pairing = [](const MatrixForm& x, const MatrixForm& y) {
    MatrixForm t = sym_trace({&x, &y});
    t *= cplx(-8.0 * kPi * kPi, 0.0);
    return t;
  };
  MatrixForm F = base_curvature(p);
  MatrixForm dthA = theta_derivative(p.A);
  MatrixForm inner = pairing(F, p.Phi);
  MatrixForm aa = pairing(p.A, dthA);
  aa *= cplx(0.5, 0.0);
  inner -= aa;
  GerbeCurving out;
  out.B = integrate_circle(inner);
  out.B *= cplx(1.0, 0.0) / kTwoPiI;

  MatrixForm s2 = total_string_potential(p, 2).term(2);
  MatrixForm rhs = out.B;
  rhs *= cplx(1.0, 0.0) / kTwoPiI;
  // The exact term carries 1/(8 pi^2), not 1/(4 pi^2): with the pairing
  // extended bilinearly to forms, expanding S_2 and collecting d<A,Phi>
  // leaves half the cross term. The rank-1 case pins the constant.
  MatrixForm ap = integrate_circle(pairing(p.A, p.Phi));
  ap *= cplx(1.0 / (8.0 * kPi * kPi), 0.0);
  rhs += d(ap);
  out.defect = max_diff(s2, rhs);
  return out;
}

}  // namespace caloronkit
