#include "caloronkit/verify.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace caloronkit {

namespace {

constexpr double kPi = std::numbers::pi;

void push(std::vector<CheckRow>& rows, std::string name, std::string identity, double defect,
          double tol) {
  rows.push_back({std::move(name), std::move(identity), defect, tol});
}

GridPtr grid_or(const SuiteConfig& cfg, const char* spec) {
  return cfg.grid ? cfg.grid : parse_grid_spec(spec);
}

// Suites that need a loop direction accept plain circle grids and treat the
// last circle as distinguished.
GridPtr fiber_grid_or(const SuiteConfig& cfg, const char* spec) {
  GridPtr g = grid_or(cfg, spec);
  if (!g->has_fiber() && g->factors().back().kind == FactorSpec::Kind::Circle)
    g = Grid::make(g->factors(), static_cast<int>(g->factors().size()) - 1);
  return g;
}

// Exponential-map test data is only spectrally clean when the amplitude is
// matched to the coarsest circle: aliasing tails scale like
// (amp/2)^(nyquist/band) / (nyquist/band)!.
std::pair<int, double> map_band_amp(const Grid& g) {
  int minn = 1 << 20;
  for (int ax = 0; ax < g.dim(); ++ax)
    if (g.axis(ax).kind == AxisKind::Circle) minn = std::min(minn, g.axis(ax).n);
  if (minn >= 24) return {2, 0.15};
  if (minn >= 16) return {1, 0.15};
  if (minn >= 12) return {1, 0.08};
  return {1, 0.01};
}

double analytic_volume(const Grid& g) {
  double v = 1.0;
  for (const auto& f : g.factors()) {
    switch (f.kind) {
      case FactorSpec::Kind::Circle: v *= 2.0 * kPi; break;
      case FactorSpec::Kind::Interval: v *= (f.b - f.a); break;
      case FactorSpec::Kind::Sphere3: v *= 2.0 * kPi * kPi; break;
    }
  }
  return v;
}

/// Rank-1 map e^{i k x_axis}.
GroupMap winding_map(GridPtr g, int axis, int k) {
  const long np = g->npoints();
  std::vector<cplx> vals(static_cast<size_t>(np));
  std::vector<double> x(static_cast<size_t>(g->dim()));
  for (long p = 0; p < np; ++p) {
    g->point_coords(p, x.data());
    vals[static_cast<size_t>(p)] = std::exp(cplx(0.0, k * x[static_cast<size_t>(axis)]));
  }
  return GroupMap::from_values(std::move(g), 1, std::move(vals), true, false);
}

/// Identity map of SU(2) in the Euler chart (psi, theta, phi), twisted by
/// the determinant phase e^{i phi/2}. The twist makes every entry periodic
/// on the chart torus (the bare map is anti-periodic in phi) and leaves the
/// cubic character integral unchanged, since tr(Theta^Theta) vanishes
/// pointwise. Orientation is the coordinate order (psi, theta, phi).
GroupMap euler_su2(GridPtr g) {
  const long np = g->npoints();
  std::vector<cplx> vals(static_cast<size_t>(np) * 4);
  std::vector<double> x(static_cast<size_t>(g->dim()));
  for (long p = 0; p < np; ++p) {
    g->point_coords(p, x.data());
    double psi = x[0], th = x[1], phi = x[2];
    double c = std::cos(0.5 * th), s = std::sin(0.5 * th);
    cplx* m = vals.data() + p * 4;
    m[0] = c * std::exp(cplx(0.0, -0.5 * psi));
    m[1] = -s * std::exp(cplx(0.0, 0.5 * psi));
    m[2] = s * std::exp(cplx(0.0, phi - 0.5 * psi));
    m[3] = c * std::exp(cplx(0.0, phi + 0.5 * psi));
  }
  return GroupMap::from_values(std::move(g), 2, std::move(vals), true, false);
}

/// Worst-case non-exactness of a graded form: per degree, the larger of the
/// closedness defect and the worst subtorus period.
double exactness_defect(const GradedForm& f) {
  double m = 0.0;
  for (const auto& [deg, t] : f.terms) {
    if (deg < f.grid->dim()) m = std::max(m, sup_norm(d(t)));
    for (const auto& per : periods(t)) m = std::max(m, std::abs(per.value));
  }
  return m;
}

GroupMap reverse_homotopy(const GroupMap& G) {
  const Grid& g = *G.grid();
  const int nt = g.axis(g.dim() - 1).n;
  const int n = G.rank();
  const long nb = g.npoints() / nt;
  std::vector<cplx> vals(G.values().size());
  for (long q = 0; q < nb; ++q)
    for (int k = 0; k < nt; ++k)
      std::copy(G.at(q * nt + (nt - 1 - k)), G.at(q * nt + (nt - 1 - k)) + n * n,
                vals.data() + (q * nt + k) * n * n);
  return GroupMap::from_values(G.grid(), n, std::move(vals), G.unitary(), false);
}

MatrixForm traceless_part(MatrixForm f) {
  const int n = f.rank();
  for (int ci = 0; ci < f.ncoeffs(); ++ci) {
    auto& tab = f.coeff(ci);
    const long np = f.grid()->npoints();
    for (long p = 0; p < np; ++p) {
      cplx* m = tab.data() + p * n * n;
      cplx t = mat::trace(n, m) / static_cast<double>(n);
      for (int i = 0; i < n; ++i) m[i * n + i] -= t;
    }
  }
  return f;
}

ConnectionPair su_pair(GridPtr g, int rank, std::uint64_t seed, int band, double amp) {
  ConnectionPair p = random_pair(g, rank, seed, band, amp, true);
  return ConnectionPair::make(traceless_part(p.A), traceless_part(p.Phi), true);
}

}  // namespace

std::vector<CheckRow> suite_calculus(const SuiteConfig& cfg) {
  std::vector<CheckRow> rows;
  GridPtr g = grid_or(cfg, "32x32x32");
  const int n = cfg.rank;

  push(rows, "quadrature total", "sum of weights = analytic volume",
       std::abs(g->total_measure() - analytic_volume(*g)), 1e-10);
  {
    GridPtr s3 = Grid::make({FactorSpec::sphere3(16, 16, 32)});
    push(rows, "sphere3 quadrature total", "sum of weights = 2 pi^2",
         std::abs(s3->total_measure() - 2.0 * kPi * kPi), 1e-10);
  }
  {
    MatrixForm a = random_form(g, 1, n, cfg.seed, cfg.band, cfg.amplitude);
    push(rows, "d^2 = 0", "d(d a) = 0", sup_norm(d(d(a))), 1e-9);
  }
  {
    MatrixForm f = random_form(g, 0, 1, cfg.seed + 1, cfg.band, cfg.amplitude);
    const long np = g->npoints();
    std::vector<cplx> t1(static_cast<size_t>(np)), t2(t1), t3(t1);
    g->differentiate(0, f.coeff(0).data(), t1.data(), 1);
    g->differentiate(1, t1.data(), t2.data(), 1);
    g->differentiate(1, f.coeff(0).data(), t1.data(), 1);
    g->differentiate(0, t1.data(), t3.data(), 1);
    double m = 0.0;
    for (long p = 0; p < np; ++p)
      m = std::max(m, std::abs(t2[static_cast<size_t>(p)] - t3[static_cast<size_t>(p)]));
    push(rows, "mixed partials", "d0 d1 f = d1 d0 f", m, 1e-10);
  }
  {
    MatrixForm a = random_form(g, 1, 1, cfg.seed + 2, cfg.band, cfg.amplitude);
    MatrixForm b = random_form(g, 1, 1, cfg.seed + 3, cfg.band, cfg.amplitude);
    MatrixForm lhs = d(wedge(a, b));
    MatrixForm rhs = wedge(d(a), b);
    rhs -= wedge(a, d(b));  // (-1)^p with p = 1
    push(rows, "Leibniz", "d(a^b) = da^b - a^db", max_diff(lhs, rhs), 1e-9);
  }
  {
    MatrixForm w = random_form(g, g->dim() - 1, 1, cfg.seed + 4, cfg.band, cfg.amplitude);
    auto I = integrate(d(w));
    double m = 0.0;
    for (const cplx& v : I) m = std::max(m, std::abs(v));
    push(rows, "Stokes", "integral of an exact top form vanishes", m, 1e-9);
  }
  {
    auto [mband, mamp] = map_band_amp(*g);
    GroupMap gm = random_smooth_map(g, n, cfg.seed + 5, mband, mamp, true, false);
    MatrixForm th = maurer_cartan(gm);
    MatrixForm fl = d(th);
    fl += wedge(th, th);
    push(rows, "Maurer-Cartan flatness", "d(g^-1 dg) + (g^-1 dg)^2 = 0", sup_norm(fl), 1e-9);
  }
  return rows;
}

std::vector<CheckRow> suite_caloron(const SuiteConfig& cfg) {
  std::vector<CheckRow> rows;
  GridPtr g = fiber_grid_or(cfg, "16x16x32s1");
  const int n = cfg.rank;
  ConnectionPair p = random_pair(g, n, cfg.seed, cfg.band, cfg.amplitude, true);

  {
    ConnectionPair q = inverse_caloron(caloron_transform(p));
    double defect = std::max(max_diff(p.A, q.A), max_diff(p.Phi, q.Phi));
    push(rows, "pair roundtrip", "inverse_caloron(caloron(p)) = p bit-exactly", defect, 0.0);
    FramedConnection f = caloron_transform(p);
    FramedConnection f2 = caloron_transform(inverse_caloron(f));
    push(rows, "framed roundtrip", "caloron(inverse_caloron(a)) = a bit-exactly",
         max_diff(f.a, f2.a), 0.0);
  }
  {
    MatrixForm lhs = curvature(caloron_transform(p).a);
    MatrixForm rhs = base_curvature(p);
    MatrixForm dtheta = MatrixForm::zero(g, 1, n);
    int tci = comb_rank(std::vector<int>{g->fiber_axis()}, g->dim());
    auto& tab = dtheta.coeff(tci);
    for (long pt = 0; pt < g->npoints(); ++pt)
      for (int i = 0; i < n; ++i) tab[static_cast<size_t>(pt * n * n + i * n + i)] = 1.0;
    rhs += wedge(higgs_covariant_derivative(p), dtheta);
    push(rows, "curvature splitting", "F(A + Phi dtheta) = F_M(A) + DPhi^dtheta",
         max_diff(lhs, rhs), 1e-9);
  }
  {
    MatrixForm a = caloron_transform(p).a;
    MatrixForm F = curvature(a);
    MatrixForm bianchi = d(F);
    bianchi += wedge(a, F);
    bianchi -= wedge(F, a);
    push(rows, "Bianchi", "dF + a^F - F^a = 0", sup_norm(bianchi), 1e-9);
    push(rows, "unitary curvature", "F anti-Hermitian for unitary pairs",
         anti_hermitian_defect(F), 1e-10);
  }
  {
    auto [mband, mamp] = map_band_amp(*g);
    GroupMap gm = random_smooth_map(g, n, cfg.seed + 5, mband, mamp, true, false);
    MatrixForm F = curvature(maurer_cartan(gm));
    push(rows, "pure gauge", "F(g^-1 dg) = 0", sup_norm(F), 1e-9);
  }
  {
    // holonomy of the constant loop (i/2) I is -I
    const int ns = 64;
    std::vector<cplx> loop(static_cast<size_t>(ns) * n * n, cplx(0.0, 0.0));
    for (int s = 0; s < ns; ++s)
      for (int i = 0; i < n; ++i) loop[static_cast<size_t>(s * n * n + i * n + i)] = cplx(0.0, 0.5);
    auto h = holonomy(loop, n, 512);
    double m = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        cplx want = (i == j) ? cplx(-1.0, 0.0) : cplx(0.0, 0.0);
        m = std::max(m, std::abs(h[static_cast<size_t>(i * n + j)] - want));
      }
    push(rows, "holonomy closed form", "hol((i/2) I) = -I", m, 1e-10);

    // fourth-order convergence against the closed form
    double err[3];
    int steps[3] = {16, 32, 64};
    for (int c = 0; c < 3; ++c) {
      auto hc = holonomy(loop, n, steps[c]);
      double e = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          cplx want = (i == j) ? cplx(-1.0, 0.0) : cplx(0.0, 0.0);
          e = std::max(e, std::abs(hc[static_cast<size_t>(i * n + j)] - want));
        }
      err[c] = e;
    }
    double order = std::min(std::log2(err[0] / err[1]), std::log2(err[1] / err[2]));
    push(rows, "holonomy RK4 order", "error = O(steps^-4), measured order >= 3.7",
         3.7 - order, 0.0);
  }
  return rows;
}

std::vector<CheckRow> suite_chernweil(const SuiteConfig& cfg) {
  std::vector<CheckRow> rows;
  GridPtr g = grid_or(cfg, "24x24x24");
  const int n = cfg.rank;
  const int cutoff = cfg.cutoff;

  MatrixForm a0 = random_form(g, 1, n, cfg.seed, cfg.band, cfg.amplitude);
  MatrixForm a1 = random_form(g, 1, n, cfg.seed + 1, cfg.band, cfg.amplitude);
  {
    GradedForm ch = chern_character(a0, cutoff);
    push(rows, "Ch closed", "d Ch(a) = 0 per degree", graded_sup(graded_d(ch)), 1e-9);
    double m = 0.0;
    const auto& t0 = ch.term(0).coeff(0);
    for (const cplx& v : t0) m = std::max(m, std::abs(v - cplx(n, 0.0)));
    push(rows, "Ch degree 0", "Ch_0 = rank", m, 0.0);
  }
  {
    auto [mband, mamp] = map_band_amp(*g);
    GroupMap gm = random_smooth_map(g, n, cfg.seed + 2, mband, mamp, true, false);
    GradedForm ch = chern_character(maurer_cartan(gm), cutoff);
    double m = 0.0;
    for (const auto& [deg, f] : ch.terms)
      if (deg > 0) m = std::max(m, sup_norm(f));
    push(rows, "flat Ch", "Ch(g^-1 dg) = rank", m, 1e-9);
  }
  {
    FormPath line = FormPath::line(a0, a1);
    GradedForm cs = chern_simons(line, cutoff);
    GradedForm rhs = chern_character(a1, cutoff);
    rhs -= chern_character(a0, cutoff);
    push(rows, "transgression", "d CS(a0 -> a1) = Ch(a1) - Ch(a0)",
         graded_max_diff(graded_d(cs), rhs), 1e-8);

    std::vector<MatrixForm> samples;
    const int T = 16;
    for (int k = 0; k <= T; ++k) samples.push_back(line.at(static_cast<double>(k) / T));
    FormPath sampled = FormPath::sampled(samples);
    GradedForm cs_a = chern_simons(sampled, cutoff);
    GradedForm cs_b = chern_simons_via_slices(sampled, cutoff);
    push(rows, "CS cross-algorithm", "direct = slice formulation on the same sampling",
         graded_max_diff(cs_a, cs_b), 1e-8);

    // reparametrized path: same endpoints, differs by an exact form
    // (separate lower-amplitude data keeps the trapezoid error well inside
    // the period tolerance)
    MatrixForm b0 = random_form(g, 1, n, cfg.seed + 8, cfg.band, 0.15);
    MatrixForm b1 = random_form(g, 1, n, cfg.seed + 9, cfg.band, 0.15);
    FormPath bline = FormPath::line(b0, b1);
    GradedForm cs_line = chern_simons(bline, cutoff);
    std::vector<MatrixForm> reparam;
    const int T2 = 256;
    for (int k = 0; k <= T2; ++k) {
      double s = static_cast<double>(k) / T2;
      reparam.push_back(bline.at(s * s));
    }
    GradedForm cs_r = chern_simons(FormPath::sampled(reparam), cutoff);
    cs_r -= cs_line;
    push(rows, "CS path independence", "CS(line) - CS(reparametrized line) is exact",
         exactness_defect(cs_r), 1e-7);
  }
  {
    double m = 0.0;
    for (int k = -3; k <= 3; ++k) {
      GroupMap w = winding_map(g, 0, k);
      GradedForm ch = odd_chern_character(w, cutoff);
      auto per = periods(ch.term(1));
      for (const auto& pr : per) {
        cplx want = (pr.cycle == std::vector<int>{0}) ? cplx(k, 0.0) : cplx(0.0, 0.0);
        m = std::max(m, std::abs(pr.value - want));
      }
    }
    push(rows, "winding integrality", "integral of Ch_1(e^{ik theta}) = k for |k| <= 3", m,
         1e-10);
  }
  {
    GridPtr s3 = Grid::make({FactorSpec::sphere3(24, 24, 48)});
    GroupMap id = euler_su2(s3);
    GradedForm ch = odd_chern_character(id, std::max(cutoff, 1));
    auto I = integrate(ch.term(3));
    push(rows, "sphere3 integrality", "|integral of Ch_3(identity of SU(2))| = 1",
         std::abs(std::abs(I[0]) - 1.0), 1e-3);
  }
  return rows;
}

std::vector<CheckRow> suite_string(const SuiteConfig& cfg) {
  std::vector<CheckRow> rows;
  GridPtr g = fiber_grid_or(cfg, "16x16x32s1");
  const int n = cfg.rank;
  const int cutoff = cfg.cutoff;

  ConnectionPair p0 = random_pair(g, n, cfg.seed, cfg.band, cfg.amplitude, true);
  ConnectionPair p1 = random_pair(g, n, cfg.seed + 1, cfg.band, cfg.amplitude, true);
  ConnectionPair p2 = random_pair(g, n, cfg.seed + 2, cfg.band, cfg.amplitude, true);

  {
    GradedForm sa = string_form(p0, cutoff, StringFormAlg::Direct);
    GradedForm sb = string_form(p0, cutoff, StringFormAlg::ViaCaloron);
    push(rows, "string form algorithms", "explicit formula = fiber integral of Ch",
         graded_max_diff(sa, sb), 1e-9);
    push(rows, "string form closed", "d s = 0 per degree", graded_sup(graded_d(sa)), 1e-9);
  }
  {
    PairPath line = straight_line(p0, p1);
    GradedForm Se = string_potential(line, cutoff, StringPotentialAlg::Explicit);
    GradedForm Ss = string_potential(line, cutoff, StringPotentialAlg::Slice);
    GradedForm Sc = string_potential(line, cutoff, StringPotentialAlg::CsFiber);
    double m = std::max({graded_max_diff(Se, Ss), graded_max_diff(Se, Sc),
                         graded_max_diff(Ss, Sc)});
    push(rows, "string potential algorithms", "slice = explicit = CS fiber integral", m, 1e-8);

    GradedForm rhs = string_form(p1, cutoff);
    rhs -= string_form(p0, cutoff);
    push(rows, "string exactness", "d S(p0 -> p1) = s(p1) - s(p0)",
         graded_max_diff(graded_d(Se), rhs), 1e-8);

    // same endpoints along a reparametrized sampled path, lower amplitude
    ConnectionPair q0 = random_pair(g, n, cfg.seed + 8, cfg.band, 0.15, true);
    ConnectionPair q1 = random_pair(g, n, cfg.seed + 9, cfg.band, 0.15, true);
    PairPath qline = straight_line(q0, q1);
    GradedForm Sq = string_potential(qline, cutoff, StringPotentialAlg::Explicit);
    std::vector<ConnectionPair> reparam;
    const int T = 256;
    for (int k = 0; k <= T; ++k) {
      double s = static_cast<double>(k) / T;
      reparam.push_back(qline.at(s * s));
    }
    PairPath curved;
    curved.straight = false;
    curved.samples = std::move(reparam);
    GradedForm Sr = string_potential(curved, cutoff, StringPotentialAlg::Explicit);
    Sr -= Sq;
    push(rows, "string path independence", "S(line) - S(curved) is exact",
         exactness_defect(Sr), 1e-7);

    // transitivity of the induced datum map
    GradedForm t = string_potential(straight_line(p0, p2), cutoff);
    t -= string_potential(straight_line(p0, p1), cutoff);
    t -= string_potential(straight_line(p1, p2), cutoff);
    push(rows, "datum transitivity", "S(p0;p2) - S(p0;p1) - S(p1;p2) is exact",
         exactness_defect(t), 1e-7);
  }
  {
    GridPtr base = g->without_axis(g->fiber_axis());
    GroupMap gm = random_smooth_map(base, n, cfg.seed + 3, 1, 0.2, false, false);
    GradedForm u = universal_string_pullback(gm, cutoff);
    GradedForm ch = odd_chern_character(gm, cutoff);
    push(rows, "universal pullback", "universal string form = odd Chern character",
         graded_max_diff(u, ch), 1e-12);
  }
  {
    // rank-1 witnesses: S(line to (0, i f)) = f in degree 0
    GridPtr base = g->without_axis(g->fiber_axis());
    double m = 0.0;
    for (int which = 0; which < 3; ++which) {
      MatrixForm f = MatrixForm::zero(base, 0, 1);
      std::vector<double> x(static_cast<size_t>(base->dim()));
      for (long q = 0; q < base->npoints(); ++q) {
        base->point_coords(q, x.data());
        double v = which == 0 ? 0.75 : (which == 1 ? std::sin(x[0]) : std::cos(x[0]) + 0.3 * std::sin(2 * x[1]));
        f.coeff(0)[static_cast<size_t>(q)] = v;
      }
      ConnectionPair w = surjectivity_witness(g, f, 0);
      ConnectionPair triv = ConnectionPair::make(MatrixForm::zero(g, 1, 1),
                                                 MatrixForm::zero(g, 0, 1), false);
      GradedForm S = string_potential(straight_line(triv, w), cutoff);
      m = std::max(m, max_diff(S.term(0), f));
      for (const auto& [deg, t] : S.terms)
        if (deg > 0) m = std::max(m, sup_norm(t));
    }
    push(rows, "witness degree 0", "S(line to (0, i f)) = f", m, 1e-10);
  }
  {
    ConnectionPair q0 = random_pair(g, 1, cfg.seed + 4, cfg.band, cfg.amplitude, true);
    ConnectionPair q1 = random_pair(g, 1, cfg.seed + 5, cfg.band, cfg.amplitude, true);
    GradedForm lhs = string_form(direct_sum(q0, q1), cutoff);
    GradedForm rhs = string_form(q0, cutoff);
    rhs += string_form(q1, cutoff);
    push(rows, "block additivity", "s(p + q) = s(p) + s(q)", graded_max_diff(lhs, rhs), 1e-14);
  }
  return rows;
}

std::vector<CheckRow> suite_total(const SuiteConfig& cfg) {
  std::vector<CheckRow> rows;
  GridPtr g = fiber_grid_or(cfg, "16x16x32s1");
  const int n = cfg.rank;
  const int cutoff = cfg.cutoff;

  ConnectionPair p = random_pair(g, n, cfg.seed, cfg.band, cfg.amplitude, true);
  ConnectionPair triv = ConnectionPair::make(MatrixForm::zero(g, 1, n),
                                             MatrixForm::zero(g, 0, n), true);
  {
    GradedForm total = total_string_potential(p, cutoff);
    GradedForm line = string_potential(straight_line(triv, p), cutoff);
    push(rows, "coefficient table", "total string potential = straight-line potential",
         graded_max_diff(total, line), 1e-8);
    push(rows, "total exactness", "d(total) = string form",
         graded_max_diff(graded_d(total), string_form(p, cutoff)), 1e-8);
  }
  {
    double m = 0.0;
    for (int j = 2; j <= 12; ++j)
      m = std::max(m, std::abs((2.0 * j - 1.0) * string_coefficient(j - 1, j) +
                               0.5 * string_coefficient(j - 2, j)));
    push(rows, "coefficient recurrence", "(2j-1) c_{j-1,j} = -c_{j-2,j}/2 for j <= 12", m, 1e-15);
  }
  {
    auto [mband, mamp] = map_band_amp(*g);
    GroupMap G = random_smooth_map(g, n, cfg.seed + 7, mband, mamp, true, true);
    GradedForm tau = tau_hat_pullback(G, cutoff);
    GradedForm flat = string_potential(straight_line(triv, flat_pair(G)), cutoff);
    push(rows, "transgressed generator", "tau-hat pullback = flat straight-line potential",
         graded_max_diff(tau, flat), 1e-8);
    push(rows, "tau-hat closed", "d(tau-hat pullback) = 0", graded_sup(graded_d(tau)), 1e-9);
  }
  {
    ConnectionPair su = su_pair(g, n, cfg.seed + 8, cfg.band, cfg.amplitude);
    GerbeCurving gc = gerbe_curving_check(su);
    push(rows, "gerbe curving", "S_2 = (1/2 pi i) B + d((1/4 pi^2) Int <A,Phi>)", gc.defect,
         1e-8);
  }
  return rows;
}

std::vector<CheckRow> suite_twz(const SuiteConfig& cfg) {
  std::vector<CheckRow> rows;
  GridPtr g = grid_or(cfg, "32x32");
  const int n = cfg.rank;
  const int cutoff = cfg.cutoff;

  auto [mband, mamp] = map_band_amp(*g);
  GroupMap gm = random_smooth_map(g, n, cfg.seed, mband, mamp, true, false);
  {
    // pointwise nullity of the rotation interpolation, exact t-derivative
    double m = 0.0;
    for (int ti = 0; ti <= 8; ++ti) {
      double t = 0.5 * kPi * ti / 8.0;
      GroupMap X = rotation_homotopy(gm, t);
      auto V = rotation_homotopy_velocity(gm, t);
      MatrixForm gdot = MatrixForm::zero(g, 0, 2 * n);
      const long np = g->npoints();
      std::vector<cplx> inv(static_cast<size_t>(4) * n * n);
      for (long q = 0; q < np; ++q) {
        mat::inverse(2 * n, X.at(q), inv.data());
        mat::mul(2 * n, inv.data(), V.data() + q * 4 * n * n, gdot.at(0, q));
      }
      MatrixForm theta = maurer_cartan(X);
      MatrixForm theta2 = wedge(theta, theta);
      MatrixForm P = gdot;
      for (int j = 0; 2 * j <= g->dim(); ++j) {
        if (j > 0) P = wedge(P, theta2);
        m = std::max(m, sup_norm(trace_form(P)));
      }
    }
    push(rows, "rotation nullity", "tr(X^-1 dX/dt (X^-1 dX)^{2j}) = 0 pointwise", m, 1e-10);
  }
  {
    InverseWitness w = inverse_witness(gm, cutoff, cfg.exact_tol);
    push(rows, "inverse witness", "g + g^-1 ~ identity via the rotation homotopy",
         graded_sup(w.report.defect), 1e-10);
    push(rows, "inverse verdict", "rotation homotopy transgression is exact",
         w.report.verdict == Verdict::Equivalent ? 0.0 : 1.0, 0.0);
  }
  {
    GroupMap G = random_homotopy(g, n, cfg.seed + 11, mband, mamp, 129);
    GradedForm tau = twz_transgression(G, cutoff);
    GradedForm rhs = odd_chern_character(homotopy_endpoint(G, true), cutoff);
    rhs -= odd_chern_character(homotopy_endpoint(G, false), cutoff);
    push(rows, "homotopy formula", "d(transgression) = Ch(g1) - Ch(g0)",
         graded_max_diff(graded_d(tau), rhs), 1e-7);

    GroupMap Grev = reverse_homotopy(G);
    GradedForm tau2 = twz_transgression(Grev, cutoff);
    tau2 += tau;
    push(rows, "symmetry", "reversed homotopy negates the transgression", graded_sup(tau2),
         1e-12);
  }
  {
    // constant homotopy: reflexivity
    GridPtr big = g->with_axis_inserted(static_cast<int>(g->factors().size()),
                                        FactorSpec::interval(17, 0.0, 1.0));
    const long nb = g->npoints();
    std::vector<cplx> vals(static_cast<size_t>(nb) * 17 * n * n);
    for (long q = 0; q < nb; ++q)
      for (int k = 0; k < 17; ++k)
        std::copy(gm.at(q), gm.at(q) + n * n, vals.data() + (q * 17 + k) * n * n);
    GroupMap G = GroupMap::from_values(big, n, std::move(vals), true, false);
    EquivalenceReport rep = cs_equivalent(gm, gm, G, cutoff, cfg.exact_tol);
    push(rows, "reflexivity", "constant homotopy transgression vanishes",
         graded_sup(rep.defect), 1e-12);
  }
  {
    // phase homotopy with a non-exact transgression: kappa(x) = sin(x1)
    const int nt = 257;
    GridPtr big = g->with_axis_inserted(static_cast<int>(g->factors().size()),
                                        FactorSpec::interval(nt, 0.0, 1.0));
    const long nb = g->npoints();
    std::vector<cplx> vals(static_cast<size_t>(nb) * nt);
    std::vector<double> x(static_cast<size_t>(g->dim()));
    for (long q = 0; q < nb; ++q) {
      g->point_coords(q, x.data());
      for (int k = 0; k < nt; ++k) {
        double t = static_cast<double>(k) / (nt - 1);
        vals[static_cast<size_t>(q * nt + k)] = std::exp(cplx(0.0, t * std::sin(x[0])));
      }
    }
    GroupMap G = GroupMap::from_values(big, 1, std::move(vals), true, false);
    GradedForm tau = twz_transgression(G, cutoff);
    // oracle: the degree-0 term is kappa / 2 pi
    double m = 0.0;
    for (long q = 0; q < nb; ++q) {
      g->point_coords(q, x.data());
      m = std::max(m, std::abs(tau.term(0).coeff(0)[static_cast<size_t>(q)] -
                               cplx(std::sin(x[0]) / (2.0 * kPi), 0.0)));
    }
    push(rows, "phase transgression", "transgression of e^{it kappa} has degree-0 term kappa/2pi",
         m, 1e-10);
    EquivalenceReport rep = exactness_report(std::move(tau), cutoff, cfg.exact_tol);
    push(rows, "inequivalence detection", "nonvanishing kappa profile is not exact",
         rep.verdict == Verdict::Inequivalent ? 0.0 : 1.0, 0.0);
  }
  return rows;
}

std::vector<CheckRow> run_suite(const std::string& name, const SuiteConfig& cfg) {
  if (name == "calculus") return suite_calculus(cfg);
  if (name == "caloron") return suite_caloron(cfg);
  if (name == "chernweil") return suite_chernweil(cfg);
  if (name == "string") return suite_string(cfg);
  if (name == "total") return suite_total(cfg);
  if (name == "twz") return suite_twz(cfg);
  if (name == "all") {
    std::vector<CheckRow> rows;
    for (const auto& s : {"calculus", "caloron", "chernweil", "string", "total", "twz"}) {
      SuiteConfig c = cfg;
      c.grid = nullptr;  // each suite uses its own default grid
      auto r = run_suite(s, c);
      for (auto& row : r) row.name = std::string(s) + ": " + row.name;
      rows.insert(rows.end(), r.begin(), r.end());
    }
    return rows;
  }
  throw std::invalid_argument("unknown suite '" + name + "'");
}

std::vector<std::string> suite_names() {
  return {"calculus", "caloron", "chernweil", "string", "total", "twz", "all"};
}

json rows_to_json(const std::string& suite, const SuiteConfig& cfg,
                  const std::vector<CheckRow>& rows) {
  json jr = json::array();
  bool all = true;
  for (const auto& r : rows) {
    jr.push_back({{"name", r.name},
                  {"identity", r.identity},
                  {"defect", r.defect},
                  {"tol", r.tol},
                  {"pass", r.pass()}});
    all = all && r.pass();
  }
  json cfgj{{"rank", cfg.rank},     {"cutoff", cfg.cutoff},       {"seed", cfg.seed},
            {"band", cfg.band},     {"amplitude", cfg.amplitude}, {"ode_steps", cfg.ode_steps},
            {"tol", cfg.tol},       {"exact_tol", cfg.exact_tol}};
  if (cfg.grid) cfgj["grid"] = grid_to_json(*cfg.grid);
  return json{{"schema_version", 1}, {"suite", suite}, {"config", cfgj}, {"rows", jr}, {"pass", all}};
}

}  // namespace caloronkit
