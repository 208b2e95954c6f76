#include "caloronkit/chernweil.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "caloronkit/parallel.hpp"

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

// -j!/(2j+1)! (-1/2 pi i)^{j+1}
cplx odd_ch_coeff(int j) {
  double r = 1.0;
  for (int m = j + 1; m <= 2 * j + 1; ++m) r /= m;
  return -r * pow_cplx(-1.0 / kTwoPiI, j + 1);
}

// 1/(j-1)! (1/2 pi i)^j
cplx cs_coeff(int j) {
  cplx c = pow_cplx(1.0 / kTwoPiI, j);
  for (int m = 1; m <= j - 1; ++m) c /= m;
  return c;
}

}  // namespace

GradedForm GradedForm::zero(GridPtr g, Parity p) {
  GradedForm f;
  f.parity = p;
  f.grid = g;
  int start = (p == Parity::Even) ? 0 : 1;
  for (int deg = start; deg <= g->dim(); deg += 2)
    f.terms.emplace(deg, MatrixForm::zero(g, deg, 1));
  return f;
}

MatrixForm& GradedForm::term(int deg) {
  auto it = terms.find(deg);
  if (it == terms.end()) throw std::invalid_argument("graded form: no such degree");
  return it->second;
}

const MatrixForm& GradedForm::term(int deg) const {
  auto it = terms.find(deg);
  if (it == terms.end()) throw std::invalid_argument("graded form: no such degree");
  return it->second;
}

GradedForm& GradedForm::operator+=(const GradedForm& o) {
  if (parity != o.parity) throw std::invalid_argument("graded form: parity mismatch");
  for (auto& [deg, f] : terms) f += o.term(deg);
  return *this;
}

GradedForm& GradedForm::operator-=(const GradedForm& o) {
  if (parity != o.parity) throw std::invalid_argument("graded form: parity mismatch");
  for (auto& [deg, f] : terms) f -= o.term(deg);
  return *this;
}

GradedForm& GradedForm::operator*=(cplx s) {
  for (auto& [deg, f] : terms) f *= s;
  return *this;
}

GradedForm operator-(GradedForm a, const GradedForm& b) { return a -= b; }

GradedForm graded_d(const GradedForm& a) {
  GradedForm out = GradedForm::zero(a.grid, a.parity == Parity::Even ? Parity::Odd : Parity::Even);
  for (const auto& [deg, f] : a.terms) {
    if (deg + 1 > a.grid->dim()) continue;
    out.term(deg + 1) += d(f);
  }
  return out;
}

double graded_sup(const GradedForm& a) {
  double m = 0.0;
  for (const auto& [deg, f] : a.terms) m = std::max(m, sup_norm(f));
  return m;
}

double graded_max_diff(const GradedForm& a, const GradedForm& b) {
  if (a.parity != b.parity) throw std::invalid_argument("graded diff: parity mismatch");
  double m = 0.0;
  for (const auto& [deg, f] : a.terms) m = std::max(m, max_diff(f, b.term(deg)));
  return m;
}

MatrixForm trace_form(const MatrixForm& a) {
  MatrixForm out = MatrixForm::zero(a.grid(), a.degree(), 1);
  const int n = a.rank();
  const long np = a.grid()->npoints();
  for (int ci = 0; ci < a.ncoeffs(); ++ci) {
    const auto& src = a.coeff(ci);
    auto& dst = out.coeff(ci);
    parallel_for(np, [&](long pb, long pe) {
      for (long p = pb; p < pe; ++p)
        dst[static_cast<size_t>(p)] = mat::trace(n, src.data() + p * n * n);
    });
  }
  return out;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(static_cast<size_t>(n));
  weights.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev estimate on [-1,1].
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[static_cast<size_t>(i)] = 0.5 * (1.0 - x);  // map to [0,1], ascending
    weights[static_cast<size_t>(i)] = 1.0 / ((1.0 - x * x) * pp * pp);
  }
}

GradedForm chern_character(const MatrixForm& conn, int cutoff) {
  if (conn.degree() != 1) throw std::invalid_argument("chern_character: expects a 1-form");
  if (cutoff < 0) throw std::invalid_argument("chern_character: negative cutoff");
  const GridPtr& g = conn.grid();
  GradedForm out = GradedForm::zero(g, Parity::Even);
  // degree-0 term: the rank
  {
    auto& t0 = out.term(0).coeff(0);
    std::fill(t0.begin(), t0.end(), cplx(static_cast<double>(conn.rank()), 0.0));
  }
  const int jmax = std::min(cutoff, g->dim() / 2);
  if (jmax < 1) return out;
  MatrixForm F = curvature(conn);
  MatrixForm P = F;
  for (int j = 1; j <= jmax; ++j) {
    if (j > 1) P = wedge(P, F);
    MatrixForm t = trace_form(P);
    t *= ch_coeff(j);
    out.term(2 * j) += t;
  }
  return out;
}

GradedForm odd_chern_character(const GroupMap& g, int cutoff) {
  const GridPtr& gr = g.grid();
  GradedForm out = GradedForm::zero(gr, Parity::Odd);
  if (gr->dim() < 1) return out;
  MatrixForm theta = maurer_cartan(g);
  MatrixForm theta2 = wedge(theta, theta);
  MatrixForm P = theta;
  for (int j = 0; j <= cutoff; ++j) {
    int deg = 2 * j + 1;
    if (deg > gr->dim()) break;
    if (j > 0) P = wedge(P, theta2);
    MatrixForm t = trace_form(P);
    t *= odd_ch_coeff(j);
    out.term(deg) += t;
  }
  return out;
}

MatrixForm FormPath::at(double t) const {
  if (straight) {
    MatrixForm a = a0;
    a *= cplx(1.0 - t, 0.0);
    MatrixForm b = a1;
    b *= cplx(t, 0.0);
    a += b;
    return a;
  }
  int T = static_cast<int>(samples.size()) - 1;
  int k = std::clamp(static_cast<int>(std::lround(t * T)), 0, T);
  return samples[static_cast<size_t>(k)];
}

FormPath FormPath::line(MatrixForm a0, MatrixForm a1) {
  if (!a0.grid()->same_as(*a1.grid()) || a0.rank() != a1.rank())
    throw std::invalid_argument("form path: endpoint mismatch");
  FormPath p;
  p.straight = true;
  p.a0 = std::move(a0);
  p.a1 = std::move(a1);
  return p;
}

FormPath FormPath::sampled(std::vector<MatrixForm> samples) {
  if (samples.size() < 2) throw std::invalid_argument("form path: need at least 2 samples");
  FormPath p;
  p.straight = false;
  p.samples = std::move(samples);
  return p;
}

FormPath caloron_path(const PairPath& path) {
  if (path.straight)
    return FormPath::line(caloron_transform(path.p0).a, caloron_transform(path.p1).a);
  std::vector<MatrixForm> samples;
  samples.reserve(path.samples.size());
  for (const auto& p : path.samples) samples.push_back(caloron_transform(p).a);
  return FormPath::sampled(std::move(samples));
}

namespace {

// Quadrature plan in t: nodes with weights plus the connection and its time
// derivative at each node.
struct PathNodes {
  std::vector<double> w;
  std::vector<MatrixForm> a, adot;
};

PathNodes path_nodes(const FormPath& path, int cutoff) {
  PathNodes out;
  if (path.straight) {
    std::vector<double> x;
    gauss_legendre(cutoff + 1, x, out.w);
    MatrixForm diff = path.a1 - path.a0;
    for (double t : x) {
      out.a.push_back(path.at(t));
      out.adot.push_back(diff);
    }
  } else {
    const int T = static_cast<int>(path.samples.size());
    GridPtr tg = Grid::make({FactorSpec::interval(T, 0.0, 1.0)});
    const Axis& ax = tg->axis(0);
    out.w = ax.quad;
    out.a = path.samples;
    for (int k = 0; k < T; ++k) {
      MatrixForm der = MatrixForm::zero(path.grid(), 1, path.rank());
      for (int l = 0; l < T; ++l) {
        double c = ax.deriv[static_cast<size_t>(k) * T + l];
        if (c == 0.0) continue;
        MatrixForm s = path.samples[static_cast<size_t>(l)];
        s *= cplx(c, 0.0);
        der += s;
      }
      out.adot.push_back(std::move(der));
    }
  }
  return out;
}

}  // namespace

GradedForm chern_simons(const FormPath& path, int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("chern_simons: cutoff must be >= 1");
  const GridPtr& g = path.grid();
  GradedForm out = GradedForm::zero(g, Parity::Odd);
  PathNodes nodes = path_nodes(path, cutoff);
  for (size_t q = 0; q < nodes.w.size(); ++q) {
    MatrixForm F = curvature(nodes.a[q]);
    MatrixForm P = nodes.adot[q];  // adot ^ F^{j-1}
    for (int j = 1; j <= cutoff; ++j) {
      int deg = 2 * j - 1;
      if (deg > g->dim()) break;
      if (j > 1) P = wedge(P, F);
      MatrixForm t = trace_form(P);
      t *= nodes.w[q] * cs_coeff(j);
      out.term(deg) += t;
    }
  }
  return out;
}

GradedForm chern_simons_via_slices(const FormPath& path, int cutoff) {
  if (path.straight)
    throw std::invalid_argument("chern_simons_via_slices: path must be sampled (missing t-axis)");
  const GridPtr& g = path.grid();
  const int T = static_cast<int>(path.samples.size());
  // appending t after a distinguished circle drops the loop marker, so the
  // samples are re-homed onto the unmarked copy of the base grid
  GridPtr base = g->has_fiber() ? Grid::make(g->factors(), std::nullopt) : g;
  GridPtr big = base->with_axis_inserted(static_cast<int>(base->factors().size()),
                                         FactorSpec::interval(T, 0.0, 1.0));
  const int tax = big->dim() - 1;
  std::vector<MatrixForm> rehomed;
  std::vector<const MatrixForm*> slices;
  if (base != g) {
    rehomed.reserve(path.samples.size());
    for (const auto& s : path.samples) {
      MatrixForm r = MatrixForm::zero(base, s.degree(), s.rank());
      for (int ci = 0; ci < s.ncoeffs(); ++ci) r.coeff(ci) = s.coeff(ci);
      rehomed.push_back(std::move(r));
    }
    for (const auto& s : rehomed) slices.push_back(&s);
  } else {
    for (const auto& s : path.samples) slices.push_back(&s);
  }
  MatrixForm a_big = stack_along_axis(big, tax, slices);
  GradedForm ch = chern_character(a_big, cutoff);
  GradedForm acc = GradedForm::zero(base, Parity::Odd);
  const Axis& ta = big->axis(tax);
  for (const auto& [deg, f] : ch.terms) {
    if (deg == 0 || deg - 1 > base->dim()) continue;
    MatrixForm c = contract(f, tax);
    for (int k = 0; k < T; ++k) {
      MatrixForm s = slice(c, tax, k);
      s *= cplx(ta.quad[static_cast<size_t>(k)], 0.0);
      acc.term(deg - 1) += s;
    }
  }
  if (base == g) return acc;
  GradedForm out = GradedForm::zero(g, Parity::Odd);
  for (auto& [deg, f] : acc.terms)
    for (int ci = 0; ci < f.ncoeffs(); ++ci) out.term(deg).coeff(ci) = std::move(f.coeff(ci));
  return out;
}

}  // namespace caloronkit
