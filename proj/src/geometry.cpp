#include "caloronkit/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "caloronkit/parallel.hpp"

namespace caloronkit {

namespace {

// Largest entry of the theta = 0 slice of the M components of a 1-form.
double framing_defect(const MatrixForm& a) {
  const Grid& g = *a.grid();
  const int ax = g.fiber_axis();
  const int ntheta = g.axis(ax).n;
  const int n = a.rank();
  double m = 0.0;
  for (int ci = 0; ci < a.ncoeffs(); ++ci) {
    if (ci == comb_rank(std::vector<int>{ax}, g.dim())) continue;
    const auto& tab = a.coeff(ci);
    for (long q = 0; q < g.npoints() / ntheta; ++q) {
      const cplx* blk = tab.data() + (q * ntheta) * static_cast<long>(n) * n;
      for (int e = 0; e < n * n; ++e) m = std::max(m, std::abs(blk[e]));
    }
  }
  return m;
}

void require_fiber(const GridPtr& g, const char* who) {
  if (!g->has_fiber()) throw std::invalid_argument(std::string(who) + ": grid has no distinguished circle");
}

}  // namespace

ConnectionPair ConnectionPair::make(MatrixForm A, MatrixForm Phi, bool unitary) {
  require_fiber(A.grid(), "connection pair");
  if (!A.grid()->same_as(*Phi.grid()) || A.rank() != Phi.rank())
    throw std::invalid_argument("connection pair: A and Phi disagree");
  if (A.degree() != 1 || Phi.degree() != 0)
    throw std::invalid_argument("connection pair: degrees must be (1, 0)");
  const int ax = A.grid()->fiber_axis();
  int theta_ci = comb_rank(std::vector<int>{ax}, A.grid()->dim());
  for (const cplx& v : A.coeff(theta_ci))
    if (std::abs(v) != 0.0)
      throw std::invalid_argument("connection pair: A carries a dtheta component");
  if (framing_defect(A) > 1e-12)
    throw std::invalid_argument("connection pair: A is not based (nonzero at theta = 0)");
  if (unitary) {
    if (anti_hermitian_defect(A) > 1e-10 || anti_hermitian_defect(Phi) > 1e-10)
      throw std::invalid_argument("connection pair: unitary flag needs anti-Hermitian data");
  }
  ConnectionPair p;
  p.A = std::move(A);
  p.Phi = std::move(Phi);
  p.unitary = unitary;
  return p;
}

FramedConnection FramedConnection::make(MatrixForm a, bool unitary) {
  require_fiber(a.grid(), "framed connection");
  if (a.degree() != 1) throw std::invalid_argument("framed connection: degree must be 1");
  if (framing_defect(a) > 1e-12)
    throw std::invalid_argument("framed connection: framing defect above tolerance");
  FramedConnection f;
  f.a = std::move(a);
  f.unitary = unitary;
  return f;
}

FramedConnection caloron_transform(const ConnectionPair& p) {
  const Grid& g = *p.grid();
  const int ax = g.fiber_axis();
  MatrixForm a = p.A;
  int theta_ci = comb_rank(std::vector<int>{ax}, g.dim());
  a.coeff(theta_ci) = p.Phi.coeff(0);
  FramedConnection f;
  f.a = std::move(a);
  f.unitary = p.unitary;
  return f;
}

ConnectionPair inverse_caloron(const FramedConnection& f) {
  const Grid& g = *f.grid();
  const int ax = g.fiber_axis();
  if (framing_defect(f.a) > 1e-12)
    throw std::invalid_argument("inverse caloron: framing defect above tolerance");
  int theta_ci = comb_rank(std::vector<int>{ax}, g.dim());
  MatrixForm A = f.a;
  MatrixForm Phi = MatrixForm::zero(f.a.grid(), 0, f.rank());
  Phi.coeff(0) = f.a.coeff(theta_ci);
  std::fill(A.coeff(theta_ci).begin(), A.coeff(theta_ci).end(), cplx(0.0, 0.0));
  ConnectionPair p;
  p.A = std::move(A);
  p.Phi = std::move(Phi);
  p.unitary = f.unitary;
  return p;
}

MatrixForm curvature(const MatrixForm& a) {
  if (a.degree() != 1) throw std::invalid_argument("curvature: expects a 1-form");
  MatrixForm F = d(a);
  F += wedge(a, a);
  return F;
}

MatrixForm base_curvature(const ConnectionPair& p) {
  MatrixForm F = curvature(p.A);
  const Grid& g = *p.grid();
  const int ax = g.fiber_axis();
  const auto Is = combinations(g.dim(), 2);
  for (size_t ii = 0; ii < Is.size(); ++ii)
    if (Is[ii].back() == ax) {
      auto& tab = F.coeff(static_cast<int>(ii));
      std::fill(tab.begin(), tab.end(), cplx(0.0, 0.0));
    }
  return F;
}

MatrixForm higgs_covariant_derivative(const ConnectionPair& p) {
  const Grid& g = *p.grid();
  const int ax = g.fiber_axis();
  // dPhi + [A, Phi] - d_theta A, all components along M only.
  MatrixForm out = d(p.Phi);
  out += bracket(p.A, p.Phi);
  const int n = p.rank();
  const long np = g.npoints();
  std::vector<cplx> der(static_cast<size_t>(np) * n * n);
  for (int ci = 0; ci < p.A.ncoeffs(); ++ci) {
    g.differentiate(ax, p.A.coeff(ci).data(), der.data(), n * n);
    auto& dst = out.coeff(ci);
    for (size_t i = 0; i < dst.size(); ++i) dst[i] -= der[i];
  }
  int theta_ci = comb_rank(std::vector<int>{ax}, g.dim());
  std::fill(out.coeff(theta_ci).begin(), out.coeff(theta_ci).end(), cplx(0.0, 0.0));
  return out;
}

GroupMap higgs_holonomy_map(const ConnectionPair& p, int ode_steps) {
  const Grid& g = *p.grid();
  const int ax = g.fiber_axis();
  const int ntheta = g.axis(ax).n;
  const int n = p.rank();
  const long nbase = g.npoints() / ntheta;
  GridPtr base = g.without_axis(ax);
  std::vector<cplx> vals(static_cast<size_t>(nbase) * n * n);
  const auto& phi = p.Phi.coeff(0);
  parallel_for(nbase, [&](long qb, long qe) {
    for (long q = qb; q < qe; ++q) {
      std::span<const cplx> loop(phi.data() + q * ntheta * static_cast<long>(n) * n,
                                 static_cast<size_t>(ntheta) * n * n);
      auto h = holonomy(loop, n, ode_steps, p.unitary);
      std::copy(h.begin(), h.end(), vals.data() + q * n * n);
    }
  });
  return GroupMap::from_values(base, n, std::move(vals), p.unitary, false);
}

ConnectionPair PairPath::at(double t) const {
  if (straight) {
    ConnectionPair p;
    p.A = p0.A;
    p.A *= cplx(1.0 - t, 0.0);
    MatrixForm a1 = p1.A;
    a1 *= cplx(t, 0.0);
    p.A += a1;
    p.Phi = p0.Phi;
    p.Phi *= cplx(1.0 - t, 0.0);
    MatrixForm f1 = p1.Phi;
    f1 *= cplx(t, 0.0);
    p.Phi += f1;
    p.unitary = p0.unitary && p1.unitary;
    return p;
  }
  // nearest sample; callers use exact sample parameters
  int T = nsamples() - 1;
  int k = static_cast<int>(std::lround(t * T));
  k = std::clamp(k, 0, T);
  return samples[static_cast<size_t>(k)];
}

PairPath straight_line(const ConnectionPair& p0, const ConnectionPair& p1) {
  if (!p0.grid()->same_as(*p1.grid()) || p0.rank() != p1.rank())
    throw std::invalid_argument("straight_line: endpoint mismatch");
  PairPath path;
  path.straight = true;
  path.p0 = p0;
  path.p1 = p1;
  return path;
}

PairPath sample_path(const PairPath& path, int T) {
  if (T < 1) throw std::invalid_argument("sample_path: need at least 2 samples");
  PairPath out;
  out.straight = false;
  out.samples.reserve(static_cast<size_t>(T) + 1);
  for (int k = 0; k <= T; ++k) out.samples.push_back(path.at(static_cast<double>(k) / T));
  return out;
}

ConnectionPair random_pair(GridPtr g, int rank, std::uint64_t seed, int band,
                           double amplitude, bool unitary) {
  require_fiber(g, "random pair");
  MatrixForm A = random_form(g, 1, rank, seed, band, amplitude, unitary);
  MatrixForm Phi = random_form(g, 0, rank, seed + 1, band, amplitude, unitary);
  const Grid& gr = *g;
  const int ax = gr.fiber_axis();
  const int ntheta = gr.axis(ax).n;
  const int n = rank;
  // zero the dtheta component, base the M components at theta = 0
  int theta_ci = comb_rank(std::vector<int>{ax}, gr.dim());
  std::fill(A.coeff(theta_ci).begin(), A.coeff(theta_ci).end(), cplx(0.0, 0.0));
  for (int ci = 0; ci < A.ncoeffs(); ++ci) {
    if (ci == theta_ci) continue;
    auto& tab = A.coeff(ci);
    for (long q = 0; q < gr.npoints() / ntheta; ++q) {
      const cplx* ref = tab.data() + (q * ntheta) * static_cast<long>(n) * n;
      std::vector<cplx> base(ref, ref + n * n);
      for (int t = 0; t < ntheta; ++t) {
        cplx* blk = tab.data() + (q * ntheta + t) * static_cast<long>(n) * n;
        for (int e = 0; e < n * n; ++e) blk[e] -= base[static_cast<size_t>(e)];
      }
    }
  }
  return ConnectionPair::make(std::move(A), std::move(Phi), unitary);
}

ConnectionPair flat_pair(const GroupMap& based_map) {
  if (!based_map.based()) throw std::invalid_argument("flat_pair: map must be based");
  const Grid& g = *based_map.grid();
  const int ax = g.fiber_axis();
  MatrixForm theta = maurer_cartan(based_map);
  int theta_ci = comb_rank(std::vector<int>{ax}, g.dim());
  MatrixForm Phi = MatrixForm::zero(based_map.grid(), 0, based_map.rank());
  Phi.coeff(0) = theta.coeff(theta_ci);
  std::fill(theta.coeff(theta_ci).begin(), theta.coeff(theta_ci).end(), cplx(0.0, 0.0));
  return ConnectionPair::make(std::move(theta), std::move(Phi), based_map.unitary());
}

}  // namespace caloronkit
