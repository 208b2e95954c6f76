#include "caloronkit/kmodel.hpp"

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

cplx tau_coeff(int j) {
  double r = 1.0;
  for (int m = j + 1; m <= 2 * j; ++m) r /= m;
  return -r * pow_cplx(-1.0 / kTwoPiI, j + 1);
}

GroupMap time_slice(const GroupMap& homotopy, int k) {
  const Grid& g = *homotopy.grid();
  const int tax = g.dim() - 1;
  const int nt = g.axis(tax).n;
  const int n = homotopy.rank();
  GridPtr base = g.without_axis(tax);
  const long nbase = base->npoints();
  std::vector<cplx> vals(static_cast<size_t>(nbase) * n * n);
  for (long q = 0; q < nbase; ++q)
    std::copy(homotopy.at(q * nt + k), homotopy.at(q * nt + k) + n * n,
              vals.data() + q * n * n);
  return GroupMap::from_values(base, n, std::move(vals), homotopy.unitary(), false);
}

void require_homotopy(const GroupMap& homotopy) {
  const Grid& g = *homotopy.grid();
  if (g.dim() < 2 || g.axis(g.dim() - 1).kind != AxisKind::Interval)
    throw std::invalid_argument("homotopy: last axis must be an interval (missing t-axis)");
}

}  // namespace

EquivalenceReport exactness_report(GradedForm defect, int cutoff, double tol) {
  EquivalenceReport rep;
  rep.cutoff = cutoff;
  rep.tol = tol;
  rep.grid = defect.grid->describe();
  bool all_exact = true;
  bool supported = defect.grid->all_circles();
  for (const auto& [deg, f] : defect.terms) {
    DegreeReport dr;
    dr.degree = deg;
    if (!supported) {
      dr.supported = false;
      all_exact = false;
    } else {
      ExactnessResult r = is_exact(f, tol);
      dr.closedness = r.closedness;
      dr.worst_period = r.worst_period;
      dr.worst_cycle = r.worst_cycle;
      dr.exact = r.exact();
      if (!dr.exact) all_exact = false;
    }
    rep.per_degree.push_back(std::move(dr));
  }
  rep.verdict = !supported ? Verdict::UnsupportedDomain
                           : (all_exact ? Verdict::Equivalent : Verdict::Inequivalent);
  rep.defect = std::move(defect);
  return rep;
}

GradedForm twz_transgression(const GroupMap& homotopy, int cutoff) {
  require_homotopy(homotopy);
  const Grid& g = *homotopy.grid();
  const int tax = g.dim() - 1;
  const Axis& ta = g.axis(tax);
  const int nt = ta.n;
  const int n = homotopy.rank();
  GridPtr base = g.without_axis(tax);
  const long nbase = base->npoints();
  GradedForm out = GradedForm::zero(base, Parity::Even);

  // Slice-streamed: per time sample, the spatial Maurer-Cartan form and the
  // finite-difference time derivative combine into the transgression
  // integrand; trapezoid weights accumulate over t.
  for (int k = 0; k < nt; ++k) {
    GroupMap gk = time_slice(homotopy, k);
    // g^{-1} d_t g at slice k
    std::vector<cplx> der(static_cast<size_t>(nbase) * n * n, cplx(0.0, 0.0));
    for (int l = 0; l < nt; ++l) {
      double c = ta.deriv[static_cast<size_t>(k) * nt + l];
      if (c == 0.0) continue;
      for (long q = 0; q < nbase; ++q) {
        const cplx* src = homotopy.at(q * nt + l);
        cplx* dst = der.data() + q * n * n;
        for (int e = 0; e < n * n; ++e) dst[e] += c * src[e];
      }
    }
    MatrixForm gdot = MatrixForm::zero(base, 0, n);
    parallel_for(nbase, [&](long qb, long qe) {
      std::vector<cplx> inv(static_cast<size_t>(n) * n);
      for (long q = qb; q < qe; ++q) {
        mat::inverse(n, gk.at(q), inv.data());
        mat::mul(n, inv.data(), der.data() + q * n * n, gdot.at(0, q));
      }
    });
    MatrixForm theta = maurer_cartan(gk);
    MatrixForm theta2 = wedge(theta, theta);
    MatrixForm P = gdot;
    for (int j = 0; j <= cutoff; ++j) {
      int deg = 2 * j;
      if (deg > base->dim()) break;
      if (j > 0) P = wedge(P, theta2);
      MatrixForm t = trace_form(P);
      t *= tau_coeff(j) * ta.quad[static_cast<size_t>(k)];
      out.term(deg) += t;
    }
  }
  return out;
}

GroupMap homotopy_endpoint(const GroupMap& homotopy, bool end) {
  require_homotopy(homotopy);
  return time_slice(homotopy, end ? homotopy.grid()->axis(homotopy.grid()->dim() - 1).n - 1 : 0);
}

EquivalenceReport cs_equivalent(const GroupMap& g0, const GroupMap& g1,
                                const GroupMap& homotopy, int cutoff, double tol) {
  require_homotopy(homotopy);
  GroupMap h0 = homotopy_endpoint(homotopy, false);
  GroupMap h1 = homotopy_endpoint(homotopy, true);
  auto endpoint_gap = [](const GroupMap& a, const GroupMap& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.values().size(); ++i)
      m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
  };
  if (!h0.grid()->same_as(*g0.grid()) || g0.rank() != homotopy.rank() ||
      g1.rank() != homotopy.rank())
    throw std::invalid_argument("cs_equivalent: endpoint maps do not match the homotopy");
  if (endpoint_gap(h0, g0) > 1e-10 || endpoint_gap(h1, g1) > 1e-10)
    throw std::invalid_argument("cs_equivalent: homotopy endpoints differ from g0/g1");

  GradedForm tau = twz_transgression(homotopy, cutoff);
  EquivalenceReport rep = exactness_report(std::move(tau), cutoff, tol);

  // Homotopy-formula consistency: d(transgression) = Ch(g1) - Ch(g0).
  GradedForm dtau = graded_d(rep.defect);
  GradedForm dch = odd_chern_character(g1, cutoff);
  dch -= odd_chern_character(g0, cutoff);
  rep.extras.emplace_back("curvature_map_defect", graded_max_diff(dtau, dch));
  return rep;
}

EquivalenceReport string_data_equivalent(const ConnectionPair& p0, const ConnectionPair& p1,
                                         int cutoff, double tol) {
  if (!p0.grid()->same_as(*p1.grid()) || p0.rank() != p1.rank())
    throw std::invalid_argument("string_data_equivalent: pair mismatch");
  StringDatumDefect sd = string_datum_defect(p0, p1, cutoff, tol);
  return exactness_report(std::move(sd.defect), cutoff, tol);
}

ConnectionPair direct_sum(const ConnectionPair& p0, const ConnectionPair& p1) {
  if (!p0.grid()->same_as(*p1.grid()))
    throw std::invalid_argument("direct_sum: grid mismatch");
  return ConnectionPair::make(block_diag(p0.A, p1.A), block_diag(p0.Phi, p1.Phi),
                              p0.unitary && p1.unitary);
}

InverseWitness inverse_witness(const GroupMap& g, int cutoff, double tol, int n_t) {
  InverseWitness w{pointwise_inverse(g), rotation_homotopy_family(g, n_t), {}};
  GroupMap gg = block_sum(g, w.inverse);
  GroupMap id = GroupMap::identity(g.grid(), 2 * g.rank());
  w.report = cs_equivalent(gg, id, w.homotopy, cutoff, tol);
  return w;
}

}  // namespace caloronkit
