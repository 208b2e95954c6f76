#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "caloronkit/chernweil.hpp"
#include "caloronkit/forms.hpp"
#include "caloronkit/lie.hpp"
#include "oracles.hpp"

using namespace caloronkit;
constexpr double kPi = std::numbers::pi;

namespace {
GridPtr torus2() { return Grid::make({FactorSpec::circle(16), FactorSpec::circle(16)}); }
GridPtr torus3() {
  return Grid::make({FactorSpec::circle(16), FactorSpec::circle(16), FactorSpec::circle(16)});
}
}  // namespace

TEST_CASE("wedge antisymmetry on scalar 1-forms") {
  auto g = torus2();
  MatrixForm dx = MatrixForm::zero(g, 1, 1);
  MatrixForm dy = MatrixForm::zero(g, 1, 1);
  std::fill(dx.coeff(0).begin(), dx.coeff(0).end(), cplx(1, 0));
  std::fill(dy.coeff(1).begin(), dy.coeff(1).end(), cplx(1, 0));
  MatrixForm ab = wedge(dx, dy);
  MatrixForm ba = wedge(dy, dx);
  ba *= cplx(-1, 0);
  CHECK(max_diff(ab, ba) == 0.0);
  CHECK(ab.coeff(0)[0] == cplx(1, 0));
}

TEST_CASE("repeated index annihilates") {
  auto g = torus2();
  MatrixForm a = random_form(g, 1, 2, 1, 2, 1.0);
  MatrixForm b = a;
  // keep only the dx components of both
  std::fill(a.coeff(1).begin(), a.coeff(1).end(), cplx(0, 0));
  std::fill(b.coeff(1).begin(), b.coeff(1).end(), cplx(0, 0));
  CHECK(sup_norm(wedge(a, b)) == 0.0);
}

TEST_CASE("wedge matches the brute-force antisymmetrization oracle") {
  auto g = torus2();
  MatrixForm a = random_form(g, 1, 1, 5, 2, 1.0);
  MatrixForm b = random_form(g, 1, 1, 6, 2, 1.0);
  CHECK(max_diff(wedge(a, b), oracles::brute_force_wedge(a, b)) <= 1e-13);
  auto g3 = torus3();
  MatrixForm c = random_form(g3, 1, 1, 7, 2, 1.0);
  MatrixForm e = random_form(g3, 2, 1, 8, 2, 1.0);
  CHECK(max_diff(wedge(c, e), oracles::brute_force_wedge(c, e)) <= 1e-13);
}

TEST_CASE("wedge is associative and graded-commutative on scalars") {
  auto g = torus3();
  MatrixForm a = random_form(g, 1, 1, 1, 2, 1.0);
  MatrixForm b = random_form(g, 1, 1, 2, 2, 1.0);
  MatrixForm c = random_form(g, 1, 1, 3, 2, 1.0);
  CHECK(max_diff(wedge(wedge(a, b), c), wedge(a, wedge(b, c))) <= 1e-12);
  MatrixForm ab = wedge(a, b);
  MatrixForm ba = wedge(b, a);
  ba *= cplx(-1, 0);
  CHECK(max_diff(ab, ba) <= 1e-15);
}

TEST_CASE("exterior derivative basics") {
  auto g = Grid::make({FactorSpec::circle(64)});
  MatrixForm f = MatrixForm::zero(g, 0, 1);
  for (long p = 0; p < 64; ++p) f.coeff(0)[p] = std::sin(g->axis(0).coords[p]);
  MatrixForm df = d(f);
  for (long p = 0; p < 64; ++p)
    CHECK(std::abs(df.coeff(0)[p] - cplx(std::cos(g->axis(0).coords[p]), 0)) <= 1e-12);
}

TEST_CASE("d squared vanishes on band-limited data") {
  auto g = torus3();
  MatrixForm a = random_form(g, 1, 2, 9, 2, 1.0);
  CHECK(sup_norm(d(d(a))) <= 1e-10);
  MatrixForm f = random_form(g, 0, 2, 10, 2, 1.0);
  CHECK(sup_norm(d(d(f))) <= 1e-10);
}

TEST_CASE("graded Leibniz rule") {
  auto g = torus2();
  for (std::uint64_t seed : {11u, 311u, 611u}) {
    MatrixForm a = random_form(g, 1, 1, seed, 2, 1.0);
    MatrixForm b = random_form(g, 1, 1, seed + 1, 2, 1.0);
    MatrixForm lhs = d(wedge(a, b));
    MatrixForm rhs = wedge(d(a), b);
    rhs -= wedge(a, d(b));
    CHECK(max_diff(lhs, rhs) <= 1e-9);

    MatrixForm f = random_form(g, 0, 1, seed + 2, 2, 1.0);
    lhs = d(wedge(f, a));
    rhs = wedge(d(f), a);
    rhs += wedge(f, d(a));
    CHECK(max_diff(lhs, rhs) <= 1e-9);
  }
}

TEST_CASE("contraction") {
  auto g = Grid::make({FactorSpec::circle(16), FactorSpec::circle(32)}, 1);
  MatrixForm a = random_form(g, 1, 1, 14, 2, 1.0);
  MatrixForm c = contract(a, 1);
  CHECK(c.degree() == 0);
  // iota_x(dy component) drops; the kept coefficient is the dtheta one
  CHECK(max_diff(c, [&] {
          MatrixForm t = MatrixForm::zero(g, 0, 1);
          t.coeff(0) = a.coeff(1);
          return t;
        }()) == 0.0);
  MatrixForm two = random_form(g, 2, 1, 15, 2, 1.0);
  CHECK(sup_norm(contract(contract(two, 1), 1)) == 0.0);
  CHECK_THROWS(contract(MatrixForm::zero(g, 0, 1), 0));
}

TEST_CASE("slice pullback") {
  auto g = Grid::make({FactorSpec::circle(16), FactorSpec::interval(9, 0, 1)});
  MatrixForm a = random_form(g, 1, 1, 16, 2, 1.0);
  MatrixForm s0 = slice(a, 1, 0);
  CHECK(s0.grid()->dim() == 1);
  // dx component restricted to t = 0
  for (long q = 0; q < 16; ++q)
    CHECK(s0.coeff(0)[q] == a.coeff(0)[q * 9 + 0]);
  // slice of dt is zero: a pure-dt form pulls back to nothing
  MatrixForm dt = MatrixForm::zero(g, 1, 1);
  std::fill(dt.coeff(1).begin(), dt.coeff(1).end(), cplx(1, 0));
  CHECK(sup_norm(slice(dt, 1, 3)) == 0.0);
  CHECK_THROWS(slice(a, 1, 99));
}

TEST_CASE("slice commutes with d away from the sliced axis") {
  auto g = Grid::make({FactorSpec::circle(16), FactorSpec::circle(16), FactorSpec::circle(16)});
  MatrixForm f = random_form(g, 0, 1, 17, 2, 1.0);
  MatrixForm a = d(slice(f, 2, 4));
  MatrixForm b = slice(d(f), 2, 4);
  CHECK(max_diff(a, b) <= 1e-10);
}

TEST_CASE("fiber integration") {
  auto g = Grid::make({FactorSpec::circle(16), FactorSpec::circle(32)}, 1);
  // (1/2pi) f(x) dx ^ dtheta -> f(x) dx exactly
  MatrixForm fx = random_form(g->without_axis(1), 0, 1, 18, 2, 1.0);
  MatrixForm a = MatrixForm::zero(g, 2, 1);
  for (long q = 0; q < 16; ++q)
    for (long t = 0; t < 32; ++t)
      a.coeff(0)[q * 32 + t] = fx.coeff(0)[q] / (2 * kPi);
  MatrixForm fi = fiber_integrate(a);
  CHECK(fi.degree() == 1);
  CHECK(max_diff(fi, [&] {
          MatrixForm t = MatrixForm::zero(g->without_axis(1), 1, 1);
          t.coeff(0) = fx.coeff(0);
          return t;
        }()) <= 1e-14);
  // no dtheta component -> 0
  MatrixForm b = MatrixForm::zero(g, 1, 1);
  b.coeff(0) = random_form(g, 0, 1, 19, 2, 1.0).coeff(0);
  CHECK(sup_norm(fiber_integrate(b)) == 0.0);
}

TEST_CASE("fiber integration intertwines d") {
  auto g = Grid::make({FactorSpec::circle(16), FactorSpec::circle(16), FactorSpec::circle(32)}, 2);
  MatrixForm a = random_form(g, 1, 1, 20, 2, 1.0);
  MatrixForm lhs = fiber_integrate(d(a));
  MatrixForm rhs = d(fiber_integrate(a));
  // with dtheta in last position the two sides agree with a plus sign
  CHECK(max_diff(lhs, rhs) <= 1e-10);
}

TEST_CASE("normalised symmetrised trace") {
  auto g = Grid::make({FactorSpec::circle(16), FactorSpec::circle(32)}, 1);
  const int n = 2;
  MatrixForm X = random_form(g, 0, n, 21, 2, 1.0);
  MatrixForm Xdth = MatrixForm::zero(g, 1, n);
  Xdth.coeff(1) = X.coeff(0);
  MatrixForm t1 = sym_trace({&Xdth});
  // k = 1: (1/2 pi i) tr(X) dtheta
  double m = 0;
  for (long p = 0; p < g->npoints(); ++p) {
    cplx want = mat::trace(n, X.at(0, p)) / cplx(0, 2 * kPi);
    m = std::max(m, std::abs(t1.coeff(1)[p] - want));
  }
  CHECK(m <= 1e-14);
  CHECK(sup_norm([&] {
          MatrixForm t = t1;
          t.coeff(1).assign(t.coeff(1).size(), cplx(0, 0));
          return t;
        }()) == 0.0);

  // k = 2 with equal even-degree arguments: (1/2)(1/2 pi i)^2 tr(F^F)
  auto g4 = Grid::make({FactorSpec::circle(8), FactorSpec::circle(8), FactorSpec::circle(8),
                        FactorSpec::circle(8)});
  MatrixForm F = random_form(g4, 2, n, 22, 2, 1.0);
  MatrixForm t2 = sym_trace({&F, &F});
  MatrixForm want = trace_form(wedge(F, F));
  want *= 0.5 / (cplx(0, 2 * kPi) * cplx(0, 2 * kPi));
  CHECK(max_diff(t2, want) <= 1e-13);
}

TEST_CASE("symmetrised trace is graded-symmetric") {
  auto g = torus3();
  for (std::uint64_t seed : {401u, 402u, 403u}) {
    MatrixForm X = random_form(g, 1, 2, seed, 2, 1.0);
    MatrixForm Y = random_form(g, 1, 2, seed + 50, 2, 1.0);
    MatrixForm F = random_form(g, 2, 2, seed + 100, 2, 1.0);
    // odd-odd exchange flips the sign
    MatrixForm a = sym_trace({&X, &Y});
    MatrixForm b = sym_trace({&Y, &X});
    b *= cplx(-1, 0);
    CHECK(max_diff(a, b) <= 1e-14);
    // even arguments move freely
    MatrixForm c = sym_trace({&X, &F});
    MatrixForm e = sym_trace({&F, &X});
    CHECK(max_diff(c, e) <= 1e-14);
  }
}

TEST_CASE("symmetrised trace is ad-invariant") {
  auto g = torus2();
  const int n = 2;
  GroupMap h = random_smooth_map(g, n, 23, 2, 0.5, false, false);
  MatrixForm w1 = random_form(g, 1, n, 24, 2, 1.0);
  MatrixForm w2 = random_form(g, 1, n, 25, 2, 1.0);
  MatrixForm lhs = sym_trace({&w1, &w2});
  MatrixForm c1 = gauge_conjugate(h, w1);
  MatrixForm c2 = gauge_conjugate(h, w2);
  MatrixForm rhs = sym_trace({&c1, &c2});
  CHECK(max_diff(lhs, rhs) <= 1e-10);
}

TEST_CASE("periods and the winding oracle") {
  auto g = torus2();
  MatrixForm dx1 = MatrixForm::zero(g, 1, 1);
  std::fill(dx1.coeff(0).begin(), dx1.coeff(0).end(), cplx(1, 0));
  auto per = periods(dx1);
  REQUIRE(per.size() == 2);
  CHECK(std::abs(per[0].value - cplx(2 * kPi, 0)) <= 1e-12);
  CHECK(std::abs(per[1].value) <= 1e-12);

  // exact forms have vanishing periods
  MatrixForm f = MatrixForm::zero(g, 0, 1);
  std::vector<double> x(2);
  for (long p = 0; p < g->npoints(); ++p) {
    g->point_coords(p, x.data());
    f.coeff(0)[p] = std::sin(x[0]) * std::cos(x[1]);
  }
  for (const auto& pr : periods(d(f))) CHECK(std::abs(pr.value) <= 1e-12);

  // winding: (1/2 pi i) g^-1 dg for g = e^{3 i x1}
  GroupMap w = GroupMap::from_values(g, 1, [&] {
    std::vector<cplx> v(g->npoints());
    for (long p = 0; p < g->npoints(); ++p) {
      g->point_coords(p, x.data());
      v[p] = std::exp(cplx(0, 3 * x[0]));
    }
    return v;
  }(), true, false);
  MatrixForm mc = maurer_cartan(w);
  mc *= cplx(1, 0) / cplx(0, 2 * kPi);
  auto pw = periods(mc);
  // oracle: phase unwrapping along the first cycle
  std::vector<cplx> loop(16);
  for (int k = 0; k < 16; ++k) loop[k] = w.values()[k * 16];
  CHECK(oracles::winding_number(loop) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(pw[0].value - cplx(3, 0)) <= 1e-12);
}

TEST_CASE("exactness verdicts") {
  auto g = torus3();
  MatrixForm a = random_form(g, 1, 1, 26, 2, 1.0);
  CHECK(is_exact(d(a), 1e-8).exact());

  MatrixForm dx1 = MatrixForm::zero(g, 1, 1);
  std::fill(dx1.coeff(0).begin(), dx1.coeff(0).end(), cplx(1, 0));
  auto r = is_exact(dx1, 1e-8);
  CHECK(r.status == ExactnessResult::Status::NotExact);
  CHECK(r.worst_period == doctest::Approx(2 * kPi));

  // non-torus grids are an explicit unsupported domain
  auto gi = Grid::make({FactorSpec::interval(9, 0, 1)});
  CHECK_THROWS_AS((void)is_exact(MatrixForm::zero(gi, 0, 1), 1e-8), std::domain_error);
}

TEST_CASE("block diagonal assembly") {
  auto g = torus2();
  MatrixForm a = random_form(g, 1, 1, 27, 2, 1.0);
  MatrixForm b = random_form(g, 1, 2, 28, 2, 1.0);
  MatrixForm s = block_diag(a, b);
  CHECK(s.rank() == 3);
  CHECK(s.at(0, 5)[0] == a.at(0, 5)[0]);
  CHECK(s.at(0, 5)[1 * 3 + 1] == b.at(0, 5)[0]);
  CHECK(s.at(0, 5)[0 * 3 + 1] == cplx(0, 0));
}

TEST_CASE("stack and slice round trip") {
  auto base = Grid::make({FactorSpec::circle(16)});
  auto big = base->with_axis_inserted(1, FactorSpec::interval(9, 0, 1));
  std::vector<MatrixForm> slices;
  for (int k = 0; k < 9; ++k) slices.push_back(random_form(base, 1, 2, 100 + k, 2, 1.0));
  std::vector<const MatrixForm*> ptrs;
  for (const auto& s : slices) ptrs.push_back(&s);
  MatrixForm stacked = stack_along_axis(big, 1, ptrs);
  for (int k = 0; k < 9; ++k) CHECK(max_diff(slice(stacked, 1, k), slices[k]) == 0.0);
  // components along the stacked axis vanish
  CHECK(sup_norm(contract(stacked, 1)) == 0.0);
}
