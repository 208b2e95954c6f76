#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "caloronkit/lie.hpp"
#include "oracles.hpp"

using namespace caloronkit;
constexpr double kPi = std::numbers::pi;

namespace {
GridPtr circle(int n = 64) { return Grid::make({FactorSpec::circle(n)}, 0); }

GroupMap phase_map(GridPtr g, int k) {
  std::vector<cplx> v(g->npoints());
  std::vector<double> x(g->dim());
  for (long p = 0; p < g->npoints(); ++p) {
    g->point_coords(p, x.data());
    v[p] = std::exp(cplx(0, k * x[g->dim() - 1]));
  }
  return GroupMap::from_values(std::move(g), 1, std::move(v), true, false);
}
}  // namespace

TEST_CASE("maurer-cartan of a phase") {
  auto g = circle();
  GroupMap w = phase_map(g, 1);
  MatrixForm mc = maurer_cartan(w);
  for (long p = 0; p < g->npoints(); ++p)
    CHECK(std::abs(mc.coeff(0)[p] - cplx(0, 1)) <= 1e-12);
  GroupMap id = GroupMap::identity(g, 2);
  CHECK(sup_norm(maurer_cartan(id)) <= 1e-13);
}

TEST_CASE("maurer-cartan flatness") {
  auto g = Grid::make({FactorSpec::circle(24), FactorSpec::circle(24)});
  GroupMap h = random_smooth_map(g, 2, 31, 2, 0.15, false, false);
  MatrixForm th = maurer_cartan(h);
  MatrixForm fl = d(th);
  fl += wedge(th, th);
  CHECK(sup_norm(fl) <= 1e-9);
  // anti-Hermitian values for unitary maps
  GroupMap u = random_smooth_map(g, 2, 32, 2, 0.15, true, false);
  CHECK(anti_hermitian_defect(maurer_cartan(u)) <= 1e-10);
}

TEST_CASE("block sum and pointwise inverse") {
  auto g = circle(16);
  GroupMap a = random_smooth_map(g, 2, 33, 2, 0.3, true, false);
  GroupMap one = GroupMap::identity(g, 1);
  GroupMap s = block_sum(a, one);
  CHECK(s.rank() == 3);
  CHECK(s.at(3)[0] == a.at(3)[0]);
  CHECK(s.at(3)[2 * 3 + 2] == cplx(1, 0));

  GroupMap w = phase_map(circle(16), 2);
  GroupMap winv = pointwise_inverse(w);
  for (long p = 0; p < 16; ++p)
    CHECK(std::abs(winv.at(p)[0] - std::conj(w.at(p)[0])) <= 1e-14);

  // Maurer-Cartan respects block sums exactly
  GroupMap b = random_smooth_map(g, 1, 34, 2, 0.3, true, false);
  MatrixForm lhs = maurer_cartan(block_sum(a, b));
  MatrixForm rhs = block_diag(maurer_cartan(a), maurer_cartan(b));
  CHECK(max_diff(lhs, rhs) == 0.0);
}

TEST_CASE("rotation homotopy endpoints are exact") {
  auto g = Grid::make({FactorSpec::circle(16)});
  GroupMap a = random_smooth_map(g, 2, 35, 2, 0.4, true, false);
  GroupMap x0 = rotation_homotopy(a, 0.0);
  GroupMap x1 = rotation_homotopy(a, 0.5 * kPi);
  GroupMap want0 = block_sum(a, pointwise_inverse(a));
  double m = 0;
  for (size_t i = 0; i < x0.values().size(); ++i)
    m = std::max(m, std::abs(x0.values()[i] - want0.values()[i]));
  CHECK(m == 0.0);
  m = 0;
  GroupMap id = GroupMap::identity(g, 4);
  for (size_t i = 0; i < x1.values().size(); ++i)
    m = std::max(m, std::abs(x1.values()[i] - id.values()[i]));
  CHECK(m <= 1e-15);
}

TEST_CASE("holonomy of special loops") {
  const int n = 2, ns = 64;
  // zero loop
  std::vector<cplx> loop(ns * n * n, cplx(0, 0));
  auto h = holonomy(loop, n, 64);
  CHECK(std::abs(h[0] - cplx(1, 0)) <= 1e-14);
  CHECK(std::abs(h[1]) <= 1e-14);

  // constant (i/2) I -> -I
  for (int s = 0; s < ns; ++s)
    for (int i = 0; i < n; ++i) loop[s * n * n + i * n + i] = cplx(0, 0.5);
  h = holonomy(loop, n, 512);
  CHECK(std::abs(h[0] - cplx(-1, 0)) <= 1e-10);
  CHECK(std::abs(h[3] - cplx(-1, 0)) <= 1e-10);

  // scalar profile: holonomy = exp of the circle integral (quadrature oracle)
  std::vector<cplx> sloop(ns);
  cplx total(0, 0);
  for (int s = 0; s < ns; ++s) {
    double th = 2 * kPi * s / ns;
    sloop[s] = cplx(0.1 * std::cos(th), 0.2 + 0.05 * std::sin(2 * th));
    total += sloop[s] * (2 * kPi / ns);
  }
  auto hs = holonomy(sloop, 1, 512);
  CHECK(std::abs(hs[0] - std::exp(total)) <= 1e-10);

  CHECK_THROWS(holonomy(loop, n, 4));
}

TEST_CASE("holonomy converges at fourth order") {
  const int n = 1, ns = 32;
  std::vector<cplx> loop(ns, cplx(0, 0.5));
  cplx want = std::exp(cplx(0, kPi));
  double err[3];
  int steps[3] = {16, 32, 64};
  for (int c = 0; c < 3; ++c) {
    auto h = holonomy(loop, n, steps[c]);
    err[c] = std::abs(h[0] - want);
  }
  CHECK(std::log2(err[0] / err[1]) >= 3.7);
  CHECK(std::log2(err[1] / err[2]) >= 3.7);
}

TEST_CASE("matrix exponential") {
  const int n = 2;
  std::vector<cplx> X(n * n, cplx(0, 0)), E(n * n);
  matrix_exp(n, X.data(), E.data());
  CHECK(std::abs(E[0] - cplx(1, 0)) <= 1e-15);
  CHECK(std::abs(E[1]) <= 1e-15);

  X = {cplx(0, kPi), 0, 0, 0};
  matrix_exp(n, X.data(), E.data());
  CHECK(std::abs(E[0] - cplx(-1, 0)) <= 1e-13);
  CHECK(std::abs(E[3] - cplx(1, 0)) <= 1e-13);

  // exp(X) exp(-X) = 1 for random bounded X
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<cplx> Y(n * n), Z(n * n), EY(n * n), EZ(n * n), P(n * n);
    for (auto& v : Y)
      v = cplx(1.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5,
               1.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5);
    for (int i = 0; i < n * n; ++i) Z[i] = -Y[i];
    matrix_exp(n, Y.data(), EY.data());
    matrix_exp(n, Z.data(), EZ.data());
    mat::mul(n, EY.data(), EZ.data(), P.data());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(std::abs(P[i * n + j] - (i == j ? cplx(1, 0) : cplx(0, 0))) <= 1e-12);
  }
}

TEST_CASE("random data generators are deterministic and flagged") {
  auto g = Grid::make({FactorSpec::circle(16), FactorSpec::circle(32)}, 1);
  GroupMap a = random_smooth_map(g, 2, 42, 2, 0.3, true, true);
  GroupMap b = random_smooth_map(g, 2, 42, 2, 0.3, true, true);
  CHECK(a.values() == b.values());
  CHECK(a.unitarity_defect() <= 1e-12);
  CHECK(a.basedness_defect() == 0.0);

  GroupMap c = random_smooth_map(g, 2, 43, 2, 0.3, true, true);
  CHECK(c.values() != a.values());

  MatrixForm f = random_form(g, 1, 2, 44, 2, 0.5, true);
  CHECK(anti_hermitian_defect(f) <= 1e-15);
  CHECK_THROWS(random_form(g, 0, 1, 1, 8, 0.5));  // band at Nyquist
}

TEST_CASE("flags are validated") {
  auto g = circle(16);
  std::vector<cplx> v(g->npoints(), cplx(2.0, 0.0));  // not unitary
  CHECK_THROWS(GroupMap::from_values(g, 1, v, true, false));
  CHECK_THROWS(GroupMap::from_values(g, 1, v, false, true));
  CHECK_NOTHROW(GroupMap::from_values(g, 1, v, false, false));
}
