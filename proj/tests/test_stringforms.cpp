#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "caloronkit/kmodel.hpp"
#include "caloronkit/stringforms.hpp"
#include "oracles.hpp"

using namespace caloronkit;
constexpr double kPi = std::numbers::pi;

namespace {
GridPtr mxs1(int nm = 12, int nt = 24) {
  return Grid::make({FactorSpec::circle(nm), FactorSpec::circle(nm), FactorSpec::circle(nt)}, 2);
}

ConnectionPair trivial_pair(GridPtr g, int rank) {
  return ConnectionPair::make(MatrixForm::zero(g, 1, rank), MatrixForm::zero(g, 0, rank), true);
}
}  // namespace

TEST_CASE("string coefficient table") {
  CHECK(string_coefficient(0, 1) == 1.0);
  CHECK(string_coefficient(0, 2) == doctest::Approx(1.0));
  CHECK(string_coefficient(1, 2) == doctest::Approx(-1.0 / 6.0));
  CHECK(string_coefficient(2, 3) == doctest::Approx(0.25 * 12.0 / 120.0));
  // ratio form of the recurrence between the two outermost entries,
  // exact in rationals: c_{j-1,j} / c_{j-2,j} = -1 / (2 (2j-1))
  for (int j = 2; j <= 12; ++j) {
    double ratio = string_coefficient(j - 1, j) / string_coefficient(j - 2, j);
    CHECK(std::abs(ratio + 1.0 / (2.0 * (2 * j - 1))) <= 1e-15);
  }
  CHECK_THROWS(string_coefficient(2, 2));
  CHECK_THROWS(string_coefficient(-1, 2));
}

TEST_CASE("string form of the trivial pair vanishes") {
  auto g = mxs1();
  GradedForm s = string_form(trivial_pair(g, 2), 3);
  CHECK(graded_sup(s) == 0.0);
}

TEST_CASE("string form: two algorithms agree and both are closed") {
  auto g = mxs1();
  ConnectionPair p = random_pair(g, 2, 81, 2, 0.3, true);
  GradedForm sa = string_form(p, 3, StringFormAlg::Direct);
  GradedForm sb = string_form(p, 3, StringFormAlg::ViaCaloron);
  CHECK(graded_max_diff(sa, sb) <= 1e-9);
  CHECK(graded_sup(graded_d(sa)) <= 1e-9);
}

TEST_CASE("string form pulled back from a winding map") {
  // pure-gauge pair of e^{ik theta}: the string form integrates to k
  auto g = Grid::make({FactorSpec::circle(16), FactorSpec::circle(32)}, 1);
  std::vector<cplx> v(g->npoints());
  std::vector<double> x(2);
  for (long p = 0; p < g->npoints(); ++p) {
    g->point_coords(p, x.data());
    v[p] = std::exp(cplx(0, 2.0 * x[1]));
  }
  // not based in theta, so build the pair by hand: A = 0, Phi = 2i
  MatrixForm Phi = MatrixForm::zero(g, 0, 1);
  std::fill(Phi.coeff(0).begin(), Phi.coeff(0).end(), cplx(0, 2));
  ConnectionPair p = ConnectionPair::make(MatrixForm::zero(g, 1, 1), Phi, true);
  GradedForm tot = total_string_potential(p, 2);
  double want = 2.0;  // (1/2 pi i) Int tr(2i) dtheta
  CHECK(std::abs(tot.term(0).coeff(0)[0] - cplx(want, 0)) <= 1e-12);
}

TEST_CASE("string potential: three algorithms agree on straight lines") {
  auto g = mxs1();
  ConnectionPair p0 = random_pair(g, 2, 82, 2, 0.3, true);
  ConnectionPair p1 = random_pair(g, 2, 83, 2, 0.3, true);
  PairPath line = straight_line(p0, p1);
  GradedForm Se = string_potential(line, 3, StringPotentialAlg::Explicit);
  GradedForm Ss = string_potential(line, 3, StringPotentialAlg::Slice);
  GradedForm Sc = string_potential(line, 3, StringPotentialAlg::CsFiber);
  CHECK(graded_max_diff(Se, Ss) <= 1e-8);
  CHECK(graded_max_diff(Se, Sc) <= 1e-8);
  CHECK(graded_max_diff(Ss, Sc) <= 1e-8);
}

TEST_CASE("string potential of a constant path vanishes") {
  auto g = mxs1();
  ConnectionPair p = random_pair(g, 2, 84, 2, 0.3, true);
  PairPath line = straight_line(p, p);
  CHECK(graded_sup(string_potential(line, 3)) <= 1e-15);
  CHECK(graded_sup(string_potential(sample_path(line, 8), 3,
                                    StringPotentialAlg::Slice)) <= 1e-12);
}

TEST_CASE("string potential transgression dS = s1 - s0") {
  auto g = mxs1();
  for (std::uint64_t seed : {85u, 385u, 685u}) {
    ConnectionPair p0 = random_pair(g, 2, seed, 2, 0.3, true);
    ConnectionPair p1 = random_pair(g, 2, seed + 1, 2, 0.3, true);
    GradedForm S = string_potential(straight_line(p0, p1), 3);
    GradedForm rhs = string_form(p1, 3);
    rhs -= string_form(p0, 3);
    CHECK(graded_max_diff(graded_d(S), rhs) <= 1e-8);
  }
}

TEST_CASE("sampled slice algorithm agrees with explicit on straight data") {
  auto g = mxs1(8, 16);
  ConnectionPair p0 = random_pair(g, 2, 87, 1, 0.3, true);
  ConnectionPair p1 = random_pair(g, 2, 88, 1, 0.3, true);
  PairPath sampled = sample_path(straight_line(p0, p1), 16);
  GradedForm Se = string_potential(sampled, 2, StringPotentialAlg::Explicit);
  GradedForm Ss = string_potential(sampled, 2, StringPotentialAlg::Slice);
  GradedForm Sc = string_potential(sampled, 2, StringPotentialAlg::CsFiber);
  CHECK(graded_max_diff(Se, Ss) <= 1e-8);
  CHECK(graded_max_diff(Se, Sc) <= 1e-8);
}

TEST_CASE("string datum defect and path independence") {
  auto g = mxs1();
  ConnectionPair p0 = random_pair(g, 2, 89, 2, 0.15, true);
  ConnectionPair p1 = random_pair(g, 2, 90, 2, 0.15, true);
  StringDatumDefect sd = string_datum_defect(p0, p0, 3, 1e-7);
  CHECK(sd.base_is_torus);
  for (const auto& v : sd.verdicts) CHECK(v.result.exact());

  PairPath line = straight_line(p0, p1);
  GradedForm S = string_potential(line, 3);
  std::vector<ConnectionPair> curved;
  const int T = 128;
  for (int k = 0; k <= T; ++k) {
    double s = static_cast<double>(k) / T;
    curved.push_back(line.at(s * s));
  }
  PairPath cpath;
  cpath.straight = false;
  cpath.samples = std::move(curved);
  GradedForm Sc = string_potential(cpath, 3);
  Sc -= S;
  for (const auto& [deg, f] : Sc.terms) {
    if (deg < Sc.grid->dim()) CHECK(sup_norm(d(f)) <= 1e-7);
    for (const auto& per : periods(f)) CHECK(std::abs(per.value) <= 1e-7);
  }
}

TEST_CASE("total string potential validates the coefficient table") {
  auto g = mxs1();
  ConnectionPair p = random_pair(g, 2, 91, 2, 0.3, true);
  GradedForm tot = total_string_potential(p, 3);
  GradedForm line = string_potential(straight_line(trivial_pair(g, 2), p), 3);
  CHECK(graded_max_diff(tot, line) <= 1e-8);
  CHECK(graded_max_diff(graded_d(tot), string_form(p, 3)) <= 1e-8);
}

TEST_CASE("total string potential of a constant Higgs field") {
  auto g = mxs1();
  const int n = 2;
  MatrixForm Phi = MatrixForm::zero(g, 0, n);
  for (long p = 0; p < g->npoints(); ++p) {
    Phi.at(0, p)[0] = cplx(0, 0.3);
    Phi.at(0, p)[3] = cplx(0, -0.1);
  }
  ConnectionPair cp = ConnectionPair::make(MatrixForm::zero(g, 1, n), Phi, true);
  GradedForm tot = total_string_potential(cp, 2);
  // degree-0 term is (1/2 pi i) Int tr(Phi) dtheta = tr(Phi)
  double m = 0;
  for (const auto& v : tot.term(0).coeff(0)) m = std::max(m, std::abs(v - cplx(0.2, 0)));
  CHECK(m <= 1e-13);
  CHECK(graded_max_diff(graded_d(tot), string_form(cp, 2)) <= 1e-10);
}

TEST_CASE("tau-hat pullback") {
  auto g = Grid::make({FactorSpec::circle(16), FactorSpec::circle(32)}, 1);
  // winding loop: G(m)(theta) = e^{2 i theta} gives the constant 2
  std::vector<cplx> v(g->npoints());
  std::vector<double> x(2);
  for (long p = 0; p < g->npoints(); ++p) {
    g->point_coords(p, x.data());
    v[p] = std::exp(cplx(0, 2.0 * x[1]));
  }
  GroupMap G = GroupMap::from_values(g, 1, v, true, true);
  GradedForm tau = tau_hat_pullback(G, 2);
  double m = 0;
  for (const auto& t : tau.term(0).coeff(0)) m = std::max(m, std::abs(t - cplx(2, 0)));
  CHECK(m <= 1e-12);

  // constant-in-m loops kill every positive degree (T^1 base: none exist)
  for (const auto& [deg, t] : tau.terms)
    if (deg > 0) CHECK(sup_norm(t) <= 1e-10);
}

TEST_CASE("tau-hat equals the flat straight-line potential") {
  auto g = mxs1(12, 24);
  GroupMap G = random_smooth_map(g, 2, 92, 1, 0.2, true, true);
  GradedForm tau = tau_hat_pullback(G, 3);
  GradedForm flat = string_potential(straight_line(trivial_pair(g, 2), flat_pair(G)), 3);
  CHECK(graded_max_diff(tau, flat) <= 1e-8);
  CHECK(graded_sup(graded_d(tau)) <= 1e-9);
}

TEST_CASE("universal pullback reproduces the odd character") {
  auto g = Grid::make({FactorSpec::circle(16), FactorSpec::circle(16)});
  GroupMap h = random_smooth_map(g, 2, 93, 1, 0.3, false, false);
  GradedForm u = universal_string_pullback(h, 2);
  GradedForm ch = odd_chern_character(h, 2);
  CHECK(graded_max_diff(u, ch) <= 1e-12);
  CHECK(graded_sup(universal_string_pullback(GroupMap::identity(g, 2), 2)) <= 1e-13);

  auto g1 = Grid::make({FactorSpec::circle(64)}, 0);
  std::vector<cplx> v(64);
  for (int j = 0; j < 64; ++j) v[j] = std::exp(cplx(0, -2.0 * g1->axis(0).coords[j]));
  GroupMap w = GroupMap::from_values(g1, 1, v, true, false);
  auto I = integrate(universal_string_pullback(w, 2).term(1));
  CHECK(std::abs(I[0] - cplx(-2, 0)) <= 1e-12);
}

TEST_CASE("witness profile normalization") {
  auto g = mxs1();
  for (int k = 1; k <= 3; ++k) {
    auto rho = witness_profile(*g, k);
    CHECK(rho[0] == 0.0);
    double s = 0;
    const auto& ax = g->axis(2);
    for (int i = 0; i < ax.n; ++i) s += ax.quad[i] * std::pow(rho[i], k);
    CHECK(std::abs(s - std::pow(2 * kPi, k + 1)) <= 1e-9);
  }
}

TEST_CASE("surjectivity witness, k = 0") {
  auto g = mxs1();
  GridPtr base = g->without_axis(2);
  MatrixForm f = MatrixForm::zero(base, 0, 1);
  std::vector<double> x(2);
  for (long q = 0; q < base->npoints(); ++q) {
    base->point_coords(q, x.data());
    f.coeff(0)[q] = std::sin(x[0]);
  }
  ConnectionPair w = surjectivity_witness(g, f, 0);
  GradedForm S = string_potential(straight_line(trivial_pair(g, 1), w), 2);
  CHECK(max_diff(S.term(0), f) <= 1e-10);
  CHECK(sup_norm(S.term(2)) <= 1e-12);
}

TEST_CASE("surjectivity witness, k = 1") {
  auto g = Grid::make({FactorSpec::interval(9, 0, 1), FactorSpec::interval(9, 0, 1),
                       FactorSpec::circle(24)},
                      2);
  GridPtr base = g->without_axis(2);
  MatrixForm f = MatrixForm::zero(base, 0, 1);
  std::vector<double> x(2);
  for (long q = 0; q < base->npoints(); ++q) {
    base->point_coords(q, x.data());
    f.coeff(0)[q] = 0.5 + 0.25 * x[0] * x[1];
  }
  ConnectionPair w = surjectivity_witness(g, f, 1);
  GradedForm S = string_potential(straight_line(trivial_pair(g, 1), w), 3);
  GradedForm s1 = string_form(w, 3);
  CHECK(graded_max_diff(graded_d(S), s1) <= 1e-7);

  // a periodic chart is rejected for k >= 1
  auto gp = mxs1();
  MatrixForm fp = MatrixForm::zero(gp->without_axis(2), 0, 1);
  CHECK_THROWS(surjectivity_witness(gp, fp, 1));
  // broken normalization is rejected
  std::vector<double> bad(24, 1.0);
  CHECK_THROWS(surjectivity_witness(g, f, 1, bad));
}

TEST_CASE("gerbe curving identity") {
  auto g = mxs1();
  // trivial pair: everything vanishes
  GerbeCurving z = gerbe_curving_check(trivial_pair(g, 2));
  CHECK(sup_norm(z.B) == 0.0);
  CHECK(z.defect == 0.0);

  // Higgs-only pair: B = 0 and the defect is pure discretization noise
  ConnectionPair ph = ConnectionPair::make(MatrixForm::zero(g, 1, 2),
                                           random_form(g, 0, 2, 94, 2, 0.3, true), true);
  GerbeCurving h = gerbe_curving_check(ph);
  CHECK(sup_norm(h.B) <= 1e-12);
  CHECK(h.defect <= 1e-10);

  ConnectionPair p = random_pair(g, 2, 95, 2, 0.3, true);
  CHECK(gerbe_curving_check(p).defect <= 1e-8);
  ConnectionPair nu = ConnectionPair::make(MatrixForm::zero(g, 1, 2),
                                           random_form(g, 0, 2, 96, 2, 0.3, false), false);
  CHECK_THROWS(gerbe_curving_check(nu));
}

TEST_CASE("string form is additive under direct sums") {
  auto g = mxs1(8, 16);
  ConnectionPair a = random_pair(g, 1, 97, 1, 0.3, true);
  ConnectionPair b = random_pair(g, 1, 98, 1, 0.3, true);
  ConnectionPair s = direct_sum(a, b);
  CHECK(s.rank() == 2);
  GradedForm lhs = string_form(s, 2);
  GradedForm rhs = string_form(a, 2);
  rhs += string_form(b, 2);
  CHECK(graded_max_diff(lhs, rhs) <= 1e-14);
}
