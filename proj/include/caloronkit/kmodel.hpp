#pragma once

#include <string>

#include "caloronkit/stringforms.hpp"

namespace caloronkit {

enum class Verdict { Equivalent, Inequivalent, UnsupportedDomain };

struct DegreeReport {
  int degree = 0;
  double closedness = 0.0;
  double worst_period = 0.0;
  std::vector<int> worst_cycle;
  bool exact = false;
  bool supported = true;
};

/// Outcome of a "zero modulo exact" decision for a graded defect form.
struct EquivalenceReport {
  Verdict verdict = Verdict::UnsupportedDomain;
  GradedForm defect;
  std::vector<DegreeReport> per_degree;
  int cutoff = 0;
  double tol = 0.0;
  std::string grid;
  std::vector<std::pair<std::string, double>> extras;
};

/// Per-degree exactness of a graded form assembled into a report.
EquivalenceReport exactness_report(GradedForm defect, int cutoff, double tol);

/// Transgression of the odd character along a homotopy G on M x [0,1]
/// (t the last axis): sum_j -j!/(2j)! (-1/2 pi i)^{j+1}
/// Int_0^1 tr(g_t^{-1} d_t g_t (g_t^{-1} d_M g_t)^{2j}) dt, trapezoid in t.
GradedForm twz_transgression(const GroupMap& homotopy, int cutoff);

/// Endpoint slices of a homotopy (t = 0 and t = 1).
GroupMap homotopy_endpoint(const GroupMap& homotopy, bool end);

/// Maps g0, g1 are equivalent when the transgression of the given homotopy
/// is exact. The report also records the homotopy-formula consistency
/// d(transgression) = Ch(g1) - Ch(g0) per degree.
EquivalenceReport cs_equivalent(const GroupMap& g0, const GroupMap& g1,
                                const GroupMap& homotopy, int cutoff, double tol);

/// Pairs are equivalent when the straight-line string potential is exact.
EquivalenceReport string_data_equivalent(const ConnectionPair& p0, const ConnectionPair& p1,
                                         int cutoff, double tol);

/// Blockwise direct sum of pairs; the string form is additive under it.
ConnectionPair direct_sum(const ConnectionPair& p0, const ConnectionPair& p1);

/// Explicit inverse witness: g^{-1}, the rotation homotopy from g + g^{-1}
/// to the identity, and the equivalence report (always equivalent for
/// unitary band-limited data).
struct InverseWitness {
  GroupMap inverse;
  GroupMap homotopy;
  EquivalenceReport report;
};
InverseWitness inverse_witness(const GroupMap& g, int cutoff, double tol, int n_t = 257);

}  // namespace caloronkit
