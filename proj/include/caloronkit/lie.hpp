#pragma once

#include <cstdint>
#include <optional>

#include "caloronkit/forms.hpp"

namespace caloronkit {

/// Sampled smooth map into GL(n,C) or U(n). `based` means the value is the
/// identity on the theta = 0 slice of the distinguished circle.
class GroupMap {
 public:
  GroupMap() = default;
  static GroupMap identity(GridPtr g, int rank);
  static GroupMap from_values(GridPtr g, int rank, std::vector<cplx> values,
                              bool unitary, bool based);

  const GridPtr& grid() const { return grid_; }
  int rank() const { return rank_; }
  bool unitary() const { return unitary_; }
  bool based() const { return based_; }
  const std::vector<cplx>& values() const { return values_; }
  std::vector<cplx>& values() { return values_; }
  cplx* at(long p) { return values_.data() + p * rank_ * rank_; }
  const cplx* at(long p) const { return values_.data() + p * rank_ * rank_; }

  double unitarity_defect() const;
  double basedness_defect() const;

 private:
  GridPtr grid_;
  int rank_ = 1;
  std::vector<cplx> values_;
  bool unitary_ = false;
  bool based_ = false;
};

/// Left Maurer-Cartan form g^{-1} dg.
MatrixForm maurer_cartan(const GroupMap& g);

GroupMap block_sum(const GroupMap& g, const GroupMap& h);
GroupMap pointwise_inverse(const GroupMap& g);
GroupMap pointwise_product(const GroupMap& g, const GroupMap& h);

/// Conjugation g w g^{-1} applied to every coefficient of w.
MatrixForm gauge_conjugate(const GroupMap& g, const MatrixForm& w);

/// X_t = diag(g,1) R_t diag(1,g^{-1}) R_{-t} with R_t the blockwise rotation:
/// a smooth interpolation from g + g^{-1} at t = 0 to the identity at t = pi/2.
GroupMap rotation_homotopy(const GroupMap& g, double t);
/// Exact t-derivative of the rotation homotopy (same layout as the values).
std::vector<cplx> rotation_homotopy_velocity(const GroupMap& g, double t);
/// The homotopy materialized on grid x [0,1] (t last), reparametrized so
/// t = 0 gives g + g^{-1} and t = 1 the identity.
GroupMap rotation_homotopy_family(const GroupMap& g, int n_t);

/// Solves dg/dtheta = g Phi(theta), g(0) = 1, over one period of the
/// distinguished circle by RK4 with trigonometric interpolation between the
/// given samples; returns g(2 pi). `loop` holds n_samples rank x rank blocks.
std::vector<cplx> holonomy(std::span<const cplx> loop, int rank, int steps,
                           bool unitary_projection = false);

void matrix_exp(int n, const cplx* in, cplx* out);

/// Deterministic band-limited test data. Frequencies are bounded by `band`
/// on every axis (cosine modes on intervals); `band` must stay below the
/// Nyquist mode of each axis.
GroupMap random_smooth_map(GridPtr g, int rank, std::uint64_t seed, int band,
                           double amplitude, bool unitary, bool based);
MatrixForm random_form(GridPtr g, int degree, int rank, std::uint64_t seed,
                       int band, double amplitude, bool anti_hermitian = false);

/// Random unitary homotopy t -> g0 exp(tau(t) X) on grid x [0,1] (t last).
/// The quintic time profile has two vanishing derivatives at both ends, so
/// trapezoid quadrature in t converges at fourth order.
GroupMap random_homotopy(GridPtr base, int rank, std::uint64_t seed, int band,
                         double amplitude, int n_t);

}  // namespace caloronkit
