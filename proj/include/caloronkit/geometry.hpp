#pragma once

#include "caloronkit/lie.hpp"

namespace caloronkit {

/// Trivialized (module connection, Higgs field) data over M x S1: a based
/// loop-algebra-valued 1-form A with no dtheta component and a
/// loop-algebra-valued function Phi. The trivial pair is (0, 0).
struct ConnectionPair {
  MatrixForm A;    // degree 1, dtheta component identically zero
  MatrixForm Phi;  // degree 0
  bool unitary = false;

  static ConnectionPair make(MatrixForm A, MatrixForm Phi, bool unitary);
  const GridPtr& grid() const { return A.grid(); }
  int rank() const { return A.rank(); }
};

/// Framed connection over M x S1: restricts to the trivial connection in the
/// M directions over theta = 0.
struct FramedConnection {
  MatrixForm a;  // degree 1, all components
  bool unitary = false;

  static FramedConnection make(MatrixForm a, bool unitary);
  const GridPtr& grid() const { return a.grid(); }
  int rank() const { return a.rank(); }
};

/// a = A + Phi dtheta; a pure data reshuffle.
FramedConnection caloron_transform(const ConnectionPair& p);
/// A = M components, Phi = dtheta component; exact inverse of the above.
ConnectionPair inverse_caloron(const FramedConnection& f);

/// F = da + a ^ a.
MatrixForm curvature(const MatrixForm& a);

/// Curvature of the module-connection part alone: dA + A^A with the dtheta
/// row removed (the theta derivative of A belongs to the Higgs covariant
/// derivative, not to the base curvature).
MatrixForm base_curvature(const ConnectionPair& p);

/// Componentwise along M axes: dPhi + [A, Phi] - d_theta A; no dtheta part.
MatrixForm higgs_covariant_derivative(const ConnectionPair& p);

/// Per base point, the holonomy of theta -> Phi(m, theta); a map over M.
GroupMap higgs_holonomy_map(const ConnectionPair& p, int ode_steps = 64);

/// Path of pairs over t in [0,1]: an analytic straight line between two
/// endpoints, or uniformly t-sampled data.
struct PairPath {
  bool straight = true;
  ConnectionPair p0, p1;                // straight endpoints
  std::vector<ConnectionPair> samples;  // sampled representation

  int nsamples() const { return static_cast<int>(samples.size()); }
  const GridPtr& grid() const { return straight ? p0.grid() : samples.front().grid(); }
  int rank() const { return straight ? p0.rank() : samples.front().rank(); }
  /// Pair at parameter t (exact for straight lines).
  ConnectionPair at(double t) const;
};

PairPath straight_line(const ConnectionPair& p0, const ConnectionPair& p1);
/// Materializes T+1 uniform samples of a straight line.
PairPath sample_path(const PairPath& path, int T);

/// Deterministic band-limited test pair; A is based by construction.
ConnectionPair random_pair(GridPtr g, int rank, std::uint64_t seed, int band,
                           double amplitude, bool unitary);

/// The pure-gauge pair (g^{-1} d_M g, g^{-1} d_theta g) of a based map; its
/// caloron transform has trivial holonomy.
ConnectionPair flat_pair(const GroupMap& based_map);

}  // namespace caloronkit
