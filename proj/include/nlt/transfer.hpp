#pragma once

// Nonlocal transfer: the signal photon of the momentum-anticorrelated pair
// goes through U'_s and is projected on |chi>; the idler is left in U|phi0>.

#include <cstdint>

#include "nlt/lattice.hpp"
#include "nlt/unitary.hpp"

namespace nlt {

/// Signal projection state |chi> = sum A(k') |k'>, unit norm within kExactTol.
class ProjectionVector {
 public:
  ProjectionVector(LatticeSpec lattice, CVector coefficients);

  static ProjectionVector basis(const LatticeSpec& lattice, const MomentumIndex& k0);
  /// A(k') = C(k')^*, the projection that transfers an arbitrary input.
  static ProjectionVector for_input(const StateVector& phi0);

  const LatticeSpec& lattice() const { return lattice_; }
  const CVector& coefficients() const { return a_; }

 private:
  LatticeSpec lattice_;
  CVector a_;
};

/// How idler amplitudes are labelled. `Physical` labels them by the idler's
/// own momentum mode; `Partner` by the signal mode it is paired with in the
/// correlated state (-k), which is handy when debugging index algebra.
enum class IdlerIndexing { Physical, Partner };

struct Projection {
  /// sum_k' A^*(k') psi(k', j), before normalization.
  CVector idler_amplitudes;
  double success_probability = 0.0;
  StateVector idler_state;
};

/// Probability floor below which a projection is considered to annihilate
/// the state.
inline constexpr double kMinSuccessProbability = 1e-15;

BiphotonState apply_signal_unitary(const BiphotonState& psi, const UnitaryOperator& us);
/// Same contraction for an arbitrary (possibly lossy) signal operator.
BiphotonState apply_signal_operator(const BiphotonState& psi, const CMatrix& op);

/// Throws PhysicsError when the success probability is below the floor.
Projection project_signal(const BiphotonState& psi, const ProjectionVector& chi,
                          IdlerIndexing indexing = IdlerIndexing::Physical);

struct TransferResult {
  StateVector idler_state;
  double success_probability = 0.0;
  /// |<idler | U phi0>|^2.
  double fidelity_vs_direct = 0.0;
};

TransferResult transfer_localized(const UnitaryOperator& u, const MomentumIndex& k0);
TransferResult transfer_general(const UnitaryOperator& u, const StateVector& phi0);

struct KernelRoute {
  /// v_m = sum_l d_l u_{m-l} on the lattice (circular).
  ConvolutionKernel v;
  /// v scaled to unit norm, ready to drive a state.
  ConvolutionKernel v_normalized;
};

KernelRoute transfer_kernel_route(const ConvolutionKernel& u, const StateVector& d);

/// Drives the correlated state with the circulant operator of `v` on the
/// signal and projects the signal on |0>; the idler is sum_m v_m |m>.
Projection kernel_route_idler(const ConvolutionKernel& v);

/// d-dimensional Hadamard on register 1, controlled shift
/// |j>|k> -> |j>|j+k mod d>, then the anti-identity on register 2. Throws
/// PhysicsError if the result deviates from make_correlated_state.
BiphotonState prepare_correlated_state_via_circuit(const LatticeSpec& lattice);

}  // namespace nlt
