#pragma once

// Unitary operators on the mode lattice: dense matrices, translation-invariant
// convolution kernels extracted from periodic phase masks, and the signal-side
// operator that steers the idler photon.

#include <cstdint>
#include <utility>
#include <vector>

#include "nlt/fft.hpp"
#include "nlt/lattice.hpp"

namespace nlt {

enum class TermKind { Sin, Cos, Linear };
enum class TermAxis { X, Y, XY };

/// One additive term of a sinusoidal-grating mask, in units of the lattice
/// momentum quantum:
///   X / Y :  amplitude * f(harmonic * dk * x)        f in {sin, cos}
///   XY    :  amplitude * f(harmonic * dk * x) * g(harmonic * dk * y)
///   Linear:  amplitude * harmonic * dk * (x or y); the product must be an integer.
struct MaskTerm {
  TermKind kind = TermKind::Sin;
  TermKind kind_y = TermKind::Cos;
  double amplitude = 0.0;
  int harmonic = 1;
  TermAxis axis = TermAxis::X;

  friend bool operator==(const MaskTerm&, const MaskTerm&) = default;
};

struct MaskDefinition {
  int dims = 1;
  double period = 1.0;
  std::vector<MaskTerm> terms;

  /// Smooth (periodic) part of the phase at (x, y) given in radians of dk*x.
  double smooth_phase(double theta_x, double theta_y) const;
  /// Integer mode shift carried by the linear terms.
  MomentumIndex linear_shift() const;

  friend bool operator==(const MaskDefinition&, const MaskDefinition&) = default;
};

/// Real phase grid sampled over exactly one period per axis, plus an integer
/// linear-ramp shift kept out of the samples. Storage is x-major:
/// phase[ix * ny + iy]; in 1D ny == 1.
class PhaseMask {
 public:
  PhaseMask(LatticeSpec lattice, int samples_per_period, std::vector<double> phase, MomentumIndex linear_shift = {});

  static PhaseMask sample(const MaskDefinition& def, const LatticeSpec& lattice, int samples_per_period);

  const LatticeSpec& lattice() const { return lattice_; }
  int samples_per_period() const { return samples_; }
  const std::vector<double>& phase() const { return phase_; }
  const MomentumIndex& linear_shift() const { return shift_; }
  fft::Shape shape() const;

  /// exp(i*phase) on the grid, without the linear ramp.
  std::vector<cplx> field() const;
  /// Wrapped total phase including the linear ramp.
  std::vector<double> total_phase() const;

 private:
  LatticeSpec lattice_;
  int samples_;
  std::vector<double> phase_;
  MomentumIndex shift_;
};

/// Translation-invariant kernel {u_m}, stored in lattice flat order.
class ConvolutionKernel {
 public:
  ConvolutionKernel(LatticeSpec lattice, CVector u, double leakage = 0.0);

  const LatticeSpec& lattice() const { return lattice_; }
  const CVector& coefficients() const { return u_; }
  cplx operator[](const MomentumIndex& m) const { return u_[static_cast<Eigen::Index>(lattice_.flat(m))]; }
  /// Sum of |u_m|^2 over modes dropped by truncation to the lattice.
  double leakage() const { return leakage_; }
  double squared_norm() const { return u_.squaredNorm(); }

 private:
  LatticeSpec lattice_;
  CVector u_;
  double leakage_;
};

/// Dense operator with element (k', k) = <k'|U|k>. Unitary within kFftTol.
class UnitaryOperator {
 public:
  UnitaryOperator(LatticeSpec lattice, CMatrix matrix);

  static UnitaryOperator identity(const LatticeSpec& lattice);

  const LatticeSpec& lattice() const { return lattice_; }
  const CMatrix& matrix() const { return m_; }
  cplx operator()(const MomentumIndex& out, const MomentumIndex& in) const;

  StateVector apply(const StateVector& s) const;

 private:
  LatticeSpec lattice_;
  CMatrix m_;
};

struct UnitarityCheck {
  bool ok = false;
  double max_deviation = 0.0;
};

/// max |U^dagger U - I| over elements, compared against `tol`.
UnitarityCheck check_unitarity(const CMatrix& u, double tol);
inline UnitarityCheck check_unitarity(const UnitaryOperator& u, double tol) { return check_unitarity(u.matrix(), tol); }

/// Minimum samples per period accepted for a lattice (8 * M).
int min_samples_per_period(const LatticeSpec& lattice);

/// u_m = (1/S) sum_j exp(i phi(x_j)) exp(-2 pi i m j / S), shifted by the
/// mask's linear term and truncated to the lattice.
ConvolutionKernel kernel_from_phase(const PhaseMask& mask);
/// Same as kernel_from_phase, restricted to 2D masks.
ConvolutionKernel kernel_from_phase_2d(const PhaseMask& mask);

/// Circulant matrix with (k', k) = kernel[(k' - k) mod N] per axis. No
/// unitarity requirement; used for the amplitude-modulated operator as well.
CMatrix circulant(const LatticeSpec& lattice, const CVector& kernel);

/// Circulant unitary from a normalized kernel. Throws PhysicsError when the
/// kernel's squared norm differs from 1 by more than kFftTol.
UnitaryOperator dense_from_kernel(const ConvolutionKernel& kernel);

/// U'(k', k) = U(-k, k').
UnitaryOperator construct_transfer_unitary(const UnitaryOperator& u);

/// Anti-identity |k> -> |-k>.
UnitaryOperator negation_permutation(const LatticeSpec& lattice);

/// Haar-distributed unitary from a seeded complex Gaussian matrix (QR with
/// the phases of R's diagonal folded back into Q).
UnitaryOperator random_unitary(const LatticeSpec& lattice, std::uint64_t seed);

}  // namespace nlt
