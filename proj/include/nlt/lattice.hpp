#pragma once

// Discrete periodic momentum lattice and the one- and two-photon state
// containers built on it.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nlt {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

// Absolute tolerances: exact-arithmetic claims vs. anything that went
// through a DFT.
inline constexpr double kExactTol = 1e-12;
inline constexpr double kFftTol = 1e-9;

/// Mode label on the lattice. In 1D only `x` is meaningful and `y` is 0.
struct MomentumIndex {
  int x = 0;
  int y = 0;

  friend bool operator==(const MomentumIndex&, const MomentumIndex&) = default;
};

/// Finite periodic lattice of transverse-momentum modes, indexed -M..M per
/// axis with N = 2M+1 odd. Flat storage is x-major: flat = (x+M)*N + (y+M).
class LatticeSpec {
 public:
  LatticeSpec(int dims, int modes_per_axis, double period = 1.0);

  int dims() const { return dims_; }
  int modes_per_axis() const { return n_; }
  int max_index() const { return n_ / 2; }
  double period() const { return period_; }
  double delta_k() const { return kTwoPi / period_; }

  /// N^dims.
  std::size_t size() const;

  bool contains(const MomentumIndex& i) const;
  std::size_t flat(const MomentumIndex& i) const;
  MomentumIndex index(std::size_t flat) const;

  /// Reduces any integer into -M..M modulo N.
  int wrap(int m) const;

  friend bool operator==(const LatticeSpec& a, const LatticeSpec& b) {
    return a.dims_ == b.dims_ && a.n_ == b.n_ && a.period_ == b.period_;
  }

  std::string describe() const;

 private:
  int dims_;
  int n_;
  double period_;
};

/// Component-wise -m. Throws std::out_of_range when `i` is not on the lattice.
MomentumIndex negate_index(const MomentumIndex& i, const LatticeSpec& lattice);

/// Single-photon pure state over lattice modes.
class StateVector {
 public:
  StateVector(LatticeSpec lattice, CVector amplitudes);

  static StateVector basis(const LatticeSpec& lattice, const MomentumIndex& i);

  const LatticeSpec& lattice() const { return lattice_; }
  const CVector& amplitudes() const { return amps_; }
  cplx amplitude(const MomentumIndex& i) const { return amps_[static_cast<Eigen::Index>(lattice_.flat(i))]; }
  double norm() const { return amps_.norm(); }

  /// Copy scaled to unit norm. Throws std::domain_error for the zero vector.
  StateVector normalized() const;

 private:
  LatticeSpec lattice_;
  CVector amps_;
};

/// Signal/idler amplitude tensor: rows index the signal mode, columns the
/// idler mode.
class BiphotonState {
 public:
  BiphotonState(LatticeSpec lattice, CMatrix amplitudes);

  const LatticeSpec& lattice() const { return lattice_; }
  const CMatrix& amplitudes() const { return amps_; }
  cplx amplitude(const MomentumIndex& signal, const MomentumIndex& idler) const;
  double norm() const { return amps_.norm(); }

  /// Probability law of one photon with the other traced out.
  std::vector<double> signal_marginal() const;
  std::vector<double> idler_marginal() const;

 private:
  LatticeSpec lattice_;
  CMatrix amps_;
};

/// Probability law over lattice modes.
class Distribution {
 public:
  /// Entries must be >= 0 and sum to 1 within kFftTol.
  Distribution(LatticeSpec lattice, std::vector<double> probabilities);

  /// Renormalizes non-negative weights. Throws std::domain_error if they sum
  /// to zero.
  static Distribution from_weights(LatticeSpec lattice, std::vector<double> weights);

  const LatticeSpec& lattice() const { return lattice_; }
  const std::vector<double>& probabilities() const { return p_; }
  double operator[](const MomentumIndex& i) const { return p_[lattice_.flat(i)]; }

 private:
  LatticeSpec lattice_;
  std::vector<double> p_;
};

/// Sum_k |k>_s |-k>_i / sqrt(N^dims).
BiphotonState make_correlated_state(const LatticeSpec& lattice);

/// |<a|b>|^2. Throws std::invalid_argument on lattice mismatch.
double fidelity(const StateVector& a, const StateVector& b);

Distribution distribution_of(const StateVector& s);

double total_variation(const Distribution& a, const Distribution& b);

struct WindowedDistribution {
  Distribution distribution;
  /// Probability mass outside the window before renormalization.
  double leakage = 0.0;
};

/// Restricts to |m| <= half_width per axis and renormalizes over the window.
WindowedDistribution restrict_to_window(const Distribution& p, int half_width);

}  // namespace nlt
