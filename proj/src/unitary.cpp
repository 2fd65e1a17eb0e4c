#include "nlt/unitary.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "nlt/errors.hpp"

namespace nlt {
namespace {

double term_function(TermKind kind, double theta) {
  switch (kind) {
    case TermKind::Sin: return std::sin(theta);
    case TermKind::Cos: return std::cos(theta);
    case TermKind::Linear: break;
  }
  throw std::invalid_argument("mask: linear term has no periodic value");
}

int integer_ramp(const MaskTerm& t) {
  const double p = t.amplitude * t.harmonic;
  const double r = std::round(p);
  if (std::abs(p - r) > kExactTol) {
    throw std::invalid_argument("mask: linear coefficient " + std::to_string(p) +
                                " is not an integer multiple of the momentum quantum");
  }
  return static_cast<int>(r);
}

}  // namespace

double MaskDefinition::smooth_phase(double theta_x, double theta_y) const {
  double phi = 0.0;
  for (const MaskTerm& t : terms) {
    if (t.kind == TermKind::Linear) continue;
    const double h = t.harmonic;
    switch (t.axis) {
      case TermAxis::X: phi += t.amplitude * term_function(t.kind, h * theta_x); break;
      case TermAxis::Y: phi += t.amplitude * term_function(t.kind, h * theta_y); break;
      case TermAxis::XY:
        phi += t.amplitude * term_function(t.kind, h * theta_x) * term_function(t.kind_y, h * theta_y);
        break;
    }
  }
  return phi;
}

MomentumIndex MaskDefinition::linear_shift() const {
  MomentumIndex s;
  for (const MaskTerm& t : terms) {
    if (t.kind != TermKind::Linear) continue;
    if (t.axis == TermAxis::X) {
      s.x += integer_ramp(t);
    } else if (t.axis == TermAxis::Y) {
      s.y += integer_ramp(t);
    } else {
      throw std::invalid_argument("mask: linear terms cannot use the xy product axis");
    }
  }
  return s;
}

PhaseMask::PhaseMask(LatticeSpec lattice, int samples_per_period, std::vector<double> phase, MomentumIndex linear_shift)
    : lattice_(lattice), samples_(samples_per_period), phase_(std::move(phase)), shift_(linear_shift) {
  if (samples_ < 1) throw std::invalid_argument("mask: samples per period must be positive");
  if (phase_.size() != shape().size()) throw std::invalid_argument("mask: phase grid size does not match samples");
  for (double v : phase_) {
    if (!std::isfinite(v)) throw std::invalid_argument("mask: non-finite phase sample");
  }
  if (lattice_.dims() == 1 && shift_.y != 0) throw std::invalid_argument("mask: y shift on a 1D lattice");
}

PhaseMask PhaseMask::sample(const MaskDefinition& def, const LatticeSpec& lattice, int samples_per_period) {
  if (def.dims != lattice.dims()) throw std::invalid_argument("mask: dimension does not match lattice");
  const int s = samples_per_period;
  const int ny = lattice.dims() == 1 ? 1 : s;
  std::vector<double> phase(static_cast<std::size_t>(s) * static_cast<std::size_t>(ny));
  for (int ix = 0; ix < s; ++ix) {
    const double tx = kTwoPi * ix / s;
    for (int iy = 0; iy < ny; ++iy) {
      const double ty = kTwoPi * iy / s;
      phase[static_cast<std::size_t>(ix) * ny + iy] = def.smooth_phase(tx, ty);
    }
  }
  return {lattice, s, std::move(phase), def.linear_shift()};
}

fft::Shape PhaseMask::shape() const {
  return {samples_, lattice_.dims() == 1 ? 1 : samples_};
}

std::vector<cplx> PhaseMask::field() const {
  std::vector<cplx> f(phase_.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::polar(1.0, phase_[i]);
  return f;
}

std::vector<double> PhaseMask::total_phase() const {
  const fft::Shape sh = shape();
  std::vector<double> out(phase_.size());
  for (int ix = 0; ix < sh.rows; ++ix) {
    for (int iy = 0; iy < sh.cols; ++iy) {
      const std::size_t i = static_cast<std::size_t>(ix) * sh.cols + iy;
      const double ramp = kTwoPi * (static_cast<double>(shift_.x) * ix + static_cast<double>(shift_.y) * iy) / samples_;
      out[i] = std::remainder(phase_[i] + ramp, kTwoPi);
    }
  }
  return out;
}

ConvolutionKernel::ConvolutionKernel(LatticeSpec lattice, CVector u, double leakage)
    : lattice_(lattice), u_(std::move(u)), leakage_(leakage) {
  if (static_cast<std::size_t>(u_.size()) != lattice_.size()) {
    throw std::invalid_argument("kernel: coefficient count does not match " + lattice_.describe());
  }
}

UnitaryOperator::UnitaryOperator(LatticeSpec lattice, CMatrix matrix) : lattice_(lattice), m_(std::move(matrix)) {
  const auto n = static_cast<Eigen::Index>(lattice_.size());
  if (m_.rows() != n || m_.cols() != n) throw std::invalid_argument("unitary: matrix shape does not match lattice");
  const UnitarityCheck c = check_unitarity(m_, kFftTol);
  if (!c.ok) {
    throw PhysicsError("unitary: max |U^dagger U - I| = " + std::to_string(c.max_deviation) + " exceeds tolerance");
  }
}

UnitaryOperator UnitaryOperator::identity(const LatticeSpec& lattice) {
  const auto n = static_cast<Eigen::Index>(lattice.size());
  return {lattice, CMatrix::Identity(n, n)};
}

cplx UnitaryOperator::operator()(const MomentumIndex& out, const MomentumIndex& in) const {
  return m_(static_cast<Eigen::Index>(lattice_.flat(out)), static_cast<Eigen::Index>(lattice_.flat(in)));
}

StateVector UnitaryOperator::apply(const StateVector& s) const {
  if (!(s.lattice() == lattice_)) throw std::invalid_argument("unitary: lattice mismatch");
  return {lattice_, m_ * s.amplitudes()};
}

UnitarityCheck check_unitarity(const CMatrix& u, double tol) {
  if (u.rows() != u.cols()) return {false, std::numeric_limits<double>::infinity()};
  const CMatrix d = u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols());
  const double dev = d.size() == 0 ? 0.0 : d.cwiseAbs().maxCoeff();
  return {dev <= tol, dev};
}

int min_samples_per_period(const LatticeSpec& lattice) { return 8 * lattice.max_index(); }

ConvolutionKernel kernel_from_phase(const PhaseMask& mask) {
  const LatticeSpec& lat = mask.lattice();
  const int s = mask.samples_per_period();
  if (s < min_samples_per_period(lat) || s < lat.modes_per_axis()) {
    throw std::invalid_argument("kernel_from_phase: " + std::to_string(s) + " samples per period undersample " +
                                lat.describe() + " (need >= " + std::to_string(min_samples_per_period(lat)) + ")");
  }
  const fft::Shape shape = mask.shape();
  const std::vector<cplx> field = mask.field();
  std::vector<cplx> spec = fft::transform(field, shape, fft::Direction::Forward);
  const double scale = 1.0 / static_cast<double>(shape.size());
  for (cplx& c : spec) c *= scale;

  const MomentumIndex p = mask.linear_shift();
  CVector u(static_cast<Eigen::Index>(lat.size()));
  std::vector<bool> used(spec.size(), false);
  for (std::size_t f = 0; f < lat.size(); ++f) {
    const MomentumIndex m = lat.index(f);
    std::size_t bin = 0;
    if (lat.dims() == 1) {
      bin = static_cast<std::size_t>(fft::bin_of(m.x - p.x, s));
    } else {
      bin = static_cast<std::size_t>(fft::bin_of(m.x - p.x, s)) * s + static_cast<std::size_t>(fft::bin_of(m.y - p.y, s));
    }
    u[static_cast<Eigen::Index>(f)] = spec[bin];
    used[bin] = true;
  }
  double leakage = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (!used[i]) leakage += std::norm(spec[i]);
  }
  return {lat, std::move(u), leakage};
}

ConvolutionKernel kernel_from_phase_2d(const PhaseMask& mask) {
  if (mask.lattice().dims() != 2) throw std::invalid_argument("kernel_from_phase_2d: mask is not two-dimensional");
  return kernel_from_phase(mask);
}

CMatrix circulant(const LatticeSpec& lattice, const CVector& kernel) {
  const auto n = static_cast<Eigen::Index>(lattice.size());
  if (kernel.size() != n) throw std::invalid_argument("circulant: kernel size does not match lattice");
  CMatrix m(n, n);
  for (Eigen::Index out = 0; out < n; ++out) {
    const MomentumIndex a = lattice.index(static_cast<std::size_t>(out));
    for (Eigen::Index in = 0; in < n; ++in) {
      const MomentumIndex b = lattice.index(static_cast<std::size_t>(in));
      const MomentumIndex d{lattice.wrap(a.x - b.x), lattice.dims() == 1 ? 0 : lattice.wrap(a.y - b.y)};
      m(out, in) = kernel[static_cast<Eigen::Index>(lattice.flat(d))];
    }
  }
  return m;
}

UnitaryOperator dense_from_kernel(const ConvolutionKernel& kernel) {
  const double defect = std::abs(kernel.squared_norm() - 1.0);
  if (defect > kFftTol) {
    throw PhysicsError("dense_from_kernel: kernel norm defect " + std::to_string(defect) + " (leakage " +
                       std::to_string(kernel.leakage()) + "); enlarge the lattice");
  }
  return {kernel.lattice(), circulant(kernel.lattice(), kernel.coefficients())};
}

UnitaryOperator construct_transfer_unitary(const UnitaryOperator& u) {
  const LatticeSpec& lat = u.lattice();
  const auto n = static_cast<Eigen::Index>(lat.size());
  CMatrix t(n, n);
  for (Eigen::Index kp = 0; kp < n; ++kp) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto neg_k = static_cast<Eigen::Index>(lat.flat(negate_index(lat.index(static_cast<std::size_t>(k)), lat)));
      t(kp, k) = u.matrix()(neg_k, kp);
    }
  }
  return {lat, std::move(t)};
}

UnitaryOperator negation_permutation(const LatticeSpec& lattice) {
  const auto n = static_cast<Eigen::Index>(lattice.size());
  CMatrix p = CMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto neg = static_cast<Eigen::Index>(lattice.flat(negate_index(lattice.index(static_cast<std::size_t>(k)), lattice)));
    p(neg, k) = 1.0;
  }
  return {lattice, std::move(p)};
}

UnitaryOperator random_unitary(const LatticeSpec& lattice, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(lattice.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  CMatrix z(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      z(r, c) = cplx(re, im);
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index c = 0; c < n; ++c) {
    const cplx d = r(c, c);
    const double mag = std::abs(d);
    q.col(c) *= mag > 0.0 ? d / mag : cplx(1.0);
  }
  return {lattice, std::move(q)};
}

}  // namespace nlt
