#pragma once

// Sampled-field model of the optical bench: hologram synthesis, far-field
// imaging, camera binning and shot noise.

#include <cstdint>
#include <optional>
#include <vector>

#include "nlt/fft.hpp"
#include "nlt/lattice.hpp"
#include "nlt/unitary.hpp"

namespace nlt {

/// Complex field on an x-major grid (values[ix * ny + iy]); `shape.rows` is
/// the x extent, `shape.cols` the y extent.
struct FieldGrid {
  fft::Shape shape;
  std::vector<cplx> values;
};

/// Non-negative intensity grid in the camera plane, x-major like FieldGrid.
/// Mode spacing is `pixels_per_mode` pixels and mode (0,0) sits on pixel
/// (nx/2, ny/2).
class PixelImage {
 public:
  PixelImage(int nx, int ny, std::vector<double> data, int pixels_per_mode = 1, double period = 1.0);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int dims() const { return ny_ == 1 ? 1 : 2; }
  int pixels_per_mode() const { return ppm_; }
  double period() const { return period_; }
  /// Pixel pitch in momentum units.
  double pixel_pitch() const { return kTwoPi / period_ / ppm_; }
  const std::vector<double>& data() const { return data_; }
  double at(int ix, int iy) const { return data_[static_cast<std::size_t>(ix) * ny_ + iy]; }
  double total() const;

 private:
  int nx_;
  int ny_;
  std::vector<double> data_;
  int ppm_;
  double period_;
};

enum class EncodeMode { PhaseOnly, Bolduc };

struct HologramSpec {
  PhaseMask mask;
  /// Target amplitude a(x) in [0, 1] over the mask's x samples (Bolduc only).
  std::optional<std::vector<double>> amplitude;
  /// Carrier period in the same length units as the lattice period.
  double blaze_period = 0.0;
  EncodeMode mode = EncodeMode::PhaseOnly;
  int samples_per_carrier = 16;
};

/// Sampled hologram phase. `carrier_cycles` counts blaze periods across the
/// y extent (0 for phase-only holograms).
struct Hologram {
  fft::Shape shape;
  std::vector<double> phase;
  int carrier_cycles = 0;
  double period = 1.0;

  FieldGrid field() const;
};

struct CameraSpec {
  int pixels_per_mode = 5;
  /// Half width of the displayed mode window, |m| <= window per axis.
  int window = 9;
  std::int64_t counts_total = 10000;
};

/// Phase-only: the mask's total phase (1D masks give a single-row grid).
/// Bolduc: M(x) * Mod(F(x) + 2 pi y / blaze, 2 pi) with
/// sinc(1 - M) = a(x) and F = phi - pi (M - 1), which puts a(x) exp(i phi(x)) on
/// the first diffraction order along y.
Hologram synthesize_hologram(const HologramSpec& spec);

/// Solves sin(pi s)/(pi s) = a for s in [0, 1].
double inverse_sinc(double a);

/// Field of the first diffraction order along y, cropped to `crop_modes`
/// spatial-frequency rows around the carrier and demodulated. Result is a
/// 1D field over x.
FieldGrid extract_first_order(const Hologram& holo, int crop_modes = 1);

/// v(x_j) = sum_m v_m exp(2 pi i m j / S) for a 1D kernel.
FieldGrid field_from_kernel(const ConvolutionKernel& v, int samples_per_period);

/// Far-field intensity of a one-period field. The field is tiled over
/// `pixels_per_mode` periods per axis, so modes land `pixels_per_mode`
/// pixels apart; intensities are normalized to the mean input power.
PixelImage far_field(const FieldGrid& field, int pixels_per_mode = 1, double period = 1.0);
PixelImage far_field(const PhaseMask& mask, int pixels_per_mode = 1);
PixelImage far_field(const Hologram& holo, int pixels_per_mode = 1);

struct BinnedDistribution {
  Distribution distribution;
  /// Fraction of image intensity outside the window.
  double leakage = 0.0;
};

/// Sums each mode-centred bin of `pixels_per_mode` pixels over the camera
/// window and renormalizes. Throws std::invalid_argument if the window does
/// not fit in the image.
BinnedDistribution bin_to_modes(const PixelImage& img, const CameraSpec& cam);

/// Every pixels_per_mode-th pixel through the mode centres: the DFT-size
/// image of one period.
PixelImage decimate_to_period(const PixelImage& img);

/// Adds eps * delta_{m,0} and renormalizes.
Distribution add_zeroth_order(const Distribution& p, double eps);

struct PoissonSample {
  std::vector<std::int64_t> counts;
  /// Empty when no photon was counted.
  std::optional<Distribution> empirical;
};

PoissonSample sample_poisson(const Distribution& p, std::int64_t counts_total, std::uint64_t seed);

/// sqrt(count) / total counts, per bin.
std::vector<double> poisson_errors(const std::vector<std::int64_t>& counts);

/// (sum_m sqrt(P_exp(m) P_th(m)))^2. Throws std::invalid_argument on window
/// mismatch.
double similarity(const Distribution& p_exp, const Distribution& p_th);

}  // namespace nlt
