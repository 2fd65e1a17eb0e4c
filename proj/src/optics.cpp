#include "nlt/optics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "nlt/errors.hpp"

namespace nlt {

PixelImage::PixelImage(int nx, int ny, std::vector<double> data, int pixels_per_mode, double period)
    : nx_(nx), ny_(ny), data_(std::move(data)), ppm_(pixels_per_mode), period_(period) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("image: empty grid");
  if (data_.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny)) {
    throw std::invalid_argument("image: data size does not match " + std::to_string(nx) + "x" + std::to_string(ny));
  }
  if (ppm_ < 1) throw std::invalid_argument("image: pixels per mode must be >= 1");
  if (!(period_ > 0.0)) throw std::invalid_argument("image: period must be positive");
  for (double v : data_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("image: negative or non-finite intensity");
  }
}

double PixelImage::total() const {
  double s = 0.0;
  for (double v : data_) s += v;
  return s;
}

FieldGrid Hologram::field() const {
  FieldGrid f{shape, std::vector<cplx>(phase.size())};
  for (std::size_t i = 0; i < phase.size(); ++i) f.values[i] = std::polar(1.0, phase[i]);
  return f;
}

double inverse_sinc(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("inverse_sinc: argument outside [0, 1]");
  if (a == 1.0) return 0.0;
  if (a == 0.0) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double s = std::sin(kPi * mid) / (kPi * mid);
    if (s > a) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Hologram synthesize_hologram(const HologramSpec& spec) {
  const PhaseMask& mask = spec.mask;
  const double period = mask.lattice().period();
  const std::vector<double> phi = mask.total_phase();

  if (spec.mode == EncodeMode::PhaseOnly) {
    if (spec.amplitude) throw std::invalid_argument("hologram: phase-only encoding takes no amplitude target");
    return {mask.shape(), phi, 0, period};
  }

  if (mask.lattice().dims() != 1) throw std::invalid_argument("hologram: amplitude encoding needs a 1D target");
  const int nx = mask.samples_per_period();
  std::vector<double> amp(static_cast<std::size_t>(nx), 1.0);
  if (spec.amplitude) {
    if (spec.amplitude->size() != amp.size()) throw std::invalid_argument("hologram: amplitude target size mismatch");
    amp = *spec.amplitude;
  }
  for (double a : amp) {
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("hologram: amplitude target outside [0, 1]");
  }
  if (!(spec.blaze_period > 0.0) || !(spec.blaze_period < period / 10.0)) {
    throw std::invalid_argument("hologram: blaze period must be positive and below period/10");
  }
  const double ratio = period / spec.blaze_period;
  const int cycles = static_cast<int>(std::lround(ratio));
  if (std::abs(ratio - cycles) > 1e-9 * ratio) {
    throw std::invalid_argument("hologram: period must hold an integer number of blaze periods");
  }
  if (spec.samples_per_carrier < 4) throw std::invalid_argument("hologram: need >= 4 samples per blaze period");
  const int ny = cycles * spec.samples_per_carrier;

  Hologram h{{nx, ny}, std::vector<double>(static_cast<std::size_t>(nx) * ny), cycles, period};
  for (int ix = 0; ix < nx; ++ix) {
    const double m = 1.0 - inverse_sinc(amp[static_cast<std::size_t>(ix)]);
    const double f = phi[static_cast<std::size_t>(ix)] - kPi * (m - 1.0);
    for (int iy = 0; iy < ny; ++iy) {
      const double carrier = kTwoPi * static_cast<double>(cycles) * iy / ny;
      double t = std::fmod(f + carrier, kTwoPi);
      if (t < 0.0) t += kTwoPi;
      h.phase[static_cast<std::size_t>(ix) * ny + iy] = m * t;
    }
  }
  return h;
}

FieldGrid extract_first_order(const Hologram& holo, int crop_modes) {
  if (holo.carrier_cycles <= 0) throw std::invalid_argument("extract_first_order: hologram has no carrier");
  if (crop_modes < 1) throw std::invalid_argument("extract_first_order: crop width must be >= 1 mode");
  const int nx = holo.shape.rows;
  const int ny = holo.shape.cols;
  const FieldGrid f = holo.field();
  const std::vector<cplx> spec = fft::transform(f.values, holo.shape, fft::Direction::Forward);
  const double scale = 1.0 / (static_cast<double>(nx) * ny);

  const int half = crop_modes / 2;
  std::vector<cplx> band(static_cast<std::size_t>(nx), cplx(0.0));
  for (int kx = 0; kx < nx; ++kx) {
    for (int dy = -half; dy <= crop_modes - 1 - half; ++dy) {
      const int ky = fft::bin_of(holo.carrier_cycles + dy, ny);
      band[static_cast<std::size_t>(kx)] += spec[static_cast<std::size_t>(kx) * ny + ky] * scale;
    }
  }
  FieldGrid out{{nx, 1}, fft::transform(band, {nx, 1}, fft::Direction::Backward)};
  return out;
}

FieldGrid field_from_kernel(const ConvolutionKernel& v, int samples_per_period) {
  const LatticeSpec& lat = v.lattice();
  if (lat.dims() != 1) throw std::invalid_argument("field_from_kernel: 1D kernels only");
  if (samples_per_period < lat.modes_per_axis()) throw std::invalid_argument("field_from_kernel: too few samples");
  std::vector<cplx> coeffs(static_cast<std::size_t>(samples_per_period), cplx(0.0));
  for (std::size_t f = 0; f < lat.size(); ++f) {
    coeffs[static_cast<std::size_t>(fft::bin_of(lat.index(f).x, samples_per_period))] +=
        v.coefficients()[static_cast<Eigen::Index>(f)];
  }
  return {{samples_per_period, 1}, fft::transform(coeffs, {samples_per_period, 1}, fft::Direction::Backward)};
}

PixelImage far_field(const FieldGrid& field, int pixels_per_mode, double period) {
  if (pixels_per_mode < 1) throw std::invalid_argument("far_field: pixels per mode must be >= 1");
  const int nx = field.shape.rows;
  const int ny = field.shape.cols;
  if (field.values.size() != field.shape.size()) throw std::invalid_argument("far_field: field size mismatch");
  const int tx = pixels_per_mode;
  const int ty = ny > 1 ? pixels_per_mode : 1;
  const int lx = nx * tx;
  const int ly = ny * ty;

  std::vector<cplx> tiled(static_cast<std::size_t>(lx) * ly);
  for (int ix = 0; ix < lx; ++ix) {
    for (int iy = 0; iy < ly; ++iy) {
      tiled[static_cast<std::size_t>(ix) * ly + iy] = field.values[static_cast<std::size_t>(ix % nx) * ny + iy % ny];
    }
  }
  const std::vector<cplx> spec = fft::transform(tiled, {lx, ly}, fft::Direction::Forward);
  const double total = static_cast<double>(lx) * ly;
  const double norm = 1.0 / (total * total);
  const int cx = lx / 2;
  const int cy = ly / 2;
  std::vector<double> img(spec.size());
  for (int ix = 0; ix < lx; ++ix) {
    const int kx = fft::bin_of(ix - cx, lx);
    for (int iy = 0; iy < ly; ++iy) {
      const int ky = fft::bin_of(iy - cy, ly);
      img[static_cast<std::size_t>(ix) * ly + iy] = std::norm(spec[static_cast<std::size_t>(kx) * ly + ky]) * norm;
    }
  }
  return {lx, ly, std::move(img), pixels_per_mode, period};
}

PixelImage far_field(const PhaseMask& mask, int pixels_per_mode) {
  const std::vector<double> phi = mask.total_phase();
  FieldGrid f{mask.shape(), std::vector<cplx>(phi.size())};
  for (std::size_t i = 0; i < phi.size(); ++i) f.values[i] = std::polar(1.0, phi[i]);
  return far_field(f, pixels_per_mode, mask.lattice().period());
}

PixelImage far_field(const Hologram& holo, int pixels_per_mode) {
  return far_field(holo.field(), pixels_per_mode, holo.period);
}

BinnedDistribution bin_to_modes(const PixelImage& img, const CameraSpec& cam) {
  const int ppm = img.pixels_per_mode();
  if (cam.pixels_per_mode != ppm) {
    throw std::invalid_argument("bin_to_modes: camera expects " + std::to_string(cam.pixels_per_mode) +
                                " pixels per mode, image has " + std::to_string(ppm));
  }
  if (cam.window < 1) throw std::invalid_argument("bin_to_modes: window must be >= 1");
  const int lo = -(ppm / 2);
  const int hi = ppm - 1 - ppm / 2;
  const int w = cam.window;
  const int cx = img.nx() / 2;
  const int cy = img.ny() / 2;
  auto fits = [&](int c, int n) { return c - w * ppm + lo >= 0 && c + w * ppm + hi < n; };
  if (!fits(cx, img.nx()) || (img.dims() == 2 && !fits(cy, img.ny()))) {
    throw std::invalid_argument("bin_to_modes: window |m| <= " + std::to_string(w) + " exceeds the image");
  }

  const LatticeSpec window(img.dims(), 2 * w + 1, img.period());
  std::vector<double> weights(window.size(), 0.0);
  for (std::size_t f = 0; f < window.size(); ++f) {
    const MomentumIndex m = window.index(f);
    double s = 0.0;
    for (int ox = lo; ox <= hi; ++ox) {
      const int ix = cx + m.x * ppm + ox;
      if (img.dims() == 1) {
        s += img.at(ix, 0);
        continue;
      }
      for (int oy = lo; oy <= hi; ++oy) s += img.at(ix, cy + m.y * ppm + oy);
    }
    weights[f] = s;
  }
  double inside = 0.0;
  for (double v : weights) inside += v;
  const double total = img.total();
  const double leakage = total > 0.0 ? std::max(0.0, 1.0 - inside / total) : 0.0;
  return {Distribution::from_weights(window, std::move(weights)), leakage};
}

PixelImage decimate_to_period(const PixelImage& img) {
  const int ppm = img.pixels_per_mode();
  if (img.nx() % ppm != 0 || (img.dims() == 2 && img.ny() % ppm != 0)) {
    throw std::invalid_argument("decimate_to_period: image extent is not a multiple of pixels per mode");
  }
  const int sx = img.nx() / ppm;
  const int sy = img.dims() == 2 ? img.ny() / ppm : 1;
  const int step_y = img.dims() == 2 ? ppm : 1;
  std::vector<double> out(static_cast<std::size_t>(sx) * sy);
  for (int jx = 0; jx < sx; ++jx) {
    const int ix = img.nx() / 2 + (jx - sx / 2) * ppm;
    for (int jy = 0; jy < sy; ++jy) {
      const int iy = img.ny() / 2 + (jy - sy / 2) * step_y;
      out[static_cast<std::size_t>(jx) * sy + jy] = img.at(ix, iy);
    }
  }
  return {sx, sy, std::move(out), 1, img.period()};
}

Distribution add_zeroth_order(const Distribution& p, double eps) {
  if (!(eps >= 0.0)) throw std::invalid_argument("zeroth-order leakage must be >= 0");
  std::vector<double> w = p.probabilities();
  w[p.lattice().flat({0, 0})] += eps;
  return Distribution::from_weights(p.lattice(), std::move(w));
}

PoissonSample sample_poisson(const Distribution& p, std::int64_t counts_total, std::uint64_t seed) {
  if (counts_total < 0) throw std::invalid_argument("sample_poisson: negative count budget");
  PoissonSample out;
  out.counts.assign(p.probabilities().size(), 0);
  if (counts_total == 0) return out;

  std::mt19937_64 rng(seed);
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < out.counts.size(); ++i) {
    const double mean = static_cast<double>(counts_total) * p.probabilities()[i];
    if (mean <= 0.0) continue;
    std::poisson_distribution<std::int64_t> draw(mean);
    out.counts[i] = draw(rng);
    sum += out.counts[i];
  }
  if (sum > 0) {
    std::vector<double> freq(out.counts.size());
    for (std::size_t i = 0; i < freq.size(); ++i) freq[i] = static_cast<double>(out.counts[i]) / static_cast<double>(sum);
    out.empirical = Distribution::from_weights(p.lattice(), std::move(freq));
  }
  return out;
}

std::vector<double> poisson_errors(const std::vector<std::int64_t>& counts) {
  std::int64_t sum = 0;
  for (auto c : counts) sum += c;
  std::vector<double> err(counts.size(), 0.0);
  if (sum == 0) return err;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    err[i] = std::sqrt(static_cast<double>(counts[i])) / static_cast<double>(sum);
  }
  return err;
}

double similarity(const Distribution& p_exp, const Distribution& p_th) {
  if (!(p_exp.lattice() == p_th.lattice())) throw std::invalid_argument("similarity: window mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p_exp.probabilities().size(); ++i) {
    s += std::sqrt(p_exp.probabilities()[i] * p_th.probabilities()[i]);
  }
  return std::clamp(s * s, 0.0, 1.0);
}

}  // namespace nlt
