#include "nlt/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>

namespace nlt {
namespace {

double wrap_angle(double a) { return std::remainder(a, kTwoPi); }

struct RunOutcome {
  std::vector<double> trace;
  std::vector<cplx> field;
  double selection_error = 0.0;
};

class GsWorker {
 public:
  GsWorker(const fft::Plan& fwd, const fft::Plan& bwd, std::span<const double> near_amp,
           std::span<const double> far_amp, const GsConfig& cfg)
      : fwd_(fwd), bwd_(bwd), near_(near_amp), far_(far_amp), cfg_(cfg),
        g_(near_amp.size()), spec_(near_amp.size()) {}

  RunOutcome run(int index) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg_.seed), static_cast<std::uint32_t>(cfg_.seed >> 32),
                      static_cast<std::uint32_t>(index)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    for (std::size_t i = 0; i < g_.size(); ++i) g_[i] = std::polar(near_[i], angle(rng));

    const double inv_n = 1.0 / static_cast<double>(g_.size());
    RunOutcome out;
    out.trace.reserve(static_cast<std::size_t>(cfg_.n_iters));
    for (int it = 0; it < cfg_.n_iters; ++it) {
      fwd_.execute(g_, spec_);
      for (std::size_t k = 0; k < spec_.size(); ++k) {
        const double mag = std::sqrt(std::norm(spec_[k]));
        spec_[k] = mag > 0.0 ? spec_[k] * (far_[k] / mag) : cplx(far_[k], 0.0);
      }
      bwd_.execute(spec_, g_);
      for (cplx& v : g_) v *= inv_n;
      out.trace.push_back(error_metric(g_, near_, cfg_.trace_norm));

      if (it + 1 == cfg_.n_iters) break;
      if (cfg_.stop_tolerance && out.trace.size() > 10) {
        const std::size_t n = out.trace.size();
        if (out.trace[n - 11] - out.trace[n - 1] < *cfg_.stop_tolerance) break;
      }
      for (std::size_t i = 0; i < g_.size(); ++i) {
        const double mag = std::sqrt(std::norm(g_[i]));
        g_[i] = mag > 0.0 ? g_[i] * (near_[i] / mag) : cplx(near_[i], 0.0);
      }
    }
    out.selection_error = error_metric(g_, near_, cfg_.selection_norm);
    out.field = g_;
    return out;
  }

 private:
  const fft::Plan& fwd_;
  const fft::Plan& bwd_;
  std::span<const double> near_;
  std::span<const double> far_;
  const GsConfig& cfg_;
  std::vector<cplx> g_;
  std::vector<cplx> spec_;
};

// Correlation of a candidate field with the weighted reference at a
// continuous circular shift (tx, ty), using band-limited interpolation.
class ShiftCorrelator {
 public:
  ShiftCorrelator(fft::Shape shape, std::vector<cplx> cand_spec, std::vector<cplx> ref_spec)
      : shape_(shape), c_(std::move(cand_spec)), h_(std::move(ref_spec)) {
    prod_.resize(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) prod_[i] = c_[i] * std::conj(h_[i]);
  }

  int signed_freq(int k, int n) const { return k <= n / 2 ? k : k - n; }

  cplx at(double tx, double ty) const {
    const int nx = shape_.rows;
    const int ny = shape_.cols;
    cplx sum = 0.0;
    for (int kx = 0; kx < nx; ++kx) {
      const double px = kTwoPi * signed_freq(kx, nx) * tx / nx;
      for (int ky = 0; ky < ny; ++ky) {
        const double py = ny > 1 ? kTwoPi * signed_freq(ky, ny) * ty / ny : 0.0;
        sum += prod_[static_cast<std::size_t>(kx) * ny + ky] * std::polar(1.0, px + py);
      }
    }
    return sum / static_cast<double>(c_.size());
  }

  std::vector<cplx> shifted_field(double tx, double ty) const {
    const int nx = shape_.rows;
    const int ny = shape_.cols;
    std::vector<cplx> s(c_.size());
    for (int kx = 0; kx < nx; ++kx) {
      const double px = kTwoPi * signed_freq(kx, nx) * tx / nx;
      for (int ky = 0; ky < ny; ++ky) {
        const double py = ny > 1 ? kTwoPi * signed_freq(ky, ny) * ty / ny : 0.0;
        const std::size_t i = static_cast<std::size_t>(kx) * ny + ky;
        s[i] = c_[i] * std::polar(1.0, px + py);
      }
    }
    std::vector<cplx> f = fft::transform(s, shape_, fft::Direction::Backward);
    for (cplx& v : f) v /= static_cast<double>(f.size());
    return f;
  }

 private:
  fft::Shape shape_;
  std::vector<cplx> c_;
  std::vector<cplx> h_;
  std::vector<cplx> prod_;
};

double golden_max(const std::function<double(double)>& f, double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 60 && b - a > 1e-10; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

struct Candidate {
  std::vector<double> aligned;
  double rms = 0.0;
  double offset = 0.0;
  double tx = 0.0;
  double ty = 0.0;
};

Candidate finish(const std::vector<cplx>& field, cplx corr, const std::vector<double>& reference,
                 const std::vector<double>& w, double wsum, double tx, double ty) {
  Candidate c;
  c.offset = std::arg(corr);
  c.tx = tx;
  c.ty = ty;
  c.aligned.resize(field.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    c.aligned[i] = wrap_angle(std::arg(field[i]) - c.offset);
    const double d = wrap_angle(c.aligned[i] - reference[i]);
    acc += w[i] * d * d;
  }
  c.rms = std::sqrt(acc / wsum);
  return c;
}

Candidate align_candidate(fft::Shape shape, const std::vector<double>& cand, const std::vector<double>& reference,
                          const std::vector<double>& w, double wsum, bool translations) {
  const std::size_t n = cand.size();
  std::vector<cplx> cf(n), rf(n);
  for (std::size_t i = 0; i < n; ++i) {
    cf[i] = std::polar(1.0, cand[i]);
    rf[i] = std::polar(w[i], reference[i]);
  }
  if (!translations) {
    cplx corr = 0.0;
    for (std::size_t i = 0; i < n; ++i) corr += cf[i] * std::conj(rf[i]);
    return finish(cf, corr, reference, w, wsum, 0.0, 0.0);
  }

  std::vector<cplx> cs = fft::transform(cf, shape, fft::Direction::Forward);
  std::vector<cplx> hs = fft::transform(rf, shape, fft::Direction::Forward);
  // Integer shifts in one pass: corr(t) = IDFT(C conj(H)) / n.
  std::vector<cplx> prod(n);
  for (std::size_t i = 0; i < n; ++i) prod[i] = cs[i] * std::conj(hs[i]);
  ShiftCorrelator corr(shape, std::move(cs), std::move(hs));
  const std::vector<cplx> lag = fft::transform(prod, shape, fft::Direction::Backward);
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(lag[i]) > std::abs(lag[best])) best = i;
  }
  const int nx = shape.rows;
  const int ny = shape.cols;
  auto signed_shift = [](int k, int len) { return k <= len / 2 ? k : k - len; };
  const double ix = signed_shift(static_cast<int>(best) / ny, nx);
  const double iy = ny > 1 ? signed_shift(static_cast<int>(best) % ny, ny) : 0.0;

  Candidate integer = finish(corr.shifted_field(ix, iy), corr.at(ix, iy), reference, w, wsum, ix, iy);

  double tx = ix;
  double ty = iy;
  for (int round = 0; round < (ny > 1 ? 3 : 1); ++round) {
    tx = golden_max([&](double t) { return std::abs(corr.at(t, ty)); }, tx - 1.0, tx + 1.0);
    if (ny > 1) ty = golden_max([&](double t) { return std::abs(corr.at(tx, t)); }, ty - 1.0, ty + 1.0);
  }
  Candidate refined = finish(corr.shifted_field(tx, ty), corr.at(tx, ty), reference, w, wsum, tx, ty);
  return refined.rms < integer.rms ? refined : integer;
}

}  // namespace

double error_metric(std::span<const cplx> field, std::span<const double> near_amp, DistanceNorm norm) {
  if (field.size() != near_amp.size()) throw std::invalid_argument("error_metric: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double d = std::sqrt(std::norm(field[i])) - near_amp[i];
    acc += norm == DistanceNorm::L1 ? std::abs(d) : d * d;
  }
  return norm == DistanceNorm::L1 ? acc : std::sqrt(acc);
}

RealGrid uniform_amplitude(fft::Shape shape) { return {shape, std::vector<double>(shape.size(), 1.0)}; }

GsResult gs_retrieve(const RealGrid& near_amp, const PixelImage& far_intensity, const GsConfig& cfg) {
  if (cfg.n_runs < 1 || cfg.n_iters < 1) throw std::invalid_argument("gs_retrieve: runs and iterations must be >= 1");
  const fft::Shape shape = near_amp.shape;
  if (near_amp.values.size() != shape.size()) throw std::invalid_argument("gs_retrieve: near grid size mismatch");
  if (far_intensity.nx() != shape.rows || far_intensity.ny() != shape.cols) {
    throw std::invalid_argument("gs_retrieve: far-field image is " + std::to_string(far_intensity.nx()) + "x" +
                                std::to_string(far_intensity.ny()) + ", near grid is " + std::to_string(shape.rows) +
                                "x" + std::to_string(shape.cols));
  }
  double near_power = 0.0;
  for (double a : near_amp.values) {
    if (!std::isfinite(a) || a < 0.0) throw std::invalid_argument("gs_retrieve: invalid near-field amplitude");
    near_power += a * a;
  }
  const double far_power = far_intensity.total();
  if (!std::isfinite(far_power) || !(far_power > 0.0)) throw std::invalid_argument("gs_retrieve: empty far field");

  // Centred image -> FFT bin order, scaled so Parseval matches the near plane.
  const int nx = shape.rows;
  const int ny = shape.cols;
  const double n = static_cast<double>(shape.size());
  const double scale = std::sqrt(n * near_power / far_power);
  std::vector<double> far_amp(shape.size());
  for (int kx = 0; kx < nx; ++kx) {
    const int px = fft::bin_of(kx + nx / 2, nx);
    for (int ky = 0; ky < ny; ++ky) {
      const int py = fft::bin_of(ky + ny / 2, ny);
      far_amp[static_cast<std::size_t>(kx) * ny + ky] = scale * std::sqrt(far_intensity.at(px, py));
    }
  }

  const fft::Plan fwd(shape, fft::Direction::Forward);
  const fft::Plan bwd(shape, fft::Direction::Backward);

  std::vector<RunOutcome> runs(static_cast<std::size_t>(cfg.n_runs));
  int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, cfg.n_runs);
  auto work = [&](int tid) {
    GsWorker worker(fwd, bwd, near_amp.values, far_amp, cfg);
    for (int r = tid; r < cfg.n_runs; r += threads) runs[static_cast<std::size_t>(r)] = worker.run(r);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  GsResult res;
  res.shape = shape;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    res.final_errors.push_back(runs[r].selection_error);
    if (runs[r].selection_error < runs[static_cast<std::size_t>(res.best_run_index)].selection_error) {
      res.best_run_index = static_cast<int>(r);
    }
  }
  const RunOutcome& best = runs[static_cast<std::size_t>(res.best_run_index)];
  res.final_error = best.selection_error;
  res.phase.resize(best.field.size());
  for (std::size_t i = 0; i < best.field.size(); ++i) res.phase[i] = std::arg(best.field[i]);
  for (RunOutcome& r : runs) res.error_traces.push_back(std::move(r.trace));
  return res;
}

PhaseAlignment align_phase(fft::Shape shape, const std::vector<double>& retrieved, const std::vector<double>& reference,
                           const AlignOptions& options) {
  const std::size_t n = shape.size();
  if (retrieved.size() != n || reference.size() != n) throw std::invalid_argument("align_phase: grid size mismatch");
  std::vector<double> w = options.weights.empty() ? std::vector<double>(n, 1.0) : options.weights;
  if (w.size() != n) throw std::invalid_argument("align_phase: weight grid size mismatch");
  double wsum = 0.0;
  for (double v : w) wsum += v;
  if (!(wsum > 0.0)) throw std::invalid_argument("align_phase: weights sum to zero");

  // Twin: conjugate and reflect, phi(x) -> -phi(-x).
  const int nx = shape.rows;
  const int ny = shape.cols;
  std::vector<double> twin(n);
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) {
      const std::size_t src = static_cast<std::size_t>(fft::bin_of(-ix, nx)) * ny + fft::bin_of(-iy, ny);
      twin[static_cast<std::size_t>(ix) * ny + iy] = -retrieved[src];
    }
  }

  Candidate direct = align_candidate(shape, retrieved, reference, w, wsum, options.translations);
  Candidate mirrored = align_candidate(shape, twin, reference, w, wsum, options.translations);
  // Only call it a twin when it is clearly the better explanation.
  const bool use_twin = mirrored.rms < 0.5 * direct.rms;
  Candidate& pick = use_twin ? mirrored : direct;
  return {std::move(pick.aligned), pick.rms, use_twin, pick.offset, pick.tx, pick.ty};
}

}  // namespace nlt
