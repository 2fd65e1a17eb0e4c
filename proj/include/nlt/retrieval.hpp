#pragma once

// Two-plane Gerchberg-Saxton phase retrieval with random restarts.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nlt/fft.hpp"
#include "nlt/grid_io.hpp"
#include "nlt/lattice.hpp"
#include "nlt/optics.hpp"

namespace nlt {

enum class DistanceNorm { L1, L2 };

/// sum over pixels of | |field| - near_amp |  (L1), or the root of the summed
/// squares (L2).
double error_metric(std::span<const cplx> field, std::span<const double> near_amp, DistanceNorm norm = DistanceNorm::L1);

struct GsConfig {
  int n_runs = 200;
  int n_iters = 200;
  std::uint64_t seed = 0;
  /// Stop a run when the error improved by less than this over the last 10
  /// iterations. Disabled when empty.
  std::optional<double> stop_tolerance;
  /// Distance used to pick the best run.
  DistanceNorm selection_norm = DistanceNorm::L1;
  /// Distance recorded in the per-iteration traces.
  DistanceNorm trace_norm = DistanceNorm::L2;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  int threads = 0;
};

struct GsResult {
  fft::Shape shape;
  /// Retrieved phase of the best run, x-major like the near-field grid.
  std::vector<double> phase;
  /// One trace per run, in run order.
  std::vector<std::vector<double>> error_traces;
  /// Selection distance at the end of each run.
  std::vector<double> final_errors;
  int best_run_index = 0;
  double final_error = 0.0;

  const std::vector<double>& best_trace() const { return error_traces[static_cast<std::size_t>(best_run_index)]; }
};

/// `far_intensity` is a centred image of the same extent as the near grid
/// (see decimate_to_period for camera images). Its overall scale is
/// irrelevant; it is rescaled to match the near-field power. Throws
/// std::invalid_argument on size mismatch or non-finite input.
GsResult gs_retrieve(const RealGrid& near_amp, const PixelImage& far_intensity, const GsConfig& cfg);

/// Uniform near-field amplitude over the whole grid.
RealGrid uniform_amplitude(fft::Shape shape);

struct PhaseAlignment {
  std::vector<double> aligned;
  /// Weighted RMS of the wrapped phase difference after alignment.
  double rms = 0.0;
  /// The conjugate-reflected twin aligned clearly better than the direct
  /// candidate.
  bool twin = false;
  double offset = 0.0;
  double shift_x = 0.0;
  double shift_y = 0.0;
};

struct AlignOptions {
  /// Also search circular translations (continuous, via Fourier interpolation).
  bool translations = true;
  /// Weights (near-field amplitude); uniform when empty.
  std::vector<double> weights;
};

/// Removes the weighted circular-mean phase offset (and, optionally, the best
/// translation) from `retrieved`, for both the direct and the twin candidate.
PhaseAlignment align_phase(fft::Shape shape, const std::vector<double>& retrieved,
                           const std::vector<double>& reference, const AlignOptions& options = {});

}  // namespace nlt
