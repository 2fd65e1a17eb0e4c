#pragma once

// Scenario documents: a line-oriented `key = value` format with [sections],
// or the same structure as a JSON object.
//
//   name = phi2_1d
//
//   [lattice]
//   dims = 1
//   modes = 31
//   period = 0.14285714285714285
//
//   [mask]                       or   [unitary]
//   samples = 256                     seed = 17
//   term = sin 1.9 1 x
//
//   [input]
//   k0 = 0
//   coefficient = 0 1 0          m re im   (2D: mx my re im)
//
//   [optics]
//   encoding = phase_only        phase_only | bolduc
//   blaze_ratio = 50
//   samples_per_carrier = 16
//   zeroth_order = 0
//
//   [camera]
//   pixels_per_mode = 5
//   window = 9
//   counts_total = 10000
//
//   [noise]
//   seed = 7                     omit the section to skip sampling
//
//   [retrieval]
//   enabled = true
//   runs = 200
//   iterations = 200
//   seed = 11
//   stop_tolerance = 1e-9        optional
//   selection = l1               l1 | l2
//   trace = l2
//   threads = 0
//
//   [output]
//   directory = phi2_1d
//   indexing = physical          physical | partner

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlt/lattice.hpp"
#include "nlt/optics.hpp"
#include "nlt/retrieval.hpp"
#include "nlt/transfer.hpp"
#include "nlt/unitary.hpp"

namespace nlt {

struct InputCoefficient {
  MomentumIndex mode;
  cplx value;

  friend bool operator==(const InputCoefficient&, const InputCoefficient&) = default;
};

struct RetrievalSettings {
  bool enabled = false;
  int runs = 200;
  int iterations = 200;
  std::uint64_t seed = 0;
  std::optional<double> stop_tolerance;
  DistanceNorm selection = DistanceNorm::L1;
  DistanceNorm trace = DistanceNorm::L2;
  int threads = 0;

  GsConfig config() const;
  friend bool operator==(const RetrievalSettings&, const RetrievalSettings&) = default;
};

struct Scenario {
  std::string name;
  int dims = 1;
  int modes = 31;
  double period = 1.0;

  /// Exactly one of `mask` and `unitary_seed` is set.
  std::optional<MaskDefinition> mask;
  int samples_per_period = 256;
  std::optional<std::uint64_t> unitary_seed;

  MomentumIndex k0;
  /// Input amplitudes d_l; empty means the localized input |k0>.
  std::vector<InputCoefficient> input;

  EncodeMode encoding = EncodeMode::PhaseOnly;
  int blaze_ratio = 50;
  int samples_per_carrier = 16;
  double zeroth_order = 0.0;

  int pixels_per_mode = 5;
  int window = 9;
  std::int64_t counts_total = 10000;
  std::optional<std::uint64_t> noise_seed;

  RetrievalSettings retrieval;

  std::string output_dir;
  IdlerIndexing indexing = IdlerIndexing::Physical;

  LatticeSpec lattice() const { return {dims, modes, period}; }
  CameraSpec camera() const { return {pixels_per_mode, window, counts_total}; }
  /// Normalized input state (|k0> when no coefficients are given).
  StateVector input_state() const;
  bool localized_input() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Parses and validates. Throws ParseError carrying the offending line (0
/// for JSON input and whole-document checks).
Scenario parse_scenario(std::string_view text, const std::string& source);
Scenario parse_scenario_json(std::string_view text, const std::string& source);
/// Picks the decoder from the extension (`.json` or anything else).
Scenario load_scenario(const std::filesystem::path& path);

std::string serialize_scenario(const Scenario& s);
std::string serialize_scenario_json(const Scenario& s);

}  // namespace nlt
