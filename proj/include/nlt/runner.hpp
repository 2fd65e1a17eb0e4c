#pragma once

// End-to-end scenario execution: transfer, optics, shot noise, similarity
// and phase retrieval, plus the files each run leaves behind.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nlt/scenario.hpp"

namespace nlt {

struct RunOptions {
  /// Root for per-scenario output directories.
  std::filesystem::path out_root = "nlt_out";
  /// Fidelity must reach 1 - tolerance or the run fails with PhysicsError.
  double fidelity_tolerance = 1e-10;
  /// false stops after the transfer stage (the `transfer` verb).
  bool full_pipeline = true;
  bool write_files = true;
};

struct RetrievalSummary {
  int runs = 0;
  int iterations = 0;
  int best_run_index = 0;
  double final_error = 0.0;
  std::vector<double> final_errors;
  double aligned_rms = 0.0;
  bool twin = false;
  /// Largest step-to-step increase over every recorded trace.
  double trace_max_increase = 0.0;
  /// sum |I_retrieved - I_measured| / sum I_measured on the period grid.
  double intensity_error = 0.0;
  double wall_time_s = 0.0;
  int grid_x = 0;
  int grid_y = 0;
  std::vector<double> retrieved_phase;
  std::vector<double> reference_phase;
};

struct RunReport {
  std::string scenario;
  int dims = 1;
  int modes = 0;
  int window = 0;
  std::string indexing = "physical";

  double fidelity = 0.0;
  double success_probability = 0.0;
  double expected_success_probability = 0.0;

  /// Mask scenarios only.
  std::optional<double> kernel_leakage;
  /// |sum_lattice |u_m|^2 + leakage - 1|.
  std::optional<double> parseval_defect;
  /// Total variation between the dense and kernel routes.
  std::optional<double> route_tv;

  /// Window distributions in window-lattice flat order.
  std::vector<double> p_theory;
  double theory_window_leakage = 0.0;
  std::optional<std::vector<double>> p_simulated;
  std::optional<double> optics_window_leakage;
  std::optional<double> optics_tv;
  std::optional<double> similarity_noiseless;

  std::optional<std::vector<std::int64_t>> counts;
  std::optional<std::vector<double>> p_sampled;
  std::optional<double> similarity_noisy;

  std::optional<RetrievalSummary> retrieval;
  std::map<std::string, double> timings_s;

  LatticeSpec window_lattice() const { return {dims, 2 * window + 1}; }
};

/// Runs one scenario and, if requested, writes into out_root/output_dir:
/// distributions.csv, far_field.csv (mask scenarios), phase.csv (when
/// retrieval ran) and report.json. Throws ParseError, PhysicsError, IoError
/// or std::invalid_argument.
RunReport run_scenario(const Scenario& scenario, const RunOptions& options = {});
RunReport run_scenario_file(const std::filesystem::path& path, const RunOptions& options = {});

/// Replaces every declared seed (unitary, noise, retrieval) with `seed`.
void apply_seed_override(Scenario& scenario, std::uint64_t seed);

std::string report_json(const RunReport& report);
/// Throws ParseError on malformed or incomplete reports.
RunReport parse_report_json(std::string_view text, const std::string& source);

struct SuiteRow {
  std::string file;
  std::string scenario;
  bool ok = false;
  double fidelity = 0.0;
  std::optional<double> similarity_noiseless;
  std::optional<double> similarity_noisy;
  double success_probability = 0.0;
  std::string error;
};

struct SuiteResult {
  std::vector<SuiteRow> rows;
  int failures() const;
};

/// Runs every *.scenario and *.json file of `dir` in name order. Failures
/// become error rows.
SuiteResult run_suite(const std::filesystem::path& dir, const RunOptions& options = {},
                      std::optional<std::uint64_t> seed_override = {});
std::string suite_table_text(const SuiteResult& result);
std::string suite_table_csv(const SuiteResult& result);

/// Per-mode CSV: m (or m_x,m_y), P_theory, [P_sampled, count, poisson_error].
std::string plot_modes_csv(const RunReport& report);
/// Writes modes.csv and, when retrieval ran, phase_retrieved.csv and
/// phase_reference.csv. Returns the written paths.
std::vector<std::filesystem::path> emit_plot_data(const RunReport& report, const std::filesystem::path& dir);

}  // namespace nlt
