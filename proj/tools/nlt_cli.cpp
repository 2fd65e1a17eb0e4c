// nlt: command-line front end.
//
//   nlt transfer  <scenario>      transfer stage only
//   nlt simulate  <scenario>      full pipeline
//   nlt retrieve  <far-grid>      GS retrieval from a camera image
//   nlt suite     <dir>           every scenario in a directory
//   nlt emit-plots <report.json>  plot-ready CSV files
//
// Exit codes: 0 ok, 2 parse error, 3 physics or argument error, 4 I/O,
// 5 suite with failing scenarios.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "nlt/errors.hpp"
#include "nlt/grid_io.hpp"
#include "nlt/mask_io.hpp"
#include "nlt/retrieval.hpp"
#include "nlt/runner.hpp"
#include "nlt/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitPhysics = 3;
constexpr int kExitIo = 4;
constexpr int kExitSuite = 5;

struct Globals {
  std::string out;
  std::optional<std::uint64_t> seed_override;
  double tolerance = 1e-10;
};

nlt::RunOptions run_options(const Globals& g, bool full) {
  nlt::RunOptions o;
  o.out_root = g.out;
  o.fidelity_tolerance = g.tolerance;
  o.full_pipeline = full;
  return o;
}

void print_report(const nlt::RunReport& r) {
  std::cout << "scenario             " << r.scenario << "\n"
            << "fidelity             " << nlt::format_double(r.fidelity) << "\n"
            << "success probability  " << nlt::format_double(r.success_probability) << " (expected "
            << nlt::format_double(r.expected_success_probability) << ")\n";
  if (r.kernel_leakage) std::cout << "kernel leakage       " << nlt::format_double(*r.kernel_leakage) << "\n";
  if (r.route_tv) std::cout << "route TV             " << nlt::format_double(*r.route_tv) << "\n";
  if (r.similarity_noiseless) std::cout << "similarity           " << nlt::format_double(*r.similarity_noiseless) << "\n";
  if (r.similarity_noisy) std::cout << "similarity (noisy)   " << nlt::format_double(*r.similarity_noisy) << "\n";
  if (r.retrieval) {
    std::cout << "GS best run          " << r.retrieval->best_run_index << " error "
              << nlt::format_double(r.retrieval->final_error) << "\n"
              << "GS aligned RMS       " << nlt::format_double(r.retrieval->aligned_rms) << " rad"
              << (r.retrieval->twin ? " (twin)" : "") << "\n";
  }
}

int run_one(const std::string& path, const Globals& g, bool full) {
  nlt::Scenario sc = nlt::load_scenario(path);
  if (g.seed_override) nlt::apply_seed_override(sc, *g.seed_override);
  const nlt::RunReport r = nlt::run_scenario(sc, run_options(g, full));
  print_report(r);
  std::cout << "output               " << (std::filesystem::path(g.out) / sc.output_dir).string() << "\n";
  return kExitOk;
}

struct RetrieveArgs {
  std::string far;
  std::string near;
  std::string reference;
  int pixels_per_mode = 1;
  double period = 1.0;
  int runs = 200;
  int iters = 200;
  std::uint64_t seed = 0;
  std::optional<double> stop_tolerance;
  std::string selection = "l1";
  int threads = 0;
};

int run_retrieve(const RetrieveArgs& a, const Globals& g) {
  const nlt::RealGrid far_grid = nlt::load_grid(a.far);
  const nlt::PixelImage camera = nlt::image_from_grid(far_grid, a.pixels_per_mode, a.period);
  const nlt::PixelImage far = a.pixels_per_mode > 1 ? nlt::decimate_to_period(camera) : camera;
  const nlt::RealGrid near = a.near.empty() ? nlt::uniform_amplitude({far.nx(), far.ny()}) : nlt::load_grid(a.near);

  nlt::GsConfig cfg;
  cfg.n_runs = a.runs;
  cfg.n_iters = a.iters;
  cfg.seed = g.seed_override.value_or(a.seed);
  cfg.stop_tolerance = a.stop_tolerance;
  cfg.selection_norm = a.selection == "l2" ? nlt::DistanceNorm::L2 : nlt::DistanceNorm::L1;
  cfg.threads = a.threads;

  const auto t0 = std::chrono::steady_clock::now();
  const nlt::GsResult res = nlt::gs_retrieve(near, far, cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::vector<double> phase = res.phase;
  nlohmann::ordered_json doc;
  doc["runs"] = cfg.n_runs;
  doc["iterations"] = cfg.n_iters;
  doc["seed"] = cfg.seed;
  doc["best_run_index"] = res.best_run_index;
  doc["final_error"] = res.final_error;
  doc["final_errors"] = res.final_errors;
  doc["wall_time_s"] = wall;
  if (!a.reference.empty()) {
    const nlt::RealGrid ref = nlt::load_grid(a.reference);
    if (!(ref.shape == res.shape)) throw std::invalid_argument("retrieve: reference grid size differs from the far grid");
    nlt::AlignOptions opts;
    opts.weights = near.values;
    const nlt::PhaseAlignment al = nlt::align_phase(res.shape, res.phase, ref.values, opts);
    phase = al.aligned;
    doc["aligned_rms"] = al.rms;
    doc["twin"] = al.twin;
  }

  const std::filesystem::path out(g.out);
  nlt::write_file_atomic(out / "phase.csv", nlt::real_grid_csv(res.shape, phase));
  nlt::write_file_atomic(out / "retrieval_report.json", doc.dump(2) + "\n");
  std::cout << "best run " << res.best_run_index << " of " << cfg.n_runs << ", error "
            << nlt::format_double(res.final_error) << ", " << wall << " s\n";
  if (doc.contains("aligned_rms")) std::cout << "aligned RMS " << doc["aligned_rms"].get<double>() << " rad\n";
  std::cout << "output " << out.string() << "\n";
  return kExitOk;
}

int run_suite_verb(const std::string& dir, const Globals& g) {
  const nlt::SuiteResult res = nlt::run_suite(dir, run_options(g, true), g.seed_override);
  std::cout << nlt::suite_table_text(res);
  nlt::write_file_atomic(std::filesystem::path(g.out) / "suite.csv", nlt::suite_table_csv(res));
  return res.failures() > 0 ? kExitSuite : kExitOk;
}

int run_emit(const std::string& report_path, const Globals& g, bool out_given) {
  const nlt::RunReport r = nlt::parse_report_json(nlt::read_file(report_path), report_path);
  const std::filesystem::path dir = out_given ? std::filesystem::path(g.out)
                                              : std::filesystem::path(report_path).parent_path();
  for (const auto& p : nlt::emit_plot_data(r, dir)) std::cout << p.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal transfer of lattice unitaries: simulation and phase retrieval"};
  app.require_subcommand(1);

  Globals g;
  const char* env_out = std::getenv("NLT_OUT_DIR");
  g.out = env_out && *env_out ? env_out : "nlt_out";
  auto* out_opt = app.add_option("--out", g.out, "Output directory (default $NLT_OUT_DIR or ./nlt_out)");
  app.add_option("--seed-override", g.seed_override, "Replace every seed declared by the scenario");
  app.add_option("--tolerance", g.tolerance, "Transfer fidelity tolerance")->check(CLI::PositiveNumber);

  std::string scenario_path;
  auto* transfer = app.add_subcommand("transfer", "Run the transfer stage of a scenario");
  transfer->add_option("scenario", scenario_path, "Scenario file")->required();
  auto* simulate = app.add_subcommand("simulate", "Run a scenario end to end");
  simulate->add_option("scenario", scenario_path, "Scenario file")->required();

  RetrieveArgs ra;
  auto* retrieve = app.add_subcommand("retrieve", "Gerchberg-Saxton retrieval from a far-field grid");
  retrieve->add_option("far", ra.far, "Far-field intensity grid (.csv or .bin)")->required();
  retrieve->add_option("--near", ra.near, "Near-field amplitude grid (default uniform)");
  retrieve->add_option("--reference", ra.reference, "Reference phase grid for alignment");
  retrieve->add_option("--pixels-per-mode", ra.pixels_per_mode, "Camera pixels per mode")->check(CLI::PositiveNumber);
  retrieve->add_option("--period", ra.period, "Mask period")->check(CLI::PositiveNumber);
  retrieve->add_option("--runs", ra.runs, "Restarts")->check(CLI::PositiveNumber);
  retrieve->add_option("--iters", ra.iters, "Iterations per restart")->check(CLI::PositiveNumber);
  retrieve->add_option("--seed", ra.seed, "Seed for initial phases");
  retrieve->add_option("--stop-tolerance", ra.stop_tolerance, "Early-stop threshold over 10 iterations");
  retrieve->add_option("--selection", ra.selection, "Best-run distance")->check(CLI::IsMember({"l1", "l2"}));
  retrieve->add_option("--threads", ra.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  std::string suite_dir;
  auto* suite = app.add_subcommand("suite", "Run every scenario in a directory");
  suite->add_option("dir", suite_dir, "Scenario directory")->required();

  std::string report_path;
  auto* emit = app.add_subcommand("emit-plots", "Write plot data from a run report");
  emit->add_option("report", report_path, "report.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (transfer->parsed()) return run_one(scenario_path, g, false);
    if (simulate->parsed()) return run_one(scenario_path, g, true);
    if (retrieve->parsed()) return run_retrieve(ra, g);
    if (suite->parsed()) return run_suite_verb(suite_dir, g);
    if (emit->parsed()) return run_emit(report_path, g, out_opt->count() > 0);
  } catch (const nlt::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const nlt::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const nlt::PhysicsError& e) {
    std::cerr << "physics error: " << e.what() << "\n";
    return kExitPhysics;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPhysics;
  }
  return kExitOk;
}
