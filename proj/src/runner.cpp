#include "nlt/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "nlt/errors.hpp"
#include "nlt/grid_io.hpp"
#include "nlt/mask_io.hpp"
#include "nlt/optics.hpp"
#include "nlt/retrieval.hpp"
#include "nlt/transfer.hpp"

namespace nlt {
namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

inline constexpr double kLeakageBudget = 1e-6;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// m -> -m relabelling for the partner convention.
Distribution reindexed(const Distribution& p, IdlerIndexing indexing) {
  if (indexing == IdlerIndexing::Physical) return p;
  const LatticeSpec& lat = p.lattice();
  std::vector<double> q(p.probabilities().size());
  for (std::size_t f = 0; f < q.size(); ++f) q[lat.flat(negate_index(lat.index(f), lat))] = p.probabilities()[f];
  return {lat, std::move(q)};
}

double max_trace_increase(const std::vector<std::vector<double>>& traces) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& t : traces) {
    for (std::size_t i = 1; i < t.size(); ++i) worst = std::max(worst, t[i] - t[i - 1]);
  }
  return std::isfinite(worst) ? worst : 0.0;
}

double intensity_error(const PixelImage& measured, const std::vector<double>& phase, fft::Shape shape, double period) {
  FieldGrid f{shape, std::vector<cplx>(phase.size())};
  for (std::size_t i = 0; i < phase.size(); ++i) f.values[i] = std::polar(1.0, phase[i]);
  const PixelImage model = far_field(f, 1, period);
  const double scale = measured.total() / model.total();
  double diff = 0.0;
  for (std::size_t i = 0; i < model.data().size(); ++i) diff += std::abs(model.data()[i] * scale - measured.data()[i]);
  return diff / measured.total();
}

RetrievalSummary retrieve(const PhaseMask& mask, const PixelImage& camera, const RetrievalSettings& settings) {
  const auto t0 = Clock::now();
  const PixelImage period_image = decimate_to_period(camera);
  const GsResult gs = gs_retrieve(uniform_amplitude(mask.shape()), period_image, settings.config());
  RetrievalSummary r;
  r.wall_time_s = seconds_since(t0);
  r.runs = settings.runs;
  r.iterations = settings.iterations;
  r.best_run_index = gs.best_run_index;
  r.final_error = gs.final_error;
  r.final_errors = gs.final_errors;
  r.trace_max_increase = max_trace_increase(gs.error_traces);
  r.intensity_error = intensity_error(period_image, gs.phase, gs.shape, mask.lattice().period());
  r.reference_phase = mask.total_phase();
  const PhaseAlignment al = align_phase(gs.shape, gs.phase, r.reference_phase);
  r.aligned_rms = al.rms;
  r.twin = al.twin;
  r.retrieved_phase = al.aligned;
  r.grid_x = gs.shape.rows;
  r.grid_y = gs.shape.cols;
  return r;
}

void write_outputs(const RunReport& report, const std::filesystem::path& dir, const std::optional<PixelImage>& camera) {
  write_file_atomic(dir / "distributions.csv", plot_modes_csv(report));
  if (camera) {
    write_file_atomic(dir / "far_field.csv", real_grid_csv({camera->nx(), camera->ny()}, camera->data()));
  }
  if (report.retrieval) {
    const RetrievalSummary& r = *report.retrieval;
    write_file_atomic(dir / "phase.csv", real_grid_csv({r.grid_x, r.grid_y}, r.retrieved_phase));
  }
  write_file_atomic(dir / "report.json", report_json(report));
}

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  return doc.at(key).get<T>();
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

std::string percent(const std::optional<double>& v) { return v ? fixed(100.0 * *v, 2) : "-"; }

}  // namespace

void apply_seed_override(Scenario& scenario, std::uint64_t seed) {
  if (scenario.unitary_seed) scenario.unitary_seed = seed;
  if (scenario.noise_seed) scenario.noise_seed = seed;
  scenario.retrieval.seed = seed;
}

RunReport run_scenario(const Scenario& sc, const RunOptions& options) {
  const auto t_start = Clock::now();
  const LatticeSpec lat = sc.lattice();
  const StateVector phi0 = sc.input_state();

  RunReport rep;
  rep.scenario = sc.name;
  rep.dims = sc.dims;
  rep.modes = sc.modes;
  rep.window = sc.window;
  rep.indexing = sc.indexing == IdlerIndexing::Partner ? "partner" : "physical";

  // Transfer.
  auto t0 = Clock::now();
  std::optional<PhaseMask> mask;
  std::optional<ConvolutionKernel> kernel;
  std::optional<UnitaryOperator> u;
  if (sc.mask) {
    mask = PhaseMask::sample(*sc.mask, lat, sc.samples_per_period);
    kernel = kernel_from_phase(*mask);
    rep.kernel_leakage = kernel->leakage();
    rep.parseval_defect = std::abs(kernel->squared_norm() + kernel->leakage() - 1.0);
    if (kernel->leakage() >= kLeakageBudget) {
      throw PhysicsError(sc.name + ": kernel leakage " + format_double(kernel->leakage()) +
                         " outside " + lat.describe() + " exceeds 1e-6; enlarge the lattice");
    }
    u = dense_from_kernel(*kernel);
  } else {
    u = random_unitary(lat, *sc.unitary_seed);
  }
  const TransferResult tr = transfer_general(*u, phi0);
  rep.fidelity = std::clamp(tr.fidelity_vs_direct, 0.0, 1.0);
  rep.success_probability = tr.success_probability;
  rep.expected_success_probability = 1.0 / static_cast<double>(lat.size());
  if (rep.fidelity < 1.0 - options.fidelity_tolerance) {
    throw PhysicsError(sc.name + ": transfer fidelity " + format_double(rep.fidelity) + " below 1 - " +
                       format_double(options.fidelity_tolerance));
  }
  const Distribution dense = distribution_of(tr.idler_state);
  if (kernel) {
    const KernelRoute route = transfer_kernel_route(*kernel, phi0);
    rep.route_tv = total_variation(dense, distribution_of(StateVector(lat, route.v_normalized.coefficients())));
  }
  const WindowedDistribution theory = restrict_to_window(dense, sc.window);
  const Distribution p_theory = reindexed(theory.distribution, sc.indexing);
  rep.p_theory = p_theory.probabilities();
  rep.theory_window_leakage = theory.leakage;
  rep.timings_s["transfer"] = seconds_since(t0);

  std::optional<PixelImage> camera;
  if (options.full_pipeline) {
    // Optics.
    std::optional<Distribution> p_sim;
    if (mask) {
      t0 = Clock::now();
      if (sc.encoding == EncodeMode::PhaseOnly) {
        const MomentumIndex k0 = phi0.lattice().index(static_cast<std::size_t>(
            std::max_element(phi0.amplitudes().begin(), phi0.amplitudes().end(),
                             [](cplx a, cplx b) { return std::norm(a) < std::norm(b); }) -
            phi0.amplitudes().begin()));
        const MomentumIndex shift{mask->linear_shift().x + k0.x, mask->linear_shift().y + k0.y};
        mask = PhaseMask(lat, mask->samples_per_period(), mask->phase(), shift);
        camera = far_field(*mask, sc.pixels_per_mode);
      } else {
        const KernelRoute route = transfer_kernel_route(*kernel, phi0);
        const FieldGrid target = field_from_kernel(route.v_normalized, sc.samples_per_period);
        double peak = 0.0;
        for (const cplx& v : target.values) peak = std::max(peak, std::abs(v));
        std::vector<double> amp(target.values.size());
        std::vector<double> phase(target.values.size());
        for (std::size_t i = 0; i < amp.size(); ++i) {
          amp[i] = std::min(1.0, std::abs(target.values[i]) / peak);
          phase[i] = std::arg(target.values[i]);
        }
        HologramSpec hs{PhaseMask(lat, sc.samples_per_period, std::move(phase)), std::move(amp),
                        sc.period / sc.blaze_ratio, EncodeMode::Bolduc, sc.samples_per_carrier};
        const Hologram holo = synthesize_hologram(hs);
        camera = far_field(extract_first_order(holo), sc.pixels_per_mode, sc.period);
      }
      const BinnedDistribution binned = bin_to_modes(*camera, sc.camera());
      rep.optics_window_leakage = binned.leakage;
      Distribution sim = sc.zeroth_order > 0.0 ? add_zeroth_order(binned.distribution, sc.zeroth_order)
                                               : binned.distribution;
      p_sim = reindexed(sim, sc.indexing);
      rep.p_simulated = p_sim->probabilities();
      rep.optics_tv = total_variation(*p_sim, p_theory);
      rep.similarity_noiseless = similarity(*p_sim, p_theory);
      rep.timings_s["optics"] = seconds_since(t0);
    }

    // Shot noise; dense-unitary scenarios sample the theory directly.
    if (sc.noise_seed) {
      const PoissonSample ps = sample_poisson(p_sim ? *p_sim : p_theory, sc.counts_total, *sc.noise_seed);
      rep.counts = ps.counts;
      if (ps.empirical) {
        rep.p_sampled = ps.empirical->probabilities();
        rep.similarity_noisy = similarity(*ps.empirical, p_theory);
      }
    }

    if (sc.retrieval.enabled && mask && sc.encoding == EncodeMode::PhaseOnly) {
      rep.retrieval = retrieve(*mask, *camera, sc.retrieval);
      rep.timings_s["retrieval"] = rep.retrieval->wall_time_s;
    }
  }
  rep.timings_s["total"] = seconds_since(t_start);

  if (options.write_files) write_outputs(rep, options.out_root / sc.output_dir, camera);
  return rep;
}

RunReport run_scenario_file(const std::filesystem::path& path, const RunOptions& options) {
  return run_scenario(load_scenario(path), options);
}

std::string report_json(const RunReport& r) {
  Json doc;
  doc["scenario"] = r.scenario;
  doc["dims"] = r.dims;
  doc["modes"] = r.modes;
  doc["window"] = r.window;
  doc["indexing"] = r.indexing;
  doc["fidelity"] = r.fidelity;
  doc["success_probability"] = r.success_probability;
  doc["expected_success_probability"] = r.expected_success_probability;
  doc["kernel_leakage"] = optional_json(r.kernel_leakage);
  doc["parseval_defect"] = optional_json(r.parseval_defect);
  doc["route_tv"] = optional_json(r.route_tv);
  doc["p_theory"] = r.p_theory;
  doc["theory_window_leakage"] = r.theory_window_leakage;
  doc["p_simulated"] = optional_json(r.p_simulated);
  doc["optics_window_leakage"] = optional_json(r.optics_window_leakage);
  doc["optics_tv"] = optional_json(r.optics_tv);
  doc["similarity_noiseless"] = optional_json(r.similarity_noiseless);
  doc["counts"] = optional_json(r.counts);
  doc["p_sampled"] = optional_json(r.p_sampled);
  doc["similarity_noisy"] = optional_json(r.similarity_noisy);
  if (r.retrieval) {
    const RetrievalSummary& g = *r.retrieval;
    Json gs;
    gs["runs"] = g.runs;
    gs["iterations"] = g.iterations;
    gs["best_run_index"] = g.best_run_index;
    gs["final_error"] = g.final_error;
    gs["final_errors"] = g.final_errors;
    gs["aligned_rms"] = g.aligned_rms;
    gs["twin"] = g.twin;
    gs["trace_max_increase"] = g.trace_max_increase;
    gs["intensity_error"] = g.intensity_error;
    gs["wall_time_s"] = g.wall_time_s;
    gs["grid"] = {g.grid_x, g.grid_y};
    gs["retrieved_phase"] = g.retrieved_phase;
    gs["reference_phase"] = g.reference_phase;
    doc["retrieval"] = std::move(gs);
  } else {
    doc["retrieval"] = nullptr;
  }
  doc["timings_s"] = r.timings_s;
  return doc.dump(2) + "\n";
}

RunReport parse_report_json(std::string_view text, const std::string& source) {
  RunReport r;
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    r.scenario = doc.at("scenario").get<std::string>();
    r.dims = doc.at("dims").get<int>();
    r.modes = doc.at("modes").get<int>();
    r.window = doc.at("window").get<int>();
    r.indexing = doc.value("indexing", std::string("physical"));
    r.fidelity = doc.at("fidelity").get<double>();
    r.success_probability = doc.at("success_probability").get<double>();
    r.expected_success_probability = doc.value("expected_success_probability", 0.0);
    r.kernel_leakage = optional_from<double>(doc, "kernel_leakage");
    r.parseval_defect = optional_from<double>(doc, "parseval_defect");
    r.route_tv = optional_from<double>(doc, "route_tv");
    r.p_theory = doc.at("p_theory").get<std::vector<double>>();
    r.theory_window_leakage = doc.value("theory_window_leakage", 0.0);
    r.p_simulated = optional_from<std::vector<double>>(doc, "p_simulated");
    r.optics_window_leakage = optional_from<double>(doc, "optics_window_leakage");
    r.optics_tv = optional_from<double>(doc, "optics_tv");
    r.similarity_noiseless = optional_from<double>(doc, "similarity_noiseless");
    r.counts = optional_from<std::vector<std::int64_t>>(doc, "counts");
    r.p_sampled = optional_from<std::vector<double>>(doc, "p_sampled");
    r.similarity_noisy = optional_from<double>(doc, "similarity_noisy");
    if (doc.contains("retrieval") && !doc.at("retrieval").is_null()) {
      const auto& gs = doc.at("retrieval");
      RetrievalSummary g;
      g.runs = gs.at("runs").get<int>();
      g.iterations = gs.at("iterations").get<int>();
      g.best_run_index = gs.at("best_run_index").get<int>();
      g.final_error = gs.at("final_error").get<double>();
      g.final_errors = gs.at("final_errors").get<std::vector<double>>();
      g.aligned_rms = gs.at("aligned_rms").get<double>();
      g.twin = gs.at("twin").get<bool>();
      g.trace_max_increase = gs.at("trace_max_increase").get<double>();
      g.intensity_error = gs.at("intensity_error").get<double>();
      g.wall_time_s = gs.at("wall_time_s").get<double>();
      g.grid_x = gs.at("grid").at(0).get<int>();
      g.grid_y = gs.at("grid").at(1).get<int>();
      g.retrieved_phase = gs.at("retrieved_phase").get<std::vector<double>>();
      g.reference_phase = gs.at("reference_phase").get<std::vector<double>>();
      r.retrieval = std::move(g);
    }
    if (doc.contains("timings_s")) r.timings_s = doc.at("timings_s").get<std::map<std::string, double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source, 0, std::string("bad report: ") + e.what());
  }
  LatticeSpec win(1, 3);
  try {
    win = r.window_lattice();
  } catch (const std::invalid_argument& e) {
    throw ParseError(source, 0, std::string("bad report window: ") + e.what());
  }
  const std::size_t n = win.size();
  auto check = [&](std::size_t size, const char* what) {
    if (size != n) throw ParseError(source, 0, std::string("bad report: ") + what + " does not match the window");
  };
  check(r.p_theory.size(), "p_theory");
  if (r.p_simulated) check(r.p_simulated->size(), "p_simulated");
  if (r.p_sampled) check(r.p_sampled->size(), "p_sampled");
  if (r.counts) check(r.counts->size(), "counts");
  return r;
}

int SuiteResult::failures() const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const SuiteRow& r) { return !r.ok; }));
}

SuiteResult run_suite(const std::filesystem::path& dir, const RunOptions& options,
                      std::optional<std::uint64_t> seed_override) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError("suite: " + dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".scenario" || ext == ".json")) files.push_back(entry.path());
  }
  if (ec) throw IoError("suite: cannot list " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());

  SuiteResult out;
  for (const auto& f : files) {
    SuiteRow row;
    row.file = f.filename().string();
    row.scenario = f.stem().string();
    try {
      Scenario sc = load_scenario(f);
      row.scenario = sc.name;
      if (seed_override) apply_seed_override(sc, *seed_override);
      const RunReport rep = run_scenario(sc, options);
      row.ok = true;
      row.fidelity = rep.fidelity;
      row.similarity_noiseless = rep.similarity_noiseless;
      row.similarity_noisy = rep.similarity_noisy;
      row.success_probability = rep.success_probability;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::string suite_table_text(const SuiteResult& result) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-22s %-14s %10s %10s %14s\n", "scenario", "fidelity", "s (%)", "s_noisy(%)",
                "success_prob");
  os << line;
  for (const SuiteRow& r : result.rows) {
    if (!r.ok) {
      os << r.scenario << "  ERROR  " << r.error << "\n";
      continue;
    }
    std::snprintf(line, sizeof line, "%-22s %-14.12f %10s %10s %14.6e\n", r.scenario.c_str(), r.fidelity,
                  percent(r.similarity_noiseless).c_str(), percent(r.similarity_noisy).c_str(),
                  r.success_probability);
    os << line;
  }
  return os.str();
}

std::string suite_table_csv(const SuiteResult& result) {
  std::string out = "scenario,status,fidelity,similarity,similarity_noisy,success_probability,error\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const SuiteRow& r : result.rows) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), '"', '\'');
    out += r.scenario + "," + (r.ok ? "ok" : "error") + ",";
    if (r.ok) {
      out += format_double(r.fidelity) + "," + opt(r.similarity_noiseless) + "," + opt(r.similarity_noisy) + "," +
             format_double(r.success_probability) + ",";
    } else {
      out += ",,,,\"" + err + "\"";
    }
    out += "\n";
  }
  return out;
}

std::string plot_modes_csv(const RunReport& r) {
  const LatticeSpec win = r.window_lattice();
  const bool sampled = r.p_sampled.has_value();
  std::vector<double> err;
  if (sampled) err = poisson_errors(*r.counts);
  std::string out = r.dims == 1 ? "m,P_theory" : "m_x,m_y,P_theory";
  if (r.p_simulated) out += ",P_simulated";
  if (sampled) out += ",P_sampled,count,poisson_error";
  out += "\n";
  for (std::size_t f = 0; f < win.size(); ++f) {
    const MomentumIndex m = win.index(f);
    out += std::to_string(m.x);
    if (r.dims == 2) out += "," + std::to_string(m.y);
    out += "," + format_double(r.p_theory[f]);
    if (r.p_simulated) out += "," + format_double((*r.p_simulated)[f]);
    if (sampled) {
      out += "," + format_double((*r.p_sampled)[f]) + "," + std::to_string((*r.counts)[f]) + "," + format_double(err[f]);
    }
    out += "\n";
  }
  return out;
}

std::vector<std::filesystem::path> emit_plot_data(const RunReport& report, const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  written.push_back(dir / "modes.csv");
  write_file_atomic(written.back(), plot_modes_csv(report));
  if (report.retrieval) {
    const RetrievalSummary& g = *report.retrieval;
    written.push_back(dir / "phase_retrieved.csv");
    write_file_atomic(written.back(), real_grid_csv({g.grid_x, g.grid_y}, g.retrieved_phase));
    written.push_back(dir / "phase_reference.csv");
    write_file_atomic(written.back(), real_grid_csv({g.grid_x, g.grid_y}, g.reference_phase));
  }
  return written;
}

}  // namespace nlt
